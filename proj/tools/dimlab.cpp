#include "dimlab/runner.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace dimlab;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        if (cur.empty()) continue;
        out.push_back(std::stod(cur));
    }
    if (out.empty()) throw CLI::ValidationError("--q-grid", "needs at least one value");
    return out;
}

struct Overrides {
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    int depth = 0;
    std::string q_grid;
    std::string mode;
    std::string variant;

    CLI::Option* opt_seed = nullptr;
    CLI::Option* opt_depth = nullptr;
    CLI::Option* opt_q_grid = nullptr;
    CLI::Option* opt_mode = nullptr;
    CLI::Option* opt_variant = nullptr;

    void attach(CLI::App* sub) {
        sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
        opt_seed = sub->add_option("--seed", seed, "Override the config seed");
        opt_depth = sub->add_option("--depth", depth, "Override the build depth");
        opt_q_grid = sub->add_option("--q-grid", q_grid, "Override the q grid, e.g. \"-1,0,1\"");
        opt_mode = sub->add_option("--mode", mode, "covering or packing")
                       ->check(CLI::IsMember({"covering", "packing"}));
        opt_variant = sub->add_option("--variant", variant, "centers or intersecting")
                          ->check(CLI::IsMember({"centers", "intersecting"}));
    }

    void apply(RunConfig& cfg) const {
        if (opt_seed->count()) cfg.seed = seed;
        if (opt_depth->count()) cfg.depth = depth;
        if (opt_q_grid->count()) cfg.q_grid = parse_grid(q_grid);
        if (opt_mode->count())
            cfg.scale.mode = mode == "covering" ? Mode::Covering : Mode::Packing;
        if (opt_variant->count())
            cfg.variant = variant == "centers" ? Variant::Centers : Variant::Intersecting;
    }
};

void write_witness(const LipschitzWitness& w, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open witness file " + path);
    const Eigen::Index d = w.points.cols();
    for (Eigen::Index j = 0; j < d; ++j) out << 'x' << j << ',';
    out << "f\n";
    for (Eigen::Index i = 0; i < w.points.rows(); ++i) {
        for (Eigen::Index j = 0; j < d; ++j) out << fmt17(w.points(i, j)) << ',';
        out << fmt17(w.values[i]) << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dimlab: box-dimension and scaling-exponent estimation for discrete measures"};
    app.require_subcommand(1);
    int rc = 0;

    std::string cfg_path;

    auto* build = app.add_subcommand("build", "Materialize the configured input as a measure file");
    Overrides build_ov;
    build->add_option("--config", cfg_path, "Run config file")->required();
    build_ov.attach(build);
    build->callback([&] {
        RunConfig cfg = load_run_config(cfg_path);
        build_ov.apply(cfg);
        std::cout << run_build(cfg, build_ov.out_dir) << "\n";
    });

    auto* report = app.add_subcommand("report", "Estimate every configured quantity, write CSVs");
    Overrides report_ov;
    report->add_option("--config", cfg_path, "Run config file")->required();
    report_ov.attach(report);
    report->callback([&] {
        RunConfig cfg = load_run_config(cfg_path);
        report_ov.apply(cfg);
        const Report rep = run_report(cfg);
        write_report(rep, report_ov.out_dir);
        size_t failed = 0;
        for (const auto& row : rep.rows)
            if (!row.error.empty()) ++failed;
        std::cout << "wrote " << rep.rows.size() << " rows (" << failed << " failed) under "
                  << report_ov.out_dir << "\n";
    });

    auto* verify = app.add_subcommand("verify", "Run structural checks and config expectations");
    Overrides verify_ov;
    bool assume_osc = false;
    verify->add_option("--config", cfg_path, "Run config file")->required();
    verify->add_flag("--assume-osc", assume_osc,
                     "Record the open-set-condition check as asserted instead of testing it");
    verify_ov.attach(verify);
    verify->callback([&] {
        RunConfig cfg = load_run_config(cfg_path);
        verify_ov.apply(cfg);
        if (assume_osc) cfg.assume_osc = true;
        const VerifySummary summary = run_verify(cfg);
        for (const auto& c : summary.checks)
            std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
        std::cout << (summary.pass ? "verify: all checks passed" : "verify: FAILED") << "\n";
        if (!summary.pass) rc = 1;
    });

    auto* metric = app.add_subcommand("metric", "Bounded-Lipschitz distance between two measures");
    std::string mu_path, nu_path, witness_path;
    Eigen::Index cap = 400;
    metric->add_option("mu", mu_path, "First measure file")->required();
    metric->add_option("nu", nu_path, "Second measure file")->required();
    metric->add_option("--cap", cap, "Support-size cap per measure")->capture_default_str();
    metric->add_option("--witness", witness_path, "Write the optimal test function as CSV");
    metric->callback([&] {
        const DiscreteMeasure mu = load_measure(mu_path);
        const DiscreteMeasure nu = load_measure(nu_path);
        const MetricResult res = fortet_mourier(mu, nu, cap);
        std::cout << "distance " << fmt(res.distance) << "\n";
        if (!witness_path.empty()) write_witness(res.witness, witness_path);
    });

    auto* typgen = app.add_subcommand("typgen", "Generate stock measures or packing witnesses");
    std::string preset = "zero_union_interval";
    int resolution = 12, mu_n = 33;
    double mu_w0 = 0.3;
    std::string pi_out, mu_out;
    bool packing = false;
    std::string pack_x = "0";
    double pack_s = 1.0, pack_q = 0.0, pack_t = 0.5;
    int pack_base = 3, pack_jmax = 40;
    typgen->add_option("--preset", preset, "Stock family name")->capture_default_str();
    typgen->add_option("--resolution", resolution, "Grid fineness exponent for the preset")
        ->capture_default_str();
    typgen->add_option("--mu-n", mu_n, "Companion measure atom count")->capture_default_str();
    typgen->add_option("--mu-w0", mu_w0, "Companion measure weight at the isolated point")
        ->capture_default_str();
    typgen->add_option("--out", pi_out, "Output measure file")->required();
    typgen->add_option("--mu-out", mu_out, "Also write the companion measure here");
    typgen->add_flag("--packing", packing,
                     "Build a weighted packing measure from the --config input instead");
    typgen->add_option("--config", cfg_path, "Run config supplying the base measure");
    typgen->add_option("--x", pack_x, "Packing base point, comma-separated coordinates")
        ->capture_default_str();
    typgen->add_option("--s", pack_s, "Packing scale")->capture_default_str();
    typgen->add_option("--q", pack_q, "Packing moment exponent")->capture_default_str();
    typgen->add_option("--t", pack_t, "Density target exponent")->capture_default_str();
    typgen->add_option("--scan-base", pack_base, "Radius ladder base")->capture_default_str();
    typgen->add_option("--j-max", pack_jmax, "Deepest scanned ladder index")
        ->capture_default_str();
    typgen->callback([&] {
        if (packing) {
            if (cfg_path.empty())
                throw CLI::ValidationError("--packing", "needs --config for the base measure");
            const RunConfig cfg = load_run_config(cfg_path);
            const Inputs in = materialize(cfg);
            const std::vector<double> coords = parse_grid(pack_x);
            Point x(static_cast<Eigen::Index>(coords.size()));
            for (size_t i = 0; i < coords.size(); ++i)
                x[static_cast<Eigen::Index>(i)] = coords[i];
            const WeightedPackingMeasure wpm =
                weighted_packing_measure(in.pi, x, pack_s, pack_q, pack_t, pack_base, pack_jmax);
            std::cout << "accepted j " << wpm.scan_index << " radius " << fmt(wpm.radius)
                      << " atoms " << wpm.measure->size() << " moment_sum "
                      << fmt(wpm.moment_sum) << "\n";
            save_measure(*wpm.measure, pi_out,
                         {"weighted packing measure: q " + fmt(pack_q) + " t " + fmt(pack_t) +
                          " scale " + fmt(pack_s) + " radius " + fmt(wpm.radius)});
            return;
        }
        if (preset != "zero_union_interval")
            throw CLI::ValidationError("--preset", "unknown preset '" + preset + "'");
        const DiscreteMeasure pi = zero_union_interval(resolution);
        save_measure(pi, pi_out,
                     {"preset zero_union_interval, resolution " + std::to_string(resolution)});
        std::cout << pi_out << "\n";
        if (!mu_out.empty()) {
            const DiscreteMeasure mu = zero_union_interval_mu(mu_n, mu_w0);
            save_measure(mu, mu_out, {"preset zero_union_interval companion, n " +
                                      std::to_string(mu_n) + ", w0 " + fmt(mu_w0)});
            std::cout << mu_out << "\n";
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ScanExhaustedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
