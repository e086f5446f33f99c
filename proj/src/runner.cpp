#include "dimlab/runner.hpp"

#include "dimlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace fs = std::filesystem;

namespace dimlab {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

double parse_double(const std::string& s, const std::string& key) {
    size_t used = 0;
    double v;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("run config: bad number '" + s + "' for " + key);
    }
    if (used != s.size())
        throw std::invalid_argument("run config: bad number '" + s + "' for " + key);
    return v;
}

int parse_int(const std::string& s, const std::string& key) {
    const double v = parse_double(s, key);
    if (v != std::floor(v))
        throw std::invalid_argument("run config: expected integer for " + key);
    return static_cast<int>(v);
}

Mode parse_mode(const std::string& s) {
    if (s == "covering") return Mode::Covering;
    if (s == "packing") return Mode::Packing;
    throw std::invalid_argument("run config: mode must be covering or packing");
}

Variant parse_variant(const std::string& s) {
    if (s == "centers") return Variant::Centers;
    if (s == "intersecting") return Variant::Intersecting;
    throw std::invalid_argument("run config: variant must be centers or intersecting");
}

CenterOrder parse_order(const std::string& s) {
    if (s == "moment") return CenterOrder::ByMoment;
    if (s == "lex") return CenterOrder::Lexicographic;
    throw std::invalid_argument("run config: order must be moment or lex");
}

std::string mode_name(Mode m) { return m == Mode::Covering ? "covering" : "packing"; }
std::string variant_name(Variant v) { return v == Variant::Centers ? "centers" : "intersecting"; }

std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.' || c == '=';
        out.push_back(ok ? c : '_');
    }
    return out;
}

std::string csv_safe(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

std::vector<SampleNet> main_nets(const Inputs& in, const RunConfig& cfg) {
    std::vector<SampleNet> nets;
    for (int t : cfg.net_depths)
        nets.push_back(in.ifs ? cylinder_net(*in.ifs, t)
                              : grid_net(in.pi, cfg.scale.base, t));
    return nets;
}

SampleNet outer_net(const Inputs& in, const RunConfig& cfg) {
    return in.ifs ? cylinder_net(*in.ifs, cfg.outer_depth)
                  : grid_net(in.pi, cfg.scale.base, cfg.outer_depth);
}

// Evenly subsampled atoms in coordinate order, at most `cap` rows.
Eigen::MatrixXd doubling_samples(const DiscreteMeasure& pi, size_t cap) {
    std::vector<int> ids(static_cast<size_t>(pi.size()));
    for (size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        if (lex_less(pi.atoms().row(a).transpose(), pi.atoms().row(b).transpose())) return true;
        if (lex_less(pi.atoms().row(b).transpose(), pi.atoms().row(a).transpose())) return false;
        return a < b;
    });
    const size_t take = std::min(cap, ids.size());
    Eigen::MatrixXd out(static_cast<Eigen::Index>(take), pi.ambient_dim());
    for (size_t i = 0; i < take; ++i) {
        const size_t at = take == 1 ? 0 : (i * (ids.size() - 1)) / (take - 1);
        out.row(static_cast<Eigen::Index>(i)) = pi.atoms().row(ids[at]);
    }
    return out;
}

} // namespace

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("run config: cannot open " + path);
    const fs::path dir = fs::path(path).parent_path();
    auto resolve = [&](const std::string& p) {
        return fs::path(p).is_absolute() ? p : (dir / p).string();
    };

    RunConfig cfg;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line = line.substr(0, pos);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("run config: expected key = value at line " +
                                        std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "ifs") cfg.ifs_path = resolve(value);
        else if (key == "measure") cfg.measure_path = resolve(value);
        else if (key == "preset") cfg.preset = value;
        else if (key == "depth") cfg.depth = parse_int(value, key);
        else if (key == "atom_cap") cfg.atom_cap = static_cast<std::int64_t>(parse_double(value, key));
        else if (key == "resolution") cfg.resolution = parse_int(value, key);
        else if (key == "mu_n") cfg.mu_n = parse_int(value, key);
        else if (key == "mu_w0") cfg.mu_w0 = parse_double(value, key);
        else if (key == "base") cfg.scale.base = parse_int(value, key);
        else if (key == "k_lo") cfg.scale.k_lo = parse_int(value, key);
        else if (key == "k_hi") cfg.scale.k_hi = parse_int(value, key);
        else if (key == "mode") cfg.scale.mode = parse_mode(value);
        else if (key == "dilation") cfg.scale.dilation = parse_double(value, key);
        else if (key == "order") cfg.scale.order = parse_order(value);
        else if (key == "variant") cfg.variant = parse_variant(value);
        else if (key == "q_grid") {
            cfg.q_grid.clear();
            for (const auto& t : split_list(value)) cfg.q_grid.push_back(parse_double(t, key));
        } else if (key == "net_depths") {
            cfg.net_depths.clear();
            for (const auto& t : split_list(value)) cfg.net_depths.push_back(parse_int(t, key));
        } else if (key == "outer_depth") cfg.outer_depth = parse_int(value, key);
        else if (key == "inner_counts") {
            cfg.inner_counts.clear();
            for (const auto& t : split_list(value)) cfg.inner_counts.push_back(parse_int(t, key));
        } else if (key == "inner_frac") cfg.inner_frac = parse_double(value, key);
        else if (key == "eps_ladder") {
            cfg.eps_ladder.clear();
            for (const auto& t : split_list(value)) cfg.eps_ladder.push_back(parse_double(t, key));
        } else if (key == "sel_level") cfg.sel_level = parse_int(value, key);
        else if (key == "guard_factor") cfg.guard_factor = parse_double(value, key);
        else if (key == "assume_osc") cfg.assume_osc = parse_int(value, key) != 0;
        else if (key == "prop_tol") cfg.prop_tol = parse_double(value, key);
        else if (key == "mono_tol") cfg.mono_tol = parse_double(value, key);
        else if (key == "convex_tol") cfg.convex_tol = parse_double(value, key);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_double(value, key));
        else if (key == "expect") {
            std::istringstream es(value);
            std::string quantity, param;
            double target, tol;
            if (!(es >> quantity >> param >> target >> tol))
                throw std::invalid_argument(
                    "run config: expect needs 'quantity param target tol' at line " +
                    std::to_string(lineno));
            Expect e;
            e.quantity = quantity;
            if (param != "-") e.param = parse_double(param, "expect param");
            e.target = target;
            e.tol = tol;
            cfg.expects.push_back(std::move(e));
        } else {
            throw std::invalid_argument("run config: unknown key '" + key + "' at line " +
                                        std::to_string(lineno));
        }
    }
    return cfg;
}

DiscreteMeasure zero_union_interval(int resolution) {
    if (resolution < 1 || resolution > 24)
        throw std::invalid_argument("zero_union_interval: resolution must lie in [1,24]");
    const Eigen::Index n = (Eigen::Index{1} << resolution) + 1;
    const double step = std::ldexp(1.0, -resolution);
    Eigen::MatrixXd atoms(n + 1, 1);
    Eigen::VectorXd weights(n + 1);
    atoms(0, 0) = 0.0;
    weights[0] = 0.5;
    for (Eigen::Index i = 0; i < n; ++i) {
        atoms(i + 1, 0) = 1.0 + static_cast<double>(i) * step;
        weights[i + 1] = 0.5 / static_cast<double>(n);
    }
    Box frame;
    frame.lo = Eigen::VectorXd::Zero(1);
    frame.hi = Eigen::VectorXd::Constant(1, 2.0);
    return DiscreteMeasure(std::move(atoms), std::move(weights), std::move(frame));
}

DiscreteMeasure zero_union_interval_mu(int n, double w0) {
    if (n < 3) throw std::invalid_argument("zero_union_interval_mu: needs n >= 3");
    if (!(w0 > 0.0 && w0 < 1.0))
        throw std::invalid_argument("zero_union_interval_mu: w0 must lie in (0,1)");
    Eigen::MatrixXd atoms(n, 1);
    Eigen::VectorXd weights(n);
    atoms(0, 0) = 0.0;
    weights[0] = w0;
    for (int i = 0; i + 1 < n; ++i) {
        atoms(i + 1, 0) = 1.0 + static_cast<double>(i) / static_cast<double>(n - 2);
        weights[i + 1] = (1.0 - w0) / static_cast<double>(n - 1);
    }
    Box frame;
    frame.lo = Eigen::VectorXd::Zero(1);
    frame.hi = Eigen::VectorXd::Constant(1, 2.0);
    return DiscreteMeasure(std::move(atoms), std::move(weights), std::move(frame));
}

Inputs materialize(const RunConfig& cfg) {
    const int sources = (cfg.ifs_path.empty() ? 0 : 1) + (cfg.measure_path.empty() ? 0 : 1) +
                        (cfg.preset.empty() ? 0 : 1);
    if (sources != 1)
        throw std::invalid_argument("run config: exactly one of ifs, measure, preset required");
    if (!cfg.ifs_path.empty()) {
        IFSModel ifs = load_ifs(cfg.ifs_path);
        DiscreteMeasure pi = build_measure(ifs, cfg.depth, cfg.atom_cap);
        return Inputs{std::move(pi), std::nullopt, std::move(ifs)};
    }
    if (!cfg.measure_path.empty())
        return Inputs{load_measure(cfg.measure_path), std::nullopt, std::nullopt};
    if (cfg.preset == "zero_union_interval")
        return Inputs{zero_union_interval(cfg.resolution),
                      zero_union_interval_mu(cfg.mu_n, cfg.mu_w0), std::nullopt};
    throw std::invalid_argument("run config: unknown preset '" + cfg.preset + "'");
}

namespace {

ReportRow base_row(const std::string& quantity, std::optional<double> q, const std::string& mode,
                   const std::string& variant) {
    ReportRow row;
    row.quantity = quantity;
    row.q = q;
    row.mode = mode;
    row.variant = variant;
    row.series_name = sanitize(quantity + (q ? "_q=" + fmt(*q) : ""));
    return row;
}

void fill(ReportRow& row, const DimValue& v) {
    row.value = v.value;
    row.slope = v.slope;
    row.series = v.series;
}

} // namespace

Report run_report(const RunConfig& cfg) {
    validate_scale_config(cfg.scale);
    const Inputs in = materialize(cfg);
    const std::vector<SampleNet> nets = main_nets(in, cfg);
    const SampleNet outer = outer_net(in, cfg);
    const InnerNets inner = inner_net_builder(in.pi, cfg.inner_counts, cfg.inner_frac);
    const std::string mode = mode_name(cfg.scale.mode);
    const std::string variant = variant_name(cfg.variant);

    std::vector<std::function<void(ReportRow&)>> tasks;
    std::vector<ReportRow> rows;
    auto add = [&](ReportRow row, std::function<void(ReportRow&)> task) {
        rows.push_back(std::move(row));
        tasks.push_back(std::move(task));
    };

    for (double q : cfg.q_grid)
        add(base_row("tau", q, mode, ""),
            [&, q](ReportRow& r) { fill(r, tau(in.pi, q, cfg.scale)); });
    for (double q : cfg.q_grid)
        add(base_row("tau_loc", q, mode, ""),
            [&, q](ReportRow& r) { fill(r, tau_loc(in.pi, q, nets, cfg.scale)); });
    for (double q : cfg.q_grid)
        add(base_row("tau_loc_max", q, mode, ""),
            [&, q](ReportRow& r) { fill(r, tau_loc_max(in.pi, q, outer, inner, cfg.scale)); });

    add(base_row("D_minus", std::nullopt, "mass", ""),
        [&](ReportRow& r) { fill(r, D_extremes(in.pi, cfg.scale).minus); });
    add(base_row("D_plus", std::nullopt, "mass", ""),
        [&](ReportRow& r) { fill(r, D_extremes(in.pi, cfg.scale).plus); });
    add(base_row("D_unif_minus", std::nullopt, "mass", variant),
        [&](ReportRow& r) { fill(r, D_unif(in.pi, nets, cfg.variant, cfg.scale).minus); });
    add(base_row("D_unif_plus", std::nullopt, "mass", variant),
        [&](ReportRow& r) { fill(r, D_unif(in.pi, nets, cfg.variant, cfg.scale).plus); });
    add(base_row("D_unif_max_minus", std::nullopt, "mass", variant), [&](ReportRow& r) {
        fill(r, D_unif_max_min(in.pi, outer, inner, cfg.variant, cfg.scale).unif_max_minus);
    });
    add(base_row("D_max_minus", std::nullopt, "mass", variant), [&](ReportRow& r) {
        fill(r, D_unif_max_min(in.pi, outer, inner, cfg.variant, cfg.scale).max_minus);
    });
    add(base_row("D_unif_min_plus", std::nullopt, "mass", variant), [&](ReportRow& r) {
        fill(r, D_unif_max_min(in.pi, outer, inner, cfg.variant, cfg.scale).unif_min_plus);
    });
    add(base_row("D_min_plus", std::nullopt, "mass", variant), [&](ReportRow& r) {
        fill(r, D_unif_max_min(in.pi, outer, inner, cfg.variant, cfg.scale).min_plus);
    });
    add(base_row("doubling_ratio", std::nullopt, "mass", ""), [&](ReportRow& r) {
        const DoublingReport rep = doubling_ratio(in.pi, doubling_samples(in.pi, 128), cfg.scale);
        r.value = rep.max_ratio;
        r.series = rep.per_scale;
    });

    if (in.mu) {
        for (double eps : cfg.eps_ladder) {
            const struct {
                MeasureDimKind kind;
                BoundSide side;
                const char* name;
            } variants[] = {
                {MeasureDimKind::Small, BoundSide::Lower, "dim_small_lower"},
                {MeasureDimKind::Small, BoundSide::Upper, "dim_small_upper"},
                {MeasureDimKind::Big, BoundSide::Lower, "dim_big_lower"},
                {MeasureDimKind::Big, BoundSide::Upper, "dim_big_upper"},
            };
            for (const auto& v : variants) {
                const std::string name =
                    std::string(v.name) + "[eps=" + fmt(eps) + "]";
                add(base_row(name, 0.0, mode, ""), [&, eps, v](ReportRow& r) {
                    fill(r, measure_dims(*in.mu, in.pi, 0.0, eps, v.kind, v.side, cfg.sel_level,
                                         cfg.scale));
                });
            }
        }
    }

    parallel_for(tasks.size(), [&](size_t i) {
        try {
            tasks[i](rows[i]);
        } catch (const std::exception& e) {
            rows[i].error = e.what();
        }
    });
    return Report{std::move(rows)};
}

void write_report(const Report& rep, const std::string& out_dir) {
    fs::create_directories(fs::path(out_dir) / "series");
    std::ofstream out(fs::path(out_dir) / "report.csv");
    if (!out) throw std::runtime_error("write_report: cannot open report.csv under " + out_dir);
    out << "quantity,q,value,lower,upper,ols,k_lo,k_hi,mode,variant,error\n";
    for (const auto& row : rep.rows) {
        out << row.quantity << ',';
        out << (row.q ? fmt(*row.q) : "") << ',';
        out << (row.value ? fmt(*row.value) : "") << ',';
        if (row.slope) {
            out << fmt(row.slope->lower) << ',' << fmt(row.slope->upper) << ','
                << fmt(row.slope->ols) << ',' << row.slope->k_lo << ',' << row.slope->k_hi << ',';
        } else {
            out << ",,,,,";
        }
        out << row.mode << ',' << row.variant << ',' << csv_safe(row.error) << "\n";
    }
    for (const auto& row : rep.rows) {
        if (row.series_name.empty() || row.series.entries.empty()) continue;
        std::ofstream ss(fs::path(out_dir) / "series" / (row.series_name + ".csv"));
        if (!ss) throw std::runtime_error("write_report: cannot write series file");
        write_series_csv(ss, row.series);
    }
}

std::string run_build(const RunConfig& cfg, const std::string& out_dir) {
    const Inputs in = materialize(cfg);
    fs::create_directories(out_dir);
    const std::string path = (fs::path(out_dir) / "measure.txt").string();
    std::vector<std::string> comments;
    if (!cfg.ifs_path.empty()) {
        comments.push_back("source: ifs " + fs::path(cfg.ifs_path).filename().string());
        comments.push_back("depth: " + std::to_string(cfg.depth));
    } else if (!cfg.measure_path.empty()) {
        comments.push_back("source: measure " + fs::path(cfg.measure_path).filename().string());
    } else {
        comments.push_back("source: preset " + cfg.preset);
    }
    comments.push_back("atoms: " + std::to_string(in.pi.size()));
    save_measure(in.pi, path, comments);
    return path;
}

double compute_quantity(const std::string& name, std::optional<double> param, const Inputs& in,
                        const RunConfig& cfg) {
    const double q = param.value_or(0.0);
    if (name == "tau") return tau(in.pi, q, cfg.scale).value;
    if (name == "tau_loc") return tau_loc(in.pi, q, main_nets(in, cfg), cfg.scale).value;
    if (name == "tau_loc_max")
        return tau_loc_max(in.pi, q, outer_net(in, cfg),
                           inner_net_builder(in.pi, cfg.inner_counts, cfg.inner_frac), cfg.scale)
            .value;
    if (name == "D_minus") return D_extremes(in.pi, cfg.scale).minus.value;
    if (name == "D_plus") return D_extremes(in.pi, cfg.scale).plus.value;
    if (name == "D_unif_minus" || name == "D_unif_plus") {
        const DPair p = D_unif(in.pi, main_nets(in, cfg), cfg.variant, cfg.scale);
        return name == "D_unif_minus" ? p.minus.value : p.plus.value;
    }
    if (name == "D_unif_max_minus" || name == "D_max_minus" || name == "D_unif_min_plus" ||
        name == "D_min_plus") {
        const DQuad quad =
            D_unif_max_min(in.pi, outer_net(in, cfg),
                           inner_net_builder(in.pi, cfg.inner_counts, cfg.inner_frac), cfg.variant,
                           cfg.scale);
        if (name == "D_unif_max_minus") return quad.unif_max_minus.value;
        if (name == "D_max_minus") return quad.max_minus.value;
        if (name == "D_unif_min_plus") return quad.unif_min_plus.value;
        return quad.min_plus.value;
    }
    if (name == "doubling_ratio")
        return doubling_ratio(in.pi, doubling_samples(in.pi, 128), cfg.scale).max_ratio;
    if (name.rfind("dim_", 0) == 0) {
        if (!in.mu) throw std::invalid_argument("quantity " + name + " needs a companion measure");
        if (!param) throw std::invalid_argument("quantity " + name + " needs eps as its param");
        const bool small = name.find("small") != std::string::npos;
        const bool upper = name.find("upper") != std::string::npos;
        if (name != std::string("dim_") + (small ? "small" : "big") + "_" +
                        (upper ? "upper" : "lower"))
            throw std::invalid_argument("unknown quantity '" + name + "'");
        return measure_dims(*in.mu, in.pi, 0.0, *param,
                            small ? MeasureDimKind::Small : MeasureDimKind::Big,
                            upper ? BoundSide::Upper : BoundSide::Lower, cfg.sel_level, cfg.scale)
            .value;
    }
    throw std::invalid_argument("unknown quantity '" + name + "'");
}

VerifySummary run_verify(const RunConfig& cfg) {
    validate_scale_config(cfg.scale);
    VerifySummary summary;
    auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        summary.checks.push_back({name, pass, detail});
        summary.pass = summary.pass && pass;
    };

    const Inputs in = materialize(cfg);

    {
        const double gap = min_atom_gap(in.pi);
        const double r_hi = ladder_radius(cfg.scale, cfg.scale.k_hi);
        const double need = cfg.guard_factor * gap;
        const bool pass = !std::isfinite(gap) || r_hi >= need;
        add("resolution-guard", pass,
            "finest ladder radius " + fmt(r_hi) + " vs required " + fmt(need) + " (factor " +
                fmt(cfg.guard_factor) + " x min atom gap " + fmt(gap) +
                "); ladder must not probe below the build resolution");
    }

    if (in.ifs) {
        if (cfg.assume_osc) {
            add("open-set-condition", true, "asserted by configuration, not checked");
        } else {
            const OscReport osc = verify_osc(*in.ifs, attractor_box(*in.ifs));
            add("open-set-condition", osc.holds,
                std::string(osc.exact ? "exact box arithmetic" : "bounding-box test") + ", " +
                    std::to_string(osc.violations.size()) + " violation(s)");
        }

        const SExtremes se = s_extremes(*in.ifs);
        auto prop = [&](const std::string& name, double value, double target) {
            add(name, std::abs(value - target) <= cfg.prop_tol,
                "value " + fmt(value) + " target " + fmt(target) + " tol " + fmt(cfg.prop_tol));
        };
        try {
            const std::vector<SampleNet> nets = main_nets(in, cfg);
            const InnerNets inner = inner_net_builder(in.pi, cfg.inner_counts, cfg.inner_frac);
            const SampleNet outer = outer_net(in, cfg);
            const DPair unif = D_unif(in.pi, nets, cfg.variant, cfg.scale);
            const DQuad quad = D_unif_max_min(in.pi, outer, inner, cfg.variant, cfg.scale);
            prop("D_unif_minus-matches-s_max", unif.minus.value, se.s_max);
            prop("D_unif_plus-matches-s_min", unif.plus.value, se.s_min);
            prop("D_unif_max_minus-matches-s_max", quad.unif_max_minus.value, se.s_max);
            prop("D_max_minus-matches-s_max", quad.max_minus.value, se.s_max);
            prop("D_unif_min_plus-matches-s_min", quad.unif_min_plus.value, se.s_min);
            prop("D_min_plus-matches-s_min", quad.min_plus.value, se.s_min);
        } catch (const std::exception& e) {
            add("self-similar-exponents", false, e.what());
        }
    }

    {
        std::vector<double> qs = cfg.q_grid;
        std::sort(qs.begin(), qs.end());
        qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
        if (qs.size() >= 2) {
            try {
                std::vector<double> taus;
                for (double q : qs) taus.push_back(tau(in.pi, q, cfg.scale).value);
                double worst_mono = -std::numeric_limits<double>::infinity();
                for (size_t i = 0; i + 1 < qs.size(); ++i)
                    worst_mono = std::max(worst_mono, taus[i + 1] - taus[i]);
                add("tau-nonincreasing", worst_mono <= cfg.mono_tol,
                    "largest increase " + fmt(worst_mono) + " tol " + fmt(cfg.mono_tol));
                if (qs.size() >= 3) {
                    double worst_convex = -std::numeric_limits<double>::infinity();
                    for (size_t i = 1; i + 1 < qs.size(); ++i) {
                        const double lam = (qs[i + 1] - qs[i]) / (qs[i + 1] - qs[i - 1]);
                        const double chord = lam * taus[i - 1] + (1.0 - lam) * taus[i + 1];
                        worst_convex = std::max(worst_convex, taus[i] - chord);
                    }
                    add("tau-midpoint-convex", worst_convex <= cfg.convex_tol,
                        "largest bulge " + fmt(worst_convex) + " tol " + fmt(cfg.convex_tol));
                }
            } catch (const std::exception& e) {
                add("tau-shape", false, e.what());
            }
        }
    }

    for (const auto& e : cfg.expects) {
        const std::string label =
            "expect:" + e.quantity + (e.param ? "(" + fmt(*e.param) + ")" : "");
        try {
            const double value = compute_quantity(e.quantity, e.param, in, cfg);
            add(label, std::abs(value - e.target) <= e.tol,
                "value " + fmt(value) + " target " + fmt(e.target) + " tol " + fmt(e.tol));
        } catch (const std::exception& ex) {
            add(label, false, ex.what());
        }
    }
    return summary;
}

} // namespace dimlab
