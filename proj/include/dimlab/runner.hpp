#pragma once

#include "dimlab/dims.hpp"
#include "dimlab/metric.hpp"
#include "dimlab/typgen.hpp"

namespace dimlab {

/// One comparison from a run config: quantity name, optional parameter
/// (the moment q, or eps for the dim_* quantities), target and tolerance.
struct Expect {
    std::string quantity;
    std::optional<double> param;
    double target = 0.0;
    double tol = 0.0;
};

/// Everything a run needs: one input (ifs file, measure file, or preset),
/// the scale ladder, net layout, and verification thresholds.
struct RunConfig {
    std::string ifs_path;
    std::string measure_path;
    std::string preset;

    int depth = 10;
    std::int64_t atom_cap = 2'000'000;
    int resolution = 12; // preset grid fineness: spacing 2^-resolution
    int mu_n = 33;       // preset companion measure: atom count
    double mu_w0 = 0.3;  // and its weight at the isolated point

    ScaleConfig scale;
    Variant variant = Variant::Centers;
    std::vector<double> q_grid{-2.0, -1.0, 0.0, 1.0, 2.0};

    std::vector<int> net_depths{1, 2, 3, 4}; // cylinder depths (ifs) or grid levels
    int outer_depth = 2;
    std::vector<int> inner_counts{2, 4, 8};
    double inner_frac = 0.5;

    std::vector<double> eps_ladder{0.2, 0.1, 0.05};
    int sel_level = 2;

    double guard_factor = 3.0; // finest ladder radius must exceed this times the atom gap
    bool assume_osc = false;   // record the open-set-condition check as asserted
    double prop_tol = 0.08;
    double mono_tol = 0.05;
    double convex_tol = 0.1;
    std::vector<Expect> expects;
    std::uint64_t seed = 0;
};

/// key = value format with '#' comments; `expect` lines accumulate.
/// Relative input paths resolve against the config file's directory.
RunConfig load_run_config(const std::string& path);

struct Inputs {
    DiscreteMeasure pi;
    std::optional<DiscreteMeasure> mu;
    std::optional<IFSModel> ifs;
};

Inputs materialize(const RunConfig& cfg);

/// Stock family: half an atom at 0, half spread uniformly over a grid on
/// [1,2] with the given dyadic spacing exponent.
DiscreteMeasure zero_union_interval(int resolution);

/// Companion measure for the family: weight w0 at 0, the rest spread over
/// n-1 evenly spaced points of [1,2].
DiscreteMeasure zero_union_interval_mu(int n, double w0);

struct ReportRow {
    std::string quantity;
    std::optional<double> q;
    std::optional<double> value;
    std::optional<SlopeEstimate> slope;
    std::string mode;
    std::string variant;
    std::string error;
    ScaleSeries series;      // provenance ladder, when one exists
    std::string series_name; // file stem under series/, empty = no dump
};

struct Report {
    std::vector<ReportRow> rows;
};

/// All quantities over the configured grids. Rows that fail keep their error
/// text in place of values. Rows are computed in parallel but ordered and
/// formatted deterministically.
Report run_report(const RunConfig& cfg);

/// report.csv plus one ladder CSV per traceable row under series/.
void write_report(const Report& rep, const std::string& out_dir);

/// Materializes the input and writes it as measure.txt with a provenance
/// header; returns the file path.
std::string run_build(const RunConfig& cfg, const std::string& out_dir);

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifySummary {
    std::vector<CheckResult> checks;
    bool pass = true;
};

/// Resolution guard, structural checks (open-set condition and the
/// self-similar exponent values for ifs inputs, tau shape for all inputs),
/// then the config's expect lines.
VerifySummary run_verify(const RunConfig& cfg);

/// Computes a named headline quantity (the names written by run_report);
/// param carries q where relevant and eps for the dim_* quantities.
double compute_quantity(const std::string& name, std::optional<double> param,
                        const Inputs& inputs, const RunConfig& cfg);

} // namespace dimlab
