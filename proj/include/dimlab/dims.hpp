#pragma once

#include "dimlab/counting.hpp"
#include "dimlab/ifs.hpp"

#include <functional>

namespace dimlab {

enum class Mode { Covering, Packing };

/// Localization rule for ball-center admissibility: either the atom itself
/// lies in the reference ball, or its r-ball merely intersects it.
enum class Variant { Centers, Intersecting };

/// Scale ladder r_k = base^-k for k in [k_lo, k_hi], plus the moment-sum
/// flavour used on it.
struct ScaleConfig {
    int base = 3;
    int k_lo = 3;
    int k_hi = 8;
    Mode mode = Mode::Covering;
    double dilation = 1.0; // packing mass radius = dilation * r
    CenterOrder order = CenterOrder::ByMoment;
};

void validate_scale_config(const ScaleConfig& cfg);
double ladder_radius(const ScaleConfig& cfg, int k);

/// Finite net of reference balls: one ball of radius rho per row of centers.
struct SampleNet {
    Eigen::MatrixXd centers;
    double rho = 0.0;
};

/// Builds nets localized to B(z, kappa); may return several nets of
/// different cardinality, or none when the ball holds no usable centers.
using InnerNets = std::function<std::vector<SampleNet>(const Point& z, double kappa)>;

/// Headline value together with the slope bracket and ladder series that
/// produced it (for min/max aggregates: the extremal witness).
struct DimValue {
    double value = 0.0;
    SlopeEstimate slope;
    ScaleSeries series;
};

struct DPair {
    DimValue minus; // exponent of the smallest ball masses
    DimValue plus;  // exponent of the largest ball masses
};

struct DQuad {
    DimValue unif_max_minus;
    DimValue max_minus;
    DimValue unif_min_plus;
    DimValue min_plus;
};

/// Moment sums of the configured flavour along the ladder.
ScaleSeries moment_series(const DiscreteMeasure& pi, const Region& e, double q,
                          const ScaleConfig& cfg);

SlopeEstimate box_dim_estimate(const DiscreteMeasure& pi, const Region& e, double q,
                               const ScaleConfig& cfg);

/// Upper box dimension estimate of e (headline: largest per-step slope).
DimValue upper_dim(const DiscreteMeasure& pi, const Region& e, double q, const ScaleConfig& cfg);

/// Upper moment dimension of the whole support.
DimValue tau(const DiscreteMeasure& pi, double q, const ScaleConfig& cfg);

/// Smallest upper moment dimension over the net balls.
DimValue tau_loc(const DiscreteMeasure& pi, double q, const std::vector<SampleNet>& nets,
                 const ScaleConfig& cfg);

/// For each outer ball, the localized tau_loc over inner nets; headline is
/// the largest such localization.
DimValue tau_loc_max(const DiscreteMeasure& pi, double q, const SampleNet& outer,
                     const InnerNets& inner, const ScaleConfig& cfg);

/// Scaling exponents of the global extreme ball masses: minus from the
/// smallest mass per scale (headline: largest per-step slope), plus from the
/// largest mass per scale (headline: smallest per-step slope).
DPair D_extremes(const DiscreteMeasure& pi, const ScaleConfig& cfg);

/// Net-uniform exponents: per net, the extreme ball mass over admissible
/// atoms near each net center; minus takes the smallest net value, plus the
/// largest.
DPair D_unif(const DiscreteMeasure& pi, const std::vector<SampleNet>& nets, Variant variant,
             const ScaleConfig& cfg);

/// Localized max/min exponents over the outer net: per outer ball both the
/// plain and the net-uniform exponents, aggregated by max (minus side) and
/// min (plus side).
DQuad D_unif_max_min(const DiscreteMeasure& pi, const SampleNet& outer, const InnerNets& inner,
                     Variant variant, const ScaleConfig& cfg);

struct DoublingReport {
    double max_ratio = 0.0;
    ScaleSeries per_scale; // largest ratio seen at each ladder radius
    int evaluated = 0;
    int skipped = 0; // sample/scale pairs with empty inner ball
};

/// Largest mass(B(x,2r))/mass(B(x,r)) over the sample points and the ladder.
DoublingReport doubling_ratio(const DiscreteMeasure& pi, const Eigen::MatrixXd& samples,
                              const ScaleConfig& cfg);

enum class MeasureDimKind { Small, Big };
enum class BoundSide { Lower, Upper };

/// Box dimensions of pi seen through mu: grade mu on the level-`sel_level`
/// grid; Small takes the smallest estimate over cells with mu-mass >= eps,
/// Big greedily discards the steepest cells while keeping mu-mass above
/// 1 - eps and estimates on what remains.
DimValue measure_dims(const DiscreteMeasure& mu, const DiscreteMeasure& pi, double q, double eps,
                      MeasureDimKind kind, BoundSide side, int sel_level, const ScaleConfig& cfg);

/// One center per cylinder of the given depth (images of the frame center),
/// with a radius covering every cylinder.
SampleNet cylinder_net(const IFSModel& ifs, int depth, double rho_scale = 0.75);

/// Centers of occupied grid cells at the given level, radius one cell diagonal.
SampleNet grid_net(const DiscreteMeasure& m, int base, int level);

/// Nets of the requested cardinalities drawn from atoms inside B(z, kappa):
/// centers are atoms within kappa - rho (falling back to kappa when that ring
/// is empty), subsampled evenly in coordinate order; rho = frac * kappa.
InnerNets inner_net_builder(const DiscreteMeasure& m, std::vector<int> counts, double frac = 0.5);

} // namespace dimlab
