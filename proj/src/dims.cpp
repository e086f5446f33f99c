#include "dimlab/dims.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dimlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Ball mass of every atom at every ladder radius.
struct MassTable {
    std::vector<int> ks;
    std::vector<double> radii;
    std::vector<Eigen::VectorXd> mass;
};

MassTable make_mass_table(const DiscreteMeasure& pi, const NeighborIndex& idx,
                          const ScaleConfig& cfg) {
    MassTable t;
    for (int k = cfg.k_lo; k <= cfg.k_hi; ++k) {
        const double r = ladder_radius(cfg, k);
        Eigen::VectorXd v(pi.size());
        for (Eigen::Index i = 0; i < pi.size(); ++i)
            v[i] = idx.mass_within(pi.atoms().row(i).transpose(), r);
        t.ks.push_back(k);
        t.radii.push_back(r);
        t.mass.push_back(std::move(v));
    }
    return t;
}

ScaleSeries series_from(const ScaleConfig& cfg, const MassTable& t,
                        const std::vector<double>& values) {
    ScaleSeries s;
    s.base = cfg.base;
    for (size_t i = 0; i < t.ks.size(); ++i)
        s.entries.push_back({t.ks[i], t.radii[i], values[i]});
    return s;
}

DimValue headline(const ScaleSeries& s, const ScaleConfig& cfg, bool upper, bool mass_series) {
    DimValue v;
    v.series = s;
    v.slope = mass_series ? mass_scaling_bounds(s, cfg.k_lo) : slope_bounds(s, cfg.k_lo);
    v.value = upper ? v.slope.upper : v.slope.lower;
    return v;
}

// Atoms admissible to a reference ball B(c, rho) at scale radius r.
std::vector<int> admissible(const NeighborIndex& idx, const Eigen::Ref<const Point>& c,
                            double rho, double r, Variant variant) {
    return idx.within(c, variant == Variant::Intersecting ? rho + r : rho);
}

struct ExtremeSeries {
    std::vector<double> vmin;
    std::vector<double> vmax;
};

// Per-scale extreme masses over atoms admissible to B(c, rho).
ExtremeSeries localized_extremes(const NeighborIndex& idx, const MassTable& t,
                                 const Eigen::Ref<const Point>& c, double rho, Variant variant) {
    ExtremeSeries out;
    for (size_t ki = 0; ki < t.ks.size(); ++ki) {
        const auto ids = admissible(idx, c, rho, t.radii[ki], variant);
        if (ids.empty())
            throw std::invalid_argument("reference ball holds no admissible atoms");
        double lo = kInf, hi = -kInf;
        for (int a : ids) {
            const double m = t.mass[ki][a];
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
        out.vmin.push_back(lo);
        out.vmax.push_back(hi);
    }
    return out;
}

// Per-scale extremes over a whole net: min over centers of the center min,
// and max over centers of the center max.
ExtremeSeries net_extremes(const NeighborIndex& idx, const MassTable& t, const SampleNet& net,
                           Variant variant) {
    ExtremeSeries out;
    out.vmin.assign(t.ks.size(), kInf);
    out.vmax.assign(t.ks.size(), -kInf);
    for (Eigen::Index i = 0; i < net.centers.rows(); ++i) {
        const ExtremeSeries one =
            localized_extremes(idx, t, net.centers.row(i).transpose(), net.rho, variant);
        for (size_t ki = 0; ki < t.ks.size(); ++ki) {
            out.vmin[ki] = std::min(out.vmin[ki], one.vmin[ki]);
            out.vmax[ki] = std::max(out.vmax[ki], one.vmax[ki]);
        }
    }
    return out;
}

void check_net(const SampleNet& net) {
    if (net.centers.rows() < 1 || !(net.rho > 0.0))
        throw std::invalid_argument("net needs at least one center and positive radius");
}

} // namespace

void validate_scale_config(const ScaleConfig& cfg) {
    if (cfg.base < 2) throw std::invalid_argument("scale config: base must be >= 2");
    if (cfg.k_lo < 0 || cfg.k_hi < cfg.k_lo + 2)
        throw std::invalid_argument("scale config: window needs k_hi >= k_lo + 2, k_lo >= 0");
    if (!(cfg.dilation > 0.0)) throw std::invalid_argument("scale config: dilation must be > 0");
}

double ladder_radius(const ScaleConfig& cfg, int k) {
    return std::pow(static_cast<double>(cfg.base), -k);
}

ScaleSeries moment_series(const DiscreteMeasure& pi, const Region& e, double q,
                          const ScaleConfig& cfg) {
    validate_scale_config(cfg);
    ScaleSeries s;
    s.base = cfg.base;
    for (int k = cfg.k_lo; k <= cfg.k_hi; ++k) {
        const double r = ladder_radius(cfg, k);
        const double v = cfg.mode == Mode::Covering
                             ? covering_sum(pi, e, r, q, cfg.order)
                             : packing_sum(pi, e, r, q, cfg.dilation, cfg.order);
        s.entries.push_back({k, r, v});
    }
    return s;
}

SlopeEstimate box_dim_estimate(const DiscreteMeasure& pi, const Region& e, double q,
                               const ScaleConfig& cfg) {
    return slope_bounds(moment_series(pi, e, q, cfg), cfg.k_lo);
}

DimValue upper_dim(const DiscreteMeasure& pi, const Region& e, double q, const ScaleConfig& cfg) {
    DimValue v;
    v.series = moment_series(pi, e, q, cfg);
    v.slope = slope_bounds(v.series, cfg.k_lo);
    v.value = v.slope.upper;
    return v;
}

DimValue tau(const DiscreteMeasure& pi, double q, const ScaleConfig& cfg) {
    return upper_dim(pi, support_region(pi), q, cfg);
}

DimValue tau_loc(const DiscreteMeasure& pi, double q, const std::vector<SampleNet>& nets,
                 const ScaleConfig& cfg) {
    validate_scale_config(cfg);
    if (nets.empty()) throw std::invalid_argument("tau_loc: needs at least one net");
    DimValue best;
    best.value = kInf;
    for (const auto& net : nets) {
        check_net(net);
        for (Eigen::Index i = 0; i < net.centers.rows(); ++i) {
            const DimValue v = upper_dim(
                pi, ball_region(net.centers.row(i).transpose(), net.rho, pi.frame()), q, cfg);
            if (v.value < best.value) best = v;
        }
    }
    return best;
}

DimValue tau_loc_max(const DiscreteMeasure& pi, double q, const SampleNet& outer,
                     const InnerNets& inner, const ScaleConfig& cfg) {
    validate_scale_config(cfg);
    check_net(outer);
    DimValue best;
    best.value = -kInf;
    bool any = false;
    for (Eigen::Index j = 0; j < outer.centers.rows(); ++j) {
        const std::vector<SampleNet> nets = inner(outer.centers.row(j).transpose(), outer.rho);
        if (nets.empty()) continue;
        DimValue local;
        local.value = kInf;
        for (const auto& net : nets) {
            const DimValue v = tau_loc(pi, q, {net}, cfg);
            if (v.value < local.value) local = v;
        }
        if (!any || local.value > best.value) best = local;
        any = true;
    }
    if (!any) throw std::invalid_argument("tau_loc_max: no outer ball produced an inner net");
    return best;
}

DPair D_extremes(const DiscreteMeasure& pi, const ScaleConfig& cfg) {
    validate_scale_config(cfg);
    const NeighborIndex idx(pi);
    const MassTable t = make_mass_table(pi, idx, cfg);
    std::vector<double> vmin, vmax;
    for (const auto& m : t.mass) {
        vmin.push_back(m.minCoeff());
        vmax.push_back(m.maxCoeff());
    }
    DPair out;
    out.minus = headline(series_from(cfg, t, vmin), cfg, /*upper=*/true, /*mass=*/true);
    out.plus = headline(series_from(cfg, t, vmax), cfg, /*upper=*/false, /*mass=*/true);
    return out;
}

DPair D_unif(const DiscreteMeasure& pi, const std::vector<SampleNet>& nets, Variant variant,
             const ScaleConfig& cfg) {
    validate_scale_config(cfg);
    if (nets.empty()) throw std::invalid_argument("D_unif: needs at least one net");
    const NeighborIndex idx(pi);
    const MassTable t = make_mass_table(pi, idx, cfg);
    DPair out;
    bool first = true;
    for (const auto& net : nets) {
        check_net(net);
        const ExtremeSeries ext = net_extremes(idx, t, net, variant);
        const DimValue minus = headline(series_from(cfg, t, ext.vmin), cfg, true, true);
        const DimValue plus = headline(series_from(cfg, t, ext.vmax), cfg, false, true);
        if (first || minus.value < out.minus.value) out.minus = minus;
        if (first || plus.value > out.plus.value) out.plus = plus;
        first = false;
    }
    return out;
}

DQuad D_unif_max_min(const DiscreteMeasure& pi, const SampleNet& outer, const InnerNets& inner,
                     Variant variant, const ScaleConfig& cfg) {
    validate_scale_config(cfg);
    check_net(outer);
    const NeighborIndex idx(pi);
    const MassTable t = make_mass_table(pi, idx, cfg);

    DQuad out;
    bool any_plain = false, any_unif = false;
    for (Eigen::Index j = 0; j < outer.centers.rows(); ++j) {
        const Point z = outer.centers.row(j).transpose();

        const ExtremeSeries plain = localized_extremes(idx, t, z, outer.rho, variant);
        const DimValue max_minus_j = headline(series_from(cfg, t, plain.vmin), cfg, true, true);
        const DimValue min_plus_j = headline(series_from(cfg, t, plain.vmax), cfg, false, true);
        if (!any_plain || max_minus_j.value > out.max_minus.value) out.max_minus = max_minus_j;
        if (!any_plain || min_plus_j.value < out.min_plus.value) out.min_plus = min_plus_j;
        any_plain = true;

        const std::vector<SampleNet> nets = inner(z, outer.rho);
        if (nets.empty()) continue;
        DimValue unif_minus_j, unif_plus_j;
        bool first = true;
        for (const auto& net : nets) {
            check_net(net);
            const ExtremeSeries ext = net_extremes(idx, t, net, variant);
            const DimValue minus = headline(series_from(cfg, t, ext.vmin), cfg, true, true);
            const DimValue plus = headline(series_from(cfg, t, ext.vmax), cfg, false, true);
            if (first || minus.value < unif_minus_j.value) unif_minus_j = minus;
            if (first || plus.value > unif_plus_j.value) unif_plus_j = plus;
            first = false;
        }
        if (!any_unif || unif_minus_j.value > out.unif_max_minus.value)
            out.unif_max_minus = unif_minus_j;
        if (!any_unif || unif_plus_j.value < out.unif_min_plus.value)
            out.unif_min_plus = unif_plus_j;
        any_unif = true;
    }
    if (!any_plain || !any_unif)
        throw std::invalid_argument("D_unif_max_min: outer net produced no usable localizations");
    return out;
}

DoublingReport doubling_ratio(const DiscreteMeasure& pi, const Eigen::MatrixXd& samples,
                              const ScaleConfig& cfg) {
    validate_scale_config(cfg);
    if (samples.rows() < 1 || samples.cols() != pi.ambient_dim())
        throw std::invalid_argument("doubling_ratio: bad sample matrix");
    const NeighborIndex idx(pi);
    DoublingReport rep;
    rep.per_scale.base = cfg.base;
    for (int k = cfg.k_lo; k <= cfg.k_hi; ++k) {
        const double r = ladder_radius(cfg, k);
        double worst = 0.0;
        for (Eigen::Index i = 0; i < samples.rows(); ++i) {
            const double den = idx.mass_within(samples.row(i).transpose(), r);
            if (den <= 0.0) {
                ++rep.skipped;
                continue;
            }
            const double ratio = idx.mass_within(samples.row(i).transpose(), 2.0 * r) / den;
            ++rep.evaluated;
            worst = std::max(worst, ratio);
        }
        rep.per_scale.entries.push_back({k, r, worst});
        rep.max_ratio = std::max(rep.max_ratio, worst);
    }
    return rep;
}

DimValue measure_dims(const DiscreteMeasure& mu, const DiscreteMeasure& pi, double q, double eps,
                      MeasureDimKind kind, BoundSide side, int sel_level, const ScaleConfig& cfg) {
    validate_scale_config(cfg);
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("measure_dims: eps must be in (0,1)");
    if (sel_level < 0) throw std::invalid_argument("measure_dims: selection level must be >= 0");
    const GridMeasure grid = to_grid(mu, cfg.base, sel_level);

    auto cell_region = [&](const std::vector<std::int64_t>& idx) {
        Region e;
        e.frame = grid.frame;
        e.cells.push_back(GridCell{grid.base, grid.level, idx});
        return e;
    };
    auto pick = [&](const SlopeEstimate& est) {
        return side == BoundSide::Upper ? est.upper : est.lower;
    };

    if (kind == MeasureDimKind::Small) {
        DimValue best;
        best.value = kInf;
        bool any = false;
        for (const auto& [idx, mass] : grid.masses) {
            if (mass < eps) continue;
            any = true;
            DimValue v;
            try {
                v.series = moment_series(pi, cell_region(idx), q, cfg);
            } catch (const std::invalid_argument&) {
                throw std::runtime_error(
                    "measure_dims: qualifying cell holds no atoms of the reference measure");
            }
            v.slope = slope_bounds(v.series, cfg.k_lo);
            v.value = pick(v.slope);
            if (v.value < best.value) best = v;
        }
        if (!any) throw std::invalid_argument("measure_dims: no cell reaches the mass threshold");
        return best;
    }

    // Big: rank cells by a coarse two-scale exponent and discard the steepest
    // while the retained mu-mass stays above 1 - eps.
    struct CellInfo {
        const std::vector<std::int64_t>* idx;
        double mass;
        double proxy;
    };
    std::vector<CellInfo> cells;
    for (const auto& [idx, mass] : grid.masses) {
        double proxy = -kInf;
        try {
            const double r_lo = ladder_radius(cfg, cfg.k_lo);
            const double r_hi = ladder_radius(cfg, cfg.k_hi);
            const double v_lo = covering_sum(pi, cell_region(idx), r_lo, q, cfg.order);
            const double v_hi = covering_sum(pi, cell_region(idx), r_hi, q, cfg.order);
            proxy = (std::log(v_hi) - std::log(v_lo)) /
                    ((cfg.k_hi - cfg.k_lo) * std::log(static_cast<double>(cfg.base)));
        } catch (const std::invalid_argument&) {
            // Cells without pi atoms cannot drive the estimate; rank them last.
        }
        cells.push_back({&idx, mass, proxy});
    }
    std::sort(cells.begin(), cells.end(), [](const CellInfo& a, const CellInfo& b) {
        if (a.proxy != b.proxy) return a.proxy > b.proxy;
        return *a.idx < *b.idx;
    });

    double retained = 0.0;
    for (const auto& c : cells) retained += c.mass;
    Region kept;
    kept.frame = grid.frame;
    for (const auto& c : cells) {
        if (retained - c.mass > 1.0 - eps) {
            retained -= c.mass;
            continue;
        }
        kept.cells.push_back(GridCell{grid.base, grid.level, *c.idx});
    }

    DimValue v;
    v.series = moment_series(pi, kept, q, cfg);
    v.slope = slope_bounds(v.series, cfg.k_lo);
    v.value = pick(v.slope);
    return v;
}

SampleNet cylinder_net(const IFSModel& ifs, int depth, double rho_scale) {
    validate_ifs(ifs);
    if (depth < 0) throw std::invalid_argument("cylinder_net: depth must be >= 0");
    if (!(rho_scale > 0.5))
        throw std::invalid_argument("cylinder_net: rho_scale must exceed 0.5 to cover cylinders");
    const Box frame = attractor_box(ifs);
    const Point c = frame.center();
    const std::vector<Word> words = words_of_length(ifs.num_maps(), depth);
    SampleNet net;
    net.centers.resize(static_cast<Eigen::Index>(words.size()), ifs.ambient_dim());
    for (size_t i = 0; i < words.size(); ++i)
        net.centers.row(static_cast<Eigen::Index>(i)) = apply_word(ifs, words[i], c).transpose();
    double rmax = 0.0;
    for (const auto& s : ifs.maps) rmax = std::max(rmax, s.ratio);
    net.rho = rho_scale * frame.diameter() * std::pow(rmax, depth);
    return net;
}

SampleNet grid_net(const DiscreteMeasure& m, int base, int level) {
    const GridMeasure g = to_grid(m, base, level);
    SampleNet net;
    net.centers.resize(static_cast<Eigen::Index>(g.masses.size()), m.ambient_dim());
    Eigen::Index row = 0;
    for (const auto& [idx, mass] : g.masses)
        net.centers.row(row++) = cell_center(GridCell{base, level, idx}, g.frame).transpose();
    net.rho = (g.frame.extent() / std::pow(static_cast<double>(base), level)).norm();
    return net;
}

InnerNets inner_net_builder(const DiscreteMeasure& m, std::vector<int> counts, double frac) {
    if (counts.empty()) throw std::invalid_argument("inner_net_builder: needs counts");
    std::sort(counts.begin(), counts.end());
    counts.erase(std::unique(counts.begin(), counts.end()), counts.end());
    if (counts.front() < 1) throw std::invalid_argument("inner_net_builder: counts must be >= 1");
    if (!(frac > 0.0 && frac < 1.0))
        throw std::invalid_argument("inner_net_builder: frac must lie in (0,1)");

    return [measure = m, counts, frac](const Point& z, double kappa) {
        const NeighborIndex idx(measure);
        const double rho = frac * kappa;
        std::vector<int> cand = idx.within(z, kappa - rho);
        if (cand.empty()) cand = idx.within(z, kappa); // boundary fallback
        if (cand.empty()) return std::vector<SampleNet>{};
        std::sort(cand.begin(), cand.end(), [&](int a, int b) {
            if (lex_less(measure.atoms().row(a).transpose(), measure.atoms().row(b).transpose()))
                return true;
            if (lex_less(measure.atoms().row(b).transpose(), measure.atoms().row(a).transpose()))
                return false;
            return a < b;
        });

        std::vector<SampleNet> nets;
        size_t prev = 0;
        for (int want : counts) {
            const size_t take = std::min<size_t>(static_cast<size_t>(want), cand.size());
            if (take == prev) continue; // clamped to the same net
            prev = take;
            SampleNet net;
            net.rho = rho;
            net.centers.resize(static_cast<Eigen::Index>(take), measure.ambient_dim());
            for (size_t i = 0; i < take; ++i) {
                const size_t at = take == 1 ? 0
                                            : (i * (cand.size() - 1)) / (take - 1);
                net.centers.row(static_cast<Eigen::Index>(i)) =
                    measure.atoms().row(cand[at]);
            }
            nets.push_back(std::move(net));
        }
        return nets;
    };
}

} // namespace dimlab
