#include "driftlap/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include "driftlap/parallel.hpp"

namespace driftlap {

namespace {

constexpr double kCylinderFloor = 1e-6;
constexpr int kMaxDrawTries = 100000;

double rel(Complex a, Complex b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

// splitmix64 finalizer: decorrelates per-cell streams drawn from one seed.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double wall_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

HPoint draw_h(std::mt19937_64& rng, double r_min, double r_max) {
    double m12 = std::pow(r_max, 0.25);
    double m3 = std::sqrt(r_max) / 4.0;
    for (int t = 0; t < kMaxDrawTries; ++t) {
        HPoint pt{uniform(rng, -m12, m12), uniform(rng, -m12, m12), uniform(rng, -m3, m3)};
        double rho2 = pt.x1 * pt.x1 + pt.x2 * pt.x2;
        double gauge = rho2 * rho2 + 16.0 * pt.x3 * pt.x3;
        if (gauge >= r_min && gauge <= r_max && rho2 >= kCylinderFloor) return pt;
    }
    throw EvalError(ErrorKind::ConfigInvalid, "shell sampler cannot satisfy the bounds");
}

GPoint draw_g(std::mt19937_64& rng, const GrushinShape& sh, double r_min, double r_max,
              double margin, bool allow_left) {
    double np1 = static_cast<double>(sh.n) + 1.0;
    double s_max = std::pow(std::sqrt(r_max) / std::abs(sh.c), 1.0 / np1);
    double t_max = std::sqrt(r_max) / np1;
    if (!(margin < s_max))
        throw EvalError(ErrorKind::ConfigInvalid,
                        "margin exceeds the largest |y1 - a| inside the shell");
    // The right-half restriction c (y1-a)^{n+1} > 0 cannot be met when c < 0
    // with odd n (even power); sample the left half-plane honestly instead.
    bool restrict_sign = !allow_left && !(sh.c < 0.0 && sh.n % 2 == 1);
    double cut_guard = 2.0 * BranchPolicy{}.guard_margin;
    for (int t = 0; t < kMaxDrawTries; ++t) {
        double s = uniform(rng, -s_max, s_max);
        if (std::abs(s) < margin) continue;
        double sig = sh.c;
        for (int k = 0; k < sh.n + 1; ++k) sig *= s;
        if (restrict_sign && !(sig > 0.0)) continue;
        double tt = uniform(rng, -t_max, t_max);
        Complex g{sig, np1 * tt};
        double gauge = std::norm(g);
        if (gauge < r_min || gauge > r_max) continue;
        if (M_PI - std::abs(std::arg(g)) < cut_guard) continue;
        return {sh.a + s, sh.b + tt};
    }
    throw EvalError(ErrorKind::ConfigInvalid, "shell sampler cannot satisfy the bounds");
}

struct PointOutcome {
    double stat = 0.0;
    int skip = -1; // >= 0: static_cast<int>(ErrorKind)
};

void reduce_stats(const std::vector<PointOutcome>& outcomes, SweepRecord& rec) {
    std::vector<double> vals;
    vals.reserve(outcomes.size());
    for (const PointOutcome& o : outcomes) {
        if (o.skip >= 0)
            ++rec.skipped[static_cast<ErrorKind>(o.skip)];
        else
            vals.push_back(o.stat);
    }
    rec.evaluated = static_cast<int>(vals.size());
    if (vals.empty()) return;
    rec.max_rel_residual = *std::max_element(vals.begin(), vals.end());
    rec.mean_rel_residual =
        std::accumulate(vals.begin(), vals.end(), 0.0) / static_cast<double>(vals.size());
    std::sort(vals.begin(), vals.end());
    std::size_t n = vals.size();
    rec.median_rel_residual =
        n % 2 == 1 ? vals[n / 2] : 0.5 * (vals[n / 2 - 1] + vals[n / 2]);
}

void validate_sweep_config(const SweepConfig& cfg) {
    if (!(cfg.r_min > 0.0) || !std::isfinite(cfg.r_max) || !(cfg.r_max > cfg.r_min))
        throw EvalError(ErrorKind::ConfigInvalid, "shell bounds need 0 < r_min < r_max");
    if (cfg.points < 1)
        throw EvalError(ErrorKind::ConfigInvalid, "point count must be >= 1");
    if (cfg.grid.empty())
        throw EvalError(ErrorKind::ConfigInvalid, "parameter grid is empty");
    if (!(cfg.tolerance > 0.0))
        throw EvalError(ErrorKind::ConfigInvalid, "tolerance must be > 0");
    if (cfg.kind == CandidateKind::Mollified) {
        if (!(cfg.epsilon > 0.0) || !std::isfinite(cfg.epsilon))
            throw EvalError(ErrorKind::ConfigInvalid, "mollified sweeps need epsilon > 0");
    } else if (cfg.epsilon != 0.0) {
        throw EvalError(ErrorKind::ConfigInvalid, "epsilon is only for mollified sweeps");
    }
    if (cfg.space == Space::Grushin) {
        g_validate_shape(cfg.shape);
        if (!(cfg.margin >= kDegenerateLineFloor))
            throw EvalError(ErrorKind::ConfigInvalid,
                            "margin must be at least the degenerate-line floor");
    }
    for (const DriftParams& cell : cfg.grid) {
        if (!std::isfinite(cell.L))
            throw EvalError(ErrorKind::ConfigInvalid, "grid L must be finite");
        if (cfg.kind != CandidateKind::Infinity
            && (!std::isfinite(cell.p) || !(cell.p > 1.0)))
            throw EvalError(ErrorKind::ConfigInvalid, "grid p must be finite and > 1");
        if (cfg.kind == CandidateKind::Legacy && cell.L != 0.0)
            throw EvalError(ErrorKind::ConfigInvalid, "the drift-free family requires L == 0");
        if (cfg.kind == CandidateKind::BGG2 && cell.p != 2.0)
            throw EvalError(ErrorKind::ConfigInvalid, "the p = 2 family requires p == 2");
    }
}

bool cell_excluded(const SweepConfig& cfg, const DriftParams& cell) {
    switch (cfg.kind) {
        case CandidateKind::Power:
        case CandidateKind::Mollified:
            return cfg.space == Space::Heisenberg ? !h_params_valid(cell)
                                                  : !g_params_valid(cell, cfg.shape.n);
        case CandidateKind::BGG2:
            return std::abs(std::abs(cell.L) - 1.0) <= kExclusionRadius;
        case CandidateKind::Legacy:
        case CandidateKind::Infinity:
            return false;
    }
    return false;
}

// Operator parameters actually applied for a grid cell (the candidate's own
// family parameters for Legacy/BGG2, the cell itself otherwise).
DriftParams cell_operator_params(CandidateKind kind, const DriftParams& cell) {
    switch (kind) {
        case CandidateKind::Legacy: return {cell.p, 0.0};
        case CandidateKind::BGG2: return {2.0, cell.L};
        default: return cell;
    }
}

SweepRecord run_cell(const SweepConfig& cfg, std::size_t index) {
    auto t0 = std::chrono::steady_clock::now();
    const DriftParams& cell = cfg.grid[index];
    SweepRecord rec;
    rec.params = cell;
    rec.infinity = cfg.kind == CandidateKind::Infinity;
    rec.candidate = to_string(cfg.kind);
    rec.requested = cfg.points;
    if (cell_excluded(cfg, cell)) {
        rec.excluded = true;
        rec.skipped[ErrorKind::ExcludedParameter] = cfg.points;
        rec.wall_ms = wall_since(t0);
        return rec;
    }
    DriftParams op = cell_operator_params(cfg.kind, cell);

    std::mt19937_64 rng(mix(cfg.seed ^ mix(index)));
    std::vector<PointOutcome> outcomes(static_cast<std::size_t>(cfg.points));

    if (cfg.space == Space::Heisenberg) {
        HCandidate cand;
        switch (cfg.kind) {
            case CandidateKind::Power: cand = {HKind::PowerPL, cell, 0.0}; break;
            case CandidateKind::Legacy: cand = {HKind::LegacyZeta, op, 0.0}; break;
            case CandidateKind::BGG2: cand = {HKind::BGG2, op, 0.0}; break;
            case CandidateKind::Infinity: cand = {HKind::Infinity, {2.0, cell.L}, 0.0}; break;
            case CandidateKind::Mollified: cand = {HKind::Mollified, cell, cfg.epsilon}; break;
        }
        std::vector<HPoint> pts;
        pts.reserve(outcomes.size());
        for (int i = 0; i < cfg.points; ++i) pts.push_back(draw_h(rng, cfg.r_min, cfg.r_max));
        parallel_for_indexed(outcomes.size(), [&](std::size_t i) {
            try {
                if (cfg.kind == CandidateKind::Infinity) {
                    outcomes[i].stat = h_infinity_terms(cand, cell.L, pts[i]).rel_residual();
                } else if (cfg.kind == CandidateKind::Mollified) {
                    HOperatorTerms t = h_drift_terms(cand, op, pts[i]);
                    Complex want = h_mollified_residual_closed(op, cfg.epsilon, pts[i]);
                    outcomes[i].stat = want == Complex{0.0, 0.0} ? t.rel_residual()
                                                                 : rel(t.value(), want);
                } else {
                    outcomes[i].stat = h_drift_terms(cand, op, pts[i]).rel_residual();
                }
            } catch (const EvalError& e) {
                outcomes[i].skip = static_cast<int>(e.kind());
            }
        });
    } else {
        GCandidate cand;
        switch (cfg.kind) {
            case CandidateKind::Power: cand = {GKind::PowerPL, cfg.shape, cell, 0.0}; break;
            case CandidateKind::Legacy: cand = {GKind::LegacyPsi, cfg.shape, op, 0.0}; break;
            case CandidateKind::BGG2: cand = {GKind::BGG2, cfg.shape, op, 0.0}; break;
            case CandidateKind::Infinity:
                cand = {GKind::Infinity, cfg.shape, {2.0, cell.L}, 0.0};
                break;
            case CandidateKind::Mollified:
                cand = {GKind::Mollified, cfg.shape, cell, cfg.epsilon};
                break;
        }
        std::vector<GPoint> pts;
        pts.reserve(outcomes.size());
        for (int i = 0; i < cfg.points; ++i)
            pts.push_back(draw_g(rng, cfg.shape, cfg.r_min, cfg.r_max, cfg.margin,
                                 cfg.allow_left_half_plane));
        parallel_for_indexed(outcomes.size(), [&](std::size_t i) {
            try {
                if (cfg.kind == CandidateKind::Infinity) {
                    outcomes[i].stat = g_infinity_terms(cand, cell.L, pts[i]).rel_residual();
                } else if (cfg.kind == CandidateKind::Mollified) {
                    GOperatorTerms t = g_drift_terms(cand, op, pts[i]);
                    Complex want =
                        g_mollified_residual_closed(cfg.shape, op, cfg.epsilon, pts[i]);
                    outcomes[i].stat = want == Complex{0.0, 0.0} ? t.rel_residual()
                                                                 : rel(t.value(), want);
                } else {
                    outcomes[i].stat = g_drift_terms(cand, op, pts[i]).rel_residual();
                }
            } catch (const EvalError& e) {
                outcomes[i].skip = static_cast<int>(e.kind());
            }
        });
    }
    reduce_stats(outcomes, rec);
    rec.wall_ms = wall_since(t0);
    return rec;
}

} // namespace

const char* to_string(CandidateKind kind) {
    switch (kind) {
        case CandidateKind::Power: return "power";
        case CandidateKind::Legacy: return "legacy";
        case CandidateKind::BGG2: return "bgg2";
        case CandidateKind::Infinity: return "infinity";
        case CandidateKind::Mollified: return "mollified";
    }
    return "unknown";
}

int SweepRecord::skipped_total() const {
    int n = 0;
    for (const auto& [kind, count] : skipped) n += count;
    return n;
}

ResidualReport run_sweep(const SweepConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    validate_sweep_config(cfg);
    ResidualReport rep;
    rep.config = cfg;
    rep.records.reserve(cfg.grid.size());
    for (std::size_t i = 0; i < cfg.grid.size(); ++i) rep.records.push_back(run_cell(cfg, i));
    rep.pass = std::all_of(rep.records.begin(), rep.records.end(), [&](const SweepRecord& r) {
        return r.excluded || (r.evaluated >= 1 && r.max_rel_residual <= cfg.tolerance);
    });
    rep.wall_ms = wall_since(t0);
    return rep;
}

std::vector<HPoint> h_sample_shell(std::uint64_t seed, int count, double r_min, double r_max) {
    if (count < 1 || !(r_min > 0.0) || !std::isfinite(r_max) || !(r_max > r_min))
        throw EvalError(ErrorKind::ConfigInvalid, "sampler needs count >= 1 and 0 < r_min < r_max");
    std::mt19937_64 rng(mix(seed));
    std::vector<HPoint> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) pts.push_back(draw_h(rng, r_min, r_max));
    return pts;
}

std::vector<GPoint> g_sample_shell(std::uint64_t seed, int count, const GrushinShape& shape,
                                   double r_min, double r_max, double margin,
                                   bool allow_left_half_plane) {
    if (count < 1 || !(r_min > 0.0) || !std::isfinite(r_max) || !(r_max > r_min))
        throw EvalError(ErrorKind::ConfigInvalid, "sampler needs count >= 1 and 0 < r_min < r_max");
    g_validate_shape(shape);
    if (!(margin >= kDegenerateLineFloor))
        throw EvalError(ErrorKind::ConfigInvalid,
                        "margin must be at least the degenerate-line floor");
    std::mt19937_64 rng(mix(seed));
    std::vector<GPoint> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        pts.push_back(draw_g(rng, shape, r_min, r_max, margin, allow_left_half_plane));
    return pts;
}

// ---------------------------------------------------------------------------
// Delta mass
// ---------------------------------------------------------------------------

namespace {

Complex integrate_h(const DriftParams& params, double eps, int resolution) {
    double h12 = 2.0 * kDeltaBoxSide / resolution;
    double h3 = 2.0 * kDeltaBoxLast / resolution;
    double cell = h12 * h12 * h3;
    double jac = eps * eps * eps * eps;
    std::vector<Complex> plane(static_cast<std::size_t>(resolution));
    parallel_for_indexed(plane.size(), [&](std::size_t k) {
        double X3 = -kDeltaBoxLast + (static_cast<double>(k) + 0.5) * h3;
        Complex acc{0.0, 0.0};
        for (int i = 0; i < resolution; ++i) {
            double X1 = -kDeltaBoxSide + (i + 0.5) * h12;
            for (int j = 0; j < resolution; ++j) {
                double X2 = -kDeltaBoxSide + (j + 0.5) * h12;
                HPoint pt{eps * X1, eps * X2, eps * eps * X3};
                acc += h_mollified_residual_closed(params, eps, pt);
            }
        }
        plane[k] = acc;
    });
    Complex total{0.0, 0.0};
    for (const Complex& p : plane) total += p;
    return total * cell * jac;
}

Complex integrate_g(const GrushinShape& shape, const DriftParams& params, double eps,
                    int resolution) {
    double hS = 2.0 * kDeltaBoxSide / resolution;
    double hT = 2.0 * kDeltaBoxLast / resolution;
    double cell = hS * hT;
    double s_scale = std::pow(eps, 2.0 / (static_cast<double>(shape.n) + 1.0));
    double jac = s_scale * eps * eps;
    std::vector<Complex> rows(static_cast<std::size_t>(resolution));
    parallel_for_indexed(rows.size(), [&](std::size_t i) {
        double S = -kDeltaBoxSide + (static_cast<double>(i) + 0.5) * hS;
        Complex acc{0.0, 0.0};
        for (int j = 0; j < resolution; ++j) {
            double T = -kDeltaBoxLast + (j + 0.5) * hT;
            GPoint pt{shape.a + s_scale * S, shape.b + eps * eps * T};
            acc += g_mollified_residual_closed(shape, params, eps, pt);
        }
        rows[i] = acc;
    });
    Complex total{0.0, 0.0};
    for (const Complex& r : rows) total += r;
    return total * cell * jac;
}

} // namespace

DeltaMassEstimate delta_mass(Space space, const std::optional<GrushinShape>& shape,
                             const DriftParams& params, const std::vector<double>& ladder,
                             int resolution) {
    if (space == Space::Grushin && !shape)
        throw EvalError(ErrorKind::ConfigInvalid, "the Grushin delta mass needs a shape");
    if (space == Space::Heisenberg && shape)
        throw EvalError(ErrorKind::ConfigInvalid, "the Heisenberg delta mass takes no shape");
    if (shape) g_validate_shape(*shape);
    if (resolution < kDeltaMinResolution)
        throw EvalError(ErrorKind::ResolutionTooLow, "quadrature needs >= 32 cells per axis");
    if (ladder.empty())
        throw EvalError(ErrorKind::ConfigInvalid, "epsilon ladder is empty");
    for (std::size_t i = 0; i < ladder.size(); ++i) {
        if (!(ladder[i] > 0.0) || !std::isfinite(ladder[i]))
            throw EvalError(ErrorKind::ConfigInvalid, "epsilon ladder entries must be > 0");
        if (i > 0 && !(ladder[i] < ladder[i - 1]))
            throw EvalError(ErrorKind::ConfigInvalid, "epsilon ladder must strictly decrease");
    }
    if (!std::isfinite(params.p) || !(params.p > 1.0) || !std::isfinite(params.L))
        throw EvalError(ErrorKind::ConfigInvalid, "parameters need finite p > 1 and finite L");

    DeltaMassEstimate est;
    est.space = space;
    est.shape = shape;
    est.params = params;
    est.ladder = ladder;
    est.resolution = resolution;

    double pref = space == Space::Heisenberg ? h_mollified_prefactor(params)
                                             : g_mollified_prefactor(params, shape->n);
    if (pref == 0.0) {
        est.degenerate = true;
        est.masses.assign(ladder.size(), Complex{0.0, 0.0});
        est.quadrature_converged = true;
        return est;
    }
    if (space == Space::Heisenberg)
        h_require_valid(params);
    else
        g_require_valid(params, shape->n);

    for (double eps : ladder)
        est.masses.push_back(space == Space::Heisenberg
                                 ? integrate_h(params, eps, resolution)
                                 : integrate_g(*shape, params, eps, resolution));
    for (std::size_t i = 0; i < est.masses.size(); ++i)
        for (std::size_t j = i + 1; j < est.masses.size(); ++j)
            est.max_pairwise_deviation =
                std::max(est.max_pairwise_deviation, rel(est.masses[i], est.masses[j]));
    Complex doubled = space == Space::Heisenberg
                          ? integrate_h(params, ladder.front(), 2 * resolution)
                          : integrate_g(*shape, params, ladder.front(), 2 * resolution);
    est.doubling_deviation = rel(est.masses.front(), doubled);
    est.quadrature_converged = est.doubling_deviation <= kDeltaStability;
    return est;
}

// ---------------------------------------------------------------------------
// Commuting diagrams
// ---------------------------------------------------------------------------

namespace {

void validate_ladders(const std::vector<double>& p_ladder, const std::vector<double>& L_ladder,
                      std::size_t cloud_size) {
    if (cloud_size == 0)
        throw EvalError(ErrorKind::ConfigInvalid, "point cloud is empty");
    if (p_ladder.empty() || L_ladder.empty())
        throw EvalError(ErrorKind::ConfigInvalid, "ladders must be non-empty");
    for (std::size_t i = 0; i < p_ladder.size(); ++i) {
        if (!std::isfinite(p_ladder[i]) || !(p_ladder[i] > 1.0))
            throw EvalError(ErrorKind::ConfigInvalid, "p ladder entries must be finite and > 1");
        if (i > 0 && !(p_ladder[i] > p_ladder[i - 1]))
            throw EvalError(ErrorKind::ConfigInvalid, "p ladder must strictly increase");
    }
    for (std::size_t i = 0; i < L_ladder.size(); ++i) {
        if (!std::isfinite(L_ladder[i]) || !(L_ladder[i] > 0.0))
            throw EvalError(ErrorKind::ConfigInvalid, "L ladder entries must be > 0");
        if (i > 0 && !(L_ladder[i] < L_ladder[i - 1]))
            throw EvalError(ErrorKind::ConfigInvalid, "L ladder must strictly decrease");
    }
}

bool nonincreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1] * (1.0 + 1e-9) + 1e-18) return false;
    return true;
}

} // namespace

DiagramReport diagram_check(const std::vector<HPoint>& cloud,
                            const std::vector<double>& p_ladder,
                            const std::vector<double>& L_ladder) {
    validate_ladders(p_ladder, L_ladder, cloud.size());
    DiagramReport rep;
    rep.space = Space::Heisenberg;
    rep.p_ladder = p_ladder;
    rep.L_ladder = L_ladder;
    rep.L_edge = L_ladder.front();
    rep.p_edge = p_ladder.front();

    auto require_cell = [](double p, double L) {
        if (!h_params_valid({p, L}))
            throw EvalError(ErrorKind::ExcludedParameter,
                            "diagram ladder crosses the excluded parameter locus");
    };
    for (double p : p_ladder) require_cell(p, rep.L_edge);
    for (double L : L_ladder) {
        require_cell(rep.p_edge, L);
        require_cell(kExponentProbeP, L);
    }
    require_cell(kDiagramCornerP, kDiagramCornerL);

    HCandidate limit_L{HKind::Infinity, {2.0, rep.L_edge}, 0.0};
    for (double p : p_ladder) {
        HCandidate cand{HKind::PowerPL, {p, rep.L_edge}, 0.0};
        double dev = 0.0;
        for (const HPoint& pt : cloud) {
            dev = std::max(dev, rel(u_value(cand, pt), u_value(limit_L, pt)));
            rep.p_path_max_residual = std::max(
                rep.p_path_max_residual,
                h_drift_terms(cand, {p, rep.L_edge}, pt).rel_residual());
        }
        rep.p_value_dev.push_back(dev);
    }

    HCandidate limit_p{HKind::LegacyZeta, {rep.p_edge, 0.0}, 0.0};
    for (double L : L_ladder) {
        HCandidate cand{HKind::PowerPL, {rep.p_edge, L}, 0.0};
        double dev = 0.0;
        for (const HPoint& pt : cloud) {
            dev = std::max(dev, rel(u_value(cand, pt), u_value(limit_p, pt)));
            rep.L_path_max_residual = std::max(
                rep.L_path_max_residual,
                h_drift_terms(cand, {rep.p_edge, L}, pt).rel_residual());
        }
        rep.L_value_dev.push_back(dev);
    }

    std::vector<double> inf_Ls = L_ladder;
    inf_Ls.push_back(0.0);
    for (double L : inf_Ls) {
        HCandidate cand{HKind::Infinity, {2.0, L}, 0.0};
        for (const HPoint& pt : cloud)
            rep.infinity_max_residual = std::max(
                rep.infinity_max_residual, h_infinity_terms(cand, L, pt).rel_residual());
    }

    HCandidate corner_cand{HKind::PowerPL, {kDiagramCornerP, kDiagramCornerL}, 0.0};
    HCandidate corner_limit{HKind::Infinity, {2.0, 0.0}, 0.0};
    for (const HPoint& pt : cloud)
        rep.corner_value_dev =
            std::max(rep.corner_value_dev, rel(u_value(corner_cand, pt), u_value(corner_limit, pt)));
    for (double L : L_ladder) {
        HExponents probe = h_exponents({kExponentProbeP, L});
        HExponents lim = h_infinity_exponents(L);
        rep.corner_exponent_dev = std::max({rep.corner_exponent_dev,
                                            std::abs(probe.eta - lim.eta),
                                            std::abs(probe.tau - lim.tau)});
    }

    rep.pass = nonincreasing(rep.p_value_dev) && rep.p_value_dev.back() <= kDiagramPValueTol
            && rep.L_value_dev.back() <= kDiagramLValueTol
            && rep.p_path_max_residual <= kDiagramResidualTol
            && rep.L_path_max_residual <= kDiagramResidualTol
            && rep.infinity_max_residual <= kDiagramResidualTol
            && rep.corner_value_dev <= kDiagramCornerTol
            && rep.corner_exponent_dev <= kExponentProbeTol;
    return rep;
}

DiagramReport diagram_check(const GrushinShape& shape, const std::vector<GPoint>& cloud,
                            const std::vector<double>& p_ladder,
                            const std::vector<double>& L_ladder) {
    g_validate_shape(shape);
    validate_ladders(p_ladder, L_ladder, cloud.size());
    DiagramReport rep;
    rep.space = Space::Grushin;
    rep.shape = shape;
    rep.p_ladder = p_ladder;
    rep.L_ladder = L_ladder;
    rep.L_edge = L_ladder.front();
    rep.p_edge = p_ladder.front();

    auto require_cell = [&](double p, double L) {
        if (!g_params_valid({p, L}, shape.n))
            throw EvalError(ErrorKind::ExcludedParameter,
                            "diagram ladder crosses the excluded parameter locus");
    };
    for (double p : p_ladder) require_cell(p, rep.L_edge);
    for (double L : L_ladder) {
        require_cell(rep.p_edge, L);
        require_cell(kExponentProbeP, L);
    }
    require_cell(kDiagramCornerP, kDiagramCornerL);

    GCandidate limit_L{GKind::Infinity, shape, {2.0, rep.L_edge}, 0.0};
    for (double p : p_ladder) {
        GCandidate cand{GKind::PowerPL, shape, {p, rep.L_edge}, 0.0};
        double dev = 0.0;
        for (const GPoint& pt : cloud) {
            dev = std::max(dev, rel(f_value(cand, pt), f_value(limit_L, pt)));
            rep.p_path_max_residual = std::max(
                rep.p_path_max_residual,
                g_drift_terms(cand, {p, rep.L_edge}, pt).rel_residual());
        }
        rep.p_value_dev.push_back(dev);
    }

    GCandidate limit_p{GKind::LegacyPsi, shape, {rep.p_edge, 0.0}, 0.0};
    for (double L : L_ladder) {
        GCandidate cand{GKind::PowerPL, shape, {rep.p_edge, L}, 0.0};
        double dev = 0.0;
        for (const GPoint& pt : cloud) {
            dev = std::max(dev, rel(f_value(cand, pt), f_value(limit_p, pt)));
            rep.L_path_max_residual = std::max(
                rep.L_path_max_residual,
                g_drift_terms(cand, {rep.p_edge, L}, pt).rel_residual());
        }
        rep.L_value_dev.push_back(dev);
    }

    std::vector<double> inf_Ls = L_ladder;
    inf_Ls.push_back(0.0);
    for (double L : inf_Ls) {
        GCandidate cand{GKind::Infinity, shape, {2.0, L}, 0.0};
        for (const GPoint& pt : cloud)
            rep.infinity_max_residual = std::max(
                rep.infinity_max_residual, g_infinity_terms(cand, L, pt).rel_residual());
    }

    GCandidate corner_cand{GKind::PowerPL, shape, {kDiagramCornerP, kDiagramCornerL}, 0.0};
    GCandidate corner_limit{GKind::Infinity, shape, {2.0, 0.0}, 0.0};
    for (const GPoint& pt : cloud)
        rep.corner_value_dev =
            std::max(rep.corner_value_dev, rel(f_value(corner_cand, pt), f_value(corner_limit, pt)));
    for (double L : L_ladder) {
        GExponents probe = g_exponents({kExponentProbeP, L}, shape.n);
        GExponents lim = g_infinity_exponents(L, shape.n);
        rep.corner_exponent_dev = std::max({rep.corner_exponent_dev,
                                            std::abs(probe.alpha - lim.alpha),
                                            std::abs(probe.beta - lim.beta)});
    }

    rep.pass = nonincreasing(rep.p_value_dev) && rep.p_value_dev.back() <= kDiagramPValueTol
            && rep.L_value_dev.back() <= kDiagramLValueTol
            && rep.p_path_max_residual <= kDiagramResidualTol
            && rep.L_path_max_residual <= kDiagramResidualTol
            && rep.infinity_max_residual <= kDiagramResidualTol
            && rep.corner_value_dev <= kDiagramCornerTol
            && rep.corner_exponent_dev <= kExponentProbeTol;
    return rep;
}

} // namespace driftlap
