#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "driftlap/grushin.hpp"
#include "driftlap/heisenberg.hpp"

namespace driftlap {

// ---------------------------------------------------------------------------
// Residual sweeps
// ---------------------------------------------------------------------------

enum class Space { Heisenberg, Grushin };

// Candidate families a sweep can exercise.  Legacy is the drift-free family
// (requires L = 0 in every grid cell), BGG2 the p = 2 family (requires p = 2),
// Infinity the formal p -> infinity candidate (the cell's p is ignored and
// reported as infinite), Mollified the eps-regularized family.
enum class CandidateKind { Power, Legacy, BGG2, Infinity, Mollified };

const char* to_string(CandidateKind kind);

struct SweepConfig {
    Space space = Space::Heisenberg;
    std::vector<DriftParams> grid;      // (p, L) cells
    GrushinShape shape{};               // used when space == Grushin
    CandidateKind kind = CandidateKind::Power;
    double epsilon = 0.0;               // > 0 required iff kind == Mollified
    int points = 200;                   // sample count per cell
    double r_min = 0.5, r_max = 4.0;    // shell bounds on the gauge (vw or gh)
    std::uint64_t seed = 42;
    double tolerance = 1e-8;
    double margin = 0.1;                // Grushin: require |y1 - a| >= margin
    // Grushin: also sample points where c (y1-a)^{n+1} < 0 (the base's real
    // part is negative).  Forced on when the default right-half restriction is
    // unsatisfiable (c < 0 with odd n); the sampler always stays clear of the
    // branch cut by twice the default guard margin.
    bool allow_left_half_plane = false;
};

// One grid cell's aggregated outcome.  For Power/Legacy/BGG2 the per-point
// statistic is the relative residual of the reduced drift-operator terms; for
// Infinity, of the infinity-operator terms; for Mollified, the relative
// disagreement between the assembled operator value and the closed-form
// residual (falling back to the operator's own residual when the closed form
// is identically zero).
struct SweepRecord {
    DriftParams params{};               // the grid cell
    bool infinity = false;              // candidate ignores p (reported as inf)
    std::string candidate;              // kind name
    bool excluded = false;              // cell on the excluded parameter locus
    int requested = 0;
    int evaluated = 0;
    std::map<ErrorKind, int> skipped;   // per-point evaluation skips by kind
    double max_rel_residual = 0.0;
    double mean_rel_residual = 0.0;
    double median_rel_residual = 0.0;
    double wall_ms = 0.0;               // volatile; excluded from determinism

    int skipped_total() const;
};

// pass == every non-excluded record evaluated at least one point and has
// max_rel_residual <= tolerance; excluded cells pass vacuously.  Always
// requested == evaluated + skipped_total per record.
struct ResidualReport {
    SweepConfig config{};
    std::vector<SweepRecord> records;
    bool pass = false;
    double wall_ms = 0.0;               // volatile; excluded from determinism
};

// Deterministic given the seed: points are drawn sequentially per cell from a
// cell-specific stream, evaluated in parallel into indexed slots, and reduced
// in index order, so reports are identical across runs and thread counts.
// Throws ConfigInvalid for malformed configs (bad shell/points/epsilon, Legacy
// cells with L != 0, BGG2 cells with p != 2, invalid shape); cells on the
// excluded locus become records marked excluded rather than errors.
ResidualReport run_sweep(const SweepConfig& cfg);

// ---------------------------------------------------------------------------
// Delta mass of the mollified residual
// ---------------------------------------------------------------------------

inline constexpr int kDeltaMinResolution = 32;
inline constexpr double kDeltaStability = 0.02;

// The integration box in the rescaled variables X = x/eps, X3 = x3/eps^2
// (Grushin: S = (y1-a)/eps^{2/(n+1)}, T = (y2-b)/eps^2), where the mollified
// residual times the volume element is independent of eps: |X1|,|X2| <= 3,
// |X3| <= 9 (Grushin |S| <= 3, |T| <= 9).
inline constexpr double kDeltaBoxSide = 3.0;
inline constexpr double kDeltaBoxLast = 9.0;

struct DeltaMassEstimate {
    Space space = Space::Heisenberg;
    std::optional<GrushinShape> shape;  // present for Grushin
    DriftParams params{};
    std::vector<double> ladder;         // strictly decreasing eps values
    std::vector<Complex> masses;        // per-eps box integral
    double max_pairwise_deviation = 0.0;
    int resolution = 0;                 // midpoint cells per axis
    bool degenerate = false;            // prefactor is 0; masses identically 0
    // Doubling check: the first eps re-integrated at twice the resolution.
    double doubling_deviation = 0.0;
    bool quadrature_converged = false;  // doubling_deviation <= kDeltaStability

    // A stability claim needs a resolved quadrature first: the rescaled
    // integrand is exactly eps-independent, so pairwise deviations are tiny
    // even when the box integral itself diverges (the mollified base
    // c s^{n+1} + eps^2 has a real zero unless c > 0 with odd n, and the
    // residual is non-integrable across it).  The doubling check is what
    // tells those cases apart.
    bool stable(double tol) const {
        return degenerate || (quadrature_converged && max_pairwise_deviation <= tol);
    }
};

// Tensor-product midpoint quadrature of the closed-form mollified residual
// over the fixed rescaled box, one integral per ladder entry.  Plane partial
// sums are accumulated in index order, so results are identical across thread
// counts.  Throws ConfigInvalid (ladder not strictly decreasing/positive,
// missing shape), ResolutionTooLow (< 32), ExcludedParameter (params on the
// excluded locus with nonvanishing prefactor; a vanishing prefactor instead
// yields the degenerate zero-mass estimate).  Grushin shapes whose mollified
// base vanishes inside the box (n even, or c < 0) are computed anyway and come
// back with quadrature_converged == false rather than an error.
DeltaMassEstimate delta_mass(Space space, const std::optional<GrushinShape>& shape,
                             const DriftParams& params, const std::vector<double>& ladder,
                             int resolution);

// ---------------------------------------------------------------------------
// Commuting limit diagrams
// ---------------------------------------------------------------------------

inline constexpr double kDiagramPValueTol = 1e-3;  // value gap at the top of the p ladder
inline constexpr double kDiagramLValueTol = 0.05;  // value gap at the bottom of the L ladder
inline constexpr double kDiagramResidualTol = 1e-8;
inline constexpr double kDiagramCornerP = 1e8;
inline constexpr double kDiagramCornerL = 1e-8;
inline constexpr double kDiagramCornerTol = 1e-6;
inline constexpr double kExponentProbeP = 1e6;
inline constexpr double kExponentProbeTol = 1e-5;

// The four verified edges, all maxima over the point cloud:
//   (i)   u_{p,L} -> u_{inf,L} up the p ladder at L = L_ladder.front()
//         (per-step deviations must not increase; final <= kDiagramPValueTol),
//   (ii)  u_{p,L} -> u_{p,0} down the L ladder at p = p_ladder.front()
//         (final <= kDiagramLValueTol),
//   (iii) drift-operator residuals along both paths and infinity-operator
//         residuals of u_{inf,L} for every ladder L and L = 0, all
//         <= kDiagramResidualTol,
//   (iv)  u at (kDiagramCornerP, kDiagramCornerL) agrees with the L = 0
//         infinity candidate to kDiagramCornerTol, and the exponents at
//         p = kExponentProbeP sit within kExponentProbeTol of their limits.
struct DiagramReport {
    Space space = Space::Heisenberg;
    std::optional<GrushinShape> shape;
    std::vector<double> p_ladder;       // increasing
    std::vector<double> L_ladder;       // decreasing toward 0
    double L_edge = 0.0;                // L used on the p ladder
    double p_edge = 0.0;                // p used on the L ladder
    std::vector<double> p_value_dev;    // per p-ladder step
    std::vector<double> L_value_dev;    // per L-ladder step
    double p_path_max_residual = 0.0;
    double L_path_max_residual = 0.0;
    double infinity_max_residual = 0.0;
    double corner_value_dev = 0.0;
    double corner_exponent_dev = 0.0;
    bool pass = false;
};

// Throws ExcludedParameter when any ladder combination (including the corner
// probes) lands on the excluded locus, ConfigInvalid for empty ladders or
// clouds or ladders in the wrong order.
DiagramReport diagram_check(const std::vector<HPoint>& cloud,
                            const std::vector<double>& p_ladder,
                            const std::vector<double>& L_ladder);
DiagramReport diagram_check(const GrushinShape& shape, const std::vector<GPoint>& cloud,
                            const std::vector<double>& p_ladder,
                            const std::vector<double>& L_ladder);

// Deterministic shell samplers (exposed for cloud construction): points with
// the gauge quantity (vw, resp. gh at eps = 0) inside [r_min, r_max], away
// from the rho = 0 cylinder, resp. at least margin from the degenerate line
// and clear of the branch cut.
std::vector<HPoint> h_sample_shell(std::uint64_t seed, int count, double r_min, double r_max);
std::vector<GPoint> g_sample_shell(std::uint64_t seed, int count, const GrushinShape& shape,
                                   double r_min, double r_max, double margin,
                                   bool allow_left_half_plane);

} // namespace driftlap
