#pragma once

#include "driftlap/jet.hpp"

namespace driftlap {

// ---------------------------------------------------------------------------
// Points and group structure
// ---------------------------------------------------------------------------

struct HPoint {
    double x1 = 0.0, x2 = 0.0, x3 = 0.0;
};

// Group multiplication: first two coordinates add, third picks up the
// symplectic correction (x1*y2 - x2*y1)/2.
HPoint group_mul(const HPoint& a, const HPoint& b);

// ---------------------------------------------------------------------------
// Parameters and exponents
// ---------------------------------------------------------------------------

struct DriftParams {
    double p = 2.0; // 1 < p < infinity
    double L = 0.0; // drift strength
};

// Radius around the excluded parameter locus inside which (p, L) is refused.
inline constexpr double kExclusionRadius = 1e-9;

// The family degenerates when L = +-(4-p)/(2(1-p)) (one of the two exponents
// becomes 0 and the candidate collapses to a pure power of a single base).
double h_exclusion_bound(double p);
bool h_params_valid(const DriftParams& params);
// Throws ConfigInvalid for p outside (1, inf) or non-finite L,
// ExcludedParameter within kExclusionRadius of the degenerate locus.
void h_require_valid(const DriftParams& params);

struct HExponents {
    double eta = 0.0, tau = 0.0;
};

// eta = (4-p+2L(1-p))/(4(1-p)), tau = (4-p-2L(1-p))/(4(1-p)).
// Identities: eta + tau = (4-p)/(2(1-p)), eta - tau = L.
HExponents h_exponents(const DriftParams& params);

// Formal p -> infinity limit: N = (1+2L)/4, T = (1-2L)/4 (returned as
// eta = N, tau = T).  N + T = 1/2, N - T = L.
HExponents h_infinity_exponents(double L);

// ---------------------------------------------------------------------------
// Candidates
// ---------------------------------------------------------------------------

enum class HKind {
    PowerPL,    // v^eta w^tau for general (p, L)
    LegacyZeta, // drift-free family (vw)^{eta_p}; log(vw) branch at p = 4
    BGG2,       // p = 2 family with exponents (L-1)/2, -(L+1)/2
    Infinity,   // v^N w^T (p ignored)
    Mollified,  // v_eps^eta w_eps^tau with eps > 0
};

struct HCandidate {
    HKind kind = HKind::PowerPL;
    DriftParams params{};
    double epsilon = 0.0; // > 0 only for Mollified
};

// Kind-specific parameter checks (throws ConfigInvalid / ExcludedParameter).
void h_validate(const HCandidate& cand);

// Exponents the candidate actually raises v and w to.  Throws ConfigInvalid
// for the LegacyZeta log branch (p = 4), which is not a power.
HExponents h_candidate_exponents(const HCandidate& cand);
bool h_is_log_branch(const HCandidate& cand);

// The complex base v = (x1^2 + x2^2) + eps^2 - 4i x3; w is its conjugate.
Complex h_base_v(const HPoint& at, double epsilon);

// ---------------------------------------------------------------------------
// Frame and candidate evaluation
// ---------------------------------------------------------------------------

// X1 f = d1 f - (x2/2) d3 f, X2 f = d2 f + (x1/2) d3 f, X3 f = d3 f,
// assembled from the jet's Euclidean partials.
Complex frame_apply(int field_index, const Jet2& f, const HPoint& at);

// Full second-order jet of the candidate at the point.
// Throws SingularPoint when the base vanishes (origin with eps = 0).
Jet2 u_eval(const HCandidate& cand, const HPoint& at);

// Value-only evaluation through plain complex arithmetic (no jets); the
// pointwise comparator for finite-difference cross-checks and limit ladders.
Complex u_value(const HCandidate& cand, const HPoint& at);

// ---------------------------------------------------------------------------
// Horizontal calculus derived from a jet
// ---------------------------------------------------------------------------

// Everything the drift operators need, assembled from one second-order jet:
// frame derivatives of u, the squared horizontal gradient norm
// q = X1 u conj(X1 u) + X2 u conj(X2 u), and the derivatives of q (which need
// only the Hessian of u, since q is built from first derivatives).
struct HHorizontalData {
    Complex u{};            // value
    Complex d3u{};          // d/dx3 of u
    Complex x1u{}, x2u{};   // X1 u, X2 u
    Complex x11u{}, x22u{}; // X1 X1 u, X2 X2 u
    Complex q{};            // squared horizontal gradient norm
    Complex d3q{};          // d/dx3 of q
    Complex x1q{}, x2q{};   // X1 q, X2 q
};

HHorizontalData h_assemble(const Jet2& ujet, const HPoint& at);
HHorizontalData h_horizontal(const HCandidate& cand, const HPoint& at);

// Closed form of q: 8 (eta^2 + tau^2) v^{eta+tau-1} w^{eta+tau-1} (x1^2+x2^2)
// for power candidates; 16 (x1^2+x2^2)/(vw) on the log branch.
Complex h_norm_grad_sq(const HCandidate& cand, const HPoint& at);

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

// The drift operator factored as q^{(p-4)/2} (A + B1 + B2 + D) with
//   A  = (p-2)/2 * (X1 q X1 u + X2 q X2 u)     (gradient part of Delta_p)
//   B1 = q X1 X1 u,  B2 = q X2 X2 u            (second-order part)
//   D  = iL ((p-2)/2 d3 q * u + q d3 u)        (drift part, [X1,X2] = d/dx3)
// so the cancellation A + B1 + B2 + D = 0 can be judged relative to the
// largest term even when q^{(p-4)/2} would over- or underflow at large p.
// The second-order part stays split because at p = 2, L = 0 it is the only
// nonzero contribution and the cancellation happens between its two halves.
struct HOperatorTerms {
    Complex gradient_term{};
    Complex laplacian_1{}; // q X1 X1 u
    Complex laplacian_2{}; // q X2 X2 u
    Complex drift_term{};
    Complex scale{}; // q^{(p-4)/2}

    Complex laplacian_term() const { return laplacian_1 + laplacian_2; }
    Complex reduced_sum() const { return gradient_term + laplacian_1 + laplacian_2 + drift_term; }
    Complex value() const { return scale * reduced_sum(); }
    double rel_residual() const;
};

HOperatorTerms h_drift_terms(const HCandidate& cand, const DriftParams& params, const HPoint& at);
Complex h_drift_op(const HCandidate& cand, const DriftParams& params, const HPoint& at);

// Infinity-operator terms: X1 q X1 u + X2 q X2 u + iL d3 q * u.
struct HInfinityTerms {
    Complex term1{}, term2{}, drift_term{};

    Complex value() const { return term1 + term2 + drift_term; }
    double rel_residual() const;
};

HInfinityTerms h_infinity_terms(const HCandidate& cand, double L, const HPoint& at);
Complex h_infinity_op(const HCandidate& cand, double L, const HPoint& at);

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

// Literal closed-form derivative catalogue for power candidates (with
// P = (eta w + tau v) x1 + (eta w - tau v) i x2 and the analogous Q):
//   X1 u  = 2 v^{eta-1} w^{tau-1} P
//   X2 u  = 2 v^{eta-1} w^{tau-1} Q
//   q     = 8 (eta^2+tau^2) v^{eta+tau-1} w^{eta+tau-1} rho^2
//   X1 q  = 16 (eta^2+tau^2) v^{eta+tau-2} w^{eta+tau-2}
//             (v w x1 + 2(eta+tau-1) rho^2 (x1 (rho^2+eps^2) - 4 x2 x3))
//   X2 q  =  ... (x2 (rho^2+eps^2) + 4 x1 x3)
//   X1X1u = 2 v^{eta-2} w^{tau-2} [ (2(eta-1) w (x1+i x2) + 2(tau-1) v (x1-i x2)) P
//                                   + v w (2(eta+tau) rho^2 + (eta w + tau v)) ]
//   X2X2u = analogous with (x2 -+ i x1) and Q
// where rho^2 = x1^2 + x2^2 and v, w include the eps^2 shift.
struct HClosedForms {
    Complex x1u{}, x2u{};
    Complex q{};
    Complex x1q{}, x2q{};
    Complex x11u{}, x22u{};
};

HClosedForms h_closed(const HCandidate& cand, const HPoint& at);

// Closed form of the mollified drift-operator residual:
//   2^{(3p-2)/2} eps^2 (p(4-p)/(4(1-p)) + L^2) (eta^2+tau^2)^{(p-2)/2}
//     rho^{p-2} v^{(eta p + tau(p-2) - p)/2} w^{(eta(p-2) + tau p - p)/2}.
// The prefactor vanishes identically at p = 2, L = +-1.
Complex h_mollified_residual_closed(const DriftParams& params, double epsilon, const HPoint& at);

// Prefactor alone (p(4-p)/(4(1-p)) + L^2); the delta-mass degenerates exactly
// where it is 0.
double h_mollified_prefactor(const DriftParams& params);

// Closed form of the bare infinity-Laplacian applied to v^N w^T:
//   128 i L (N^2+T^2) rho^2 x3 v^{2N+T-2} w^{N+2T-2}
// (the drift term cancels it, so the full operator vanishes).
Complex h_closed_infinity_laplacian(double L, const HPoint& at);

} // namespace driftlap
