#pragma once

#include "driftlap/heisenberg.hpp" // DriftParams, kExclusionRadius
#include "driftlap/jet.hpp"

namespace driftlap {

// ---------------------------------------------------------------------------
// Points, shapes, exponents
// ---------------------------------------------------------------------------

struct GPoint {
    double y1 = 0.0, y2 = 0.0;
};

// The plane's frame is Y1 = d/dy1, Y2 = c (y1-a)^n d/dy2; the only bracket is
// [Y1,Y2] = c n (y1-a)^{n-1} d/dy2, and the frame degenerates on y1 = a.
struct GrushinShape {
    double a = 0.0;
    double b = 0.0;
    double c = 1.0; // != 0
    int n = 1;      // >= 1
};

void g_validate_shape(const GrushinShape& shape);

// The family degenerates when L = +-(n+2-p)/(n(1-p)) (one exponent becomes 0).
double g_exclusion_bound(double p, int n);
bool g_params_valid(const DriftParams& params, int n);
void g_require_valid(const DriftParams& params, int n);

struct GExponents {
    double alpha = 0.0, beta = 0.0;
};

// alpha = (n+2-p-Ln(1-p))/(2(n+1)(1-p)), beta = (n+2-p+Ln(1-p))/(2(n+1)(1-p)).
// Identities: alpha + beta = (n+2-p)/((n+1)(1-p)), beta - alpha = Ln/(n+1).
GExponents g_exponents(const DriftParams& params, int n);

// Formal p -> infinity limit: A = (1-nL)/(2(n+1)) on g, B = (1+nL)/(2(n+1))
// on h (returned as alpha = A, beta = B).  A + B = 1/(n+1).
GExponents g_infinity_exponents(double L, int n);

// ---------------------------------------------------------------------------
// Candidates
// ---------------------------------------------------------------------------

enum class GKind {
    PowerPL,   // g^alpha h^beta for general (p, L)
    LegacyPsi, // drift-free family (gh)^{tau_p}; log(gh) branch at p = n+2
    BGG2,      // p = 2 family with exponents -n(1+L)/(2n+2), -n(1-L)/(2n+2)
    Infinity,  // g^A h^B (p ignored)
    Mollified, // g_eps^alpha h_eps^beta with eps > 0
};

struct GCandidate {
    GKind kind = GKind::PowerPL;
    GrushinShape shape{};
    DriftParams params{};
    double epsilon = 0.0; // > 0 only for Mollified
};

void g_validate(const GCandidate& cand);
GExponents g_candidate_exponents(const GCandidate& cand);
bool g_is_log_branch(const GCandidate& cand);

// The complex base g = c (y1-a)^{n+1} + eps^2 + i (n+1)(y2-b); h = conj(g).
// (The eps^2 shift sits on the same (n+1)-power term it regularizes, so
// eps -> 0 recovers the unmollified base.)
Complex g_base_g(const GPoint& at, const GrushinShape& shape, double epsilon);

// ---------------------------------------------------------------------------
// Frame and candidate evaluation
// ---------------------------------------------------------------------------

// Y1 f = d1 f; Y2 f = c (y1-a)^n d2 f.
Complex g_frame_apply(int field_index, const Jet2& f, const GPoint& at, const GrushinShape& shape);

// Full second-order jet of the candidate (throws SingularPoint at (a,b) with
// eps = 0; BranchGuard when the base approaches the negative real axis).
Jet2 f_eval(const GCandidate& cand, const GPoint& at);

// Value-only evaluation through plain complex arithmetic.
Complex f_value(const GCandidate& cand, const GPoint& at);

// ---------------------------------------------------------------------------
// Horizontal calculus derived from a jet
// ---------------------------------------------------------------------------

struct GHorizontalData {
    Complex f{};            // value
    Complex d2f{};          // d/dy2 of f
    Complex y1f{}, y2f{};   // Y1 f, Y2 f
    Complex y11f{}, y22f{}; // Y1 Y1 f, Y2 Y2 f
    Complex q{};            // Y1 f conj(Y1 f) + Y2 f conj(Y2 f)
    Complex d2q{};          // d/dy2 of q
    Complex y1q{}, y2q{};   // Y1 q, Y2 q
};

GHorizontalData g_assemble(const Jet2& fjet, const GPoint& at, const GrushinShape& shape);
GHorizontalData g_horizontal(const GCandidate& cand, const GPoint& at);

// Closed form of q: 2 c^2 (n+1)^2 (alpha^2+beta^2) (y1-a)^{2n} (gh)^{alpha+beta-1}
// for power candidates; 4 c^2 (n+1)^2 (y1-a)^{2n} / (gh) on the log branch.
Complex g_norm_grad_sq(const GCandidate& cand, const GPoint& at);

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

// Same factoring as the Heisenberg drift operator:
// value = q^{(p-4)/2}(A+B1+B2+D),
//   A  = (p-2)/2 (Y1 q Y1 f + Y2 q Y2 f)
//   B1 = q Y1 Y1 f,  B2 = q Y2 Y2 f
//   D  = iL c n (y1-a)^{n-1} ((p-2)/2 d2 q * f + q d2 f)
// with the second-order part kept split so the p = 2, L = 0 cancellation
// (entirely between B1 and B2) is judged against the right magnitude.
struct GOperatorTerms {
    Complex gradient_term{};
    Complex laplacian_1{}; // q Y1 Y1 f
    Complex laplacian_2{}; // q Y2 Y2 f
    Complex drift_term{};
    Complex scale{};

    Complex laplacian_term() const { return laplacian_1 + laplacian_2; }
    Complex reduced_sum() const { return gradient_term + laplacian_1 + laplacian_2 + drift_term; }
    Complex value() const { return scale * reduced_sum(); }
    double rel_residual() const;
};

// Hard floor on the distance to the degenerate line inside the operators.
inline constexpr double kDegenerateLineFloor = 1e-6;

GOperatorTerms g_drift_terms(const GCandidate& cand, const DriftParams& params, const GPoint& at);
Complex g_drift_op(const GCandidate& cand, const DriftParams& params, const GPoint& at);

struct GInfinityTerms {
    Complex term1{}, term2{}, drift_term{};

    Complex value() const { return term1 + term2 + drift_term; }
    double rel_residual() const;
};

GInfinityTerms g_infinity_terms(const GCandidate& cand, double L, const GPoint& at);
Complex g_infinity_op(const GCandidate& cand, double L, const GPoint& at);

// ---------------------------------------------------------------------------
// Closed forms
// ---------------------------------------------------------------------------

// Literal catalogue for power candidates, with s = y1-a, t = y2-b:
//   Y1 f  = c (n+1) s^n g^{alpha-1} h^{beta-1} (alpha h + beta g)
//   Y2 f  = i c (n+1) s^n g^{alpha-1} h^{beta-1} (alpha h - beta g)
//   q     = 2 c^2 (n+1)^2 (alpha^2+beta^2) s^{2n} (gh)^{alpha+beta-1}
//   Y1 q  = 4 c^2 (n+1)^2 (alpha^2+beta^2) s^{2n-1} (gh)^{alpha+beta-2}
//             (n g h + c (n+1)(alpha+beta-1) s^{n+1} (c s^{n+1} + eps^2))
//   Y2 q  = 4 c^3 (n+1)^4 (alpha^2+beta^2)(alpha+beta-1) s^{3n} t (gh)^{alpha+beta-2}
//   Y1Y1f = c (n+1) s^{n-1} g^{alpha-2} h^{beta-2}
//             [ n g h (alpha h + beta g)
//               + c (n+1) s^{n+1} ((alpha h + beta g)((alpha-1) h + (beta-1) g)
//                                 + g h (alpha+beta)) ]
//   Y2Y2f = -c^2 (n+1)^2 s^{2n} g^{alpha-2} h^{beta-2}
//             [ (alpha h - beta g)((alpha-1) h - (beta-1) g) - g h (alpha+beta) ]
struct GClosedForms {
    Complex y1f{}, y2f{};
    Complex q{};
    Complex y1q{}, y2q{};
    Complex y11f{}, y22f{};
};

GClosedForms g_closed(const GCandidate& cand, const GPoint& at);

// Closed form of the mollified drift-operator residual:
//   -2^{(p-2)/2} eps^2 ((n+2-p) - nL^2) c|c|^{p-2} n (n+1)^{p-2}
//     (alpha^2+beta^2)^{(p-2)/2} s^{n-1}|s|^{n(p-2)}
//     g^{(alpha p + beta(p-2) - p)/2} h^{(alpha(p-2) + beta p - p)/2}
// (the split factors c|c|^{p-2} and s^{n-1}|s|^{n(p-2)} agree with the printed
// c^{p-1}, s^{n(p-1)-1} on c > 0, s > 0 and extend honestly to the other sign,
// where the integer-power parts come from polynomial derivatives and the
// absolute-value parts from the real nonnegative q^{(p-2)/2}).
Complex g_mollified_residual_closed(const GrushinShape& shape, const DriftParams& params,
                                    double epsilon, const GPoint& at);

// Prefactor (n+2-p) - nL^2; zero exactly where the delta-mass degenerates.
double g_mollified_prefactor(const DriftParams& params, int n);

// Closed form of the bare infinity-Laplacian applied to g^A h^B:
//   4 i L c^3 (n+1)^3 n^2 (A^2+B^2) s^{3n-1} t g^{2A+B-2} h^{A+2B-2}.
Complex g_closed_infinity_laplacian(const GrushinShape& shape, double L, const GPoint& at);

} // namespace driftlap
