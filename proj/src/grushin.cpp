#include "driftlap/grushin.hpp"

#include <cmath>

namespace driftlap {

namespace {

const Complex kI{0.0, 1.0};

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

void require_operator_params(const DriftParams& params) {
    if (!std::isfinite(params.p) || !(params.p > 1.0) || !std::isfinite(params.L))
        throw EvalError(ErrorKind::ConfigInvalid, "operator needs finite p > 1 and finite L");
}

void require_off_line(const GPoint& at, const GrushinShape& shape) {
    if (std::abs(at.y1 - shape.a) < kDegenerateLineFloor)
        throw EvalError(ErrorKind::DegenerateLine,
                        "point within the hard floor of the degenerate line y1 = a");
}

} // namespace

void g_validate_shape(const GrushinShape& shape) {
    if (!std::isfinite(shape.a) || !std::isfinite(shape.b) || !std::isfinite(shape.c))
        throw EvalError(ErrorKind::ConfigInvalid, "shape coordinates must be finite");
    if (shape.c == 0.0)
        throw EvalError(ErrorKind::ConfigInvalid, "shape needs c != 0");
    if (shape.n < 1)
        throw EvalError(ErrorKind::ConfigInvalid, "shape needs n >= 1");
}

double g_exclusion_bound(double p, int n) {
    return (static_cast<double>(n) + 2.0 - p) / (static_cast<double>(n) * (1.0 - p));
}

bool g_params_valid(const DriftParams& params, int n) {
    if (!std::isfinite(params.p) || !(params.p > 1.0) || !std::isfinite(params.L) || n < 1)
        return false;
    double bound = g_exclusion_bound(params.p, n);
    return std::abs(params.L - bound) > kExclusionRadius
        && std::abs(params.L + bound) > kExclusionRadius;
}

void g_require_valid(const DriftParams& params, int n) {
    if (n < 1)
        throw EvalError(ErrorKind::ConfigInvalid, "n must be >= 1");
    if (!std::isfinite(params.p) || !(params.p > 1.0) || !std::isfinite(params.L))
        throw EvalError(ErrorKind::ConfigInvalid, "parameters need finite p > 1 and finite L");
    double bound = g_exclusion_bound(params.p, n);
    if (std::abs(params.L - bound) <= kExclusionRadius
        || std::abs(params.L + bound) <= kExclusionRadius)
        throw EvalError(ErrorKind::ExcludedParameter,
                        "L within exclusion radius of +-(n+2-p)/(n(1-p))");
}

GExponents g_exponents(const DriftParams& params, int n) {
    g_require_valid(params, n);
    double en = n;
    double one_m_p = 1.0 - params.p;
    double base = en + 2.0 - params.p;
    double drift = params.L * en * one_m_p;
    double denom = 2.0 * (en + 1.0) * one_m_p;
    return {(base - drift) / denom, (base + drift) / denom};
}

GExponents g_infinity_exponents(double L, int n) {
    if (!std::isfinite(L))
        throw EvalError(ErrorKind::ConfigInvalid, "drift parameter must be finite");
    if (n < 1)
        throw EvalError(ErrorKind::ConfigInvalid, "n must be >= 1");
    double en = n;
    return {(1.0 - en * L) / (2.0 * (en + 1.0)), (1.0 + en * L) / (2.0 * (en + 1.0))};
}

void g_validate(const GCandidate& cand) {
    g_validate_shape(cand.shape);
    const DriftParams& pr = cand.params;
    int n = cand.shape.n;
    if (cand.kind != GKind::Mollified && cand.epsilon != 0.0)
        throw EvalError(ErrorKind::ConfigInvalid, "epsilon > 0 is only for the mollified kind");
    switch (cand.kind) {
        case GKind::PowerPL:
            g_require_valid(pr, n);
            break;
        case GKind::Mollified:
            if (!(cand.epsilon > 0.0) || !std::isfinite(cand.epsilon))
                throw EvalError(ErrorKind::ConfigInvalid, "mollified kind needs epsilon > 0");
            g_require_valid(pr, n);
            break;
        case GKind::BGG2:
            if (pr.p != 2.0)
                throw EvalError(ErrorKind::ConfigInvalid, "the p = 2 family requires p == 2");
            if (!std::isfinite(pr.L))
                throw EvalError(ErrorKind::ConfigInvalid, "drift parameter must be finite");
            if (std::abs(pr.L - 1.0) <= kExclusionRadius
                || std::abs(pr.L + 1.0) <= kExclusionRadius)
                throw EvalError(ErrorKind::ExcludedParameter,
                                "L = +-1 degenerates the p = 2 family");
            break;
        case GKind::LegacyPsi:
            if (pr.L != 0.0)
                throw EvalError(ErrorKind::ConfigInvalid, "the drift-free family requires L == 0");
            if (!std::isfinite(pr.p) || !(pr.p > 1.0))
                throw EvalError(ErrorKind::ConfigInvalid, "parameters need finite p > 1");
            break;
        case GKind::Infinity:
            if (!std::isfinite(pr.L))
                throw EvalError(ErrorKind::ConfigInvalid, "drift parameter must be finite");
            break;
    }
}

bool g_is_log_branch(const GCandidate& cand) {
    return cand.kind == GKind::LegacyPsi
        && cand.params.p == static_cast<double>(cand.shape.n) + 2.0;
}

GExponents g_candidate_exponents(const GCandidate& cand) {
    g_validate(cand);
    int n = cand.shape.n;
    double en = n;
    switch (cand.kind) {
        case GKind::PowerPL:
        case GKind::Mollified:
            return g_exponents(cand.params, n);
        case GKind::BGG2: {
            double L = cand.params.L;
            return {-(en * (1.0 + L)) / (2.0 * en + 2.0),
                    -(en * (1.0 - L)) / (2.0 * en + 2.0)};
        }
        case GKind::LegacyPsi: {
            if (g_is_log_branch(cand))
                throw EvalError(ErrorKind::ConfigInvalid,
                                "the logarithmic branch has no power exponents");
            double p = cand.params.p;
            double tp = (en + 2.0 - p) / ((2.0 * en + 2.0) * (1.0 - p));
            return {tp, tp};
        }
        case GKind::Infinity:
            return g_infinity_exponents(cand.params.L, n);
    }
    throw EvalError(ErrorKind::ConfigInvalid, "unknown candidate kind");
}

Complex g_base_g(const GPoint& at, const GrushinShape& shape, double epsilon) {
    double s = at.y1 - shape.a;
    double t = at.y2 - shape.b;
    double np1 = static_cast<double>(shape.n) + 1.0;
    return {shape.c * ipow(s, shape.n + 1) + epsilon * epsilon, np1 * t};
}

Complex g_frame_apply(int field_index, const Jet2& f, const GPoint& at, const GrushinShape& shape) {
    switch (field_index) {
        case 1: return f.grad(0);
        case 2: return shape.c * ipow(at.y1 - shape.a, shape.n) * f.grad(1);
        default:
            throw EvalError(ErrorKind::ConfigInvalid, "frame field index must be 1 or 2");
    }
}

Jet2 f_eval(const GCandidate& cand, const GPoint& at) {
    g_validate(cand);
    const GrushinShape& sh = cand.shape;
    double pt[2] = {at.y1, at.y2};
    Jet2 s = jet_seed(pt, 2, 0) - Complex{sh.a, 0.0};
    Jet2 t = jet_seed(pt, 2, 1) - Complex{sh.b, 0.0};
    double e2 = cand.epsilon * cand.epsilon;
    double np1 = static_cast<double>(sh.n) + 1.0;
    Jet2 g = Complex{sh.c, 0.0} * jet_ipow(s, sh.n + 1) + Complex{e2, 0.0}
           + Complex{0.0, np1} * t;
    if (g.value() == Complex{0.0, 0.0})
        throw EvalError(ErrorKind::SingularPoint, "candidate base vanishes at the point");
    Jet2 h = conj(g);
    if (g_is_log_branch(cand))
        return jet_log(g * h);
    GExponents e = g_candidate_exponents(cand);
    if (cand.kind == GKind::LegacyPsi)
        return jet_pow(g * h, Complex{e.alpha, 0.0});
    return jet_pow(g, Complex{e.alpha, 0.0}) * jet_pow(h, Complex{e.beta, 0.0});
}

Complex f_value(const GCandidate& cand, const GPoint& at) {
    g_validate(cand);
    Complex g = g_base_g(at, cand.shape, cand.epsilon);
    if (g == Complex{0.0, 0.0})
        throw EvalError(ErrorKind::SingularPoint, "candidate base vanishes at the point");
    Complex h = std::conj(g);
    if (g_is_log_branch(cand))
        return std::log(g * h);
    GExponents e = g_candidate_exponents(cand);
    if (cand.kind == GKind::LegacyPsi)
        return branch_pow(g * h, Complex{e.alpha, 0.0});
    return branch_pow(g, Complex{e.alpha, 0.0}) * branch_pow(h, Complex{e.beta, 0.0});
}

GHorizontalData g_assemble(const Jet2& fjet, const GPoint& at, const GrushinShape& shape) {
    double s = at.y1 - shape.a;
    double csn = shape.c * ipow(s, shape.n);
    double csn1 = shape.c * static_cast<double>(shape.n) * ipow(s, shape.n - 1);

    GHorizontalData d;
    d.f = fjet.value();
    d.d2f = fjet.grad(1);
    d.y1f = fjet.grad(0);
    d.y2f = csn * fjet.grad(1);

    // Euclidean partials of the frame derivatives:
    //   dj(Y1 f) = H(0,j)
    //   dj(Y2 f) = [j==0] c n s^{n-1} g(1) + c s^n H(1,j)
    Complex dy1f[2] = {fjet.hess(0, 0), fjet.hess(0, 1)};
    Complex dy2f[2] = {csn1 * fjet.grad(1) + csn * fjet.hess(1, 0),
                       csn * fjet.hess(1, 1)};

    d.y11f = dy1f[0];
    d.y22f = csn * dy2f[1];

    d.q = d.y1f * std::conj(d.y1f) + d.y2f * std::conj(d.y2f);
    Complex dq[2];
    for (int j = 0; j < 2; ++j)
        dq[j] = dy1f[j] * std::conj(d.y1f) + d.y1f * std::conj(dy1f[j])
              + dy2f[j] * std::conj(d.y2f) + d.y2f * std::conj(dy2f[j]);
    d.d2q = dq[1];
    d.y1q = dq[0];
    d.y2q = csn * dq[1];
    return d;
}

GHorizontalData g_horizontal(const GCandidate& cand, const GPoint& at) {
    return g_assemble(f_eval(cand, at), at, cand.shape);
}

Complex g_norm_grad_sq(const GCandidate& cand, const GPoint& at) {
    g_validate(cand);
    const GrushinShape& sh = cand.shape;
    Complex g = g_base_g(at, sh, cand.epsilon);
    if (g == Complex{0.0, 0.0})
        throw EvalError(ErrorKind::SingularPoint, "candidate base vanishes at the point");
    Complex h = std::conj(g);
    double np1 = static_cast<double>(sh.n) + 1.0;
    double s2n = ipow(at.y1 - sh.a, 2 * sh.n);
    double common = sh.c * sh.c * np1 * np1 * s2n;
    if (g_is_log_branch(cand))
        return 4.0 * common / (g * h);
    GExponents e = g_candidate_exponents(cand);
    Complex st{e.alpha + e.beta - 1.0, 0.0};
    return 2.0 * common * (e.alpha * e.alpha + e.beta * e.beta)
         * branch_pow(g, st) * branch_pow(h, st);
}

double GOperatorTerms::rel_residual() const {
    double m = std::max({std::abs(gradient_term), std::abs(laplacian_1),
                         std::abs(laplacian_2), std::abs(drift_term), 1e-300});
    return std::abs(reduced_sum()) / m;
}

GOperatorTerms g_drift_terms(const GCandidate& cand, const DriftParams& params, const GPoint& at) {
    require_operator_params(params);
    g_validate_shape(cand.shape);
    require_off_line(at, cand.shape);
    GHorizontalData d = g_horizontal(cand, at);
    if (d.q == Complex{0.0, 0.0})
        throw EvalError(ErrorKind::DegenerateGradient,
                        "horizontal gradient vanishes; cannot form the p-2 power");
    const GrushinShape& sh = cand.shape;
    double bracket = sh.c * static_cast<double>(sh.n) * ipow(at.y1 - sh.a, sh.n - 1);
    double pm2h = 0.5 * (params.p - 2.0);
    GOperatorTerms t;
    t.gradient_term = pm2h * (d.y1q * d.y1f + d.y2q * d.y2f);
    t.laplacian_1 = d.q * d.y11f;
    t.laplacian_2 = d.q * d.y22f;
    t.drift_term = kI * params.L * bracket * (pm2h * d.d2q * d.f + d.q * d.d2f);
    t.scale = branch_pow(d.q, Complex{0.5 * (params.p - 4.0), 0.0});
    return t;
}

Complex g_drift_op(const GCandidate& cand, const DriftParams& params, const GPoint& at) {
    return g_drift_terms(cand, params, at).value();
}

double GInfinityTerms::rel_residual() const {
    double m = std::max({std::abs(term1), std::abs(term2), std::abs(drift_term), 1e-300});
    return std::abs(value()) / m;
}

GInfinityTerms g_infinity_terms(const GCandidate& cand, double L, const GPoint& at) {
    if (!std::isfinite(L))
        throw EvalError(ErrorKind::ConfigInvalid, "drift parameter must be finite");
    g_validate_shape(cand.shape);
    require_off_line(at, cand.shape);
    GHorizontalData d = g_horizontal(cand, at);
    const GrushinShape& sh = cand.shape;
    double bracket = sh.c * static_cast<double>(sh.n) * ipow(at.y1 - sh.a, sh.n - 1);
    GInfinityTerms t;
    t.term1 = d.y1q * d.y1f;
    t.term2 = d.y2q * d.y2f;
    t.drift_term = kI * L * bracket * d.d2q * d.f;
    return t;
}

Complex g_infinity_op(const GCandidate& cand, double L, const GPoint& at) {
    return g_infinity_terms(cand, L, at).value();
}

GClosedForms g_closed(const GCandidate& cand, const GPoint& at) {
    GExponents e = g_candidate_exponents(cand);
    const GrushinShape& sh = cand.shape;
    double s = at.y1 - sh.a;
    double t = at.y2 - sh.b;
    double c = sh.c;
    double en = sh.n;
    double np1 = en + 1.0;
    double e2 = cand.epsilon * cand.epsilon;
    Complex g = g_base_g(at, sh, cand.epsilon);
    if (g == Complex{0.0, 0.0})
        throw EvalError(ErrorKind::SingularPoint, "candidate base vanishes at the point");
    Complex h = std::conj(g);
    Complex alpha{e.alpha, 0.0}, beta{e.beta, 0.0};
    Complex sum = alpha * h + beta * g;
    Complex dif = alpha * h - beta * g;
    double coef = e.alpha * e.alpha + e.beta * e.beta;
    double st = e.alpha + e.beta;

    Complex f11 = branch_pow(g, alpha - 1.0) * branch_pow(h, beta - 1.0);
    Complex fq1 = branch_pow(g, Complex{st - 1.0, 0.0}) * branch_pow(h, Complex{st - 1.0, 0.0});
    Complex fq2 = branch_pow(g, Complex{st - 2.0, 0.0}) * branch_pow(h, Complex{st - 2.0, 0.0});
    Complex f22 = branch_pow(g, alpha - 2.0) * branch_pow(h, beta - 2.0);

    GClosedForms r;
    r.y1f = c * np1 * ipow(s, sh.n) * f11 * sum;
    r.y2f = kI * c * np1 * ipow(s, sh.n) * f11 * dif;
    r.q = 2.0 * c * c * np1 * np1 * coef * ipow(s, 2 * sh.n) * fq1;
    r.y1q = 4.0 * c * c * np1 * np1 * coef * ipow(s, 2 * sh.n - 1) * fq2
          * (en * g * h + c * np1 * (st - 1.0) * ipow(s, sh.n + 1)
                          * (c * ipow(s, sh.n + 1) + e2));
    r.y2q = 4.0 * c * c * c * np1 * np1 * np1 * np1 * coef * (st - 1.0)
          * ipow(s, 3 * sh.n) * t * fq2;
    r.y11f = c * np1 * ipow(s, sh.n - 1) * f22
           * (en * g * h * sum
              + c * np1 * ipow(s, sh.n + 1)
                * (sum * ((alpha - 1.0) * h + (beta - 1.0) * g) + g * h * st));
    r.y22f = -c * c * np1 * np1 * ipow(s, 2 * sh.n) * f22
           * (dif * ((alpha - 1.0) * h - (beta - 1.0) * g) - g * h * st);
    return r;
}

double g_mollified_prefactor(const DriftParams& params, int n) {
    double en = n;
    return (en + 2.0 - params.p) - en * params.L * params.L;
}

Complex g_mollified_residual_closed(const GrushinShape& shape, const DriftParams& params,
                                    double epsilon, const GPoint& at) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw EvalError(ErrorKind::ConfigInvalid, "mollified residual needs epsilon > 0");
    g_validate_shape(shape);
    require_operator_params(params);
    // A vanishing prefactor makes the residual identically zero; those (p, L)
    // sit on the exclusion locus where the exponents are refused, so answer
    // before computing them.
    if (g_mollified_prefactor(params, shape.n) == 0.0)
        return Complex{0.0, 0.0};
    GExponents e = g_exponents(params, shape.n);
    double p = params.p;
    double en = shape.n;
    double np1 = en + 1.0;
    double s = at.y1 - shape.a;
    Complex g = g_base_g(at, shape, epsilon);
    Complex h = std::conj(g);
    double coef = -std::pow(2.0, 0.5 * (p - 2.0)) * epsilon * epsilon
                * g_mollified_prefactor(params, shape.n)
                * shape.c * std::pow(std::abs(shape.c), p - 2.0)
                * en * std::pow(np1, p - 2.0)
                * std::pow(e.alpha * e.alpha + e.beta * e.beta, 0.5 * (p - 2.0))
                * ipow(s, shape.n - 1) * std::pow(std::abs(s), en * (p - 2.0));
    Complex eg{0.5 * (e.alpha * p + e.beta * (p - 2.0) - p), 0.0};
    Complex eh{0.5 * (e.alpha * (p - 2.0) + e.beta * p - p), 0.0};
    return coef * branch_pow(g, eg) * branch_pow(h, eh);
}

Complex g_closed_infinity_laplacian(const GrushinShape& shape, double L, const GPoint& at) {
    g_validate_shape(shape);
    GExponents e = g_infinity_exponents(L, shape.n);
    Complex g = g_base_g(at, shape, 0.0);
    if (g == Complex{0.0, 0.0})
        throw EvalError(ErrorKind::SingularPoint, "evaluation at the singular point");
    Complex h = std::conj(g);
    double en = shape.n;
    double np1 = en + 1.0;
    double s = at.y1 - shape.a;
    double t = at.y2 - shape.b;
    double coef = 4.0 * L * shape.c * shape.c * shape.c * np1 * np1 * np1 * en * en
                * (e.alpha * e.alpha + e.beta * e.beta) * ipow(s, 3 * shape.n - 1) * t;
    return kI * coef
         * branch_pow(g, Complex{2.0 * e.alpha + e.beta - 2.0, 0.0})
         * branch_pow(h, Complex{e.alpha + 2.0 * e.beta - 2.0, 0.0});
}

} // namespace driftlap
