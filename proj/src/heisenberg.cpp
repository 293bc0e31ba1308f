#include "driftlap/heisenberg.hpp"

#include <cmath>

namespace driftlap {

namespace {

const Complex kI{0.0, 1.0};

void require_operator_params(const DriftParams& params) {
    if (!std::isfinite(params.p) || !(params.p > 1.0) || !std::isfinite(params.L))
        throw EvalError(ErrorKind::ConfigInvalid, "operator needs finite p > 1 and finite L");
}

} // namespace

HPoint group_mul(const HPoint& a, const HPoint& b) {
    return {a.x1 + b.x1, a.x2 + b.x2,
            a.x3 + b.x3 + 0.5 * (a.x1 * b.x2 - a.x2 * b.x1)};
}

double h_exclusion_bound(double p) {
    return (4.0 - p) / (2.0 * (1.0 - p));
}

bool h_params_valid(const DriftParams& params) {
    if (!std::isfinite(params.p) || !(params.p > 1.0) || !std::isfinite(params.L))
        return false;
    double bound = h_exclusion_bound(params.p);
    return std::abs(params.L - bound) > kExclusionRadius
        && std::abs(params.L + bound) > kExclusionRadius;
}

void h_require_valid(const DriftParams& params) {
    if (!std::isfinite(params.p) || !(params.p > 1.0) || !std::isfinite(params.L))
        throw EvalError(ErrorKind::ConfigInvalid, "parameters need finite p > 1 and finite L");
    double bound = h_exclusion_bound(params.p);
    if (std::abs(params.L - bound) <= kExclusionRadius
        || std::abs(params.L + bound) <= kExclusionRadius)
        throw EvalError(ErrorKind::ExcludedParameter,
                        "L within exclusion radius of +-(4-p)/(2(1-p))");
}

HExponents h_exponents(const DriftParams& params) {
    h_require_valid(params);
    // Expression order chosen so the p = 2 and L = 0 reductions are bit-exact
    // against the directly reduced formulas.
    double one_m_p = 1.0 - params.p;
    double base = 4.0 - params.p;
    double drift = 2.0 * params.L * one_m_p;
    double denom = 4.0 * one_m_p;
    return {(base + drift) / denom, (base - drift) / denom};
}

HExponents h_infinity_exponents(double L) {
    if (!std::isfinite(L))
        throw EvalError(ErrorKind::ConfigInvalid, "drift parameter must be finite");
    return {(1.0 + 2.0 * L) / 4.0, (1.0 - 2.0 * L) / 4.0};
}

void h_validate(const HCandidate& cand) {
    const DriftParams& pr = cand.params;
    if (cand.kind != HKind::Mollified && cand.epsilon != 0.0)
        throw EvalError(ErrorKind::ConfigInvalid, "epsilon > 0 is only for the mollified kind");
    switch (cand.kind) {
        case HKind::PowerPL:
            h_require_valid(pr);
            break;
        case HKind::Mollified:
            if (!(cand.epsilon > 0.0) || !std::isfinite(cand.epsilon))
                throw EvalError(ErrorKind::ConfigInvalid, "mollified kind needs epsilon > 0");
            h_require_valid(pr);
            break;
        case HKind::BGG2:
            if (pr.p != 2.0)
                throw EvalError(ErrorKind::ConfigInvalid, "the p = 2 family requires p == 2");
            if (!std::isfinite(pr.L))
                throw EvalError(ErrorKind::ConfigInvalid, "drift parameter must be finite");
            if (std::abs(pr.L - 1.0) <= kExclusionRadius
                || std::abs(pr.L + 1.0) <= kExclusionRadius)
                throw EvalError(ErrorKind::ExcludedParameter,
                                "L = +-1 degenerates the p = 2 family");
            break;
        case HKind::LegacyZeta:
            if (pr.L != 0.0)
                throw EvalError(ErrorKind::ConfigInvalid, "the drift-free family requires L == 0");
            if (!std::isfinite(pr.p) || !(pr.p > 1.0))
                throw EvalError(ErrorKind::ConfigInvalid, "parameters need finite p > 1");
            break;
        case HKind::Infinity:
            if (!std::isfinite(pr.L))
                throw EvalError(ErrorKind::ConfigInvalid, "drift parameter must be finite");
            break;
    }
}

bool h_is_log_branch(const HCandidate& cand) {
    return cand.kind == HKind::LegacyZeta && cand.params.p == 4.0;
}

HExponents h_candidate_exponents(const HCandidate& cand) {
    h_validate(cand);
    switch (cand.kind) {
        case HKind::PowerPL:
        case HKind::Mollified:
            return h_exponents(cand.params);
        case HKind::BGG2: {
            double L = cand.params.L;
            return {(L - 1.0) / 2.0, -((L + 1.0) / 2.0)};
        }
        case HKind::LegacyZeta: {
            if (h_is_log_branch(cand))
                throw EvalError(ErrorKind::ConfigInvalid,
                                "the logarithmic branch has no power exponents");
            double p = cand.params.p;
            double ep = (4.0 - p) / (4.0 * (1.0 - p));
            return {ep, ep};
        }
        case HKind::Infinity:
            return h_infinity_exponents(cand.params.L);
    }
    throw EvalError(ErrorKind::ConfigInvalid, "unknown candidate kind");
}

Complex h_base_v(const HPoint& at, double epsilon) {
    return {at.x1 * at.x1 + at.x2 * at.x2 + epsilon * epsilon, -4.0 * at.x3};
}

Complex frame_apply(int field_index, const Jet2& f, const HPoint& at) {
    switch (field_index) {
        case 1: return f.grad(0) - 0.5 * at.x2 * f.grad(2);
        case 2: return f.grad(1) + 0.5 * at.x1 * f.grad(2);
        case 3: return f.grad(2);
        default:
            throw EvalError(ErrorKind::ConfigInvalid, "frame field index must be 1, 2 or 3");
    }
}

Jet2 u_eval(const HCandidate& cand, const HPoint& at) {
    h_validate(cand);
    double pt[3] = {at.x1, at.x2, at.x3};
    Jet2 s1 = jet_seed(pt, 3, 0);
    Jet2 s2 = jet_seed(pt, 3, 1);
    Jet2 s3 = jet_seed(pt, 3, 2);
    double e2 = cand.epsilon * cand.epsilon;
    Jet2 v = s1 * s1 + s2 * s2 + Complex{e2, 0.0} - Complex{0.0, 4.0} * s3;
    if (v.value() == Complex{0.0, 0.0})
        throw EvalError(ErrorKind::SingularPoint, "candidate base vanishes at the point");
    Jet2 w = conj(v);
    if (h_is_log_branch(cand))
        return jet_log(v * w);
    HExponents e = h_candidate_exponents(cand);
    if (cand.kind == HKind::LegacyZeta)
        return jet_pow(v * w, Complex{e.eta, 0.0});
    return jet_pow(v, Complex{e.eta, 0.0}) * jet_pow(w, Complex{e.tau, 0.0});
}

Complex u_value(const HCandidate& cand, const HPoint& at) {
    h_validate(cand);
    Complex v = h_base_v(at, cand.epsilon);
    if (v == Complex{0.0, 0.0})
        throw EvalError(ErrorKind::SingularPoint, "candidate base vanishes at the point");
    Complex w = std::conj(v);
    if (h_is_log_branch(cand))
        return std::log(v * w);
    HExponents e = h_candidate_exponents(cand);
    if (cand.kind == HKind::LegacyZeta)
        return branch_pow(v * w, Complex{e.eta, 0.0});
    return branch_pow(v, Complex{e.eta, 0.0}) * branch_pow(w, Complex{e.tau, 0.0});
}

HHorizontalData h_assemble(const Jet2& ujet, const HPoint& at) {
    HHorizontalData d;
    d.u = ujet.value();
    d.d3u = ujet.grad(2);
    d.x1u = frame_apply(1, ujet, at);
    d.x2u = frame_apply(2, ujet, at);

    // Euclidean partials of X1 u and X2 u (product rule on the frame coefficients):
    //   dj(X1 u) = H(0,j) - [j==1] g(2)/2 - (x2/2) H(2,j)
    //   dj(X2 u) = H(1,j) + [j==0] g(2)/2 + (x1/2) H(2,j)
    Complex dx1u[3], dx2u[3];
    for (int j = 0; j < 3; ++j) {
        dx1u[j] = ujet.hess(0, j) - 0.5 * at.x2 * ujet.hess(2, j);
        dx2u[j] = ujet.hess(1, j) + 0.5 * at.x1 * ujet.hess(2, j);
    }
    dx1u[1] -= 0.5 * ujet.grad(2);
    dx2u[0] += 0.5 * ujet.grad(2);

    d.x11u = dx1u[0] - 0.5 * at.x2 * dx1u[2];
    d.x22u = dx2u[1] + 0.5 * at.x1 * dx2u[2];

    d.q = d.x1u * std::conj(d.x1u) + d.x2u * std::conj(d.x2u);
    Complex dq[3];
    for (int j = 0; j < 3; ++j)
        dq[j] = dx1u[j] * std::conj(d.x1u) + d.x1u * std::conj(dx1u[j])
              + dx2u[j] * std::conj(d.x2u) + d.x2u * std::conj(dx2u[j]);
    d.d3q = dq[2];
    d.x1q = dq[0] - 0.5 * at.x2 * dq[2];
    d.x2q = dq[1] + 0.5 * at.x1 * dq[2];
    return d;
}

HHorizontalData h_horizontal(const HCandidate& cand, const HPoint& at) {
    return h_assemble(u_eval(cand, at), at);
}

Complex h_norm_grad_sq(const HCandidate& cand, const HPoint& at) {
    h_validate(cand);
    Complex v = h_base_v(at, cand.epsilon);
    if (v == Complex{0.0, 0.0})
        throw EvalError(ErrorKind::SingularPoint, "candidate base vanishes at the point");
    Complex w = std::conj(v);
    double rho2 = at.x1 * at.x1 + at.x2 * at.x2;
    if (h_is_log_branch(cand))
        return 16.0 * rho2 / (v * w);
    HExponents e = h_candidate_exponents(cand);
    Complex st{e.eta + e.tau - 1.0, 0.0};
    return 8.0 * (e.eta * e.eta + e.tau * e.tau)
         * branch_pow(v, st) * branch_pow(w, st) * rho2;
}

double HOperatorTerms::rel_residual() const {
    double m = std::max({std::abs(gradient_term), std::abs(laplacian_1),
                         std::abs(laplacian_2), std::abs(drift_term), 1e-300});
    return std::abs(reduced_sum()) / m;
}

HOperatorTerms h_drift_terms(const HCandidate& cand, const DriftParams& params, const HPoint& at) {
    require_operator_params(params);
    HHorizontalData d = h_horizontal(cand, at);
    if (d.q == Complex{0.0, 0.0})
        throw EvalError(ErrorKind::DegenerateGradient,
                        "horizontal gradient vanishes; cannot form the p-2 power");
    double pm2h = 0.5 * (params.p - 2.0);
    HOperatorTerms t;
    t.gradient_term = pm2h * (d.x1q * d.x1u + d.x2q * d.x2u);
    t.laplacian_1 = d.q * d.x11u;
    t.laplacian_2 = d.q * d.x22u;
    t.drift_term = kI * params.L * (pm2h * d.d3q * d.u + d.q * d.d3u);
    t.scale = branch_pow(d.q, Complex{0.5 * (params.p - 4.0), 0.0});
    return t;
}

Complex h_drift_op(const HCandidate& cand, const DriftParams& params, const HPoint& at) {
    return h_drift_terms(cand, params, at).value();
}

double HInfinityTerms::rel_residual() const {
    double m = std::max({std::abs(term1), std::abs(term2), std::abs(drift_term), 1e-300});
    return std::abs(value()) / m;
}

HInfinityTerms h_infinity_terms(const HCandidate& cand, double L, const HPoint& at) {
    if (!std::isfinite(L))
        throw EvalError(ErrorKind::ConfigInvalid, "drift parameter must be finite");
    HHorizontalData d = h_horizontal(cand, at);
    HInfinityTerms t;
    t.term1 = d.x1q * d.x1u;
    t.term2 = d.x2q * d.x2u;
    t.drift_term = kI * L * d.d3q * d.u;
    return t;
}

Complex h_infinity_op(const HCandidate& cand, double L, const HPoint& at) {
    return h_infinity_terms(cand, L, at).value();
}

HClosedForms h_closed(const HCandidate& cand, const HPoint& at) {
    HExponents e = h_candidate_exponents(cand);
    double x1 = at.x1, x2 = at.x2, x3 = at.x3;
    double rho2 = x1 * x1 + x2 * x2;
    double e2 = cand.epsilon * cand.epsilon;
    Complex v = h_base_v(at, cand.epsilon);
    if (v == Complex{0.0, 0.0})
        throw EvalError(ErrorKind::SingularPoint, "candidate base vanishes at the point");
    Complex w = std::conj(v);
    Complex eta{e.eta, 0.0}, tau{e.tau, 0.0};
    Complex sumw = eta * w + tau * v;
    Complex difw = eta * w - tau * v;
    Complex P = sumw * x1 + difw * kI * x2;
    Complex Q = sumw * x2 - difw * kI * x1;
    double coef = e.eta * e.eta + e.tau * e.tau;
    double st = e.eta + e.tau;

    Complex f11 = branch_pow(v, eta - 1.0) * branch_pow(w, tau - 1.0);
    Complex fq1 = branch_pow(v, Complex{st - 1.0, 0.0}) * branch_pow(w, Complex{st - 1.0, 0.0});
    Complex fq2 = branch_pow(v, Complex{st - 2.0, 0.0}) * branch_pow(w, Complex{st - 2.0, 0.0});
    Complex f22 = branch_pow(v, eta - 2.0) * branch_pow(w, tau - 2.0);

    HClosedForms c;
    c.x1u = 2.0 * f11 * P;
    c.x2u = 2.0 * f11 * Q;
    c.q = 8.0 * coef * fq1 * rho2;
    c.x1q = 16.0 * coef * fq2
          * (v * w * x1 + 2.0 * (st - 1.0) * rho2 * (x1 * (rho2 + e2) - 4.0 * x2 * x3));
    c.x2q = 16.0 * coef * fq2
          * (v * w * x2 + 2.0 * (st - 1.0) * rho2 * (x2 * (rho2 + e2) + 4.0 * x1 * x3));
    Complex bracket = v * w * (2.0 * st * rho2 + sumw);
    c.x11u = 2.0 * f22
           * ((2.0 * (eta - 1.0) * w * Complex{x1, x2} + 2.0 * (tau - 1.0) * v * Complex{x1, -x2}) * P
              + bracket);
    c.x22u = 2.0 * f22
           * ((2.0 * (eta - 1.0) * w * Complex{x2, -x1} + 2.0 * (tau - 1.0) * v * Complex{x2, x1}) * Q
              + bracket);
    return c;
}

double h_mollified_prefactor(const DriftParams& params) {
    return params.p * (4.0 - params.p) / (4.0 * (1.0 - params.p)) + params.L * params.L;
}

Complex h_mollified_residual_closed(const DriftParams& params, double epsilon, const HPoint& at) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw EvalError(ErrorKind::ConfigInvalid, "mollified residual needs epsilon > 0");
    require_operator_params(params);
    // A vanishing prefactor makes the residual identically zero; the two such
    // parameter pairs, (p, L) = (2, +-1) and (4, 0), sit on the exclusion locus
    // where the exponents are refused, so answer before computing them.
    if (h_mollified_prefactor(params) == 0.0)
        return Complex{0.0, 0.0};
    HExponents e = h_exponents(params);
    double p = params.p;
    Complex v = h_base_v(at, epsilon);
    Complex w = std::conj(v);
    double rho2 = at.x1 * at.x1 + at.x2 * at.x2;
    double coef = std::pow(2.0, 0.5 * (3.0 * p - 2.0)) * epsilon * epsilon
                * h_mollified_prefactor(params)
                * std::pow(e.eta * e.eta + e.tau * e.tau, 0.5 * (p - 2.0))
                * std::pow(rho2, 0.5 * (p - 2.0));
    Complex ev{0.5 * (e.eta * p + e.tau * (p - 2.0) - p), 0.0};
    Complex ew{0.5 * (e.eta * (p - 2.0) + e.tau * p - p), 0.0};
    return coef * branch_pow(v, ev) * branch_pow(w, ew);
}

Complex h_closed_infinity_laplacian(double L, const HPoint& at) {
    HExponents e = h_infinity_exponents(L);
    Complex v = h_base_v(at, 0.0);
    if (v == Complex{0.0, 0.0})
        throw EvalError(ErrorKind::SingularPoint, "evaluation at the singular point");
    Complex w = std::conj(v);
    double rho2 = at.x1 * at.x1 + at.x2 * at.x2;
    double coef = 128.0 * L * (e.eta * e.eta + e.tau * e.tau);
    return kI * coef * rho2 * at.x3
         * branch_pow(v, Complex{2.0 * e.eta + e.tau - 2.0, 0.0})
         * branch_pow(w, Complex{e.eta + 2.0 * e.tau - 2.0, 0.0});
}

} // namespace driftlap
