#include "driftlap/jet.hpp"

#include <cmath>

namespace driftlap {

namespace {

void check_branch(Complex v, const BranchPolicy& policy, const char* op) {
    if (v == Complex{0.0, 0.0})
        throw EvalError(ErrorKind::ZeroBase, std::string(op) + " at base 0");
    if (policy.mode == BranchMode::PrincipalWithGuard) {
        double dist = M_PI - std::abs(std::arg(v));
        if (dist < policy.guard_margin)
            throw EvalError(ErrorKind::BranchGuard,
                            std::string(op) + " base argument within guard margin of the cut");
    }
}

} // namespace

Jet2 Jet2::chain(Complex phi0, Complex phi1, Complex phi2) const {
    Jet2 r(dim_);
    r.value_ = phi0;
    for (int i = 0; i < dim_; ++i) r.grad(i) = phi1 * grad(i);
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
            r.hess(i, j) = phi1 * hess(i, j) + phi2 * grad(i) * grad(j);
    return r;
}

Jet2 Jet2::operator-() const {
    Jet2 r(dim_);
    r.value_ = -value_;
    for (size_t k = 0; k < grad_.size(); ++k) r.grad_[k] = -grad_[k];
    for (size_t k = 0; k < hess_.size(); ++k) r.hess_[k] = -hess_[k];
    return r;
}

Jet2& Jet2::operator+=(const Jet2& o) {
    value_ += o.value_;
    for (size_t k = 0; k < grad_.size(); ++k) grad_[k] += o.grad_[k];
    for (size_t k = 0; k < hess_.size(); ++k) hess_[k] += o.hess_[k];
    return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
    value_ -= o.value_;
    for (size_t k = 0; k < grad_.size(); ++k) grad_[k] -= o.grad_[k];
    for (size_t k = 0; k < hess_.size(); ++k) hess_[k] -= o.hess_[k];
    return *this;
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
    Jet2 r = a;
    r += b;
    return r;
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
    Jet2 r = a;
    r -= b;
    return r;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
    int d = a.dim();
    Jet2 r(d);
    r.value() = a.value() * b.value();
    for (int i = 0; i < d; ++i)
        r.grad(i) = a.grad(i) * b.value() + a.value() * b.grad(i);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j)
            r.hess(i, j) = a.hess(i, j) * b.value() + a.value() * b.hess(i, j)
                         + a.grad(i) * b.grad(j) + a.grad(j) * b.grad(i);
    return r;
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
    return a * jet_recip(b);
}

Jet2 operator+(const Jet2& a, Complex c) {
    Jet2 r = a;
    r.value() += c;
    return r;
}

Jet2 operator+(Complex c, const Jet2& a) { return a + c; }

Jet2 operator-(const Jet2& a, Complex c) { return a + (-c); }

Jet2 operator-(Complex c, const Jet2& a) { return (-a) + c; }

Jet2 operator*(const Jet2& a, Complex c) {
    int d = a.dim();
    Jet2 r(d);
    r.value() = a.value() * c;
    for (int i = 0; i < d; ++i) r.grad(i) = a.grad(i) * c;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) r.hess(i, j) = a.hess(i, j) * c;
    return r;
}

Jet2 operator*(Complex c, const Jet2& a) { return a * c; }

Jet2 operator/(const Jet2& a, Complex c) { return a * (Complex{1.0, 0.0} / c); }

Jet2 conj(const Jet2& a) {
    int d = a.dim();
    Jet2 r(d);
    r.value() = std::conj(a.value());
    for (int i = 0; i < d; ++i) r.grad(i) = std::conj(a.grad(i));
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) r.hess(i, j) = std::conj(a.hess(i, j));
    return r;
}

Jet2 jet_recip(const Jet2& a) {
    Complex v = a.value();
    if (v == Complex{0.0, 0.0})
        throw EvalError(ErrorKind::ZeroBase, "reciprocal of jet with value 0");
    Complex iv = Complex{1.0, 0.0} / v;
    return a.chain(iv, -iv * iv, 2.0 * iv * iv * iv);
}

Jet2 jet_seed(const double* point, int dim, int which) {
    if (which < 0 || which >= dim)
        throw EvalError(ErrorKind::ConfigInvalid, "jet_seed coordinate index out of range");
    Jet2 r(dim, Complex{point[which], 0.0});
    r.grad(which) = Complex{1.0, 0.0};
    return r;
}

Jet2 jet_ipow(const Jet2& base, int k) {
    if (k < 0)
        throw EvalError(ErrorKind::ConfigInvalid, "jet_ipow exponent must be >= 0");
    Jet2 r(base.dim(), Complex{1.0, 0.0});
    for (int i = 0; i < k; ++i) r = r * base;
    return r;
}

Jet2 jet_pow(const Jet2& base, Complex exponent, const BranchPolicy& policy) {
    Complex v = base.value();
    check_branch(v, policy, "jet_pow");
    // exp((s-2) Log v) * v * v avoids a second Log evaluation for the
    // derivative scale factors and keeps v^s, s v^{s-1}, s(s-1) v^{s-2}
    // exactly proportional.
    Complex core = std::exp((exponent - Complex{2.0, 0.0}) * std::log(v));
    Complex phi0 = core * v * v;
    Complex phi1 = exponent * core * v;
    Complex phi2 = exponent * (exponent - Complex{1.0, 0.0}) * core;
    return base.chain(phi0, phi1, phi2);
}

Jet2 jet_log(const Jet2& base, const BranchPolicy& policy) {
    Complex v = base.value();
    check_branch(v, policy, "jet_log");
    Complex iv = Complex{1.0, 0.0} / v;
    return base.chain(std::log(v), iv, -iv * iv);
}

Complex branch_pow(Complex base, Complex exponent, const BranchPolicy& policy) {
    check_branch(base, policy, "branch_pow");
    return std::exp(exponent * std::log(base));
}

Complex branch_log(Complex base, const BranchPolicy& policy) {
    check_branch(base, policy, "branch_log");
    return std::log(base);
}

} // namespace driftlap
