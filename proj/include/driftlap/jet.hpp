#pragma once

#include <array>
#include <complex>
#include <cstddef>

#include "driftlap/errors.hpp"

namespace driftlap {

using Complex = std::complex<double>;

enum class BranchMode {
    PrincipalStrict,    // principal branch, no cut-proximity check
    PrincipalWithGuard, // reject bases whose argument is within guard_margin of ±pi
};

struct BranchPolicy {
    BranchMode mode = BranchMode::PrincipalWithGuard;
    double guard_margin = 1e-3; // must be < pi
};

// Truncated second-order jet of a complex-valued function of d real variables
// (d = 2 or 3): value, gradient, and symmetric Hessian, propagated exactly
// through arithmetic by the chain and Leibniz rules.  The Hessian is stored as
// the upper triangle, so hess(i,j) and hess(j,i) are the same element and
// symmetry is structural.
class Jet2 {
public:
    Jet2() = default;
    explicit Jet2(int dim, Complex value = {})
        : dim_(dim), value_(value) {}

    int dim() const { return dim_; }

    Complex& value() { return value_; }
    const Complex& value() const { return value_; }

    Complex& grad(int i) { return grad_[static_cast<size_t>(i)]; }
    const Complex& grad(int i) const { return grad_[static_cast<size_t>(i)]; }

    Complex& hess(int i, int j) { return hess_[tri_index(i, j)]; }
    const Complex& hess(int i, int j) const { return hess_[tri_index(i, j)]; }

    // Post-compose with a scalar function phi given by its value and first two
    // derivatives at this jet's value: phi0 = phi(v), phi1 = phi'(v),
    // phi2 = phi''(v).
    Jet2 chain(Complex phi0, Complex phi1, Complex phi2) const;

    Jet2 operator-() const;
    Jet2& operator+=(const Jet2& o);
    Jet2& operator-=(const Jet2& o);

private:
    static size_t tri_index(int i, int j) {
        if (i > j) { int t = i; i = j; j = t; }
        return static_cast<size_t>(i * 3 - i * (i + 1) / 2 + j);
    }

    int dim_ = 0;
    Complex value_{};
    std::array<Complex, 3> grad_{};
    std::array<Complex, 6> hess_{};
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);

Jet2 operator+(const Jet2& a, Complex c);
Jet2 operator+(Complex c, const Jet2& a);
Jet2 operator-(const Jet2& a, Complex c);
Jet2 operator-(Complex c, const Jet2& a);
Jet2 operator*(const Jet2& a, Complex c);
Jet2 operator*(Complex c, const Jet2& a);
Jet2 operator/(const Jet2& a, Complex c);

// Componentwise complex conjugate.  For jets of real seed variables this is
// the jet of the conjugate function.
Jet2 conj(const Jet2& a);

// Multiplicative inverse 1/a (throws ZeroBase at a.value == 0).
Jet2 jet_recip(const Jet2& a);

// Seed jet for coordinate `which` of a d-dimensional real point:
// value = point[which], grad = e_which, hess = 0.
Jet2 jet_seed(const double* point, int dim, int which);

template <size_t N>
Jet2 jet_seed(const std::array<double, N>& point, int which) {
    return jet_seed(point.data(), static_cast<int>(N), which);
}

// Principal-branch power base^s with chain rule z^s -> s z^{s-1}, s(s-1) z^{s-2}.
// Throws ZeroBase at base.value == 0 and BranchGuard when the policy guards the
// cut and |arg base.value| > pi - guard_margin.
Jet2 jet_pow(const Jet2& base, Complex exponent, const BranchPolicy& policy = {});

// Integer power by repeated multiplication: polynomial, no branch cut, valid
// for any base value (including 0 and the negative real axis).  k >= 0.
Jet2 jet_ipow(const Jet2& base, int k);

// Principal-branch logarithm with the same branch errors as jet_pow.
Jet2 jet_log(const Jet2& base, const BranchPolicy& policy = {});

// Value-level principal power and logarithm with the same error contract as
// the jet versions (for closed-form and value-only evaluation paths).
Complex branch_pow(Complex base, Complex exponent, const BranchPolicy& policy = {});
Complex branch_log(Complex base, const BranchPolicy& policy = {});

} // namespace driftlap
