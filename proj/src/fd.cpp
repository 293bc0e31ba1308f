#include "driftlap/fd.hpp"

#include <cmath>

namespace driftlap {

namespace {

constexpr double kStep1 = 1e-5;
constexpr double kStep2 = 4e-3;

Complex eval_shifted(const ScalarField& f, const double* at, int dim,
                     int i, double di, int j, double dj) {
    double x[3] = {0.0, 0.0, 0.0};
    for (int k = 0; k < dim; ++k) x[k] = at[k];
    x[i] += di;
    x[j] += dj;
    return f(x);
}

Complex central1(const ScalarField& f, const double* at, int dim, int which, double h) {
    return (eval_shifted(f, at, dim, which, h, which, 0.0)
          - eval_shifted(f, at, dim, which, -h, which, 0.0)) / Complex{2.0 * h, 0.0};
}

Complex central2(const ScalarField& f, const double* at, int dim, int which, double h) {
    return (eval_shifted(f, at, dim, which, h, which, 0.0)
          - 2.0 * f(at)
          + eval_shifted(f, at, dim, which, -h, which, 0.0)) / Complex{h * h, 0.0};
}

Complex cross(const ScalarField& f, const double* at, int dim, int i, int j,
              double hi, double hj) {
    return (eval_shifted(f, at, dim, i, hi, j, hj)
          - eval_shifted(f, at, dim, i, hi, j, -hj)
          - eval_shifted(f, at, dim, i, -hi, j, hj)
          + eval_shifted(f, at, dim, i, -hi, j, -hj)) / Complex{4.0 * hi * hj, 0.0};
}

} // namespace

Complex fd_derivative(const ScalarField& f, const double* at, int dim, int which, int order) {
    double scale = std::max(1.0, std::abs(at[which]));
    if (order == 1) {
        double h = kStep1 * scale;
        Complex coarse = central1(f, at, dim, which, h);
        Complex fine = central1(f, at, dim, which, h / 2.0);
        return (4.0 * fine - coarse) / 3.0;
    }
    if (order == 2) {
        double h = kStep2 * scale;
        Complex fine = central2(f, at, dim, which, h);
        Complex coarse = central2(f, at, dim, which, 2.0 * h);
        return (4.0 * fine - coarse) / 3.0;
    }
    throw EvalError(ErrorKind::ConfigInvalid, "fd_derivative order must be 1 or 2");
}

Complex fd_mixed(const ScalarField& f, const double* at, int dim, int i, int j) {
    double hi = kStep2 * std::max(1.0, std::abs(at[i]));
    double hj = kStep2 * std::max(1.0, std::abs(at[j]));
    Complex coarse = cross(f, at, dim, i, j, hi, hj);
    Complex fine = cross(f, at, dim, i, j, hi / 2.0, hj / 2.0);
    return (4.0 * fine - coarse) / 3.0;
}

Jet2 fd_jet(const ScalarField& f, const double* at, int dim) {
    Jet2 r(dim, f(at));
    for (int i = 0; i < dim; ++i)
        r.grad(i) = fd_derivative(f, at, dim, i, 1);
    for (int i = 0; i < dim; ++i) {
        r.hess(i, i) = fd_derivative(f, at, dim, i, 2);
        for (int j = i + 1; j < dim; ++j)
            r.hess(i, j) = fd_mixed(f, at, dim, i, j);
    }
    return r;
}

} // namespace driftlap
