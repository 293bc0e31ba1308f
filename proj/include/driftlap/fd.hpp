#pragma once

#include <functional>

#include "driftlap/jet.hpp"

namespace driftlap {

// A complex scalar field sampled at real points (dim 2 or 3).
using ScalarField = std::function<Complex(const double*)>;

// Central finite difference with one Richardson extrapolation level.
//   order 1: pure first partial d/dx_which, step 1e-5 * max(1, |x_which|),
//            R = (4 D(h/2) - D(h)) / 3, truncation O(h^4).
//   order 2: pure second partial d^2/dx_which^2.  A larger step
//            4e-3 * max(1, |x_which|) is used because the second-difference
//            roundoff floor eps*|f|/h^2 would dominate at the order-1 step;
//            the value balances that floor against the O(h^4) truncation left
//            by R = (4 D2(h) - D2(2h)) / 3, which removes the h^2 term.
Complex fd_derivative(const ScalarField& f, const double* at, int dim, int which, int order);

// Mixed second partial d^2/dx_i dx_j (i != j) by the 4-point cross stencil
// with one Richardson level, on the order-2 step.
Complex fd_mixed(const ScalarField& f, const double* at, int dim, int i, int j);

// Full numeric jet of f at the point: value by direct evaluation, gradient by
// order-1 differences, Hessian by order-2 and mixed differences.  Entirely
// independent of Jet2 arithmetic; the shared Jet2 container is only storage.
Jet2 fd_jet(const ScalarField& f, const double* at, int dim);

} // namespace driftlap
