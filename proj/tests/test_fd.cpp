#include <doctest.h>

#include <cmath>

#include "driftlap/fd.hpp"
#include "test_util.hpp"

using driftlap::Complex;
using testutil::rel_err;

TEST_CASE("first derivative with Richardson extrapolation") {
    auto sq = [](const double* x) { return Complex{x[0] * x[0], 0.0}; };
    double at[3] = {3.0, 0.0, 0.0};
    Complex d = driftlap::fd_derivative(sq, at, 3, 0, 1);
    CHECK(std::abs(d - Complex{6.0, 0.0}) < 1e-9);
}

TEST_CASE("second derivative with Richardson extrapolation") {
    auto quart = [](const double* x) {
        double v = x[0];
        return Complex{v * v * v * v, 0.0};
    };
    double at[3] = {1.0, 0.0, 0.0};
    Complex d2 = driftlap::fd_derivative(quart, at, 3, 0, 2);
    CHECK(std::abs(d2 - Complex{12.0, 0.0}) < 1e-6);
}

TEST_CASE("mixed partials") {
    // f = x1^2 x2 + i x1 x3: d^2/dx1 dx2 = 2 x1, d^2/dx1 dx3 = i, d^2/dx2 dx3 = 0
    auto f = [](const double* x) {
        return Complex{x[0] * x[0] * x[1], x[0] * x[2]};
    };
    double at[3] = {1.7, -0.4, 2.2};
    CHECK(rel_err(driftlap::fd_mixed(f, at, 3, 0, 1), Complex{2.0 * 1.7, 0.0}) < 1e-8);
    CHECK(rel_err(driftlap::fd_mixed(f, at, 3, 0, 2), Complex{0.0, 1.0}) < 1e-8);
    CHECK(std::abs(driftlap::fd_mixed(f, at, 3, 1, 2)) < 1e-8);
}

TEST_CASE("fd_jet fills a full numeric jet") {
    auto f = [](const double* x) {
        return Complex{std::exp(x[0]) * x[1], x[1] * x[1]};
    };
    double at[2] = {0.3, 1.1};
    driftlap::Jet2 j = driftlap::fd_jet(f, at, 2);
    double e = std::exp(0.3);
    CHECK(rel_err(j.value(), Complex{e * 1.1, 1.21}) < 1e-15);
    CHECK(rel_err(j.grad(0), Complex{e * 1.1, 0.0}) < 1e-8);
    CHECK(rel_err(j.grad(1), Complex{e, 2.2}) < 1e-8);
    CHECK(rel_err(j.hess(0, 0), Complex{e * 1.1, 0.0}) < 1e-7);
    CHECK(rel_err(j.hess(0, 1), Complex{e, 0.0}) < 1e-7);
    CHECK(rel_err(j.hess(1, 1), Complex{0.0, 2.0}) < 1e-7);
}

TEST_CASE("invalid order is refused") {
    auto f = [](const double* x) { return Complex{x[0], 0.0}; };
    double at[3] = {0.0, 0.0, 0.0};
    CHECK_THROWS_AS(driftlap::fd_derivative(f, at, 3, 0, 3), driftlap::EvalError);
}
