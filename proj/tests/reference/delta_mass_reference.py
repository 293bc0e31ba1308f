#!/usr/bin/env python3
"""Adaptive-quadrature reference values for the delta-mass box integrals.

The residual of the mollified candidate, written in the parabolic-dilation
variables X = x/eps, X3 = x3/eps^2 (resp. S = (y1-a)/eps^{2/(n+1)},
T = (y2-b)/eps^2), is independent of eps.  The box below is the dilation box
of radius 3 around the singularity in those variables.  scipy's adaptive
rules give the reference mass the midpoint estimator is checked against.
"""

import numpy as np
from scipy import integrate

# Heisenberg, p = 2, L = 0: integrand -4((R^2+1)^2 + 16 X3^2)^(-3/2)
def h_integrand(x3, x2, x1):
    r2 = x1 * x1 + x2 * x2
    return -4.0 * ((r2 + 1.0) ** 2 + 16.0 * x3 * x3) ** -1.5

val, err = integrate.tplquad(h_integrand, -3, 3, -3, 3, -9, 9, epsabs=1e-12, epsrel=1e-12)
print(f"H p=2 L=0 box mass   = {val:.15f}  (est err {err:.2e})")
print(f"H full-space mass    = {-2*np.pi:.15f}  (analytic -2*pi)")

# Grushin, p = 2, L = 0, shape (0,0,1,1): integrand -((S^2+1)^2 + 4 T^2)^(-5/4)
def g_integrand(t, s):
    return -((s * s + 1.0) ** 2 + 4.0 * t * t) ** -1.25

val2, err2 = integrate.dblquad(g_integrand, -3, 3, -9, 9, epsabs=1e-13, epsrel=1e-13)
print(f"G p=2 L=0 n=1 box mass = {val2:.15f}  (est err {err2:.2e})")
