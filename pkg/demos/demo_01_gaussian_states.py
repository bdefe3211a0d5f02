"""
Gaussian states and the total variance
======================================

A Gaussian state is fully described by a mean vector and a covariance
matrix over the quadratures (x1, p1, x2, p2, ...). This walk-through builds
a few reference states and reads off photon numbers and the EPR-type total
variance V, which falls below 2 only for entangled states.
"""

import math

import numpy as np

from eoentangle.gaussian import GaussianState, two_mode_squeezed_vacuum
from eoentangle.metrics import duan_verdict, epr_variance, photon_number

# The vacuum has covariance I/2, so each quadrature has variance 1/2.
vac = GaussianState.vacuum(2)
print("vacuum covariance diagonal:", np.diag(vac.covariance))
print("vacuum V =", epr_variance(vac, (0, 1)))

# Thermal light only adds noise: V grows as 2(2n + 1) and never drops below 2.
hot = GaussianState.thermal([0.3, 0.3])
print("thermal n=0.3: N =", photon_number(hot, 0), " V =", epr_variance(hot, (0, 1)))

# Two-mode squeezing correlates x1 with x2 and anticorrelates p1 with p2.
for xi in (0.25, 0.5, 1.0):
    tms = two_mode_squeezed_vacuum(xi)
    v = epr_variance(tms, (0, 1))
    print(
        f"squeezing {xi:4.2f}: V = {v:.4f} (2e^-2xi = {2 * math.exp(-2 * xi):.4f}),"
        f" N = {photon_number(tms, 0):.4f}, entangled = {duan_verdict(v)}"
    )

# Covariances that break the uncertainty relation are rejected outright.
try:
    GaussianState(np.zeros(2), 0.1 * np.eye(2))
except ArithmeticError as exc:
    print("rejected:", exc)
