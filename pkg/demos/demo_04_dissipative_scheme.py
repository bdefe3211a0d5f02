"""
Reservoir engineering with two lossy cavities
=============================================

In the dissipative scheme the strongly damped optical cavities act as an
engineered bath whose fixed point is a two-mode squeezed state of the
resonators. The full four-mode steady state is compared with the
adiabatic reduction and the stationary formula.
"""

import numpy as np

from eoentangle.gaussian import GaussianState, hurwitz_check, steady_state, trajectory
from eoentangle.metrics import epr_variance
from eoentangle.schemes import (
    SchemeConfig,
    adiabatic_reduction,
    dissipative_dynamics,
    dissipative_steady_variance,
    dissipative_transient_variance,
    initial_state,
)

cfg = SchemeConfig(kind="dissipative", r=0.5, k0=10.0, k1=0.0075, k2=0.0075, n_th=(0, 0.01, 0.01))
dyn = dissipative_dynamics(cfg)
print("Hurwitz:", hurwitz_check(dyn))

v_full = epr_variance(steady_state(dyn), (2, 3))
print(f"full model steady V = {v_full:.5f}")
print(f"stationary formula V = {dissipative_steady_variance(cfg):.5f}")

# The reduced two-mode model relaxes at gamma = 2(1 - r^2)/k0.
reduced, gamma = adiabatic_reduction(cfg)
print(f"gamma = {gamma:.4f}")

# Transient: full simulation against the closed formula on the x grid.
xs = np.linspace(0.0, 5.0, 6)
taus = xs * cfg.k0 / (1 - cfg.r**2)
states = trajectory(dyn, initial_state(cfg), taus)
formula = dissipative_transient_variance(xs, taus, cfg)
for x, s, f in zip(xs, states, formula):
    print(f"  x = {x:.1f}  V_sim = {epr_variance(s, (2, 3)):.4f}  V_formula = {f:.4f}")

# Past r = 1 there is no steady state.
try:
    steady_state(dissipative_dynamics(cfg.with_(r=1.2)))
except ArithmeticError as exc:
    print("r = 1.2:", exc)
