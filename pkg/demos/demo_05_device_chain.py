"""
From device parameters to dimensionless rates
=============================================

Capacitances, inductances, pump power and temperature fix the resonator
frequencies, electro-optic couplings, pumped photon numbers and thermal
occupations. Those in turn give the ratio r and the scaled decays k_i used
by every scheme.
"""

import math

from eoentangle.params import PRESETS, operation_times, scheme_rates

for name, params in PRESETS.items():
    rates = scheme_rates(params)
    print(f"[{name}]")
    print("  omega_b / 2pi [GHz]:", [round(w / (2 * math.pi) / 1e9, 3) for w in rates.resonator_frequencies])
    print("  g / 2pi [kHz]:      ", [round(g / (2 * math.pi) / 1e3, 2) for g in rates.couplings])
    print("  n_cav:              ", [round(n, 3) for n in rates.cavity_photon_numbers])
    print(f"  r = {rates.ratio:.4f}, k = {tuple(round(k, 5) for k in rates.scaled_decays)}")
    print("  n_th:               ", [round(n, 4) for n in rates.thermal_occupations])

# Operation times in seconds.
print("T_c:", operation_times(scheme_rates(PRESETS["cascaded"]), "cascaded", squeeze_time=1.6e-6))
print("T_p:", operation_times(scheme_rates(PRESETS["parallel"]), "parallel"))
print("T_d:", operation_times(scheme_rates(PRESETS["dissipative"]), "dissipative"))
