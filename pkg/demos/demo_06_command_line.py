"""
Driving the command line from Python
====================================

The ``eoentangle`` command reads flat ``key = value`` files and writes
CSV. Here a config is written to a temporary directory, simulated, swept,
and the device report is read back to confirm that it reproduces the
same dimensionless rates.
"""

import tempfile
from pathlib import Path

from eoentangle.cli import main
from eoentangle.experiments import build_scenario, parse_params_report, report_to_settings, reproduce

with tempfile.TemporaryDirectory() as tmp:
    cfg = Path(tmp) / "parallel.cfg"
    cfg.write_text("scheme = parallel\nr = 0.5\nk = 0.05\nn_th = 0.1\npoints = 5\n")
    print("exit code:", main(["simulate", str(cfg)]))

    cfg = Path(tmp) / "cascaded.cfg"
    cfg.write_text("preset = cascaded\n")
    print("exit code:", main(["sweep", str(cfg), "--param", "tau2", "--from", "2", "--to", "3", "--points", "5"]))

    bad = Path(tmp) / "bad.cfg"
    bad.write_text("r = 0.5\nr = 0.6\n")
    print("exit code for a duplicate key:", main(["simulate", str(bad)]))

# The params report keeps full precision, so it round-trips exactly.
report = parse_params_report(reproduce("params-report").to_csv())
again = build_scenario(report_to_settings(report, "cascaded")).config
direct = build_scenario({"preset": "cascaded"}).config
print("round trip identical:", again.r == direct.r and again.k0 == direct.k0)
