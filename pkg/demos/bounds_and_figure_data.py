"""The inequality suite and the Kohler-Jobin product data.

Run with:  python demos/bounds_and_figure_data.py
"""

import numpy as np

from torsio import check_all, make_path, make_star
from torsio.cli import figure4_rows

# ---------------------------------------------------------------------------
# check_all evaluates every implemented inequality on a spec, machine-checks
# the hypotheses, and reports left/right sides with slack.  A unit path
# saturates the Saint-Venant and symmetrization upper bounds exactly.
# ---------------------------------------------------------------------------

report = check_all(make_path(3))
print(report.to_markdown())
print("violations:", len(report.violations))

# Degree-mass stars activate the Kohler-Jobin family.
report = check_all(make_star(5, "degree"))
kj = {c.id: c for c in report.checks}
for cid in ("kohler_jobin_modified", "kohler_jobin_classical"):
    c = kj[cid]
    print(f"{cid}: lhs = {c.lhs:.6g} >= rhs = {c.rhs:.6g} (slack {c.slack:.3g})")

# ---------------------------------------------------------------------------
# The product T_2^(2/3) * lambda_0,2 for paths increases with the edge count
# toward the constants 2^(-1/3) (pi/12^(1/3))^2 (degree masses) and
# (pi/24^(1/3))^2 (unit masses); every family crosses at E = 1, where
# the single edge saturates the product at exactly 1.
# ---------------------------------------------------------------------------

lim_deg = 2.0 ** (-1.0 / 3.0) * (np.pi / 12.0 ** (1.0 / 3.0)) ** 2
lim_unit = (np.pi / 24.0 ** (1.0 / 3.0)) ** 2
print(f"\nlimits: path/deg -> {lim_deg:.6f}, path/unit -> {lim_unit:.6f}")
print("E   kj_path_unit  kj_path_deg  kj_star_unit  kj_star_deg")
rows = figure4_rows(50)
for E in (1, 2, 5, 10, 25, 50):
    row = rows[E - 1]
    print(
        f"{E:<3} {row['kj_path_unit']:<13.6f} {row['kj_path_deg']:<12.6f} "
        f"{row['kj_star_unit']:<13.6f} {row['kj_star_deg']:.6f}"
    )
print("\nthe star products diverge while the path products approach the limits")
