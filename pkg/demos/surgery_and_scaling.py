"""Surgery operations and the invariants they preserve or push around.

Run with:  python demos/surgery_and_scaling.py
"""

import numpy as np

from torsio import (
    ProblemSpec,
    ScaleParams,
    SolverOptions,
    build_graph,
    insert_graph,
    lambda0,
    make_random_connected,
    make_star,
    merge_dirichlet,
    scale,
    solve_torsion,
    weaken,
)

TIGHT = SolverOptions(tol=1e-12)

# ---------------------------------------------------------------------------
# Identifying all Dirichlet vertices into one changes neither the rigidity
# nor the bottom of the spectrum: a 5-star with three Dirichlet leaves
# becomes a 3-star whose boundary edge carries the summed weight.
# ---------------------------------------------------------------------------

spec = make_star(5)
spec = ProblemSpec(spec.graph, frozenset({"v0", "v2", "v3"}), 2.0)
merged = merge_dirichlet(spec)
print("merge: vertices", spec.graph.vertex_count, "->", merged.graph.vertex_count)
print("  T_p  ", solve_torsion(spec, TIGHT).rigidity, "->", solve_torsion(merged, TIGHT).rigidity)
print("  lam0 ", lambda0(spec).lambda0, "->", lambda0(merged).lambda0)

# ---------------------------------------------------------------------------
# Scaling (m, b, c) -> (mu m, lam b, lam c) moves the rigidity by mu^p / lam
# and the spectrum by lam / mu; the torsion function itself scales by
# (mu / lam)^(1/(p-1)).
# ---------------------------------------------------------------------------

base = make_random_connected(6, 0.6, (0.5, 2.0), seed=4, p=3.0)
mu, lam = 2.0, 0.5
scaled = ProblemSpec(scale(base.graph, ScaleParams(mu, lam)), base.dirichlet, base.p)
T0 = solve_torsion(base, TIGHT).rigidity
T1 = solve_torsion(scaled, TIGHT).rigidity
print(f"\nscaling: T_p ratio {T1 / T0:.12g} vs mu^p/lam = {mu**base.p / lam:.12g}")
l0 = lambda0(base).lambda0
l1 = lambda0(scaled).lambda0
print(f"         lam0 ratio {l1 / l0:.12g} vs lam/mu = {lam / mu:.12g}")

# ---------------------------------------------------------------------------
# Weakening (lowering edge weights or potentials pointwise) can only increase
# the rigidity: fewer constraints, more torsion.
# ---------------------------------------------------------------------------

rng = np.random.default_rng(0)
g = base.graph
b_new = {(u, v): b * float(rng.uniform(0.3, 1.0)) for u, v, b in g.edges}
weakened = ProblemSpec(weaken(g, b_new, {}), base.dirichlet, base.p)
print("\nweakening:", solve_torsion(base, TIGHT).rigidity, "<=",
      solve_torsion(weakened, TIGHT).rigidity)

# ---------------------------------------------------------------------------
# Inserting a guest graph at a single host vertex never decreases the
# rigidity either: the host torsion function extends as a constant over the
# guest and remains admissible.
# ---------------------------------------------------------------------------

guest = build_graph([("g0", 1.0, 0.0), ("g1", 1.0, 0.0)], [("g0", "g1", 1.0)])
anchor = base.free_vertices[0]
bigger = insert_graph(base, guest, [(anchor, "g0", 1.0)])
print("insertion:", solve_torsion(base, TIGHT).rigidity, "<=",
      solve_torsion(bigger, TIGHT).rigidity)
