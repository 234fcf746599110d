"""A tour of p-torsion functions on small weighted graphs.

Run with:  python demos/torsion_basics.py
"""

from torsio import (
    PathSpecParams,
    SolverOptions,
    balance_check,
    build_graph,
    make_path,
    make_star,
    path_torsion,
    pointwise_residual,
    rigidity_via_min,
    solve_torsion,
)

# ---------------------------------------------------------------------------
# The torsion function solves L_p u = 1 on the free vertices and vanishes on
# the Dirichlet set.  On a unit path with three free vertices and p = 2 the
# values are the integers 3, 5, 6 and the rigidity is their sum, 14.
# ---------------------------------------------------------------------------

spec = make_path(3)
sol = solve_torsion(spec)
print("path v0(D)-v1-v2-v3, p = 2")
for v in spec.graph.vertices:
    print(f"  tau({v}) = {sol.tau[v]:.12g}")
print(f"  rigidity T_2 = {sol.rigidity:.12g}")
print(f"  residual sup norm = {sol.residual_inf:.2e}, method = {sol.method}")

# The closed form reproduces the same values for every p and any positive
# masses and weights along the path.
params = PathSpecParams(3, (1.0, 1.0, 1.0), (1.0, 1.0, 1.0), 2.0)
print("  closed form:", path_torsion(params))

# ---------------------------------------------------------------------------
# Nonlinear case: for p != 2 the solver walks a continuation from the exact
# p = 2 solution.  The residual of the exact path formula plugged into the
# pointwise operator stays at rounding level.
# ---------------------------------------------------------------------------

for p in (1.5, 3.0):
    spec_p = make_path(5, "unit", 1.0, p)
    sol_p = solve_torsion(spec_p, SolverOptions(tol=1e-12))
    exact = path_torsion(PathSpecParams(5, (1.0,) * 5, (1.0,) * 5, p))
    err = max(abs(sol_p.tau[v] - exact[v]) for v in spec_p.free_vertices)
    res = pointwise_residual(spec_p, exact)
    print(f"p = {p}: solver vs closed form max err = {err:.2e}, "
          f"closed-form residual = {max(abs(r) for r in res.values()):.2e}")

# ---------------------------------------------------------------------------
# Stars: the center sees the total free mass through its boundary edge; each
# free leaf adds its own one-edge contribution on top.
# ---------------------------------------------------------------------------

star = make_star(4, "degree")
sol = solve_torsion(star)
print("\n4-star with degree masses: tau =", {v: round(x, 6) for v, x in sol.tau.items()})
print("rigidity:", round(sol.rigidity, 6), "(= 4n^2 - 3n at n = 4)")

# ---------------------------------------------------------------------------
# Two consistency identities: the flux balance through the Dirichlet boundary
# equals the free mass, and the rigidity can be recovered from the minimum of
# the torsion functional.
# ---------------------------------------------------------------------------

bal = balance_check(star, sol)
print(f"balance: boundary flux {bal.lhs:.10g} vs free mass {bal.rhs:.10g} -> ok = {bal.ok}")
print(f"rigidity from min F_p: {rigidity_via_min(star, sol):.10g}")

# ---------------------------------------------------------------------------
# General weighted data work the same way; parallel edge records are merged
# on construction.
# ---------------------------------------------------------------------------

g = build_graph(
    [("a", 1.0, 0.0), ("b", 0.5, 0.2), ("c", 2.0, 0.0)],
    [("a", "b", 1.0), ("a", "b", 0.5), ("b", "c", 2.0)],
)
print("\nmerged parallel edge weight b(a,b) =", g.edge_weight("a", "b"))

# ---------------------------------------------------------------------------
# Metric quantities: the q-distance sums b^(1/(q-1)) along paths, so larger
# weights mean longer edges and the weight-inverted graph is the natural
# domain for spectral lower bounds.  The geometry summary collects the
# inradius, mean distance, inverted diameter and the global minimal cut.
# ---------------------------------------------------------------------------

from torsio import geometry_summary, q_distance

print("\nq-distance a->c at q=3:", q_distance(g, 3.0, "a", "c"))
summary = geometry_summary(make_star(4, "unit"))
print("4-star geometry:", summary)
