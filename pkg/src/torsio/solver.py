"""Computation of the p-torsion function and the p-torsional rigidity.

The torsion function is the unique minimizer of

    F_p(u) = Q_p(u) - sum_v u(v) m(v)

over functions vanishing on the Dirichlet set (over all functions when the
potential is somewhere positive).  Three methods are available:

* ``direct_p2``    exact sparse symmetric positive definite solve (p = 2);
* ``newton``       damped Newton on the full system with curvature
                   regularization and an Armijo line search on F_p, started
                   from the p = 2 solution;
* ``gauss_seidel`` cyclic exact scalar solves per free vertex, each a
                   strictly monotone one-dimensional equation handled by
                   safeguarded Newton/bisection.

Convergence is always measured on the pointwise residual
max_v |L_p u(v) - 1| (not on step sizes), because on finite graphs the weak
and the pointwise formulations coincide.

A caveat near p = 1: the edge flux |d|^(p-1) is only (p-1)-Hoelder in the
values, so on instances whose solution has near-equal adjacent values the
residual cannot be pushed below roughly (eps * ||tau||)^(p-1) in double
precision (about 0.16 at p = 1.05).  Such solves raise NoConvergenceError
carrying the achieved residual; monotone instances such as paths converge
fine across the whole supported window.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, NamedTuple

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .energy import check_vertex_function, functional_Fp, phi_p
from .errors import (
    IllPosedError,
    NoConvergenceError,
    UnboundedComponentError,
    UnsupportedCombinationError,
)
from .graphs import ProblemSpec, VertexId

_METHODS = ("auto", "gauss_seidel", "newton", "direct_p2")


@dataclass(frozen=True)
class SolverOptions:
    """tol: absolute sup-norm target for the pointwise residual; None means
    1e-10 * max(1, max m).  max_iterations caps Newton steps or Gauss-Seidel
    sweeps.  method is one of 'auto', 'gauss_seidel', 'newton', 'direct_p2';
    'auto' picks the exact solve for p = 2 and Newton otherwise."""

    tol: float | None = None
    max_iterations: int = 1_000_000
    method: str = "auto"

    def __post_init__(self) -> None:
        if self.method not in _METHODS:
            raise ValueError(f"method {self.method!r} not in {_METHODS}")


@dataclass(frozen=True)
class TorsionSolution:
    """tau: the torsion function (zero on the Dirichlet set); rigidity is
    (sum of tau * m over free vertices)^(p-1); residual_inf is the final
    max_v |L_p tau(v) - 1|."""

    tau: dict[VertexId, float]
    rigidity: float
    residual_inf: float
    iterations: int
    method: str


class _Assembled(NamedTuple):
    ids: tuple[VertexId, ...]
    m: np.ndarray
    c: np.ndarray
    free: np.ndarray          # indices of free vertices, input order
    pos: np.ndarray           # vertex index -> position among free, -1 if Dirichlet
    ei: np.ndarray
    ej: np.ndarray
    w: np.ndarray


def _assemble(spec: ProblemSpec) -> _Assembled:
    g = spec.graph
    ids = g.vertices
    n = len(ids)
    idx = {v: i for i, v in enumerate(ids)}
    m = np.array([g.measure[v] for v in ids])
    c = np.array([g.potential[v] for v in ids])
    free = np.array([i for i, v in enumerate(ids) if v not in spec.dirichlet], dtype=int)
    pos = np.full(n, -1, dtype=int)
    pos[free] = np.arange(len(free))
    edges = g.edges
    ei = np.array([idx[u] for u, _, _ in edges], dtype=int)
    ej = np.array([idx[v] for _, v, _ in edges], dtype=int)
    w = np.array([b for _, _, b in edges])
    return _Assembled(ids, m, c, free, pos, ei, ej, w)


def _check_bounded(spec: ProblemSpec, asm: _Assembled) -> None:
    """Every free component must touch a Dirichlet vertex or carry c > 0."""
    if not spec.well_posed:
        raise IllPosedError("no Dirichlet vertex and c identically zero")
    if len(asm.free) == 0:
        raise IllPosedError("no free vertices to solve for")
    n = len(asm.ids)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    free_set = set(int(i) for i in asm.free)
    for a, b in zip(asm.ei, asm.ej):
        if int(a) in free_set and int(b) in free_set:
            parent[find(int(a))] = find(int(b))
    anchored: set[int] = set()
    for a, b in zip(asm.ei, asm.ej):
        if int(a) in free_set and int(b) not in free_set:
            anchored.add(find(int(a)))
        if int(b) in free_set and int(a) not in free_set:
            anchored.add(find(int(b)))
    for i in free_set:
        if asm.c[i] > 0.0:
            anchored.add(find(i))
    loose = sorted({find(i) for i in free_set} - {find(r) for r in anchored})
    if loose:
        names = [asm.ids[i] for i in loose]
        raise UnboundedComponentError(
            f"free components at {names} have no Dirichlet link and no potential"
        )


def _objective(asm: _Assembled, p: float, rhs: np.ndarray, u: np.ndarray) -> float:
    d = u[asm.ei] - u[asm.ej]
    val = float(np.sum(asm.w * np.abs(d) ** p) / p)
    val += float(np.sum(asm.c * np.abs(u) ** p) / p)
    return val - float(np.dot(rhs, u))


def _grad_full(asm: _Assembled, p: float, rhs: np.ndarray, u: np.ndarray) -> np.ndarray:
    d = u[asm.ei] - u[asm.ej]
    f = asm.w * phi_p(d, p)
    g = np.zeros(len(u))
    np.add.at(g, asm.ei, f)
    np.add.at(g, asm.ej, -f)
    g += asm.c * phi_p(u, p)
    return g - rhs


def _residual_inf(asm: _Assembled, p: float, rhs: np.ndarray, u: np.ndarray) -> float:
    g = _grad_full(asm, p, rhs, u)
    return float(np.max(np.abs(g[asm.free]) / asm.m[asm.free]))


def _p2_matrix(asm: _Assembled) -> sp.csr_matrix:
    nf = len(asm.free)
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    diag = np.zeros(nf)
    for a, b, wt in zip(asm.ei, asm.ej, asm.w):
        pa, pb = asm.pos[a], asm.pos[b]
        if pa >= 0:
            diag[pa] += wt
        if pb >= 0:
            diag[pb] += wt
        if pa >= 0 and pb >= 0:
            rows += [pa, pb]
            cols += [pb, pa]
            vals += [-wt, -wt]
    diag += asm.c[asm.free]
    rows += list(range(nf))
    cols += list(range(nf))
    vals += list(diag)
    return sp.csr_matrix((vals, (rows, cols)), shape=(nf, nf))


def _solve_direct_p2(asm: _Assembled, rhs_free: np.ndarray) -> np.ndarray:
    K = _p2_matrix(asm)
    return spla.spsolve(K.tocsc(), rhs_free)


def _hessian(asm: _Assembled, p: float, u: np.ndarray) -> np.ndarray:
    """Dense regularized Hessian of F_p restricted to the free vertices.

    For p >= 2 a tiny epsilon is added to the |grad|^(p-2) factors (they
    vanish at equal neighbor values); for p < 2 the factors blow up there,
    so the gradient magnitude is floored instead.  Either way the matrix
    stays symmetric positive definite and the step remains a descent
    direction for the exact F_p.
    """
    scale = max(1.0, float(np.max(np.abs(u))) if len(u) else 1.0)
    d = u[asm.ei] - u[asm.ej]
    ad = np.abs(d)
    au = np.abs(u)
    if p >= 2.0:
        we = ad ** (p - 2.0) + 1e-12
        wu = au ** (p - 2.0) + 1e-12
    else:
        # the curvature blows up at equal neighbor values; floor the gradient
        # magnitude at the float granularity of the iterate so genuinely
        # stiff near-tie directions keep their true curvature
        floor = 64.0 * np.finfo(float).eps * scale
        we = np.maximum(ad, floor) ** (p - 2.0)
        wu = np.maximum(au, floor) ** (p - 2.0)
    ce = asm.w * (p - 1.0) * we
    cc = asm.c * (p - 1.0) * wu

    nf = len(asm.free)
    H = np.zeros((nf, nf))
    diag = np.zeros(nf)
    pa = asm.pos[asm.ei]
    pb = asm.pos[asm.ej]
    both = (pa >= 0) & (pb >= 0)
    np.add.at(H, (pa[both], pb[both]), -ce[both])
    np.add.at(H, (pb[both], pa[both]), -ce[both])
    np.add.at(diag, pa[pa >= 0], ce[pa >= 0])
    np.add.at(diag, pb[pb >= 0], ce[pb >= 0])
    diag += cc[asm.free]
    H[np.arange(nf), np.arange(nf)] += diag
    return H


def _newton_leg(
    asm: _Assembled,
    p: float,
    rhs: np.ndarray,
    u: np.ndarray,
    tol: float,
    cap: int,
) -> tuple[np.ndarray, int, float]:
    """Damped Newton with a trust-region cap on the step and an Armijo line
    search on the exact objective; stops on tol, cap, or a rounding-floor
    stall."""
    fval = _objective(asm, p, rhs, u)
    res = _residual_inf(asm, p, rhs, u)
    it = 0
    best = res
    stale = 0
    while res > tol and it < cap:
        it += 1
        g = _grad_full(asm, p, rhs, u)[asm.free]
        H = _hessian(asm, p, u)
        try:
            step = np.linalg.solve(H, -g)
        except np.linalg.LinAlgError:
            H[np.diag_indices_from(H)] += 1e-10 * (1.0 + np.abs(H).max())
            step = np.linalg.solve(H, -g)
        # for p < 2 the curvature model flattens far from the minimizer and
        # raw steps can overshoot by orders of magnitude
        limit = 0.5 * max(1.0, float(np.max(np.abs(u[asm.free]))))
        size = float(np.max(np.abs(step)))
        if size > limit:
            step *= limit / size
        slope = float(np.dot(g, step))
        if slope >= 0.0:
            step = -g
            slope = -float(np.dot(g, g))
        # near the minimum the objective differences underflow before the
        # gradient does; accept the full step on strict residual decrease
        trial = u.copy()
        trial[asm.free] = u[asm.free] + step
        res_full = _residual_inf(asm, p, rhs, trial)
        if res_full <= 0.9 * res:
            u = trial
            fval = _objective(asm, p, rhs, u)
            res = res_full
        else:
            alpha = 1.0
            while alpha > 1e-18:
                trial[asm.free] = u[asm.free] + alpha * step
                ftrial = _objective(asm, p, rhs, trial)
                if ftrial <= fval + 1e-4 * alpha * slope:
                    break
                alpha *= 0.5
            u[asm.free] = u[asm.free] + alpha * step
            fval = _objective(asm, p, rhs, u)
            res = _residual_inf(asm, p, rhs, u)
        if res < 0.97 * best:
            best = min(best, res)
            stale = 0
        else:
            stale += 1
            if stale >= 30:
                break
    return u, it, res


def _solve_newton(
    asm: _Assembled,
    p: float,
    rhs: np.ndarray,
    tol: float,
    max_iter: int,
    x0: np.ndarray | None,
    best_effort: bool = False,
) -> tuple[np.ndarray, int, float]:
    """Newton driver.  Cold starts walk a continuation in the exponent
    s = 1/(p-1) from the exact p = 2 solution to the target, transforming
    the iterate by the matching elementwise power at each leg; this keeps
    every leg inside Newton's fast local regime."""
    n = len(asm.ids)
    u = np.zeros(n)
    it = 0
    cap = min(max_iter, 400)
    if x0 is not None:
        u[asm.free] = x0
        u, it, res = _newton_leg(asm, p, rhs, u, tol, cap)
    else:
        u[asm.free] = _solve_direct_p2(asm, rhs[asm.free])
        res = _residual_inf(asm, p, rhs, u)
        s_cur = 1.0
        s_tgt = 1.0 / (p - 1.0)
        while True:
            ratio = float(np.clip(s_tgt / s_cur, 0.75, 4.0 / 3.0))
            s_cur *= ratio
            u[asm.free] = phi_p(u[asm.free], 1.0 + ratio)
            final = abs(np.log(s_tgt / s_cur)) < 1e-12
            leg_p = 1.0 + 1.0 / s_cur
            leg_tol = tol if final else 1e-6 * max(1.0, float(np.max(np.abs(u))))
            u, leg_it, res = _newton_leg(asm, leg_p, rhs, u, leg_tol, cap)
            it += leg_it
            if final:
                break
    if res > tol:
        # polish with exact coordinate solves; also the terminal safeguard
        budget = min(max(max_iter - it, 0), 500)
        u, sweeps, res = _gs_sweeps(asm, p, rhs, tol, budget, u, bail_on_stall=True)
        it += sweeps
        if res > tol and not best_effort:
            raise NoConvergenceError(
                f"Newton/Gauss-Seidel stopped at residual {res:.3e} > tol {tol:.3e}",
                iterations=it,
                residual=res,
            )
    return u, it, res


def _scalar_solve(
    nb_vals: np.ndarray, nb_w: np.ndarray, cv: float, rhs: float, t0: float, p: float
) -> float:
    """Solve sum_w b phi_p(t - u_w) + c phi_p(t) = rhs for the scalar t.

    The left side is strictly increasing, so an expanding bracket plus
    bisection with Newton acceleration is globally safe.
    """
    if p == 2.0:
        return (rhs + float(np.dot(nb_w, nb_vals))) / (float(np.sum(nb_w)) + cv)

    def h(t: float) -> float:
        val = float(np.dot(nb_w, phi_p(t - nb_vals, p)))
        if cv != 0.0:
            val += cv * float(phi_p(t, p))
        return val - rhs

    lo = hi = t0
    h0 = h(t0)
    if h0 == 0.0:
        return t0
    total_w = float(np.sum(nb_w)) + cv
    step = max(1.0, (abs(rhs) / total_w) ** (1.0 / (p - 1.0)))
    if nb_vals.size:
        step = max(step, float(np.max(nb_vals) - np.min(nb_vals)))
    if h0 < 0.0:
        hi = t0 + step
        while h(hi) < 0.0:
            lo = hi
            step *= 2.0
            hi += step
    else:
        lo = t0 - step
        while h(lo) > 0.0:
            hi = lo
            step *= 2.0
            lo -= step

    t = 0.5 * (lo + hi)
    for _ in range(200):
        ht = h(t)
        if ht > 0.0:
            hi = t
        elif ht < 0.0:
            lo = t
        else:
            return t
        width = hi - lo
        if width <= 1e-16 * max(1.0, abs(lo), abs(hi)):
            return t
        with np.errstate(divide="ignore"):
            # an exact hit on a neighbor value gives an infinite derivative
            # for p < 2; the finiteness check below falls back to bisection
            dv = float(np.dot(nb_w, (p - 1.0) * np.abs(t - nb_vals) ** (p - 2.0)))
        if cv != 0.0 and t != 0.0:
            dv += cv * (p - 1.0) * abs(t) ** (p - 2.0)
        if np.isfinite(dv) and dv > 0.0:
            tn = t - ht / dv
            if lo < tn < hi:
                t = tn
                continue
        t = 0.5 * (lo + hi)
    return t


def _gs_sweeps(
    asm: _Assembled,
    p: float,
    rhs: np.ndarray,
    tol: float,
    max_sweeps: int,
    u: np.ndarray,
    bail_on_stall: bool = False,
) -> tuple[np.ndarray, int, float]:
    """Cyclic exact scalar solves in ascending internal vertex order."""
    n = len(asm.ids)
    nbr_idx: list[list[int]] = [[] for _ in range(n)]
    nbr_w: list[list[float]] = [[] for _ in range(n)]
    for a, b, wt in zip(asm.ei, asm.ej, asm.w):
        nbr_idx[a].append(int(b))
        nbr_w[a].append(float(wt))
        nbr_idx[b].append(int(a))
        nbr_w[b].append(float(wt))
    nbi = [np.array(ix, dtype=int) for ix in nbr_idx]
    nbw = [np.array(ws) for ws in nbr_w]

    res = _residual_inf(asm, p, rhs, u)
    sweeps = 0
    best = res
    stale = 0
    while res > tol and sweeps < max_sweeps:
        sweeps += 1
        for i in asm.free:
            u[i] = _scalar_solve(u[nbi[i]], nbw[i], float(asm.c[i]), float(rhs[i]), float(u[i]), p)
        res = _residual_inf(asm, p, rhs, u)
        if bail_on_stall:
            if res < 0.99 * best:
                best = res
                stale = 0
            else:
                stale += 1
                if stale >= 50:
                    break
    return u, sweeps, res


def default_tolerance(spec: ProblemSpec) -> float:
    return 1e-10 * max(1.0, max(spec.graph.measure.values()))


def _solve_rhs(
    spec: ProblemSpec,
    rhs_free: np.ndarray,
    opts: SolverOptions,
    x0: np.ndarray | None = None,
    best_effort: bool = False,
) -> tuple[_Assembled, np.ndarray, int, float, str]:
    """Shared driver: minimize Q_p(u) - <rhs, u> over functions vanishing on V0."""
    asm = _assemble(spec)
    _check_bounded(spec, asm)
    p = spec.p
    tol = opts.tol if opts.tol is not None else default_tolerance(spec)
    rhs = np.zeros(len(asm.ids))
    rhs[asm.free] = rhs_free

    method = opts.method
    if method == "auto":
        method = "direct_p2" if p == 2.0 else "newton"
    if method == "direct_p2":
        if p != 2.0:
            raise UnsupportedCombinationError("direct_p2 requires p = 2")
        u = np.zeros(len(asm.ids))
        u[asm.free] = _solve_direct_p2(asm, rhs[asm.free])
        res = _residual_inf(asm, p, rhs, u)
        if res > tol:
            u, sweeps, res = _gs_sweeps(asm, p, rhs, tol, opts.max_iterations, u)
            if res > tol:
                raise NoConvergenceError(
                    f"direct solve residual {res:.3e} > tol {tol:.3e}",
                    iterations=1 + sweeps,
                    residual=res,
                )
        return asm, u, 1, res, method
    if method == "newton":
        u, it, res = _solve_newton(
            asm, p, rhs, tol, opts.max_iterations, x0, best_effort=best_effort
        )
        return asm, u, it, res, method
    # gauss_seidel
    u = np.zeros(len(asm.ids))
    if x0 is not None:
        u[asm.free] = x0
    u, sweeps, res = _gs_sweeps(asm, p, rhs, tol, opts.max_iterations, u)
    if res > tol:
        raise NoConvergenceError(
            f"Gauss-Seidel stopped at residual {res:.3e} > tol {tol:.3e} "
            f"after {sweeps} sweeps",
            iterations=sweeps,
            residual=res,
        )
    return asm, u, sweeps, res, method


def solve_torsion(spec: ProblemSpec, opts: SolverOptions | None = None) -> TorsionSolution:
    """Minimize F_p and return the torsion function with its rigidity.

    Raises IllPosedError for specs with no Dirichlet vertex and zero
    potential, UnboundedComponentError when a free component is detached
    from every anchor, and NoConvergenceError when the iteration budget runs
    out.
    """
    opts = opts or SolverOptions()
    asm0 = _assemble(spec)
    rhs_free = asm0.m[asm0.free]
    asm, u, iterations, res, method = _solve_rhs(spec, rhs_free, opts)
    tau = {v: (0.0 if asm.pos[i] < 0 else float(u[i])) for i, v in enumerate(asm.ids)}
    l1 = float(np.dot(np.abs(u[asm.free]), asm.m[asm.free]))
    return TorsionSolution(
        tau=tau,
        rigidity=l1 ** (spec.p - 1.0),
        residual_inf=res,
        iterations=iterations,
        method=method,
    )


def pointwise_residual(spec: ProblemSpec, u: Mapping[VertexId, float]) -> dict[VertexId, float]:
    """L_p u(v) - 1 at every free vertex;

    L_p u(v) = (1/m(v)) [ sum_w b(v,w) phi_p(u(v)-u(w)) + c(v) phi_p(u(v)) ].
    """
    check_vertex_function(spec, u)
    asm = _assemble(spec)
    uv = np.array([u[v] for v in asm.ids])
    rhs = np.zeros(len(asm.ids))
    rhs[asm.free] = asm.m[asm.free]
    g = _grad_full(asm, spec.p, rhs, uv)
    return {asm.ids[i]: float(g[i] / asm.m[i]) for i in asm.free}


class BalanceResult(NamedTuple):
    lhs: float
    rhs: float
    ok: bool


def balance_check(spec: ProblemSpec, sol: TorsionSolution) -> BalanceResult:
    """Flux balance of the torsion function.

    With a Dirichlet set: the flux through the boundary edges plus the
    potential flux equals the free mass m(V \\ V0).  Without one: the
    potential flux equals the total mass m(V).
    """
    g = spec.graph
    p = spec.p
    tau = sol.tau
    if spec.dirichlet:
        lhs = sum(
            b * float(phi_p(tau[v], p))
            for v in spec.free_vertices
            for w, b in g.neighbors(v)
            if w in spec.dirichlet
        )
        lhs += sum(g.potential[v] * float(phi_p(tau[v], p)) for v in spec.free_vertices)
        rhs = spec.free_measure()
    else:
        lhs = sum(g.potential[v] * float(phi_p(tau[v], p)) for v in g.vertices)
        rhs = g.total_measure()
    return BalanceResult(lhs, rhs, abs(lhs - rhs) <= 1e-8 * rhs)


def rigidity_via_min(spec: ProblemSpec, sol: TorsionSolution) -> float:
    """Recover the rigidity from the minimum of F_p:

        T_p = ( p/(1-p) * F_p(tau) )^(p-1),

    which must agree with (sum tau m)^(p-1).
    """
    val = functional_Fp(spec, sol.tau)
    return (spec.p / (1.0 - spec.p) * val) ** (spec.p - 1.0)
