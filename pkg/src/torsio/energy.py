"""Energy functional Q_p, torsion functional F_p and its gradient, and the
Polya and Rayleigh quotients, all with Dirichlet restriction.

Vertex functions are plain mappings id -> value defined on the whole vertex
set; for specs with a Dirichlet set they must vanish there (enforced, not
assumed).
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from .errors import (
    DirichletViolationError,
    DomainMismatchError,
    IllPosedError,
    ZeroEnergyError,
    ZeroFunctionError,
)
from .graphs import ProblemSpec, VertexId

VertexFunction = Mapping[VertexId, float]


def phi_p(x, p: float):
    """sign(x) |x|^(p-1), the derivative of |x|^p / p; equals 0 at x = 0."""
    return np.sign(x) * np.abs(x) ** (p - 1.0)


def check_vertex_function(spec: ProblemSpec, u: VertexFunction) -> None:
    """Validate that u is defined on exactly V and vanishes on V0."""
    g = spec.graph
    missing = [v for v in g.vertices if v not in u]
    if missing:
        raise DomainMismatchError(f"function undefined at vertices {missing}")
    if len(u) != g.vertex_count:
        extra = [v for v in u if v not in g]
        raise DomainMismatchError(f"function defined at unknown vertices {extra}")
    bad = [v for v in spec.dirichlet if u[v] != 0.0]
    if bad:
        raise DirichletViolationError(f"function must vanish on the Dirichlet set, is nonzero at {bad}")


def energy_Qp(spec: ProblemSpec, u: VertexFunction) -> float:
    """Q_p(u) = (1/2p) sum_{v,w} b(v,w) |u(v)-u(w)|^p + (1/p) sum_v c(v) |u(v)|^p.

    The double sum runs over ordered pairs, so each undirected edge is
    counted twice; the per-edge form below carries the resulting factor 2.
    """
    check_vertex_function(spec, u)
    g = spec.graph
    p = spec.p
    grad = sum(b * abs(u[v] - u[w]) ** p for v, w, b in g.edges)
    pot = sum(g.potential[v] * abs(u[v]) ** p for v in g.vertices)
    return (2.0 * grad) / (2.0 * p) + pot / p


def functional_Fp(spec: ProblemSpec, u: VertexFunction) -> float:
    """F_p(u) = Q_p(u) - sum over free vertices of u(v) m(v)."""
    q = energy_Qp(spec, u)
    m = spec.graph.measure
    return q - sum(u[v] * m[v] for v in spec.free_vertices)


def gradient_Fp(spec: ProblemSpec, u: VertexFunction) -> dict[VertexId, float]:
    """Gradient of F_p: at a free vertex v,

        sum_w b(v,w) phi_p(u(v)-u(w)) + c(v) phi_p(u(v)) - m(v),

    and 0 on the Dirichlet set.
    """
    check_vertex_function(spec, u)
    g = spec.graph
    p = spec.p
    out: dict[VertexId, float] = {}
    for v in g.vertices:
        if v in spec.dirichlet:
            out[v] = 0.0
            continue
        acc = sum(b * float(phi_p(u[v] - u[w], p)) for w, b in g.neighbors(v))
        acc += g.potential[v] * float(phi_p(u[v], p))
        out[v] = acc - g.measure[v]
    return out


def _free_l1(spec: ProblemSpec, u: VertexFunction) -> float:
    m = spec.graph.measure
    return sum(abs(u[v]) * m[v] for v in spec.free_vertices)


def polya_quotient(spec: ProblemSpec, u: VertexFunction) -> float:
    """(sum_{v free} |u(v)| m(v))^p / (p Q_p(u)); maximized by the torsion function."""
    if not spec.well_posed:
        raise IllPosedError("Polya quotient needs a Dirichlet vertex or a positive potential")
    check_vertex_function(spec, u)
    l1 = _free_l1(spec, u)
    if l1 == 0.0:
        raise ZeroFunctionError("function vanishes on all free vertices")
    q = energy_Qp(spec, u)
    if q == 0.0:
        raise ZeroEnergyError("function has zero energy; the quotient is undefined")
    return l1**spec.p / (spec.p * q)


def rayleigh_quotient(spec: ProblemSpec, u: VertexFunction) -> float:
    """p Q_p(u) / sum_{v free} |u(v)|^p m(v); its infimum is the bottom of the p-spectrum."""
    if not spec.well_posed:
        raise IllPosedError("Rayleigh quotient needs a Dirichlet vertex or a positive potential")
    check_vertex_function(spec, u)
    m = spec.graph.measure
    lp = sum(abs(u[v]) ** spec.p * m[v] for v in spec.free_vertices)
    if lp == 0.0:
        raise ZeroFunctionError("function vanishes on all free vertices")
    return spec.p * energy_Qp(spec, u) / lp
