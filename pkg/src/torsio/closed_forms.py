"""Exact closed forms for torsion functions and reference scalar values on
paths and stars, used as oracles for the solver and as right-hand sides of
the comparison bounds.

Index convention: F always counts free vertices.  A path has vertices
v0..vF with the Dirichlet condition at v0; a star with n edges has center
v1, a Dirichlet leaf v0 and free leaves v2..vn.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    AsymmetricDataError,
    EvenVertexCountError,
    InvalidSizeError,
    UnsupportedCombinationError,
)
from .graphs import VertexId


@dataclass(frozen=True)
class PathSpecParams:
    """Free-vertex masses m(v1..vF) and edge weights b(v0v1)..b(v_{F-1}vF)."""

    free_count: int
    masses: tuple[float, ...]
    weights: tuple[float, ...]
    p: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "masses", tuple(float(x) for x in self.masses))
        object.__setattr__(self, "weights", tuple(float(x) for x in self.weights))
        if self.free_count < 1:
            raise InvalidSizeError(f"free_count = {self.free_count} must be >= 1")
        if len(self.masses) != self.free_count or len(self.weights) != self.free_count:
            raise InvalidSizeError(
                f"need {self.free_count} masses and weights, got "
                f"{len(self.masses)} and {len(self.weights)}"
            )
        if any(m <= 0 for m in self.masses) or any(b <= 0 for b in self.weights):
            raise InvalidSizeError("masses and weights must be positive")


def path_torsion_values(masses: Sequence[float], weights: Sequence[float], p: float) -> np.ndarray:
    """tau(v_j) = sum_{l=1..j} ( (1/b_l) * sum_{k=l..F} m_k )^(1/(p-1)) for j = 1..F."""
    m = np.asarray(masses, dtype=float)
    b = np.asarray(weights, dtype=float)
    tails = np.cumsum(m[::-1])[::-1]
    return np.cumsum((tails / b) ** (1.0 / (p - 1.0)))


def path_torsion(params: PathSpecParams) -> dict[VertexId, float]:
    """Torsion function of the path, keyed v0..vF with tau(v0) = 0."""
    tau = path_torsion_values(params.masses, params.weights, params.p)
    out = {"v0": 0.0}
    for j, t in enumerate(tau, start=1):
        out[f"v{j}"] = float(t)
    return out


def path_rigidity(params: PathSpecParams) -> float:
    """T_p of the path: (sum_j tau(v_j) m_j)^(p-1)."""
    tau = path_torsion_values(params.masses, params.weights, params.p)
    return float(np.dot(tau, params.masses)) ** (params.p - 1.0)


def path_torsion_two_dirichlet_symmetric(
    k: int, masses: Sequence[float], weights: Sequence[float], p: float
) -> dict[VertexId, float]:
    """Torsion function of a mirror-symmetric path on 2k+1 vertices with
    Dirichlet conditions at both ends.

    ``masses`` holds the 2k-1 interior masses m(v1..v_{2k-1}) and ``weights``
    the 2k edge weights; both must satisfy the mirror conditions
    m(v_l) = m(v_{2k-l}) and b(v_{l-1}, v_l) = b(v_{2k-l}, v_{2k-l+1}).
    The values obey tau(v_j) = tau(v_{2k-j}) exactly.
    """
    if k < 1:
        raise InvalidSizeError(f"k = {k} must be >= 1")
    m = [float(x) for x in masses]
    b = [float(x) for x in weights]
    if len(m) + 2 != 2 * k + 1 or len(b) != 2 * k:
        if (len(m) + 2) % 2 == 0:
            raise EvenVertexCountError(
                f"{len(m)} interior masses imply an even total vertex count {len(m) + 2}"
            )
        raise InvalidSizeError(
            f"k = {k} needs {2 * k - 1} interior masses and {2 * k} weights, "
            f"got {len(m)} and {len(b)}"
        )
    for ell in range(1, k + 1):
        if m[ell - 1] != m[2 * k - ell - 1]:
            raise AsymmetricDataError(
                f"m(v{ell}) = {m[ell - 1]} but m(v{2 * k - ell}) = {m[2 * k - ell - 1]}"
            )
        if b[ell - 1] != b[2 * k - ell]:
            raise AsymmetricDataError(
                f"b(v{ell - 1}, v{ell}) = {b[ell - 1]} but "
                f"b(v{2 * k - ell}, v{2 * k - ell + 1}) = {b[2 * k - ell]}"
            )

    expo = 1.0 / (p - 1.0)
    out = {f"v{j}": 0.0 for j in (0, 2 * k)}
    acc = 0.0
    half: list[float] = []
    for j in range(1, k + 1):
        tail = sum(m[h - 1] for h in range(j, k)) + m[k - 1] / 2.0
        acc += (tail / b[j - 1]) ** expo
        half.append(acc)
    for j in range(1, k + 1):
        out[f"v{j}"] = half[j - 1]
        out[f"v{2 * k - j}"] = half[j - 1]
    return dict(sorted(out.items(), key=lambda kv: int(kv[0][1:])))


def star_torsion(
    n: int, masses: Sequence[float], weights: Sequence[float], p: float
) -> dict[VertexId, float]:
    """Torsion function of the star with n edges, Dirichlet leaf v0, center v1.

    ``masses`` holds m(v1..vn); ``weights`` holds b(v1,v0), b(v1,v2), ...,
    b(v1,vn).  tau(v1) = (sum_k m_k / b(v1,v0))^(1/(p-1)) and each free leaf
    adds (m_j / b(v1,vj))^(1/(p-1)) on top of the center value.
    """
    if n < 1:
        raise InvalidSizeError(f"star needs n >= 1 edges, got {n}")
    m = [float(x) for x in masses]
    b = [float(x) for x in weights]
    if len(m) != n or len(b) != n:
        raise InvalidSizeError(f"need {n} masses and {n} weights, got {len(m)} and {len(b)}")
    expo = 1.0 / (p - 1.0)
    center = (sum(m) / b[0]) ** expo
    out = {"v0": 0.0, "v1": center}
    for j in range(2, n + 1):
        out[f"v{j}"] = center + (m[j - 1] / b[j - 1]) ** expo
    return out


def star_rigidity(n: int, masses: Sequence[float], weights: Sequence[float], p: float) -> float:
    tau = star_torsion(n, masses, weights, p)
    m = [float(x) for x in masses]
    return float(sum(tau[f"v{j}"] * m[j - 1] for j in range(1, n + 1))) ** (p - 1.0)


def reference_values(kind: str, n: int, m_mode: str, p: float = 2.0):
    """Exact reference scalars for p = 2 paths and stars.

    kind 'path_T2' / 'path_lambda02' take n = F, the free vertex count;
    'star_T2' takes n = edge count with one Dirichlet leaf; 'star_lambda02'
    takes n = edge count with Dirichlet conditions on all leaves.  Rigidity
    values are exact integers; eigenvalues are floats.
    """
    if p != 2.0:
        raise UnsupportedCombinationError(f"closed forms are for p = 2, got p = {p}")
    if m_mode not in ("unit", "degree"):
        raise UnsupportedCombinationError(f"m_mode {m_mode!r} not in ('unit', 'degree')")
    if n < 1:
        raise InvalidSizeError(f"n = {n} must be >= 1")
    F = n
    if kind == "path_T2":
        if m_mode == "unit":
            return int(Fraction(F * (F + 1) * (2 * F + 1), 6))
        return int(Fraction(F * (2 * F - 1) * (2 * F + 1), 3))
    if kind == "star_T2":
        if m_mode == "unit":
            return n * n + n - 1
        # center mass n, free leaf masses 1: tau = (2n-1, 2n, ..., 2n),
        # so T2 = (2n-1) n + 2n (n-1) = 4n^2 - 3n
        return 4 * n * n - 3 * n
    if kind == "path_lambda02":
        if m_mode == "unit":
            return float(2.0 * (1.0 - np.cos(np.pi / (2 * F + 1))))
        return float(1.0 - np.cos(np.pi / (2 * F)))
    if kind == "star_lambda02":
        if m_mode == "unit":
            return float(n)
        return 1.0
    raise UnsupportedCombinationError(f"unknown kind {kind!r}")
