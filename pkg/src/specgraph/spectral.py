"""Dense spectral computations for the normalized Laplacian.

The Laplacian is conjugate to the symmetric matrix
``N = D^{-1/2} W D^{-1/2}`` (``D`` the diagonal of vertex measures), so all
eigensolves go through a symmetric eigensolver and are transformed back.  The
spectrum always lies in ``[0, 2]``; tiny excursions from rounding are clamped,
anything larger is a hard error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptySet, EmptySpectrum, NumericalFailure, ZeroFunction
from .graph import (
    WeightedGraph,
    dirichlet_form,
    inner_product,
    q_form,
    vertices_of,
)
from .reports import CheckReport, graph_fingerprint

__all__ = [
    "ZERO_THRESHOLD",
    "CLAMP_TOL",
    "Spectrum",
    "SignedBlockOperator",
    "AuxiliaryGraph",
    "weight_matrix",
    "random_walk_matrix",
    "laplacian_matrix",
    "symmetric_conjugate",
    "spectrum",
    "spectral_gap",
    "lambda_top",
    "rayleigh",
    "hausdorff_asymmetry",
    "signed_conjugation",
    "p_psi_norm",
    "coarea_check",
    "auxiliary_graph",
]

# Eigenvalues below this are treated as the bottom of the spectrum.
ZERO_THRESHOLD = 1e-9
# Width of the clamp window around the exact range [0, 2].
CLAMP_TOL = 1e-9
# The two Hausdorff-asymmetry routes must agree this tightly.
_ROUTE_TOL = 1e-12


def weight_matrix(graph: WeightedGraph) -> np.ndarray:
    w = np.zeros((graph.n, graph.n))
    for u, v, weight in graph.edges:
        w[u, v] = weight
        w[v, u] = weight
    return w


def random_walk_matrix(graph: WeightedGraph) -> np.ndarray:
    """Row-stochastic matrix ``P[v, u] = m(vu) / m(v)``."""
    return weight_matrix(graph) / graph.vertex_measure[:, None]


def laplacian_matrix(graph: WeightedGraph) -> np.ndarray:
    return np.eye(graph.n) - random_walk_matrix(graph)


def symmetric_conjugate(graph: WeightedGraph) -> np.ndarray:
    """``D^{-1/2} W D^{-1/2}``, symmetric and similar to the walk matrix."""
    scale = 1.0 / np.sqrt(graph.vertex_measure)
    return weight_matrix(graph) * scale[:, None] * scale[None, :]


@dataclass
class Spectrum:
    """Eigenvalues of the Laplacian, ascending, clamped into ``[0, 2]``."""

    values: np.ndarray
    zero_threshold: float
    component_count: int
    eigenvectors: np.ndarray | None = None
    max_residual: float | None = None

    @property
    def gap(self) -> float:
        """Smallest eigenvalue above the zero threshold."""
        above = self.values[self.values > self.zero_threshold]
        if len(above) == 0:
            raise EmptySpectrum("no eigenvalue above the zero threshold")
        return float(above[0])

    @property
    def top(self) -> float:
        return float(self.values[-1])

    def to_payload(self) -> list[float]:
        return [float(x) for x in self.values]


def _clamp(values: np.ndarray) -> np.ndarray:
    low = values.min(initial=0.0)
    high = values.max(initial=0.0)
    if low < -CLAMP_TOL or high > 2.0 + CLAMP_TOL:
        raise NumericalFailure(
            f"eigenvalue outside [{-CLAMP_TOL}, {2 + CLAMP_TOL}]: range "
            f"[{low}, {high}]"
        )
    out = values.copy()
    out[out < 0.0] = 0.0
    out[out > 2.0] = 2.0
    return out


def spectrum(graph: WeightedGraph, eigenvectors: bool = False) -> Spectrum:
    """Full Laplacian spectrum via the symmetric conjugate.

    With ``eigenvectors`` the returned basis consists of Laplacian
    eigenfunctions (columns, aligned with ``values``), obtained from the
    symmetric eigenbasis by the ``D^{-1/2}`` transform; the worst relative
    eigen-residual is computed and must stay within the zero threshold.
    """
    if graph.n == 0:
        raise EmptySpectrum("graph has no vertices")
    sym = symmetric_conjugate(graph)
    if eigenvectors:
        nu, basis = np.linalg.eigh(sym)
        order = slice(None, None, -1)
        values = _clamp(1.0 - nu[order])
        funcs = (basis / np.sqrt(graph.vertex_measure)[:, None])[:, order]
        lap = laplacian_matrix(graph)
        worst = 0.0
        m = graph.vertex_measure
        for k in range(graph.n):
            f = funcs[:, k]
            err = lap @ f - values[k] * f
            rel = math.sqrt(float(m @ (err * err))) / math.sqrt(float(m @ (f * f)))
            worst = max(worst, rel)
        if worst > ZERO_THRESHOLD:
            raise NumericalFailure(f"eigenpair residual {worst} above threshold")
        return Spectrum(values, ZERO_THRESHOLD, graph.component_count, funcs, worst)
    nu = np.linalg.eigvalsh(sym)
    values = _clamp(1.0 - nu[::-1])
    return Spectrum(values, ZERO_THRESHOLD, graph.component_count)


def spectral_gap(graph: WeightedGraph) -> float:
    return spectrum(graph).gap


def lambda_top(graph: WeightedGraph) -> float:
    return spectrum(graph).top


def rayleigh(graph: WeightedGraph, f: Sequence[float] | np.ndarray) -> float:
    """Rayleigh quotient ``<Delta f, f> / <f, f>`` via the edge-sum form."""
    norm = inner_product(graph, f, f)
    if norm == 0.0:
        raise ZeroFunction("Rayleigh quotient of the zero function")
    return dirichlet_form(graph, f) / norm


# ------------------------------------------------------- Hausdorff asymmetry


def _sup_distance(points: np.ndarray, target: np.ndarray) -> float:
    """sup over ``points`` of the distance to the finite set ``target``."""
    idx = np.searchsorted(target, points)
    left = np.where(idx > 0, np.abs(points - target[np.maximum(idx - 1, 0)]), np.inf)
    right = np.where(
        idx < len(target),
        np.abs(target[np.minimum(idx, len(target) - 1)] - points),
        np.inf,
    )
    return float(np.minimum(left, right).max())


def hausdorff_asymmetry(values: Sequence[float] | np.ndarray) -> float:
    """Hausdorff distance between the spectrum and its reflection ``2 - x``.

    Computed twice — as the full two-sided Hausdorff distance, and as the
    one-sided sup over reflected points (sufficient because the reflection is
    an isometric involution) — and the routes must agree to 1e-12.
    """
    sigma = np.sort(np.asarray(values, dtype=float))
    if len(sigma) == 0:
        raise EmptySpectrum("asymmetry of an empty spectrum")
    reflected = np.sort(2.0 - sigma)
    full = max(_sup_distance(sigma, reflected), _sup_distance(reflected, sigma))
    one_sided = _sup_distance(reflected, sigma)
    if abs(full - one_sided) > _ROUTE_TOL:
        raise NumericalFailure(
            f"asymmetry routes disagree: {full} vs {one_sided}"
        )
    return full


# ------------------------------------------------------- signed conjugation


@dataclass
class SignedBlockOperator:
    """Outcome of conjugating the Laplacian by a partition sign function.

    ``signs`` is +1 on the first class and -1 on the second; ``p_psi`` is the
    blocked walk operator (within-class transitions only).  The conjugation
    identity ``T^{-1} Delta T = 2I - Delta - 2 P_psi`` is verified entrywise,
    and the conjugated operator's spectrum is checked against the graph's.
    """

    mask_a: int
    mask_b: int
    signs: np.ndarray
    p_psi: np.ndarray
    identity_residual: float
    spectrum_deviation: float


def _partition_masks(graph: WeightedGraph, mask_a: int) -> tuple[int, int]:
    full = (1 << graph.n) - 1
    mask_a &= full
    mask_b = full ^ mask_a
    if mask_a == 0 or mask_b == 0:
        raise EmptySet("partition classes must both be nonempty")
    return mask_a, mask_b


def _blocked(matrix: np.ndarray, side: np.ndarray) -> np.ndarray:
    """Zero out all entries that cross between the two classes."""
    same = side[:, None] == side[None, :]
    return np.where(same, matrix, 0.0)


def signed_conjugation(graph: WeightedGraph, mask_a: int) -> SignedBlockOperator:
    mask_a, mask_b = _partition_masks(graph, mask_a)
    side = np.zeros(graph.n, dtype=bool)
    for v in vertices_of(mask_a):
        side[v] = True
    signs = np.where(side, 1.0, -1.0)

    walk = random_walk_matrix(graph)
    lap = np.eye(graph.n) - walk
    p_psi = _blocked(walk, side)
    conjugated = lap * signs[None, :] / signs[:, None]
    target = 2.0 * np.eye(graph.n) - lap - 2.0 * p_psi
    identity_residual = float(np.abs(conjugated - target).max())
    if identity_residual > 1e-12:
        raise NumericalFailure(
            f"conjugation identity violated by {identity_residual}"
        )

    # Independent spectral route: the conjugated operator symmetrizes to
    # T (I - N) T, whose eigenvalues must reproduce the Laplacian spectrum.
    sym = np.eye(graph.n) - symmetric_conjugate(graph)
    sym_conj = sym * signs[:, None] * signs[None, :]
    conj_values = _clamp(np.sort(np.linalg.eigvalsh(sym_conj)))
    deviation = float(np.abs(conj_values - spectrum(graph).values).max())
    if deviation > ZERO_THRESHOLD:
        raise NumericalFailure(f"conjugated spectrum deviates by {deviation}")

    return SignedBlockOperator(
        mask_a, mask_b, signs, p_psi, identity_residual, deviation
    )


def p_psi_norm(graph: WeightedGraph, mask_a: int) -> float:
    """Operator norm of the blocked walk operator on ``L^2(m)``."""
    mask_a, _ = _partition_masks(graph, mask_a)
    side = np.zeros(graph.n, dtype=bool)
    for v in vertices_of(mask_a):
        side[v] = True
    blocked_sym = _blocked(symmetric_conjugate(graph), side)
    return float(np.abs(np.linalg.eigvalsh(blocked_sym)).max())


# ------------------------------------------------------------------- co-area


def coarea_check(
    graph: WeightedGraph, f: Sequence[float] | np.ndarray
) -> tuple[CheckReport, CheckReport]:
    """Both level-set identities for ``f^2``, as exact finite sums.

    (a) the integral of ``m({f^2 > t})`` equals ``sum m(v) f(v)^2``;
    (b) the integral of ``m(boundary {f^2 > t})`` equals
        ``sum m(uv) |f(u)^2 - f(v)^2|``.
    """
    arr = np.asarray(f, dtype=float)
    g = arr * arr
    fp = graph_fingerprint(graph)
    levels = np.concatenate(([0.0], np.unique(g)))
    measure_integral = 0.0
    boundary_integral = 0.0
    for a, b in zip(levels[:-1], levels[1:]):
        if b == a:
            continue
        above = int(
            sum(1 << v for v in range(graph.n) if g[v] > a)
        )
        if above == 0:
            continue
        m_above = float(sum(graph.vertex_measure[v] for v in vertices_of(above)))
        cut = sum(
            w
            for u, v, w in graph.edges
            if ((above >> u) & 1) != ((above >> v) & 1)
        )
        measure_integral += (b - a) * m_above
        boundary_integral += (b - a) * cut

    norm = inner_product(graph, arr, arr)
    variation = float(
        math.fsum(w * abs(g[u] - g[v]) for u, v, w in graph.edges)
    )
    tol_a = 1e-10 * max(1.0, abs(norm))
    tol_b = 1e-10 * max(1.0, abs(variation))
    return (
        CheckReport.identity("coarea_level_measure", measure_integral, norm, tol_a, fp),
        CheckReport.identity(
            "coarea_level_boundary", boundary_integral, variation, tol_b, fp
        ),
    )


# ----------------------------------------------------------- auxiliary graph


@dataclass
class AuxiliaryGraph:
    """Sign-splitting companion graph of ``(G, f)``.

    Every vertex that shares an edge with a same-sign neighbor gains a mirror
    vertex; each same-sign edge ``uv`` is replaced by the pair ``u v'`` and
    ``u' v``.  The companion function takes ``|f|`` on original vertices and 0
    on mirrors, preserving the norm while the Dirichlet energy drops below the
    original's ``(2I - Delta)``-energy.
    """

    graph: WeightedGraph
    values: np.ndarray
    mirror: dict[int, int]


def auxiliary_graph(
    graph: WeightedGraph, f: Sequence[float] | np.ndarray
) -> AuxiliaryGraph:
    arr = np.asarray(f, dtype=float)
    needs_mirror = sorted(
        {
            x
            for u, v, _ in graph.edges
            if arr[u] * arr[v] > 0.0
            for x in (u, v)
        }
    )
    mirror = {v: graph.n + i for i, v in enumerate(needs_mirror)}
    edges = []
    for u, v, w in graph.edges:
        if arr[u] * arr[v] > 0.0:
            edges.append((u, mirror[v], w))
            edges.append((mirror[u], v, w))
        else:
            edges.append((u, v, w))
    aux = WeightedGraph(edges)
    values = np.zeros(aux.n)
    values[: graph.n] = np.abs(arr)

    # Guaranteed relations: equal norms, and the companion's Dirichlet energy
    # never exceeds the original (2I - Delta)-energy.  Violations beyond
    # rounding mean a construction bug, so they are fatal.
    norm_orig = inner_product(graph, arr, arr)
    norm_aux = inner_product(aux, values, values)
    if abs(norm_orig - norm_aux) > 1e-10 * max(1.0, norm_orig):
        raise NumericalFailure("companion graph does not preserve the norm")
    energy_orig = q_form(graph, arr)
    energy_aux = dirichlet_form(aux, values)
    if energy_aux > energy_orig + 1e-10 * max(1.0, energy_orig):
        raise NumericalFailure("companion Dirichlet energy exceeds the Q-form")

    return AuxiliaryGraph(aux, values, mirror)
