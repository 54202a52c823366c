"""Inequality and identity checks swept over whole graphs.

Every guaranteed relation between the exact invariants, the spectrum, and the
operator constructions is packaged as a named check producing
:class:`CheckReport` rows.  ``run_suite`` sweeps all checks over the example
families plus seeded random graphs and returns one deterministic summary;
``CHECK_MANIFEST`` names every check the sweep must cover, and an unknown or
uncovered check id is itself a failure.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import BadParameter, NotOrthogonal, ZeroFunction
from .families import FamilySpec, generate
from .graph import (
    WeightedGraph,
    build_graph,
    dirichlet_form,
    inner_product,
    q_form,
    set_measures,
    vertices_of,
)
from .invariants import (
    cheeger_constant_exact,
    cheeger_ratio,
    dual_cheeger_exact,
    dual_cheeger_ratio,
    h_via_r,
    is_bipartite,
    kappa_exact,
    kappa_pair,
    r_quantity,
)
from .kgraph import PSequence
from .reports import CheckReport, graph_fingerprint
from .spectral import (
    auxiliary_graph,
    coarea_check,
    hausdorff_asymmetry,
    p_psi_norm,
    rayleigh,
    signed_conjugation,
    spectrum,
)

__all__ = [
    "INEQUALITY_TOL",
    "IDENTITY_TOL",
    "CHECK_MANIFEST",
    "RandomGraphSpec",
    "SuiteConfig",
    "sample_graph",
    "tau_split",
    "check_cheeger_inequalities",
    "check_asymmetry_bound",
    "check_witness_functions",
    "check_plus_minus_split",
    "check_operator_partition",
    "check_global_invariants",
    "check_auxiliary",
    "graph_checks",
    "run_suite",
]

# One-sided relations may miss by this much before failing.
INEQUALITY_TOL = 1e-9
# Closed-form identities are matched to this, scaled by the target size.
IDENTITY_TOL = 1e-10
# A function counts as mean-free when <g, 1> is this small relative to
# the norms involved.
ORTHOGONALITY_TOL = 1e-9

# Check id -> the relation it asserts.  ``run_suite`` refuses a report whose
# id is missing here, and reports the manifest ids its sweep never produced.
CHECK_MANIFEST = {
    "cheeger_gap_lower": "1 - sqrt(1 - h^2) <= spectral gap",
    "cheeger_gap_upper": "spectral gap <= 2h on connected graphs",
    "dual_top_lower": "2 hbar <= top eigenvalue",
    "dual_top_upper": "top eigenvalue <= 1 + sqrt(1 - (1 - hbar)^2)",
    "asymmetry_kappa_bound": (
        "Hausdorff distance between the spectrum and its reflection at 1 "
        "is at most 2 kappa"
    ),
    "witness_cheeger_set": (
        "the step function across the Cheeger witness has Rayleigh quotient "
        "m(boundary S) (1/m(S) + 1/m(S^c))"
    ),
    "witness_disjoint_pair": (
        "the +1/-1 indicator of the best disjoint pair has Rayleigh quotient "
        "2 hbar(A,B) + h(A u B)"
    ),
    "witness_single_edge": (
        "opposite masses on one edge give Rayleigh quotient "
        "1 + 2 m(ab)/(m(a) + m(b))"
    ),
    "split_half_measure": (
        "both open sides of the half-measure threshold carry at most half "
        "the total measure"
    ),
    "split_disjoint_support": "the two split parts have disjoint supports",
    "split_norm_domination": "<g, g> <= |g_plus|^2 + |g_minus|^2 for mean-free g",
    "split_energy_domination": (
        "the Dirichlet energies of the split parts sum to at most the energy "
        "of g"
    ),
    "coarea_level_measure": (
        "superlevel-set measures integrate to the weighted square norm"
    ),
    "coarea_level_boundary": (
        "superlevel-set boundaries integrate to the total variation of g^2"
    ),
    "conjugation_identity": (
        "sign conjugation of the Laplacian equals 2I - Laplacian - 2 P_blocked"
    ),
    "conjugation_spectrum": "the sign-conjugated operator has the same spectrum",
    "p_psi_kappa": (
        "the operator norm of the blocked walk operator is at most kappa(A,B)"
    ),
    "r_chain_lower": "min(R_A, R_B) <= 1 - pair ratio of a partition",
    "r_chain_upper": "1 - pair ratio of a partition <= max(R_A, R_B)",
    "r_chain_kappa": "max(R_A, R_B) <= kappa(A, B)",
    "r_ratio_complement": (
        "the internal fraction plus the boundary ratio of a set equals 1"
    ),
    "partition_cheeger_equality": (
        "the partition route reproduces the Cheeger constant"
    ),
    "dual_kappa_complement": "hbar + kappa >= 1",
    "trace_dimension": "the Laplacian eigenvalues sum to the vertex count",
    "zero_multiplicity": (
        "the zero eigenvalue multiplicity equals the component count"
    ),
    "bipartite_kappa": "kappa vanishes exactly on bipartite graphs",
    "auxiliary_norm": "the companion graph preserves the weighted norm",
    "auxiliary_energy": (
        "the companion Dirichlet energy is at most the (2I - Laplacian)-energy"
    ),
}


# -------------------------------------------------------------- random graphs


@dataclass(frozen=True)
class RandomGraphSpec:
    """Recipe for one connected random test graph.

    Edges are kept independently with ``edge_probability``; weights are drawn
    log-uniformly from ``[weight_low, weight_high]`` to exercise several
    decades of dynamic range.  Draws repeat until the graph is connected.
    """

    n: int
    edge_probability: float = 0.5
    weight_low: float = 1e-3
    weight_high: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise BadParameter("random graphs need at least two vertices")
        if not 0.0 < self.edge_probability <= 1.0:
            raise BadParameter(
                f"edge probability {self.edge_probability} outside (0, 1]"
            )
        if not 0.0 < self.weight_low <= self.weight_high:
            raise BadParameter(
                f"weight range [{self.weight_low}, {self.weight_high}] is empty"
            )


def sample_graph(spec: RandomGraphSpec) -> WeightedGraph:
    """Draw the graph described by ``spec`` (deterministic in the seed)."""
    rng = np.random.default_rng(spec.seed)
    lo = math.log10(spec.weight_low)
    hi = math.log10(spec.weight_high)
    while True:
        pairs = [
            (u, v)
            for u in range(spec.n)
            for v in range(u + 1, spec.n)
            if rng.random() < spec.edge_probability
        ]
        covered = {x for pair in pairs for x in pair}
        if len(covered) < spec.n:
            continue
        edges = [(u, v, float(10.0 ** rng.uniform(lo, hi))) for u, v in pairs]
        graph = build_graph(edges)
        if graph.is_connected():
            return graph


def _indicator(n: int, mask: int) -> np.ndarray:
    out = np.zeros(n, dtype=bool)
    for v in vertices_of(mask):
        out[v] = True
    return out


# ----------------------------------------------------- spectral-side checks


def check_cheeger_inequalities(
    graph: WeightedGraph,
    max_n: int | None = None,
    seed: int | None = None,
) -> tuple[CheckReport, CheckReport, CheckReport, CheckReport]:
    """Both two-sided isoperimetric bounds, one report per side.

    The spectral gap sits between ``1 - sqrt(1 - h^2)`` and ``2h``; the top
    eigenvalue between ``2 hbar`` and ``1 + sqrt(1 - (1 - hbar)^2)``.
    """
    h = cheeger_constant_exact(graph, max_n).value
    hbar = dual_cheeger_exact(graph, max_n).value
    spec = spectrum(graph)
    gap = spec.gap
    top = spec.top
    fp = graph_fingerprint(graph, seed)
    gap_lower = 1.0 - math.sqrt(max(0.0, 1.0 - h * h))
    top_upper = 1.0 + math.sqrt(max(0.0, 1.0 - (1.0 - hbar) ** 2))
    return (
        CheckReport.inequality("cheeger_gap_lower", gap_lower, gap, INEQUALITY_TOL, fp),
        CheckReport.inequality("cheeger_gap_upper", gap, 2.0 * h, INEQUALITY_TOL, fp),
        CheckReport.inequality("dual_top_lower", 2.0 * hbar, top, INEQUALITY_TOL, fp),
        CheckReport.inequality("dual_top_upper", top, top_upper, INEQUALITY_TOL, fp),
    )


def check_asymmetry_bound(
    graph: WeightedGraph,
    max_n: int | None = None,
    seed: int | None = None,
) -> CheckReport:
    """Reflection asymmetry of the spectrum against the 2-kappa bound."""
    distance = hausdorff_asymmetry(spectrum(graph).values)
    kappa = kappa_exact(graph, max_n).value
    fp = graph_fingerprint(graph, seed)
    return CheckReport.inequality(
        "asymmetry_kappa_bound", distance, 2.0 * kappa, INEQUALITY_TOL, fp
    )


def check_witness_functions(
    graph: WeightedGraph,
    max_n: int | None = None,
    seed: int | None = None,
) -> list[CheckReport]:
    """Closed-form Rayleigh quotients of the three canonical test functions.

    The set function steps between ``1/m(S)`` and ``-1/m(S^c)`` across the
    Cheeger witness; the pair function is +1/-1 on the best disjoint pair and
    zero elsewhere; the edge function puts opposite masses on the endpoints
    of the first edge.
    """
    fp = graph_fingerprint(graph, seed)
    m = graph.vertex_measure
    total = graph.total_measure
    out = []

    best = cheeger_constant_exact(graph, max_n)
    inside = _indicator(graph.n, best.witness)
    m_set, boundary, _ = set_measures(graph, best.witness)
    m_rest = total - m_set
    f_set = np.where(inside, 1.0 / m_set, -1.0 / m_rest)
    target = boundary * (1.0 / m_set + 1.0 / m_rest)
    out.append(
        CheckReport.identity(
            "witness_cheeger_set",
            rayleigh(graph, f_set),
            target,
            IDENTITY_TOL * max(1.0, target),
            fp,
        )
    )

    pair = dual_cheeger_exact(graph, max_n)
    mask_a, mask_b = pair.witness
    f_pair = _indicator(graph.n, mask_a).astype(float)
    f_pair -= _indicator(graph.n, mask_b).astype(float)
    target = 2.0 * dual_cheeger_ratio(graph, mask_a, mask_b) + cheeger_ratio(
        graph, mask_a | mask_b
    )
    out.append(
        CheckReport.identity(
            "witness_disjoint_pair",
            rayleigh(graph, f_pair),
            target,
            IDENTITY_TOL * max(1.0, target),
            fp,
        )
    )

    a, b, w = graph.edges[0]
    f_edge = np.zeros(graph.n)
    f_edge[a] = m[b]
    f_edge[b] = -m[a]
    target = 1.0 + 2.0 * w / (m[a] + m[b])
    out.append(
        CheckReport.identity(
            "witness_single_edge",
            rayleigh(graph, f_edge),
            target,
            IDENTITY_TOL * max(1.0, target),
            fp,
        )
    )
    return out


# --------------------------------------------------------- plus/minus split


def tau_split(
    graph: WeightedGraph, g: np.ndarray
) -> tuple[float, np.ndarray, np.ndarray]:
    """Split ``g`` at the half-measure threshold.

    ``tau`` is the largest ``t`` whose strictly-below measure stays under
    half the total — computed exactly as the smallest value of ``g`` at which
    the sorted cumulative measure reaches ``M/2``.  Returns ``(tau, g_plus,
    g_minus)`` with ``g - tau = g_plus - g_minus`` and disjoint supports.
    """
    arr = np.asarray(g, dtype=float)
    order = np.argsort(arr, kind="stable")
    cum = np.cumsum(graph.vertex_measure[order])
    k = int(np.searchsorted(cum, graph.total_measure / 2.0))
    tau = float(arr[order[min(k, graph.n - 1)]])
    g_plus = np.maximum(arr - tau, 0.0)
    g_minus = np.maximum(tau - arr, 0.0)
    return tau, g_plus, g_minus


def check_plus_minus_split(
    graph: WeightedGraph,
    g: np.ndarray,
    seed: int | None = None,
) -> list[CheckReport]:
    """Threshold-split relations for a nonzero mean-free function.

    Four reports: the half-measure property of the threshold, disjointness of
    the parts, and the norm and energy domination relations.
    """
    arr = np.asarray(g, dtype=float)
    norm = inner_product(graph, arr, arr)
    if norm == 0.0:
        raise ZeroFunction("split of the zero function")
    total = graph.total_measure
    mean = float(math.fsum(graph.vertex_measure * arr))
    if abs(mean) > ORTHOGONALITY_TOL * max(1.0, math.sqrt(norm * total)):
        raise NotOrthogonal(f"<g, 1> = {mean} is not negligible")

    tau, g_plus, g_minus = tau_split(graph, arr)
    fp = graph_fingerprint(graph, seed)
    m = graph.vertex_measure
    below = float(m[arr < tau].sum())
    above = float(m[arr > tau].sum())
    overlap = float(np.max(g_plus * g_minus))
    norm_parts = inner_product(graph, g_plus, g_plus) + inner_product(
        graph, g_minus, g_minus
    )
    energy = dirichlet_form(graph, arr)
    energy_parts = dirichlet_form(graph, g_plus) + dirichlet_form(graph, g_minus)
    return [
        CheckReport.inequality(
            "split_half_measure",
            max(below, above),
            total / 2.0,
            INEQUALITY_TOL * max(1.0, total),
            fp,
        ),
        CheckReport.identity("split_disjoint_support", overlap, 0.0, 0.0, fp),
        CheckReport.inequality(
            "split_norm_domination",
            norm,
            norm_parts,
            INEQUALITY_TOL * max(1.0, norm),
            fp,
        ),
        CheckReport.inequality(
            "split_energy_domination",
            energy_parts,
            energy,
            INEQUALITY_TOL * max(1.0, energy),
            fp,
        ),
    ]


# --------------------------------------------------- partition-based checks


def check_operator_partition(
    graph: WeightedGraph,
    mask_a: int,
    seed: int | None = None,
) -> list[CheckReport]:
    """Signed-conjugation and blocked-operator relations for one partition."""
    fp = graph_fingerprint(graph, seed)
    op = signed_conjugation(graph, mask_a)
    kappa = kappa_pair(graph, op.mask_a, op.mask_b)
    blocked_norm = p_psi_norm(graph, op.mask_a)
    r_a = r_quantity(graph, op.mask_a)
    r_b = r_quantity(graph, op.mask_b)
    pair_ratio = dual_cheeger_ratio(graph, op.mask_a, op.mask_b)
    return [
        CheckReport.identity(
            "conjugation_identity", op.identity_residual, 0.0, 1e-12, fp
        ),
        CheckReport.identity(
            "conjugation_spectrum", op.spectrum_deviation, 0.0, 1e-9, fp
        ),
        CheckReport.inequality("p_psi_kappa", blocked_norm, kappa, INEQUALITY_TOL, fp),
        CheckReport.inequality(
            "r_chain_lower", min(r_a, r_b), 1.0 - pair_ratio, INEQUALITY_TOL, fp
        ),
        CheckReport.inequality(
            "r_chain_upper", 1.0 - pair_ratio, max(r_a, r_b), INEQUALITY_TOL, fp
        ),
        CheckReport.inequality(
            "r_chain_kappa", max(r_a, r_b), kappa, INEQUALITY_TOL, fp
        ),
    ]


def check_global_invariants(
    graph: WeightedGraph,
    max_n: int | None = None,
    seed: int | None = None,
) -> list[CheckReport]:
    """Whole-graph identities tying the invariants to the spectrum."""
    fp = graph_fingerprint(graph, seed)
    spec = spectrum(graph)
    hbar = dual_cheeger_exact(graph, max_n)
    kappa = kappa_exact(graph, max_n)
    best = cheeger_constant_exact(graph, max_n)
    bipartite, _ = is_bipartite(graph)
    zero_count = int(np.count_nonzero(spec.values <= spec.zero_threshold))
    return [
        CheckReport.inequality(
            "dual_kappa_complement",
            1.0,
            hbar.value + kappa.value,
            INEQUALITY_TOL,
            fp,
        ),
        CheckReport.identity(
            "partition_cheeger_equality",
            h_via_r(graph, max_n),
            best.value,
            1e-12,
            fp,
        ),
        CheckReport.identity(
            "r_ratio_complement",
            r_quantity(graph, best.witness) + cheeger_ratio(graph, best.witness),
            1.0,
            1e-12,
            fp,
        ),
        CheckReport.identity(
            "trace_dimension",
            float(np.sum(spec.values)),
            float(graph.n),
            INEQUALITY_TOL * max(1.0, float(graph.n)),
            fp,
        ),
        CheckReport.identity(
            "zero_multiplicity",
            float(zero_count),
            float(spec.component_count),
            0.0,
            fp,
        ),
        CheckReport.identity(
            "bipartite_kappa",
            float(kappa.value == 0.0),
            float(bipartite),
            0.0,
            fp,
        ),
    ]


def check_auxiliary(
    graph: WeightedGraph,
    f: np.ndarray,
    seed: int | None = None,
) -> list[CheckReport]:
    """Norm preservation and energy domination of the companion graph."""
    fp = graph_fingerprint(graph, seed)
    arr = np.asarray(f, dtype=float)
    aux = auxiliary_graph(graph, arr)
    norm = inner_product(graph, arr, arr)
    norm_aux = inner_product(aux.graph, aux.values, aux.values)
    energy = q_form(graph, arr)
    energy_aux = dirichlet_form(aux.graph, aux.values)
    return [
        CheckReport.identity(
            "auxiliary_norm", norm_aux, norm, IDENTITY_TOL * max(1.0, norm), fp
        ),
        CheckReport.inequality(
            "auxiliary_energy",
            energy_aux,
            energy,
            IDENTITY_TOL * max(1.0, energy),
            fp,
        ),
    ]


# -------------------------------------------------------------- full sweeps


def graph_checks(
    graph: WeightedGraph,
    max_n: int | None = None,
    seed: int | None = None,
    rng: np.random.Generator | None = None,
) -> list[CheckReport]:
    """Every check applicable to one connected graph, as a flat list.

    Function-based checks run on the gap and top eigenfunctions; with ``rng``
    they additionally run on one random mean-free function.
    """
    reports = list(check_cheeger_inequalities(graph, max_n=max_n, seed=seed))
    reports.append(check_asymmetry_bound(graph, max_n=max_n, seed=seed))
    reports += check_witness_functions(graph, max_n=max_n, seed=seed)
    reports += check_global_invariants(graph, max_n=max_n, seed=seed)
    partition = kappa_exact(graph, max_n).witness
    reports += check_operator_partition(graph, partition[0], seed=seed)

    eig = spectrum(graph, eigenvectors=True)
    gap_index = int(np.argmax(eig.values > eig.zero_threshold))
    g_gap = eig.eigenvectors[:, gap_index]
    g_top = eig.eigenvectors[:, -1]
    reports += check_plus_minus_split(graph, g_gap, seed=seed)
    reports += coarea_check(graph, g_gap)
    reports += check_auxiliary(graph, g_top, seed=seed)
    if rng is not None:
        g = rng.standard_normal(graph.n)
        g -= math.fsum(graph.vertex_measure * g) / graph.total_measure
        reports += check_plus_minus_split(graph, g, seed=seed)
        reports += coarea_check(graph, g)
        reports += check_auxiliary(graph, g, seed=seed)
    return reports


@dataclass(frozen=True)
class SuiteConfig:
    """Sweep parameters for :func:`run_suite`; defaults match the CI gate."""

    seeds: int = 200
    n_min: int = 4
    n_max: int = 12
    edge_probability: float = 0.5
    base_seed: int = 0
    max_n: int | None = None
    include_families: bool = True

    def __post_init__(self):
        if self.seeds < 0:
            raise BadParameter("seed count must be nonnegative")
        if not 2 <= self.n_min <= self.n_max:
            raise BadParameter(
                f"size range [{self.n_min}, {self.n_max}] is not usable"
            )


def _family_instances() -> list[tuple[str, WeightedGraph]]:
    dyadic = PSequence((0.5, 0.25), 0.5)
    specs = [
        FamilySpec("complete_unit", 6),
        FamilySpec("cycle", 6),
        FamilySpec("cycle", 7),
        FamilySpec("path", 6),
        FamilySpec("halfline_m3", 6),
        FamilySpec("halfline_m4", 6, r=0.5),
        FamilySpec("ladder_L", 5, r=0.5, rho=0.5),
        FamilySpec("ladder_L", 5, r=0.5, rho=0.3),
        FamilySpec("K_m1", 8, p=dyadic),
        FamilySpec("K_m2", 8),
    ]
    return [(f"{spec.family}/{spec.size}", generate(spec)) for spec in specs]


def run_suite(config: SuiteConfig = SuiteConfig()) -> dict:
    """Sweep every check over family and seeded random graphs.

    The summary aggregates per check id (count, failures, minimum slack and
    the instance attaining it) and lists every failing report in full.  It is
    a pure function of the config.  A report with an id missing from
    ``CHECK_MANIFEST`` is a hard error; manifest ids the sweep never produced
    are listed and fail the suite.
    """
    instances: list[tuple[str, WeightedGraph, int | None, np.random.Generator | None]]
    instances = []
    if config.include_families:
        for name, graph in _family_instances():
            instances.append((name, graph, None, None))
    span = config.n_max - config.n_min + 1
    for i in range(config.seeds):
        seed = config.base_seed + i
        spec = RandomGraphSpec(
            n=config.n_min + i % span,
            edge_probability=config.edge_probability,
            seed=seed,
        )
        rng = np.random.default_rng((seed, 0x5EED))
        instances.append((f"random/{spec.n}", sample_graph(spec), seed, rng))

    stats: dict[str, dict] = {}
    failures: list[dict] = []
    kappa_max = 0.0
    for name, graph, seed, rng in instances:
        kappa_max = max(kappa_max, kappa_exact(graph, config.max_n).value)
        for report in graph_checks(graph, max_n=config.max_n, seed=seed, rng=rng):
            if report.check_id not in CHECK_MANIFEST:
                raise KeyError(
                    f"check id {report.check_id!r} is not in the manifest"
                )
            entry = stats.setdefault(
                report.check_id,
                {"count": 0, "failures": 0, "min_slack": math.inf, "worst": None},
            )
            entry["count"] += 1
            if not report.passed:
                entry["failures"] += 1
                failures.append({"instance": name, **report.to_payload()})
            if report.slack < entry["min_slack"]:
                entry["min_slack"] = report.slack
                entry["worst"] = {
                    "instance": name,
                    "lhs": report.lhs,
                    "rhs": report.rhs,
                    "slack": report.slack,
                    "fingerprint": report.fingerprint,
                }

    uncovered = sorted(set(CHECK_MANIFEST) - set(stats))
    return {
        "config": asdict(config),
        "instances": len(instances),
        "observed_kappa_max": kappa_max,
        "checks": {key: stats[key] for key in sorted(stats)},
        "failures": failures,
        "uncovered_checks": uncovered,
        "ok": not failures and not uncovered,
    }
