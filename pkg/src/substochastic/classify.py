"""Transience/recurrence verdicts with machine-checkable evidence.

An irreducible nonnegative matrix M is transient exactly when some positive
vector xi satisfies M xi <= lambda(M) xi entrywise with strict inequality at
one entry.  For a family presented as nested truncations, certificates found
on a truncation prove nothing about the infinite matrix (mass leaks at the
boundary), so only presentation-level certificates (e.g. the all-ones vector
for a declared truthly substochastic presentation with lambda = 1) earn the
"certified" confidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .digraph import Tag, WeightedDigraph, classify_weighting
from .errors import MetadataError
from .families import FamilyFacts, TruncationFamily, truncate
from .rational import solve_exact
from .spectral import perron_ladder

TRANSIENT = "transient"
RECURRENT = "recurrent"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class PruittVector:
    xi: tuple | str  # explicit entries, or "ones" for the all-ones presentation vector
    strict_vertex: int
    radius: object
    exact: bool


@dataclass(frozen=True)
class DivergingSeries:
    vertex: int
    truncation_order: int
    partial_sums: tuple[float, ...]
    growth_ratio: float


@dataclass(frozen=True)
class CyrStructural:
    sct_size: object
    l_max: object


@dataclass(frozen=True)
class RecurrenceVerdict:
    verdict: str
    evidence: object
    confidence: str | None
    notes: tuple[str, ...] = ()


# ---------------------------------------------------------------------------
# Pruitt certificates and similarity scaling
# ---------------------------------------------------------------------------


def verify_pruitt(d: WeightedDigraph, xi: Sequence, lam) -> tuple[bool, int | None]:
    """Check A xi <= lam xi entrywise with at least one strict row."""
    if len(xi) != d.order or any(not x > 0 for x in xi):
        return False, None
    strict = None
    for v in range(d.order):
        row = sum((w * xi[u] for u, w in d.adjacency[v].items()), start=0)
        bound = lam * xi[v]
        if row > bound:
            return False, None
        if row < bound and strict is None:
            strict = v
    return strict is not None, strict


def pruitt_certificate(d: WeightedDigraph, lam) -> list | None:
    """A positive xi with A xi <= lam xi, strict somewhere, or None.

    Tries the all-ones vector first (exactly the substochastic row-sum test),
    then the resolvent vector (lam I - A)^{-1} 1, which works whenever
    lam exceeds the Perron root.  Absence on a finite truncation is not a
    disproof for the family it came from.
    """
    if not lam > 0:
        raise ValueError("lambda must be positive")
    ones = [Fraction(1) if d.is_exact else 1.0] * d.order
    ok, _strict = verify_pruitt(d, ones, lam)
    if ok:
        return ones
    if d.is_exact and isinstance(lam, (int, Fraction)):
        rows = d.rows_exact()
        m = [
            [(Fraction(lam) if i == j else Fraction(0)) - rows[i][j] for j in range(d.order)]
            for i in range(d.order)
        ]
        try:
            xi = solve_exact(m, [Fraction(1)] * d.order)
        except ZeroDivisionError:
            return None
    else:
        m = float(lam) * np.eye(d.order) - d.to_numpy()
        try:
            xi = list(np.linalg.solve(m, np.ones(d.order)))
        except np.linalg.LinAlgError:
            return None
    ok, _strict = verify_pruitt(d, xi, lam)
    return list(xi) if ok else None


def similarity_scale(d: WeightedDigraph, xi: Sequence, lam) -> WeightedDigraph:
    """Conjugate by diag(xi) and scale by 1/lam: w'(u,v) = w(u,v) xi(v) / (lam xi(u)).

    With a Pruitt certificate xi this lands in the truthly substochastic
    class, and the Perron root divides by lam.
    """
    if not lam > 0:
        raise ValueError("lambda must be positive")
    if len(xi) != d.order or any(not x > 0 for x in xi):
        raise ValueError("xi must be positive with one entry per vertex")
    return WeightedDigraph(
        d.order, {(u, v): w * xi[v] / (lam * xi[u]) for (u, v), w in d.arcs.items()}
    )


# ---------------------------------------------------------------------------
# Cyr structural criterion
# ---------------------------------------------------------------------------


def cyr_criterion(facts: FamilyFacts) -> bool:
    """True iff no transient weighting exists: finite transversal and bounded cycles.

    Raises MetadataError rather than guessing when a fact is undeclared.
    """
    if facts.transversal is None and facts.sct_size is None:
        raise MetadataError("cycle-transversal size not declared")
    if facts.l_max is None:
        raise MetadataError("maximum cycle length not declared")
    sct_finite = facts.transversal is not None or (
        facts.sct_size is not None and facts.sct_size != math.inf
    )
    return sct_finite and facts.l_max != math.inf


# ---------------------------------------------------------------------------
# Green series along truncations
# ---------------------------------------------------------------------------


def green_partial_sums(d: WeightedDigraph, v: int, lam: float, p_max: int) -> np.ndarray:
    """G_P = sum_{p<=P} A^p(v,v) lam^{-p} for P = 0..p_max."""
    a = d.to_numpy().T  # iterate x -> A^T x so x[p][v] tracks (A^p e_v)[v]
    x = np.zeros(d.order)
    x[v] = 1.0
    sums = np.empty(p_max + 1)
    sums[0] = 1.0
    for p in range(1, p_max + 1):
        x = (a @ x) / lam
        sums[p] = sums[p - 1] + x[v]
    return sums


def _growth_assessment(sums: np.ndarray, growth_factor: float) -> str:
    """One of "divergent", "bounded", "inconclusive" for a partial-sum series."""
    p_max = len(sums) - 1
    if p_max < 20:
        return "inconclusive"
    p_lo = max(1, p_max // 10)
    ratio = sums[p_max] / sums[p_lo]
    inc_late = sums[p_max] - sums[(p_max + p_lo) // 2]
    inc_early = sums[(p_max + p_lo) // 2] - sums[p_lo]
    if ratio >= growth_factor and inc_late >= 0.4 * inc_early > 0:
        return "divergent"
    step = max(1, p_max // 10)
    tail = sums[p_max] - sums[p_max - step]
    if tail <= 1e-9 * max(1.0, sums[p_max]):
        return "bounded"
    # decade-over-decade decay with a finite geometric tail projection
    prev = sums[p_max - step] - sums[p_max - 2 * step]
    if prev > 0:
        r = tail / prev
        if r <= 0.95 and tail * r / (1 - r) <= 1e-6 * max(1.0, sums[p_max]):
            return "bounded"
    return "inconclusive"


# ---------------------------------------------------------------------------
# The decision procedure
# ---------------------------------------------------------------------------


def classify_recurrence(
    family: TruncationFamily,
    n_max: int = 120,
    p_max: int = 1000,
    growth_factor: float = 5.0,
    vertex: int | None = None,
) -> RecurrenceVerdict:
    """Transient / Recurrent / Unknown with evidence.

    Order of attack: the structural criterion when both facts are declared
    finite (certified recurrence); otherwise Green partial sums at the return
    vertex across growing truncations, with a presentation-level all-ones
    certificate required before declaring transience.
    """
    facts = family.facts
    notes: list[str] = []

    try:
        if cyr_criterion(facts):
            size = facts.sct_size if facts.sct_size is not None else len(facts.transversal)
            return RecurrenceVerdict(
                RECURRENT, CyrStructural(size, facts.l_max), "certified"
            )
    except MetadataError as exc:
        notes.append(f"structural facts incomplete: {exc}")

    # intrinsic radius: declared closed form, else extrapolated ladder
    if facts.spectral_limit is not None:
        lam = float(facts.spectral_limit)
        lam_exact = facts.spectral_limit
    else:
        grid = sorted({max(2, n_max // 9), max(3, n_max // 3), n_max})
        ladder = perron_ladder(family, grid, mode="leading")
        lam = ladder.limit_estimate
        lam_exact = None
        notes.append(f"radius estimated ({ladder.limit_method}): {lam:.12g}")
    if lam <= 0:
        return RecurrenceVerdict(UNKNOWN, None, None, tuple(notes + ["radius estimate <= 0"]))

    v = vertex if vertex is not None else (facts.return_vertex or 0)
    grid = sorted({max(v + 1, 2, n_max // 4), max(v + 1, 2, n_max // 2), max(v + 1, 2, n_max)})
    assessments = []
    sums = None
    for n in grid:
        d = truncate(family, n).to_float()
        sums = green_partial_sums(d, v, lam, p_max)
        assessments.append(_growth_assessment(sums, growth_factor))
    verdict_raw = assessments[-1]
    marks = sorted(set(range(0, p_max + 1, max(1, p_max // 16))) | {p_max})
    subsample = tuple(float(sums[p]) for p in marks)
    ratio = float(sums[-1] / sums[max(1, p_max // 10)])

    if verdict_raw == "divergent":
        return RecurrenceVerdict(
            RECURRENT,
            DivergingSeries(v, grid[-1], subsample, ratio),
            "numerical",
            tuple(notes),
        )

    if verdict_raw == "bounded":
        cls = facts.weighting_class
        ones_applicable = (
            cls is not None
            and cls.implies(Tag.TRUTHLY_SUBSTOCHASTIC)
            and lam_exact is not None
            and Fraction(lam_exact) == 1
        )
        if ones_applicable:
            d = truncate(family, grid[-1])
            cert_ok, strict = verify_pruitt(
                d, [Fraction(1) if d.is_exact else 1.0] * d.order, 1
            )
            if cert_ok:
                strict_v = facts.pruitt_strict_vertex if facts.pruitt_strict_vertex is not None else strict
                return RecurrenceVerdict(
                    TRANSIENT,
                    PruittVector("ones", strict_v, 1, exact=d.is_exact),
                    "certified" if d.is_exact else "numerical",
                    tuple(notes),
                )
            notes.append("declared all-ones certificate failed re-verification")
        else:
            notes.append("partial sums bounded but no presentation-level certificate")

    return RecurrenceVerdict(UNKNOWN, None, None, tuple(notes))


def reclassify_output(d: WeightedDigraph, claimed: Tag) -> bool:
    """True when the digraph's weighting class is at least as strict as claimed."""
    return classify_weighting(d).tag.implies(claimed)
