"""Finitely-presented infinite weighted digraphs via nested truncations.

A family is a pure generator ``n -> WeightedDigraph`` producing the induced
subdigraph on the first ``n`` vertices of a fixed enumeration, plus declared
structural facts (cycle transversal, extremal cycle lengths, weighting class
of the full presentation, closed-form spectra) that downstream operations may
rely on after validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

from .digraph import Tag, WeightedDigraph
from .errors import FamilyDefinitionError


@dataclass(frozen=True)
class FamilyFacts:
    """Declared structural facts about the full (infinite) presentation.

    ``transversal`` is a finite vertex set hitting every cycle of the whole
    family (not just one truncation). ``l_max``/``sct_size`` use ``math.inf``
    for "unbounded"; ``None`` always means "not declared".
    """

    transversal: frozenset[int] | None = None
    sct_size: float | int | None = None
    l_min: int | None = None
    l_max: float | int | None = None
    weighting_class: Tag | None = None
    spectral_limit: object | None = None  # declared intrinsic Perron radius
    perron_closed_form: Callable[[int], float] | None = None  # n -> leading lambda_n
    return_vertex: int | None = None
    pruitt_strict_vertex: int | None = None


@dataclass(frozen=True)
class TruncationFamily:
    name: str
    generator: Callable[[int], WeightedDigraph]
    facts: FamilyFacts = field(default_factory=FamilyFacts)
    #: smallest truncation order containing every cycle of length <= n
    omega_window: Callable[[int], int] | None = None
    #: vertices of an order-n induced subdigraph with large Perron root
    witness_submatrix: Callable[[int], Sequence[int]] | None = None
    extras: Mapping = field(default_factory=dict, compare=False)

    def with_facts(self, **changes) -> "TruncationFamily":
        return replace(self, facts=replace(self.facts, **changes))


def truncate(family: TruncationFamily, n: int) -> WeightedDigraph:
    """The induced weighted subdigraph on the first ``n`` enumeration vertices."""
    if n < 1:
        raise ValueError("truncation order must be >= 1")
    try:
        d = family.generator(n)
    except FamilyDefinitionError:
        raise
    except Exception as exc:  # surface generator bugs as family errors
        raise FamilyDefinitionError(f"{family.name}: generator failed at n={n}: {exc}") from exc
    if d.order != n:
        raise FamilyDefinitionError(
            f"{family.name}: generator returned order {d.order}, expected {n}"
        )
    return d


def family_to_float(family: TruncationFamily) -> TruncationFamily:
    gen = family.generator
    facts = family.facts
    limit = facts.spectral_limit
    return replace(
        family,
        generator=lambda n: gen(n).to_float(),
        facts=replace(facts, spectral_limit=float(limit) if limit is not None else None),
    )


@dataclass
class MetadataReport:
    family: str
    n_max: int
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_metadata(family: TruncationFamily, n_max: int) -> MetadataReport:
    """Check declared transversal / cycle-length facts on every truncation up to n_max.

    Violations are collected in the report rather than raised, so a wrong
    declaration can be inspected.
    """
    from .cycles import enumerate_cycles  # local import, cycles depends on digraph only

    facts = family.facts
    if facts.transversal is None and facts.l_max is None and facts.l_min is None:
        raise FamilyDefinitionError(f"{family.name}: no metadata declared to validate")
    report = MetadataReport(family.name, n_max)
    for n in range(1, n_max + 1):
        d = truncate(family, n)
        for cyc in enumerate_cycles(d):
            if facts.transversal is not None and not (cyc.vertex_set & facts.transversal):
                report.violations.append(
                    f"n={n}: cycle {cyc.vertices} misses declared transversal"
                )
            if facts.l_max is not None and facts.l_max != math.inf and cyc.length > facts.l_max:
                report.violations.append(
                    f"n={n}: cycle {cyc.vertices} has length {cyc.length} > declared l_max {facts.l_max}"
                )
            if facts.l_min is not None and cyc.length < facts.l_min:
                report.violations.append(
                    f"n={n}: cycle {cyc.vertices} has length {cyc.length} < declared l_min {facts.l_min}"
                )
    return report
