"""Machine verification of the determinant inequalities, plus the conjecture scan.

Exact mode certifies every comparison through rigorous rational brackets
around the Perron root: an inequality whose right side decreases in the
radius is checked at the upper bracket (sound), and a violation is only
reported when it persists at the bracket end most favorable to the
inequality.  A comparison whose truth still depends on where the radius sits
inside a sub-1e-18 bracket is recorded as an equality-boundary note, never a
violation.

The argmax conjecture scan is different in kind: counterexamples there are
findings to report, not failures.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .cycles import TransversalResult, is_cycle_transversal, min_cycle_transversal
from .digraph import WeightedDigraph
from .errors import SpectralRadiusError
from .rational import det_exact
from .spectral import (
    charpoly,
    det_i_minus,
    perron_bounds,
    perron_root,
    resolvent_diagonal,
)

BRACKET_WIDTH = Fraction(1, 10**18)


@dataclass
class Violation:
    fingerprint: str
    inequality: str
    lhs: object
    rhs: object
    margin: object


@dataclass
class InequalityReport:
    name: str
    instances_tested: int = 0
    violations: list[Violation] = field(default_factory=list)
    min_margin: object = None
    notes: list[str] = field(default_factory=list)
    findings: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def absorb(self, other: "InequalityReport"):
        self.instances_tested += other.instances_tested
        self.violations.extend(other.violations)
        self.notes.extend(other.notes)
        self.findings.extend(other.findings)
        for m in (other.min_margin,):
            if m is not None and (self.min_margin is None or m < self.min_margin):
                self.min_margin = m

    def record(self, fingerprint: str, inequality: str, lhs, rhs, *, note: str | None = None):
        """LHS <= RHS expected; margin = RHS - LHS.

        Exact margins are compared strictly; float margins get the scaled
        1e-9 tolerance (equality cases sit on the boundary in both modes).
        """
        margin = rhs - lhs
        slack = 0
        if isinstance(margin, float):
            slack = 1e-9 * max(1.0, abs(float(lhs)), abs(float(rhs)))
        if margin < -slack:
            self.violations.append(Violation(fingerprint, inequality, lhs, rhs, margin))
        if note:
            self.notes.append(note)
        if self.min_margin is None or margin < self.min_margin:
            self.min_margin = margin

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "instances_tested": self.instances_tested,
            "violations": [
                {
                    "fingerprint": v.fingerprint,
                    "inequality": v.inequality,
                    "lhs": str(v.lhs),
                    "rhs": str(v.rhs),
                    "margin": str(v.margin),
                }
                for v in self.violations
            ],
            "min_margin": None if self.min_margin is None else str(self.min_margin),
            "notes": self.notes,
            "findings": self.findings,
            "ok": self.ok,
        }


def fingerprint(d: WeightedDigraph) -> str:
    return hashlib.sha1(d.to_json().encode()).hexdigest()[:12]


def _radius_brackets(d: WeightedDigraph):
    """(lo, hi) brackets around the Perron root in the digraph's arithmetic."""
    if d.is_exact:
        return perron_bounds(d, BRACKET_WIDTH)
    lam = perron_root(d)
    return lam, lam


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------


def random_strong_digraph(
    rng: random.Random,
    order: int,
    weighting: str = "truthly",
    max_denominator: int = 12,
    arc_prob: float | None = None,
    max_tries: int = 2000,
) -> WeightedDigraph:
    """Erdos-Renyi arc set conditioned on strong connectivity, rational weights.

    Rows are rescaled to exact random out-weight targets according to
    ``weighting``: "truthly" (<=1, somewhere <1), "strictly" (<1 everywhere),
    "stochastic" (=1), or "substochastic" (<=1).
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    p = arc_prob if arc_prob is not None else (0.55 if order <= 4 else 0.35)
    arcs: set[tuple[int, int]] = set()
    for _ in range(max_tries):
        arcs = {
            (u, v)
            for u in range(order)
            for v in range(order)
            if rng.random() < (p / 2 if u == v else p)
        }
        if order == 1:
            arcs = {(0, 0)} if rng.random() < 0.5 else arcs & {(0, 0)}
            break
        succ = {v: [w for (u, w) in arcs if u == v] for v in range(order)}
        from .digraph import strongly_connected_components

        if len(strongly_connected_components(succ, range(order))) == 1:
            break
    else:
        raise RuntimeError("failed to sample a strong digraph")

    den = max_denominator
    targets = []
    for v in range(order):
        if weighting == "stochastic":
            t = Fraction(1)
        elif weighting == "strictly":
            t = Fraction(rng.randint(1, den - 1), den)
        elif weighting == "truthly":
            t = Fraction(rng.randint(1, den), den)
        elif weighting == "substochastic":
            t = Fraction(rng.randint(1, den), den)
        else:
            raise ValueError(f"unknown weighting request {weighting!r}")
        targets.append(t)
    if weighting == "truthly" and all(t == 1 for t in targets):
        targets[rng.randrange(order)] = Fraction(rng.randint(1, den - 1), den)

    weights: dict[tuple[int, int], Fraction] = {}
    for v in range(order):
        out = sorted(w for (u, w) in arcs if u == v)
        if not out:
            continue
        raw = [Fraction(rng.randint(1, den), den) for _ in out]
        total = sum(raw)
        for w, r in zip(out, raw):
            weights[(v, w)] = r * targets[v] / total
    return WeightedDigraph(order, weights)


def instance_stream(
    seed: int, count: int, order_max: int, weighting: str = "truthly", mode: str = "exact"
) -> Iterable[tuple[int, WeightedDigraph]]:
    """Deterministic per-index instances (worker count cannot change the stream)."""
    for i in range(count):
        rng = random.Random(f"{seed}:{i}")
        order = rng.randint(2, max(2, order_max))
        d = random_strong_digraph(rng, order, weighting=weighting)
        yield i, (d if mode == "exact" else d.to_float())


# ---------------------------------------------------------------------------
# Individual checks
# ---------------------------------------------------------------------------


def check_boyle_handelman(d: WeightedDigraph) -> InequalityReport:
    """det(I-A) <= 1 - lambda^r <= r (1-lambda), r = degree of det(I - zA)."""
    rep = InequalityReport("boyle-handelman", instances_tested=1)
    fp = fingerprint(d)
    det = det_i_minus(d)
    coeffs = charpoly(d)
    r = len(coeffs) - 1
    lo, hi = _radius_brackets(d)
    if r == 0:
        rep.record(fp, "det<=1-radius^r", det, 1)
        return rep
    if det <= 1 - hi**r:
        rep.record(fp, "det<=1-radius^r", det, 1 - hi**r)
    elif det > 1 - lo**r:
        rep.record(fp, "det<=1-radius^r", det, 1 - lo**r)
    else:
        rep.notes.append(f"{fp}: det = 1-radius^r within bracket width")
        rep.record(fp, "det<=1-radius^r", det, det)
    rep.record(fp, "1-radius^r<=r(1-radius)", 1 - hi**r, r * (1 - hi))
    return rep


def check_ksv(d: WeightedDigraph) -> InequalityReport:
    """det(I-A) <= 1 - lambda^n <= n (1-lambda) with n the order."""
    rep = InequalityReport("ksv", instances_tested=1)
    fp = fingerprint(d)
    n = d.order
    det = det_i_minus(d)
    lo, hi = _radius_brackets(d)
    if det <= 1 - hi**n:
        rep.record(fp, "det<=1-radius^n", det, 1 - hi**n)
    elif det > 1 - lo**n:
        rep.record(fp, "det<=1-radius^n", det, 1 - lo**n)
    else:
        rep.notes.append(f"{fp}: det = 1-radius^n within bracket width")
        rep.record(fp, "det<=1-radius^n", det, det)
    rep.record(fp, "1-radius^n<=n(1-radius)", 1 - hi**n, n * (1 - hi))
    return rep


def _require_contractive(d: WeightedDigraph, lo, hi):
    if hi >= 1:
        raise SpectralRadiusError(
            f"spectral radius bracket [{lo}, {hi}] not certified below 1"
        )


def check_trace_bounds(d: WeightedDigraph) -> InequalityReport:
    """1/(1-lambda) <= trace (I-S)^{-1} <= n/det(I-S), plus the max-diagonal pinch."""
    rep = InequalityReport("lemma-a1", instances_tested=1)
    fp = fingerprint(d)
    lo, hi = _radius_brackets(d)
    _require_contractive(d, lo, hi)
    diag = resolvent_diagonal(d, assume_contractive=True)
    trace = sum(diag)
    det = det_i_minus(d)
    n = d.order
    one = Fraction(1) if d.is_exact else 1.0
    rep.record(fp, "1/(1-radius)<=trace", one / (1 - hi), trace)
    rep.record(fp, "trace<=n/det", trace, n / det)
    rep.record(fp, "1/(n(1-radius))<=max_diag", one / (n * (1 - hi)), max(diag))
    rep.record(fp, "max_diag<=1/det", max(diag), one / det)
    return rep


def _verified_transversal(d: WeightedDigraph, w: TransversalResult | Iterable[int]) -> frozenset:
    vs = frozenset(w.vertices if isinstance(w, TransversalResult) else w)
    if not is_cycle_transversal(d, vs):
        raise ValueError(f"{sorted(vs)} is not a cycle transversal")
    return vs


def check_diag_transversal_bound(d: WeightedDigraph, w) -> InequalityReport:
    """(I-S)^{-1}(v,v) <= 1 + sum_w ((I-S)^{-1}(w,w) - 1) for every vertex v."""
    rep = InequalityReport("lemma-a2", instances_tested=1)
    fp = fingerprint(d)
    vs = _verified_transversal(d, w)
    lo, hi = _radius_brackets(d)
    _require_contractive(d, lo, hi)
    diag = resolvent_diagonal(d, assume_contractive=True)
    bound = 1 + sum(diag[x] - 1 for x in vs)
    for v in range(d.order):
        rep.record(fp, f"diag({v})<=1+sum_loops", diag[v], bound)
    return rep


def check_transversal_product(d: WeightedDigraph, w) -> InequalityReport:
    """1/det <= prod_w G(w,w) and max_v G(v,v) <= prod_w G(w,w)."""
    rep = InequalityReport("a1-product", instances_tested=1)
    fp = fingerprint(d)
    vs = _verified_transversal(d, w)
    lo, hi = _radius_brackets(d)
    _require_contractive(d, lo, hi)
    diag = resolvent_diagonal(d, assume_contractive=True)
    det = det_i_minus(d)
    prod = Fraction(1) if d.is_exact else 1.0
    for x in vs:
        prod *= diag[x]
    rep.record(fp, "1/det<=prod", (Fraction(1) if d.is_exact else 1.0) / det, prod)
    rep.record(fp, "max_diag<=prod", max(diag), prod)
    return rep


def _elementary_symmetric(values: Sequence, k: int):
    # sigma_k via the stable DP over prefix polynomials
    coeffs = [Fraction(1) if isinstance(values[0], Fraction) else 1.0]
    for v in values:
        coeffs = [c + (coeffs[i - 1] * v if i >= 1 else 0) for i, c in enumerate(coeffs + [0])]
    return coeffs[k]


def check_sigma_bound(d: WeightedDigraph, w, k: int) -> InequalityReport:
    """max_v G(v,v) <= sigma_k of the transversal diagonal entries."""
    rep = InequalityReport("sigma-k", instances_tested=1)
    fp = fingerprint(d)
    vs = sorted(_verified_transversal(d, w))
    if not 1 <= k <= len(vs):
        raise ValueError(f"k={k} outside 1..{len(vs)}")
    lo, hi = _radius_brackets(d)
    _require_contractive(d, lo, hi)
    diag = resolvent_diagonal(d, assume_contractive=True)
    sigma = _elementary_symmetric([diag[x] for x in vs], k)
    rep.record(fp, f"max_diag<=sigma_{k}", max(diag), sigma)
    return rep


def check_zeta_identity(d: WeightedDigraph, v: int, z_samples: Sequence) -> InequalityReport:
    """(I - zS)^{-1}(v,v) det(I - zS) = det(I - z S^(v)) at each sample z.

    Exact equality in rational arithmetic; both sides are recorded so a
    failing sample shows its residual.  Singular samples are skipped with a
    note.
    """
    rep = InequalityReport("zeta", instances_tested=1)
    fp = fingerprint(d)
    if not d.is_exact:
        raise TypeError("the zeta identity check runs in exact mode only")
    rows = d.rows_exact()
    n = d.order
    for z in z_samples:
        z = Fraction(z)
        m = [
            [Fraction(int(i == j)) - z * rows[i][j] for j in range(n)]
            for i in range(n)
        ]
        det_full = det_exact(m)
        if det_full == 0:
            rep.notes.append(f"{fp}: sample z={z} singular, skipped")
            continue
        minor = [
            [m[i][j] for j in range(n) if j != v]
            for i in range(n)
            if i != v
        ]
        det_minor = det_exact(minor)
        from .rational import solve_exact

        rhs_vec = [Fraction(int(i == v)) for i in range(n)]
        g_vv = solve_exact(m, rhs_vec)[v]
        lhs = g_vv * det_full
        rep.record(fp, f"zeta@z={z}", lhs, det_minor)
        rep.record(fp, f"zeta@z={z} (reverse)", det_minor, lhs)
    return rep


# ---------------------------------------------------------------------------
# The argmax conjecture scan (counterexamples are findings, not failures)
# ---------------------------------------------------------------------------


@dataclass
class ConjectureRecord:
    fingerprint: str
    argmax: tuple[int, ...]
    transversals_checked: int
    counterexamples: list[tuple[int, ...]] = field(default_factory=list)


def scan_argmax_conjecture(d: WeightedDigraph, extra_size: int = 1) -> ConjectureRecord:
    """Does every cycle transversal contain a vertex of maximal G(v,v)?

    Checks all minimum-size transversals and all transversals up to
    ``extra_size`` vertices larger.  A transversal avoiding the argmax set
    entirely is a counterexample, reported verbatim.
    """
    from itertools import combinations

    lo, hi = _radius_brackets(d)
    _require_contractive(d, lo, hi)
    diag = resolvent_diagonal(d, assume_contractive=True)
    peak = max(diag)
    argmax = tuple(v for v in range(d.order) if diag[v] == peak)

    fvs = min_cycle_transversal(d)
    record = ConjectureRecord(fingerprint(d), argmax, 0)
    for size in range(fvs.size, min(d.order, fvs.size + extra_size) + 1):
        for subset in combinations(range(d.order), size):
            if not is_cycle_transversal(d, subset):
                continue
            record.transversals_checked += 1
            if not set(subset) & set(argmax):
                record.counterexamples.append(subset)
    return record


# ---------------------------------------------------------------------------
# Suite runner
# ---------------------------------------------------------------------------


def _suite_single(suite: str, d: WeightedDigraph, rng: random.Random, sigma_k: int | None):
    if suite == "boyle-handelman":
        return check_boyle_handelman(d)
    if suite == "ksv":
        return check_ksv(d)
    if suite == "lemma-a1":
        return check_trace_bounds(d)
    w = min_cycle_transversal(d) if suite in ("lemma-a2", "a1-product", "sigma-k") else None
    if suite == "lemma-a2":
        return check_diag_transversal_bound(d, w)
    if suite == "a1-product":
        return check_transversal_product(d, w)
    if suite == "sigma-k":
        if sigma_k is not None:
            return check_sigma_bound(d, w, min(sigma_k, w.size))
        rep = InequalityReport("sigma-k")
        for k in range(1, w.size + 1):
            rep.absorb(check_sigma_bound(d, w, k))
        rep.instances_tested = 1
        return rep
    if suite == "zeta":
        v = rng.randrange(d.order)
        return check_zeta_identity(d, v, (Fraction(1, 3), Fraction(1, 2), Fraction(2)))
    if suite == "conjecture":
        rec = scan_argmax_conjecture(d)
        rep = InequalityReport("conjecture", instances_tested=1)
        if rec.counterexamples:
            rep.findings.append(
                {
                    "fingerprint": rec.fingerprint,
                    "argmax": list(rec.argmax),
                    "counterexamples": [list(c) for c in rec.counterexamples],
                }
            )
        # lemma-backed sanity on the same instance: a proved bound must hold
        w = min_cycle_transversal(d)
        rep.absorb(check_diag_transversal_bound(d, w))
        rep.instances_tested = 1
        return rep
    raise ValueError(f"unknown suite {suite!r}")


SUITES = (
    "boyle-handelman",
    "ksv",
    "lemma-a1",
    "lemma-a2",
    "a1-product",
    "sigma-k",
    "zeta",
    "conjecture",
)


def run_suite(
    suite: str,
    count: int = 100,
    seed: int = 0,
    order_max: int = 8,
    mode: str = "exact",
    weighting: str = "truthly",
    sigma_k: int | None = None,
) -> InequalityReport:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    if suite == "zeta" and mode != "exact":
        raise ValueError("the zeta suite is exact-only")
    merged = InequalityReport(suite)
    for i, d in instance_stream(seed, count, order_max, weighting, mode):
        rng = random.Random(f"{seed}:{i}:aux")
        merged.absorb(_suite_single(suite, d, rng, sigma_k))
    return merged
