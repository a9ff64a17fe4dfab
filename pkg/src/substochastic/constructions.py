"""Builders for the adversarial weighting families.

Each builder returns a :class:`TruncationFamily` whose generator materializes
induced truncations of one concrete infinite weighted digraph, with the
structural facts and certificates the construction is designed to satisfy.

Two host shapes are used:

* the *return path*: an infinite path 1 -> 2 -> ... with an arc back to
  vertex 1 from every vertex (and a loop at 1), which has cycles of every
  length and the singleton {1} as smallest cycle transversal;
* the *beaded chain*: vertex-disjoint directed cycles ("beads") of prescribed
  lengths, strung together by short forward/backward connector paths between
  consecutive bead ports, which has no finite cycle transversal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .cycles import Gain
from .digraph import Tag, WeightedDigraph
from .errors import FamilyDefinitionError
from .families import FamilyFacts, TruncationFamily
from .rational import ln_bounds

HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# Sequence plumbing
# ---------------------------------------------------------------------------


def as_sequence(spec, *, name: str = "sequence") -> Callable[[int], object]:
    """Normalize a finite list (last value repeats) or a 1-indexed callable."""
    if callable(spec):
        return spec
    values = list(spec)
    if not values:
        raise ValueError(f"{name} must not be empty")

    def at(k: int):
        return values[min(k, len(values)) - 1]

    return at


class _Memo1:
    """Memoized 1-indexed sequence with optional per-value validation."""

    def __init__(self, fn: Callable[[int], object], check=None):
        self.fn = fn
        self.check = check
        self.values: list = []

    def __call__(self, k: int):
        if k < 1:
            raise ValueError("sequences are 1-indexed")
        while len(self.values) < k:
            j = len(self.values) + 1
            v = self.fn(j)
            if self.check is not None:
                self.check(j, v, self.values)
            self.values.append(v)
        return self.values[k - 1]


# ---------------------------------------------------------------------------
# Epsilon schedules and gap targets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EpsilonSchedule:
    """Strictly decreasing positive epsilon_k < 1/2, exact rationals."""

    eps: Callable[[int], Fraction]

    def __call__(self, k: int) -> Fraction:
        return self._memo(k)

    @property
    def _memo(self) -> _Memo1:
        memo = self.__dict__.get("_memo_obj")
        if memo is None:
            def check(j, v, prev):
                v = Fraction(v)
                if not 0 < v < HALF:
                    raise ValueError(f"epsilon_{j} = {v} outside (0, 1/2)")
                if prev and not v < prev[-1]:
                    raise ValueError(f"epsilon schedule not strictly decreasing at k={j}")

            memo = _Memo1(lambda k: Fraction(self.eps(k)), check)
            object.__setattr__(self, "_memo_obj", memo)
        return memo

    @staticmethod
    def geometric(ratio: Fraction = Fraction(1, 4)) -> "EpsilonSchedule":
        ratio = Fraction(ratio)
        if not 0 < ratio < 1:
            raise ValueError("ratio must be in (0,1)")
        return EpsilonSchedule(lambda k: ratio**k)


class _Minorant:
    """Strictly decreasing minorant of a gap target, with limit zero.

    h(1) = min(g(1), 1/2) and h(n) = min(g(n), h(n-1) * n/(n+1)); the product
    chain forces h -> 0 and strict decrease while never exceeding g.  The
    ``adjusted`` flag records whether any value had to drop below g.
    """

    def __init__(self, g: Callable[[int], object]):
        self.g = g
        self.values: list = []
        self.adjusted = False

    def __call__(self, n: int):
        while len(self.values) < n:
            m = len(self.values) + 1
            gv = self.g(m)
            if not gv > 0:
                raise ValueError(f"gap target g({m}) = {gv} is not positive")
            if m == 1:
                hv = min(gv, HALF if isinstance(gv, (int, Fraction)) else 0.5)
            else:
                cap = self.values[-1] * m / (m + 1)
                hv = min(gv, cap)
            if hv != gv:
                self.adjusted = True
            self.values.append(hv)
        return self.values[n - 1]


@dataclass(frozen=True)
class GapTarget:
    """A positive target g(n); builders consume its decreasing minorant."""

    g: Callable[[int], object]

    def __call__(self, n: int):
        return self.g(n)

    def minorant(self) -> _Minorant:
        return _Minorant(self.g)

    @staticmethod
    def exp2() -> "GapTarget":
        return GapTarget(lambda n: Fraction(1, 2**n))

    @staticmethod
    def power(exponent: int) -> "GapTarget":
        return GapTarget(lambda n: Fraction(1, n**exponent))

    @staticmethod
    def constant(value) -> "GapTarget":
        v = Fraction(value)
        return GapTarget(lambda n: v)


# ---------------------------------------------------------------------------
# The return-path host (loop at 1, path forward, return arcs to 1)
# ---------------------------------------------------------------------------


def build_example1(a=Fraction(1, 2), f=None, name: str = "example1") -> TruncationFamily:
    """Renewal-style weighting of the return path.

    Arc weights: (1,1) gets a*f_1, (m,m+1) gets R_m/R_{m-1} and (m,1) gets
    f_m/R_{m-1}, where R_m = 1 - f_1 - ... - f_m.  The weight of the length-n
    return cycle telescopes to exactly f_n.  Vertex 1 is the unique
    substochastic slack (out-weight a f_1 + 1 - f_1 < 1); every other vertex
    is exactly stochastic.
    """
    if f is None:
        raise ValueError("a lifetime sequence f is required")
    if not 0 < a < 1:
        raise ValueError("a must lie in (0,1)")
    f_at = as_sequence(f, name="f")

    remainders: list = []  # R_1, R_2, ...

    def rem(m: int):
        # R_m with R_0 = 1
        if m == 0:
            return Fraction(1) if isinstance(f_at(1), (int, Fraction)) else 1.0
        while len(remainders) < m:
            j = len(remainders) + 1
            fj = f_at(j)
            if not fj > 0:
                raise FamilyDefinitionError(f"{name}: f_{j} = {fj} is not positive")
            prev = remainders[-1] if remainders else (
                Fraction(1) if isinstance(fj, (int, Fraction)) else 1.0
            )
            r = prev - fj
            if not r > 0:
                raise FamilyDefinitionError(
                    f"{name}: partial sums of f reach 1 at index {j}"
                )
            remainders.append(r)
        return remainders[m - 1]

    def generator(n: int) -> WeightedDigraph:
        arcs = {(0, 0): a * f_at(1)}
        for i in range(n - 1):
            arcs[(i, i + 1)] = rem(i + 1) / rem(i)
        for i in range(1, n):
            arcs[(i, 0)] = f_at(i + 1) / rem(i)
        return WeightedDigraph(n, arcs)

    facts = FamilyFacts(
        transversal=frozenset({0}),
        sct_size=1,
        l_min=1,
        l_max=math.inf,
        weighting_class=Tag.TRUTHLY_SUBSTOCHASTIC,
        return_vertex=0,
        pruitt_strict_vertex=0,
    )
    return TruncationFamily(name, generator, facts, omega_window=lambda n: n)


def f_geometric(q=Fraction(1, 2)) -> Callable[[int], Fraction]:
    """f_n = (1-q) q^(n-1); sums to one with exact rational remainders q^n."""
    q = Fraction(q)
    if not 0 < q < 1:
        raise ValueError("q must be in (0,1)")
    return lambda n: (1 - q) * q ** (n - 1)


def power_series_sum(s: float, n_terms: int = 100_000) -> float:
    """sum_{k>=1} k^(-s) for s > 1, partial sum plus midpoint tail."""
    if s <= 1:
        raise ValueError("series diverges for s <= 1")
    partial = sum(k ** (-s) for k in range(1, n_terms + 1))
    tail = (n_terms + 0.5) ** (1 - s) / (s - 1)
    return partial + tail


def f_power(epsilon: float = 0.5) -> Callable[[int], float]:
    """f_n = 1 / (a_eps n^(1+eps)) with a_eps the normalizing power-series sum."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    a_eps = power_series_sum(1 + epsilon)
    return lambda n: 1.0 / (a_eps * n ** (1 + epsilon))


# ---------------------------------------------------------------------------
# The symmetric star (hub weights a_k both ways)
# ---------------------------------------------------------------------------


def build_example2(
    a, sorted_weights: bool = True, sum_sq=None, name: str = "example2"
) -> TruncationFamily:
    """Symmetric star family: hub 0, spoke arcs (0,k) and (k,0) with weight a_k.

    All cycles are 2-cycles through the hub, so det(I - zA_n) = 1 - b_n^2 z^2
    with b_n^2 = a_1^2 + ... + a_{n-1}^2, giving the closed-form ladder
    lambda_n = b_n and limit b = sqrt(sum of squares).  Square-summability is
    required; closed forms with decay exponent <= 1/2 are rejected.
    """
    finite = not callable(a)
    a_at = as_sequence(a, name="a")
    length = len(list(a)) if finite else None

    def a_k(k: int):
        v = a_at(k)
        if not v > 0:
            raise FamilyDefinitionError(f"{name}: a_{k} = {v} is not positive")
        return v

    if sum_sq is None:
        if finite:
            sum_sq = sum((Fraction(a_k(k)) ** 2 for k in range(1, length + 1)), Fraction(0))
        else:
            n_probe = 100_000
            lo, hi = a_k(n_probe // 2), a_k(n_probe)
            decay = 2 * (math.log(float(lo)) - math.log(float(hi))) / math.log(2)
            if decay <= 1 + 1e-9:
                raise FamilyDefinitionError(
                    f"{name}: squared weights decay like k^-{decay:.3f}; "
                    "not summable (exponent of a_k is <= 1/2)"
                )
            partial = sum(float(a_k(k)) ** 2 for k in range(1, n_probe + 1))
            c = float(hi) ** 2 * n_probe**decay
            sum_sq = partial + c * (n_probe + 0.5) ** (1 - decay) / (decay - 1)

    squares: list[float] = []

    def b_n(n: int) -> float:
        kmax = n - 1 if length is None else min(n - 1, length)
        while len(squares) < kmax:
            squares.append(float(a_k(len(squares) + 1)) ** 2)
        return math.sqrt(sum(squares[:kmax]))

    def generator(n: int) -> WeightedDigraph:
        arcs = {}
        top = n - 1 if length is None else min(n - 1, length)
        for k in range(1, top + 1):
            w = a_k(k)
            arcs[(0, k)] = w
            arcs[(k, 0)] = w
        return WeightedDigraph(n, arcs)

    facts = FamilyFacts(
        transversal=frozenset({0}),
        sct_size=1,
        l_min=2,
        l_max=2,
        spectral_limit=math.sqrt(float(sum_sq)),
        perron_closed_form=b_n,
        return_vertex=0,
    )
    witness = (lambda n: tuple(range(n))) if sorted_weights else None
    return TruncationFamily(
        name, generator, facts, omega_window=lambda n: n, witness_submatrix=witness,
        extras={"sum_sq": sum_sq},
    )


def a_power(exponent: float = -0.75) -> Callable[[int], float]:
    if exponent >= 0:
        raise ValueError("exponent must be negative")
    return lambda k: float(k) ** exponent


# ---------------------------------------------------------------------------
# Beaded chain host
# ---------------------------------------------------------------------------


class _BeadedChain:
    """Disjoint bead cycles joined port-to-port by connector paths.

    Bead k (1-indexed) occupies a contiguous block: its cycle vertices (the
    first one is the *port*), then forward-connector intermediates, then
    backward-connector intermediates.  Connector arcs leaving a port carry a
    quarter of that port's out-weight slack; interior connector arcs carry
    1/2.  The only cycles besides the beads are the port-to-port round trips
    of length 2 * connector_len.
    """

    def __init__(self, lengths: Callable[[int], int], bead_arc_weight, connector_len: int):
        self.lengths = lengths
        self.bead_arc_weight = bead_arc_weight  # (k, arc_index) -> weight
        self.connector_len = connector_len
        self._offsets = [0]  # offset of bead k at index k-1

    def block_size(self, k: int) -> int:
        return self.lengths(k) + 2 * (self.connector_len - 1)

    def offset(self, k: int) -> int:
        while len(self._offsets) < k:
            j = len(self._offsets)
            self._offsets.append(self._offsets[-1] + self.block_size(j))
        return self._offsets[k - 1]

    def bead_vertices(self, k: int) -> range:
        start = self.offset(k)
        return range(start, start + self.lengths(k))

    def port_slack_weight(self, k: int):
        return (1 - self.bead_arc_weight(k, 0)) / 4

    def arcs_up_to(self, n: int) -> dict:
        arcs: dict = {}

        def put(u, v, w):
            if u < n and v < n:
                arcs[(u, v)] = w

        k = 1
        while self.offset(k) < n:
            length = self.lengths(k)
            port = self.offset(k)
            for i in range(length - 1):
                put(port + i, port + i + 1, self.bead_arc_weight(k, i))
            put(port + length - 1, port, self.bead_arc_weight(k, length - 1))

            next_port = self.offset(k + 1)
            c = self.connector_len
            fwd = [port + length + i for i in range(c - 1)]
            bwd = [port + length + (c - 1) + i for i in range(c - 1)]
            fchain = [port, *fwd, next_port]
            bchain = [next_port, *bwd, port]
            for i in range(c):
                put(fchain[i], fchain[i + 1], self.port_slack_weight(k) if i == 0 else HALF)
                put(bchain[i], bchain[i + 1], self.port_slack_weight(k + 1) if i == 0 else HALF)
            k += 1
        return arcs

    def generator(self, n: int) -> WeightedDigraph:
        return WeightedDigraph(n, self.arcs_up_to(n))


def _connector_len(l1: int) -> int:
    # round trips have length 2*ceil(l1/2) >= l1, so bead 1 stays shortest
    return max(1, (l1 + 1) // 2)


def build_prop1(
    cycle_lengths, targets, declared_lambda=None, name: str = "prop1"
) -> TruncationFamily:
    """Beaded chain where bead k has gain exactly targets(k) ** (1/lengths(k)).

    The port arc of bead k carries the whole target weight c_k and the other
    bead arcs carry 1, so the gain is exact in rational arithmetic; ports keep
    half their slack after the connectors, every other vertex has out-weight
    exactly 1, and the weighting is truthly substochastic.
    """
    lengths = _Memo1(as_sequence(cycle_lengths, name="cycle_lengths"),
                     lambda j, v, prev: _require(v >= 1, f"length {v} at k={j} must be >= 1"))
    target_at = _Memo1(as_sequence(targets, name="targets"),
                       lambda j, v, prev: _require(0 < v < 1, f"target {v} at k={j} outside (0,1)"))

    chain = _BeadedChain(
        lengths,
        lambda k, i: target_at(k) if i == 0 else (
            Fraction(1) if isinstance(target_at(k), (int, Fraction)) else 1.0
        ),
        connector_len=1,
    )

    def bead_gain(k: int) -> Gain:
        return Gain(target_at(k), lengths(k))

    def witness(n: int):
        best_k = None
        for k in range(1, 513):
            if lengths(k) <= n and (best_k is None or bead_gain(best_k) < bead_gain(k)):
                best_k = k
        if best_k is None:
            raise ValueError(f"no bead of length <= {n}")
        return tuple(chain.bead_vertices(best_k))

    def window(n: int) -> int:
        top = 1
        for k in range(1, 513):
            if lengths(k) <= n:
                top = max(top, chain.offset(k) + chain.block_size(k))
        return max(top, n)

    facts = FamilyFacts(
        sct_size=math.inf,
        weighting_class=Tag.TRUTHLY_SUBSTOCHASTIC,
        spectral_limit=declared_lambda,
        return_vertex=0,
        pruitt_strict_vertex=0,
    )
    return TruncationFamily(
        name, chain.generator, facts,
        omega_window=window, witness_submatrix=witness,
        extras={"bead_gain": bead_gain, "chain": chain},
    )


def _require(cond: bool, message: str):
    if not cond:
        raise ValueError(message)


# ---------------------------------------------------------------------------
# Gap-target weighting on the beaded chain
# ---------------------------------------------------------------------------


class _Cor1Lengths:
    """Bead lengths: strictly increasing, then (optionally) constant forever."""

    def __init__(self, spec):
        def check(j, v, prev):
            _require(v >= 1, f"length {v} at k={j} must be >= 1")
            if prev:
                _require(v >= prev[-1], f"lengths must be nondecreasing (k={j})")
                if len(prev) >= 2 and prev[-1] == prev[-2]:
                    _require(v == prev[-1], "lengths must stay constant once repeated")

        self._memo = _Memo1(as_sequence(spec, name="cycle_lengths"), check)

    def __call__(self, k: int) -> int:
        return self._memo(k)


def build_corollary1(g: GapTarget, cycle_lengths=None, name: str = "corollary1") -> TruncationFamily:
    """Weighting with 1 - sup-gain-at-length-n below g(n) for every n >= l_min.

    Bead k is weighted uniformly at 1 - h(max(lengths(k+1), k)) where h is
    the strictly decreasing minorant of g; connectors take a quarter of the
    port slack, so the whole weighting is strictly substochastic with
    supremum of gains equal to 1.
    """
    lengths = _Cor1Lengths(cycle_lengths if cycle_lengths is not None else (lambda k: k))
    h = g.minorant()

    def bead_weight(k: int):
        return 1 - h(max(lengths(k + 1), k))

    chain = _BeadedChain(lengths, lambda k, i: bead_weight(k), _connector_len(lengths(1)))

    def kstar(n: int) -> int:
        k = 1
        while k < 10**6:
            lk = lengths(k)
            if lk > n:
                break
            if h(max(lengths(k + 1), k)) < g(n):
                return k
            k += 1
        # constant-tail scan: keep going while lengths stay <= n
        while k < 10**6 and lengths(k) <= n:
            if h(max(lengths(k + 1), k)) < g(n):
                return k
            k += 1
        raise FamilyDefinitionError(f"{name}: no witness bead of length <= {n}")

    def window(n: int) -> int:
        k = kstar(n)
        return chain.offset(k) + chain.block_size(k)

    def witness(n: int):
        return tuple(chain.bead_vertices(kstar(n)))

    facts = FamilyFacts(
        sct_size=math.inf,
        l_min=lengths(1),
        weighting_class=Tag.STRICTLY_SUBSTOCHASTIC,
        spectral_limit=1,
        return_vertex=0,
        pruitt_strict_vertex=0,
    )
    return TruncationFamily(
        name, chain.generator, facts,
        omega_window=window, witness_submatrix=witness,
        extras={"gap_minorant": h, "chain": chain, "bead_weight": bead_weight, "kstar": kstar},
    )


def build_theorem2_fast(g: GapTarget, cycle_lengths=None, name: str = "theorem2-fast") -> TruncationFamily:
    """Transient matrix M = c S with ladder gaps below g(n) for every n >= 1.

    S is the gap-target weighting (intrinsic radius 1), and c in (0,1) is
    chosen below min of g on [1, l_min], so that small truncations are
    already within target.  The all-ones vector certifies transience of M at
    radius c (every out-weight of M is strictly below c).
    """
    base = build_corollary1(g, cycle_lengths, name=name + "-host")
    l_min = base.facts.l_min
    m = min(g(n) for n in range(1, l_min + 1))
    scale = min(Fraction(m) if isinstance(m, (int, Fraction)) else m, 1) / 2

    base_gen = base.generator

    def generator(n: int) -> WeightedDigraph:
        return base_gen(n).map_weights(lambda w: scale * w)

    facts = FamilyFacts(
        sct_size=math.inf,
        l_min=l_min,
        weighting_class=Tag.STRICTLY_SUBSTOCHASTIC,
        spectral_limit=scale,
        return_vertex=0,
        pruitt_strict_vertex=0,
    )
    return TruncationFamily(
        name, generator, facts,
        omega_window=base.omega_window, witness_submatrix=base.witness_submatrix,
        extras={"scale": scale, "host": base},
    )


# ---------------------------------------------------------------------------
# Long-cycle weighting on the return path (unbounded cycle lengths)
# ---------------------------------------------------------------------------


@dataclass
class LongCycleCertificate:
    k: int
    length: int
    epsilon: Fraction
    prior_length_sum: int
    ineq_certified: bool
    gain_bound: Fraction
    gain_certified: bool
    gain_checked_directly: bool
    out_weight_bound: Fraction
    out_weight_certified: bool


class _LongCycleSchedule:
    """Lazily selected cycle lengths l_k obeying the growth inequality.

    l_k must exceed L = l_1 + ... + l_{k-1} and satisfy
        ((1-e)/(1-2e))^{l_k} > (2^k (1-e)/e)^{L},   e = eps_k,
    certified exactly through rational bounds on the logarithms (the powers
    themselves are astronomically large).  Selection is a doubling search
    from L+1.
    """

    DIRECT_CHECK_CAP = 120_000

    def __init__(self, eps: EpsilonSchedule):
        self.eps = eps
        self.lengths: list[int] = [1]  # l_1 = 1: the loop at vertex 1

    def _certified(self, cand: int, total: int, lo_a: Fraction, hi_b: Fraction) -> bool:
        return cand > total and cand * lo_a > total * hi_b

    def ensure(self, k: int):
        while len(self.lengths) < k:
            j = len(self.lengths) + 1
            e = self.eps(j)
            total = sum(self.lengths)
            lo_a, _ = ln_bounds((1 - e) / (1 - 2 * e))
            _, hi_b = ln_bounds(2**j * (1 - e) / e)
            cand = total + 1
            while not self._certified(cand, total, lo_a, hi_b):
                cand *= 2
            self.lengths.append(cand)

    def ensure_cover(self, x: int):
        while self.lengths[-1] < x:
            self.ensure(len(self.lengths) + 1)

    def length(self, k: int) -> int:
        self.ensure(k)
        return self.lengths[k - 1]

    def cover_index(self, v: int) -> int:
        """Smallest j with l_j > v (the cycle first covering path arc (v, v+1))."""
        self.ensure_cover(v + 1)
        for j, l in enumerate(self.lengths, start=1):
            if l > v:
                return j
        raise AssertionError("cover index must exist")

    # weights on the return-path host, in the notation of 1-based vertices
    def path_weight(self, v: int) -> Fraction:
        j = self.cover_index(v)
        e = self.eps(j)
        if j >= 2 and v == self.lengths[j - 2]:
            return e / 2**j
        return 1 - e

    def return_weight(self, v: int) -> Fraction:
        self.ensure_cover(v)
        if v in self.lengths:
            j = self.lengths.index(v) + 1
            return 1 - self.eps(j)
        return 1 - self.path_weight(v)

    def loop_weight(self) -> Fraction:
        return 1 - self.eps(1)

    def certify(self, k: int) -> LongCycleCertificate:
        self.ensure(k)
        e = self.eps(k)
        l_k = self.length(k)
        total = sum(self.lengths[: k - 1])
        gain_bound = 1 - 2 * e

        if k == 1:
            ineq = True
            gain_ok = self.loop_weight() >= gain_bound
            direct = True
        else:
            lo_a, _ = ln_bounds((1 - e) / (1 - 2 * e))
            _, hi_b = ln_bounds(2**k * (1 - e) / e)
            ineq = self._certified(l_k, total, lo_a, hi_b)
            # census: the l_{k-1} arcs with old tails number at most L_{k-1},
            # and every such weight (e_j/2^j or 1-e_j) is at least e_k/2^k
            floor = e / 2**k
            inherited_ok = (
                self.lengths[k - 2] <= total
                and all(self.eps(j) / 2**j >= floor for j in range(2, k + 1))
                and 1 - self.eps(1) >= floor
            )
            gain_ok = ineq and inherited_ok
            direct = False
            if l_k <= self.DIRECT_CHECK_CAP:
                product = Fraction(1)
                for j in range(2, k + 1):
                    product *= self.eps(j) / 2**j
                for j in range(2, k + 1):
                    lo = self.lengths[j - 2]
                    hi = self.lengths[j - 1]
                    count = (hi - lo - 1) + (1 if j == k else 0)
                    product *= (1 - self.eps(j)) ** count
                direct = product >= gain_bound**l_k
                gain_ok = gain_ok and direct

        # out-weights of vertices first appearing in gamma_k, within the cycles
        e_next = self.eps(k + 1)
        out_bound = 1 - e / 2
        interior_ok = (1 - e) <= out_bound
        closer_ok = (1 - e) + e_next / 2 ** (k + 1) <= out_bound
        return LongCycleCertificate(
            k=k,
            length=l_k,
            epsilon=e,
            prior_length_sum=total,
            ineq_certified=ineq,
            gain_bound=gain_bound,
            gain_certified=gain_ok,
            gain_checked_directly=direct,
            out_weight_bound=out_bound,
            out_weight_certified=interior_ok and closer_ok,
        )


def build_prop2(eps: EpsilonSchedule, name: str = "prop2") -> TruncationFamily:
    """Strictly substochastic weighting (within its cycle system) whose cycle
    gains approach 1 along cycles of unbounded length.

    Host: the return path.  Cycle gamma_k is the length-l_k return cycle; an
    arc gets 1 - eps_k when its tail first appears in gamma_k, eps_k / 2^k
    when the tail is old but the arc is new, and keeps its weight otherwise.
    Return arcs outside the cycle system absorb the leftover slack, keeping
    vertex 1 strictly slack.
    """
    sched = _LongCycleSchedule(eps)

    def generator(n: int) -> WeightedDigraph:
        arcs = {(0, 0): sched.loop_weight()}
        for i in range(n - 1):
            arcs[(i, i + 1)] = sched.path_weight(i + 1)
        for i in range(1, n):
            arcs[(i, 0)] = sched.return_weight(i + 1)
        return WeightedDigraph(n, arcs)

    def gamma_generator(n: int) -> WeightedDigraph:
        sched.ensure_cover(n + 1)
        closers = set(sched.lengths)
        arcs = {(0, 0): sched.loop_weight()}
        for i in range(n - 1):
            arcs[(i, i + 1)] = sched.path_weight(i + 1)
        for i in range(1, n):
            if (i + 1) in closers:
                arcs[(i, 0)] = sched.return_weight(i + 1)
        return WeightedDigraph(n, arcs)

    facts = FamilyFacts(
        transversal=frozenset({0}),
        sct_size=1,
        l_min=1,
        l_max=math.inf,
        weighting_class=Tag.TRUTHLY_SUBSTOCHASTIC,
        spectral_limit=1,
        return_vertex=0,
        pruitt_strict_vertex=0,
    )
    gamma_facts = FamilyFacts(
        transversal=frozenset({0}),
        sct_size=1,
        l_min=1,
        l_max=math.inf,
        weighting_class=Tag.STRICTLY_SUBSTOCHASTIC,
        spectral_limit=1,
        return_vertex=0,
        pruitt_strict_vertex=0,
    )
    gamma = TruncationFamily(name + "-cycles", gamma_generator, gamma_facts,
                             omega_window=lambda n: n)
    return TruncationFamily(
        name, generator, facts, omega_window=lambda n: n,
        extras={"schedule": sched, "certify": sched.certify, "cycle_system": gamma},
    )


# ---------------------------------------------------------------------------
# Named-family registry (JSON-configurable surface)
# ---------------------------------------------------------------------------


def _rat(x):
    return Fraction(str(x))


def _sequence_from_config(cfg) -> object:
    if isinstance(cfg, (list, tuple)):
        return [_rat(v) for v in cfg]
    kind = cfg.get("kind")
    if kind == "list":
        return [_rat(v) for v in cfg["values"]]
    if kind == "int-list":
        return [int(v) for v in cfg["values"]]
    if kind == "linear":
        start = int(cfg.get("start", 1))
        step = int(cfg.get("step", 1))
        return lambda k: start + step * (k - 1)
    if kind == "powers-of-two":
        return lambda k: 2**k
    if kind == "constant":
        v = _rat(cfg["value"])
        return lambda k: v
    if kind == "one-minus-inverse-length":
        base = _sequence_from_config(cfg["lengths"])
        base_fn = as_sequence(base)
        return lambda k: 1 - Fraction(1, base_fn(k))
    if kind == "one-minus-geometric":
        ratio = _rat(cfg.get("ratio", "1/2"))
        return lambda k: 1 - ratio**k
    raise ValueError(f"unknown sequence kind {kind!r}")


def _gap_from_config(cfg) -> GapTarget:
    kind = cfg.get("kind", "exp2")
    if kind == "exp2":
        return GapTarget.exp2()
    if kind == "power":
        return GapTarget.power(int(cfg.get("exponent", 2)))
    if kind == "constant":
        return GapTarget.constant(_rat(cfg["value"]))
    raise ValueError(f"unknown gap-target kind {kind!r}")


def family_from_config(name: str, params: Mapping | None = None) -> TruncationFamily:
    """Instantiate a built-in named family from a JSON-style parameter dict."""
    params = dict(params or {})
    if name == "example1":
        a = _rat(params.get("a", "1/2"))
        fcfg = params.get("f", {"kind": "geometric", "ratio": "1/2"})
        if isinstance(fcfg, (list, tuple)):
            f = [_rat(v) for v in fcfg]
        elif fcfg.get("kind") == "geometric":
            f = f_geometric(_rat(fcfg.get("ratio", "1/2")))
        elif fcfg.get("kind") == "power":
            f = f_power(float(fcfg.get("epsilon", 0.5)))
            a = float(a)
        elif fcfg.get("kind") == "list":
            f = [_rat(v) for v in fcfg["values"]]
        else:
            raise ValueError(f"unknown f kind {fcfg.get('kind')!r}")
        return build_example1(a=a, f=f)
    if name == "example2":
        acfg = params.get("a", {"kind": "power", "exponent": -0.75})
        if isinstance(acfg, (list, tuple)):
            a = [_rat(v) for v in acfg]
        elif acfg.get("kind") == "power":
            a = a_power(float(acfg.get("exponent", -0.75)))
        elif acfg.get("kind") == "list":
            a = [_rat(v) for v in acfg["values"]]
        else:
            raise ValueError(f"unknown a kind {acfg.get('kind')!r}")
        return build_example2(a, sorted_weights=bool(params.get("sorted", True)))
    if name == "prop1":
        lengths = _sequence_from_config(params.get("lengths", {"kind": "linear"}))
        targets = _sequence_from_config(params.get("targets", {"kind": "one-minus-geometric"}))
        declared = params.get("declared_lambda")
        return build_prop1(lengths, targets,
                           declared_lambda=_rat(declared) if declared is not None else None)
    if name == "prop2":
        ecfg = params.get("epsilon", {"kind": "geometric", "ratio": "1/4"})
        return build_prop2(EpsilonSchedule.geometric(_rat(ecfg.get("ratio", "1/4"))))
    if name == "corollary1":
        lengths = params.get("lengths")
        return build_corollary1(
            _gap_from_config(params.get("g", {"kind": "exp2"})),
            _sequence_from_config(lengths) if lengths is not None else None,
        )
    if name == "theorem2-fast":
        lengths = params.get("lengths")
        return build_theorem2_fast(
            _gap_from_config(params.get("g", {"kind": "exp2"})),
            _sequence_from_config(lengths) if lengths is not None else None,
        )
    raise ValueError(f"unknown family {name!r}")


BUILTIN_FAMILIES = ("example1", "example2", "prop1", "prop2", "corollary1", "theorem2-fast")
