"""Acceptance gate: one test per criterion, each printing its pass/fail line.

Every tolerance and runtime budget is pinned here; nothing is deferred to
later calibration.  Seeds are fixed so the instance streams are reproducible.
"""

import math
import time
from contextlib import contextmanager
from fractions import Fraction as F

import numpy as np
import pytest

from substochastic import (
    CyrStructural,
    DivergingSeries,
    EpsilonSchedule,
    GapTarget,
    PruittVector,
    Tag,
    charpoly,
    check_boyle_handelman,
    check_ksv,
    classify_recurrence,
    classify_weighting,
    det_i_minus,
    fit_decay,
    min_cycle_transversal,
    perron_bounds,
    perron_root,
    run_suite,
    sup_cycle_gain,
    truncate,
    verify_pruitt,
)
from substochastic.constructions import (
    a_power,
    build_corollary1,
    build_example1,
    build_example2,
    build_prop1,
    build_prop2,
    build_theorem2_fast,
    f_power,
)
from substochastic.families import FamilyFacts, TruncationFamily
from substochastic.inequalities import instance_stream
from substochastic.digraph import WeightedDigraph

from conftest import brute_min_fvs

SEED = 20240811


@contextmanager
def criterion(capsys, number, name, limit_seconds):
    start = time.perf_counter()
    failed = None
    try:
        yield
    except BaseException as exc:  # print the line before pytest reports
        failed = exc
    elapsed = time.perf_counter() - start
    ok = failed is None and elapsed < limit_seconds
    with capsys.disabled():
        print(f"acceptance {number:>2} {name:<28} "
              f"{'PASS' if ok else 'FAIL'} ({elapsed:.1f}s / {limit_seconds}s)")
    if failed is not None:
        raise failed
    assert elapsed < limit_seconds, f"runtime {elapsed:.1f}s over budget {limit_seconds}s"


def test_01_coates_identity(capsys):
    with criterion(capsys, 1, "coates-identity", 10):
        for _, d in instance_stream(SEED, 20, 8):
            assert charpoly(d, "coates") == charpoly(d, "elimination")


def test_02_boyle_handelman_ksv_chain(capsys):
    with criterion(capsys, 2, "boyle-handelman/ksv chain", 30):
        for _, d in instance_stream(SEED + 1, 100, 8):
            det = det_i_minus(d)
            r = len(charpoly(d)) - 1
            n = d.order
            lo, hi = perron_bounds(d)
            # chain at the certified upper bracket; bracket-straddling
            # equality cases fall back to the lower end
            assert det <= 1 - hi**r or det <= 1 - lo**r
            assert 1 - hi**r <= 1 - hi**n
            assert 1 - hi**n <= n * (1 - hi)
            # floating mode agrees in sign on the same instance
            rep_e = check_boyle_handelman(d)
            rep_f = check_boyle_handelman(d.to_float())
            kse, ksf = check_ksv(d), check_ksv(d.to_float())
            assert rep_e.ok and kse.ok
            assert rep_f.ok and ksf.ok
            assert (rep_e.min_margin >= 0) == (rep_f.min_margin >= -1e-9)
            assert (kse.min_margin >= 0) == (ksf.min_margin >= -1e-9)


def test_03_resolvent_inequality_suites(capsys):
    with criterion(capsys, 3, "resolvent inequality suites", 60):
        for suite in ("lemma-a1", "lemma-a2", "a1-product", "sigma-k"):
            rep = run_suite(suite, count=100, seed=SEED + 2, order_max=12)
            assert rep.ok, f"{suite}: {rep.violations[:3]}"
            assert rep.min_margin is not None and rep.min_margin >= 0


def test_04_zeta_identity(capsys):
    with criterion(capsys, 4, "zeta identity", 20):
        rep = run_suite("zeta", count=50, seed=SEED + 3, order_max=8)
        assert rep.ok
        assert rep.min_margin == 0  # exact equality both ways


def test_05_star_closed_form_and_gap_decay(capsys):
    with criterion(capsys, 5, "star ladder closed form", 60):
        fam = build_example2(a_power(-0.75))
        b_n = fam.facts.perron_closed_form
        for n in (2, 10, 100, 500):
            lam = perron_root(truncate(fam, n))
            assert lam == pytest.approx(b_n(n), rel=1e-10)
        limit = fam.facts.spectral_limit
        grid = np.unique(np.geomspace(1_000, 100_000, 25).astype(int))
        pairs = [(int(n), limit - b_n(int(n))) for n in grid]
        fit = fit_decay(pairs)
        assert -0.6 <= fit.slope <= -0.4


def test_06_return_path_rate(capsys):
    with criterion(capsys, 6, "return-path gain rate", 300):
        fam = build_example1(a=0.5, f=f_power(0.5))
        # n (1 - omega_n) / log n bounded above; the analysis gives 1 + eps'
        # for any eps' > 1/2 asymptotically, observed ~1.64 on this grid
        for n in (100, 178, 316, 562, 1000, 1778, 3162, 5623, 10000):
            om = sup_cycle_gain(truncate(fam, n), max_length=n, proper_only=False)
            assert n * (1 - om.value) / math.log(n) <= 2.0
        # n (1 - lambda_n) bounded below: the hub resolvent bound gives
        # (1-a) f_1 = 0.5 / zeta(1.5) ~ 0.19; observed values exceed 2
        for n in (100, 200, 400, 700, 1000):
            lam = perron_root(truncate(fam, n))
            assert n * (1 - lam) >= 0.19


def test_07_long_cycle_construction(capsys):
    with criterion(capsys, 7, "long-cycle construction", 60):
        fam = build_prop2(EpsilonSchedule.geometric(F(1, 4)))
        certify = fam.extras["certify"]
        for k in range(1, 7):
            cert = certify(k)
            eps_k = F(1, 4**k)
            if k >= 2:
                assert cert.ineq_certified
            assert cert.gain_certified
            assert cert.gain_bound == 1 - 2 * eps_k
            assert cert.out_weight_certified
            assert cert.out_weight_bound == 1 - eps_k / 2
        # the cycle system is strictly substochastic on truncations
        gamma = fam.extras["cycle_system"]
        assert classify_weighting(truncate(gamma, 80)).tag is Tag.STRICTLY_SUBSTOCHASTIC
        # gains certify the supremum is 1 to within 2 eps_6
        assert certify(6).gain_bound == 1 - 2 * F(1, 4**6)


def test_08_fast_gap_constructions(capsys):
    with criterion(capsys, 8, "fast-gap constructions", 30):
        g = GapTarget.exp2()
        host = build_corollary1(g)
        for n in range(host.facts.l_min, 13):
            window = host.omega_window(n)
            om = sup_cycle_gain(truncate(host, window), max_length=n, proper_only=False)
            assert 1 - om.value < F(1, 2**n)
        fast = build_theorem2_fast(g)
        scale = fast.extras["scale"]
        assert 0 < scale < 1
        lam = float(scale)
        for n in range(1, 13):
            verts = fast.witness_submatrix(n)
            assert len(verts) <= n
            d = truncate(fast, max(verts) + 1).induced(verts)
            assert lam - perron_root(d) < F(1, 2**n)
        # attached transience certificate: all-ones, exact, strict
        d30 = truncate(fast, 30)
        ok, strict = verify_pruitt(d30, [F(1)] * 30, scale)
        assert ok and strict is not None
        assert fast.facts.pruitt_strict_vertex == 0


def test_09_classification_soundness(capsys):
    with criterion(capsys, 9, "classification soundness", 30):
        v = classify_recurrence(build_example2(a_power(-0.75)))
        assert v.verdict == "recurrent" and v.confidence == "certified"
        assert isinstance(v.evidence, CyrStructural)

        loop_fam = TruncationFamily(
            "half-loop",
            lambda n: WeightedDigraph(n, {(0, 0): F(1, 2)}),
            FamilyFacts(spectral_limit=F(1, 2), return_vertex=0),
        )
        v = classify_recurrence(loop_fam, n_max=12, p_max=1000)
        assert v.verdict == "recurrent"
        assert isinstance(v.evidence, DivergingSeries)
        # the scaled powers are exactly one: partial sums are exactly P + 1
        assert v.evidence.partial_sums[-1] == 1001.0

        fam = build_prop1(lambda k: 1, lambda k: 1 - F(1, 2**k), declared_lambda=1)
        v = classify_recurrence(fam, n_max=40, p_max=2000)
        assert v.verdict == "transient" and v.confidence == "certified"
        assert isinstance(v.evidence, PruittVector) and v.evidence.xi == "ones"


def test_10_transversal_correctness(capsys):
    with criterion(capsys, 10, "exact minimum transversal", 60):
        for _, d in instance_stream(SEED + 4, 50, 9):
            res = min_cycle_transversal(d)
            assert res.optimality == "exact"
            assert res.size == brute_min_fvs(d)
        fam = build_example1(a=F(1, 2), f=lambda n: F(1, 2**n))
        for n in (2, 5, 9, 17, 33):
            assert min_cycle_transversal(truncate(fam, n)).vertices == frozenset({0})


def test_11_conjecture_fuzzing(capsys):
    with criterion(capsys, 11, "argmax conjecture fuzzing", 300):
        rep = run_suite("conjecture", count=500, seed=SEED + 5, order_max=8)
        assert rep.ok, "a proved bound was violated"
        assert rep.instances_tested == 500
        for finding in rep.findings:
            assert finding["counterexamples"]
            assert finding["argmax"]
