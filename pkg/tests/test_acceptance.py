"""Acceptance criteria 1-11, each timed against its runtime budget.

Every criterion records one PASS/FAIL line; the lines are printed in the
terminal summary (see conftest.py).
"""

from __future__ import annotations

import time
from contextlib import contextmanager

import numpy as np

from genplateau import corpus
from genplateau.analysis import (
    gmm_line_obstruction,
    linear_structures,
    nonquadratic_witness,
    partially_bent_test,
    vectorial_check,
    wrp_membership,
)
from genplateau.builders import corollary2_dual_and_regularity
from genplateau.field import rank_mod_p
from genplateau.params import build, load
from genplateau.spectral import lex_subspace, support_matrix_analyze
from genplateau.walsh import classify, walsh_transform


@contextmanager
def criterion(log: dict, n: int, title: str, budget: float):
    start = time.perf_counter()
    status, note = "FAIL", ""
    try:
        yield
        elapsed = time.perf_counter() - start
        if elapsed >= budget:
            note = f" (over budget: {elapsed:.1f} s >= {budget:g} s)"
            raise AssertionError(f"criterion {n} took {elapsed:.1f} s, budget {budget:g} s")
        limit = f", budget {budget:g} s" if budget != float("inf") else ""
        status, note = "PASS", f" ({elapsed:.2f} s{limit})"
    finally:
        log[n] = f"criterion {n:2d} {status}: {title}{note}"


def example(n: int):
    return build(load(corpus.params_path(n)))


def test_criterion_01_example1(acceptance_log):
    with criterion(acceptance_log, 1, "Example 1 affine-support construction", 1):
        res = example(1)
        assert corpus.matches_reference(1, res)
        rep = classify(res.f)
        assert rep.s == 1 and rep.mu_constant() is not None and len(rep.support) == 27


def test_criterion_02_example2(acceptance_log):
    with criterion(acceptance_log, 2, "Example 2 over Z_8 with coset support", 1):
        res = example(2)
        assert corpus.matches_reference(2, res)
        rep = classify(res.f)
        assert rep.s == 2
        elems, _ = lex_subspace([[0, 0, 1, 1], [1, 1, 0, 1]], 2)
        coset = res.f.space.index((elems + np.array([0, 1, 1, 0])) % 2)
        assert sorted(coset.tolist()) == rep.support.tolist()


def test_criterion_03_example3(acceptance_log):
    with criterion(acceptance_log, 3, "Example 3 glued generalized bent function", 1):
        res = example(3)
        assert corpus.matches_reference(3, res)
        spec = walsh_transform(res.f)
        norms = spec.norms()
        assert len(norms) == 64 and np.all(norms == 64)


def test_criterion_04_example4(acceptance_log):
    with criterion(acceptance_log, 4, "Example 4 3-plateaued over Z_9, no affine columns", 30):
        res = example(4)
        f = res.f
        assert (f.p, f.k, f.n) == (3, 2, 7)
        assert classify(f).s == 3
        _sm, count, _ = support_matrix_analyze(res.design)
        assert count == 0 and res.design.n == 7
        assert corpus.matches_reference(4, res)  # secondary check


def test_criterion_05_example5(acceptance_log):
    with criterion(acceptance_log, 5, "Example 5 4-plateaued Boolean, no linear structures", 30):
        res = example(5)
        f = res.f
        rep = classify(f)
        assert (f.p, f.k, f.n) == (2, 1, 10) and rep.s == 4
        _sm, count, _ = support_matrix_analyze(res.design)
        assert count == 0 and res.design.n == 10
        ls = linear_structures(f)
        assert len(ls) == 1 and not ls.any()
        assert 0 in rep.support.tolist() and rank_mod_p(rep.support_coords(), 2) == 10


def test_criterion_06_examples6_7(acceptance_log):
    with criterion(acceptance_log, 6, "Examples 6 and 7 match their closed forms", 30):
        for n, shape in ((6, (5, 3, 4)), (7, (2, 1, 8))):
            t0 = time.perf_counter()
            res = example(n)
            assert (res.f.p, res.f.k, res.f.n) == shape
            assert corpus.matches_reference(n, res)
            assert time.perf_counter() - t0 < 30


def test_criterion_07_example8(acceptance_log):
    with criterion(acceptance_log, 7, "Example 8 1-plateaued on 7^7 points, non-affine support", 600):
        res = example(8)
        assert res.f.space.size == 7**7 and res.f.p == 7
        assert res.report.s == 1
        assert not res.report.is_affine_support()


def test_criterion_08_example9(acceptance_log):
    with criterion(acceptance_log, 8, "Example 9 non-weakly regular bent, line obstruction", 600):
        res = example(9)
        rep = res.report
        assert rep.s == 0 and rep.regularity == "non_weakly_regular"
        assert len(set(rep.mu.tolist())) > 1
        _hs, pred = corollary2_dual_and_regularity(res.extra["spec"], res.f)
        assert 2 in pred["conditions"]
        gmm = gmm_line_obstruction(res.f)
        assert gmm["obstructed"] and gmm["lines_checked"] == (3**8 - 1) // 2 == 3280


def test_criterion_09_example10(acceptance_log):
    with criterion(acceptance_log, 9, "Example 10 WRP member, not partially bent, non-quadratic", 60):
        res = example(10)
        assert corpus.matches_reference(10, res)
        w = wrp_membership(res.f)
        assert w["member"] and w["h_exp"] == 2
        assert not partially_bent_test(res.f)
        wit = nonquadratic_witness(res.f)
        assert wit is not None


def test_criterion_10_example11(acceptance_log):
    with criterion(acceptance_log, 10, "Example 11 vectorial plateaued with mixed regularity", 900):
        res = example(11)
        rep = vectorial_check(res.functions)
        rows = rep["combinations"]
        assert len(rows) == 26 and rep["all_plateaued"]
        for r in rows:
            assert r["s"] == (0 if sum(r["a"]) % 3 else 3)
        regs = {r["regularity"] for r in rows}
        assert "non_weakly_regular" in regs and regs & {"regular", "weakly_regular"}


def test_criterion_11_property_suites(acceptance_log):
    import test_analysis
    import test_builders
    import test_spectral
    import test_walsh

    suites = [
        test_walsh.test_parseval,
        test_walsh.test_inverse_recovers_function,
        test_walsh.test_fast_equals_naive,
        test_walsh.test_fast_transform_matches_exact_double_sum,
        test_spectral.test_affine_support_construction_round_trip,
        test_builders.test_classical_indirect_sum_p2,
        test_analysis.test_partially_bent_iff_affine_support_exhaustive,
        test_builders.test_maiorana_mcfarland_dual,
        test_builders.test_maiorana_mcfarland_dual_f49,
        test_builders.test_psap_dual,
    ]
    with criterion(acceptance_log, 11, f"property suites ({len(suites)} suites, >= 100 cases each)", float("inf")):
        for suite in suites:
            suite()
