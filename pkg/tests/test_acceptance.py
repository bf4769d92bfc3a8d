"""Acceptance suite: one test per criterion, each at its stated tolerance
and runtime budget, reporting a pass/fail line."""

import itertools
import time

import numpy as np
from click.testing import CliRunner

from zxel import diagram as D
from zxel import normalform as NF
from zxel import rewrite as RW
from zxel import rules as R
from zxel.cli import main as cli_main
from zxel.equivalence import check_equivalent
from zxel.io import load_diagram, save_diagram
from zxel.semantics import contract_state, interpret, matrices_equal

from conftest import record_acceptance
from helpers import (random_complex, random_diagram, row_addition_matrix,
                     row_multiplication_matrix)


def _report(num, ok, text):
    record_acceptance(f"ACCEPTANCE {num} {'PASS' if ok else 'FAIL'}: {text}")
    assert ok, text


def test_criterion_1_figure_rule_soundness():
    t0 = time.monotonic()
    reports = R.check_catalog(R.figure_catalog(), samples=20, tol=1e-9, seed=7)
    elapsed = time.monotonic() - t0
    bad = [r.name for r in reports if not r.ok]
    dev = max(r.max_deviation for r in reports)
    ok = not bad and dev <= 1e-9 and elapsed < 30
    _report(1, ok, f"figure rules + flipped variants sound "
                   f"({len(reports)} rules, max deviation {dev:.2e}, "
                   f"{elapsed:.1f}s){'; failing: ' + str(bad) if bad else ''}")


def test_criterion_2_derived_rule_soundness():
    t0 = time.monotonic()
    derived = R.derived_catalog()
    reports = R.check_catalog(derived, samples=20, tol=1e-9, seed=11)
    elapsed = time.monotonic() - t0
    bad = [r.name for r in reports if not r.ok]
    dev = max(r.max_deviation for r in reports)
    names = {r.name for r in derived}
    needed = {"Hopf", "Pic", "AD'", "BiA", "Dis", "piredonpairpidm",
              "addcommutatgencont", "pimultiaddcombinepro",
              "addpipair2sidecommutprop"}
    ok = (len(derived) >= 30 and needed <= names and not bad
          and dev <= 1e-9 and elapsed < 120)
    _report(2, ok, f"derived catalog sound ({len(derived)} rules, "
                   f"max deviation {dev:.2e}, {elapsed:.1f}s)"
                   f"{'; failing: ' + str(bad) if bad else ''}")


def test_criterion_3_elementary_faithfulness():
    a = 0.8 - 1.3j
    ok = True
    for m in (1, 2, 3):
        for r in range(1, m + 1):
            for subset in itertools.combinations(range(m), r):
                got = interpret(NF.row_addition_diagram(m, a, subset))
                want = row_addition_matrix(m, a, subset)
                if not matrices_equal(got, want, 1e-12):
                    ok = False
        got = interpret(NF.row_multiplication_diagram(m, a))
        if not matrices_equal(got, row_multiplication_matrix(m, a), 1e-12):
            ok = False
    _report(3, ok, "row addition matches A_j and row multiplication matches "
                   "diag(1,..,1,a) entrywise (all m <= 3, all subsets, 1e-12)")


def test_criterion_4_normal_form_round_trip():
    t0 = time.monotonic()
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(200):
        m = int(rng.integers(1, 5))
        v = np.array([random_complex(rng) for _ in range(2 ** m)])
        got = contract_state(NF.nf_to_diagram(NF.nf_from_vector(v)))
        worst = max(worst, float(np.max(np.abs(got - v))))
    elapsed = time.monotonic() - t0
    ok = worst <= 1e-9 and elapsed < 60
    _report(4, ok, f"200 random vectors (m <= 4) round-trip through the "
                   f"normal-form diagram (worst {worst:.2e}, {elapsed:.1f}s)")


def test_criterion_5_self_plug_formulas():
    rng = np.random.default_rng(19)
    ok = True
    v = np.array([random_complex(rng) for _ in range(4)])
    got = NF.nf_self_plug(NF.nf_from_vector(v), (0, 1))
    ok &= abs(got.coeffs[0] - (v[0] + v[3])) == 0.0
    v = np.array([random_complex(rng) for _ in range(8)])
    got = NF.nf_self_plug(NF.nf_from_vector(v), (0, 1))
    ok &= np.allclose(got.vector(), [v[0] + v[3], v[4] + v[7]], atol=0)
    worst = 0.0
    for _ in range(100):
        m = int(rng.integers(2, 5))
        v = np.array([random_complex(rng) for _ in range(2 ** m)])
        p = int(rng.integers(0, m - 1))
        q = int(rng.integers(p + 1, m))
        got = NF.nf_self_plug(NF.nf_from_vector(v), (p, q)).vector()
        arr = v.reshape((2,) * m)
        oracle = np.trace(arr, axis1=m - 1 - q, axis2=m - 1 - p).reshape(-1)
        worst = max(worst, float(np.max(np.abs(got - oracle), initial=0.0)))
    ok &= worst <= 1e-12
    _report(5, ok, f"self-plug matches the paper's right-most formulas and "
                   f"the cup-contraction oracle on 100 general pairs "
                   f"(worst {worst:.2e})")


def test_criterion_6_tensor_protocol_endpoint():
    rng = np.random.default_rng(23)
    worst = 0.0
    for _ in range(100):
        m = int(rng.integers(0, 4))
        n = int(rng.integers(0, 4))
        va = np.array([random_complex(rng) for _ in range(2 ** m)])
        vb = np.array([random_complex(rng) for _ in range(2 ** n)])
        got = NF.nf_tensor(NF.nf_from_vector(va), NF.nf_from_vector(vb))
        worst = max(worst, float(np.max(np.abs(got.vector() - np.kron(va, vb)),
                                        initial=0.0)))
    ok = worst <= 1e-12
    _report(6, ok, f"nf_tensor equals the Kronecker product a_i b_j on 100 "
                   f"random cases (worst {worst:.2e})")


def _equal_pair(rng):
    """A pair of semantically equal diagrams produced by sound rewrites."""
    d1 = random_diagram(rng)
    sites = []
    for name in RW.MATCHABLE_RULES:
        sites.extend(RW.find_matches(d1, name))
    if sites and rng.uniform() < 0.75:
        d2 = d1
        for _ in range(int(rng.integers(1, 4))):
            pool = []
            for name in RW.MATCHABLE_RULES:
                pool.extend(RW.find_matches(d2, name))
            if not pool:
                break
            d2 = RW.apply(d2, pool[int(rng.integers(0, len(pool)))])
        return d1, d2
    # otherwise splice a certified rule instance into a small context
    small = [r for r in R.full_catalog() if r.arity <= 2]
    rule = small[int(rng.integers(0, len(small)))]
    params = [random_complex(rng) for _ in range(rule.arity)]
    if not rule.admissible(params):
        params = [1.0 + 0.5j] * rule.arity
    lhs, rhs = R.instantiate(rule, params)
    if lhs.n_in + lhs.n_out <= 4:
        return lhs, rhs
    return d1, d1


def test_criterion_7_desk_scale_completeness():
    t0 = time.monotonic()
    rng = np.random.default_rng(29)
    agree = 0
    equal_ok = 0
    distinct_ok = 0
    total = 0
    while total < 500:
        if total % 2 == 0:
            d1, d2 = _equal_pair(rng)
            expect_equal = True
        else:
            d1 = random_diagram(rng)
            d2 = random_diagram(rng)
            if d1.type != d2.type:
                continue
            expect_equal = None
        total += 1
        verdict = check_equivalent(d1, d2)  # raises on route disagreement
        sem = matrices_equal(interpret(d1), interpret(d2), 1e-9)
        if verdict.equal == sem:
            agree += 1
        if expect_equal is True and verdict.equal:
            equal_ok += 1
        if expect_equal is None and not sem and not verdict.equal:
            distinct_ok += 1
    elapsed = time.monotonic() - t0
    ok = agree == total == 500 and equal_ok == 250 and elapsed < 300
    _report(7, ok, f"completeness at desk scale: 500 pairs, "
                   f"{agree}/{total} verdict agreement, {equal_ok}/250 "
                   f"rewrite-equal pairs equal, {distinct_ok} distinct pairs "
                   f"separated ({elapsed:.1f}s)")


def test_criterion_8_simplifier_safety():
    rng = np.random.default_rng(31)
    ok = True
    worst = 0.0
    for _ in range(500):
        d = random_diagram(rng)
        res = RW.simplify(d, budget=10 * len(d.nodes) + 20)
        if res.budget_exhausted:
            ok = False
        dev = float(np.max(np.abs(interpret(res.diagram) - interpret(d)),
                           initial=0.0))
        worst = max(worst, dev)
    ok &= worst <= 1e-9
    _report(8, ok, f"simplify preserves interpretation (worst {worst:.2e}) "
                   f"and reaches a fixpoint within budget on 500 diagrams")


def test_criterion_9_cli_contract(tmp_path):
    runner = CliRunner()
    ok = True
    # exit codes
    a = str(tmp_path / "a.zx")
    b = str(tmp_path / "b.zx")
    c = str(tmp_path / "c.zx")
    save_diagram(D.compose(D.z_spider(1, 1, 2.0), D.z_spider(1, 1, 0.5j)), a)
    save_diagram(D.z_spider(1, 1, 1.0j), b)
    save_diagram(D.cap(), c)
    ok &= runner.invoke(cli_main, ["check-eq", a, b]).exit_code == 0
    save_diagram(D.z_spider(1, 1, -1.0j), b)
    ok &= runner.invoke(cli_main, ["check-eq", a, b]).exit_code == 1
    ok &= runner.invoke(cli_main, ["check-eq", a, c]).exit_code == 2
    # file round trip identity
    rng = np.random.default_rng(37)
    for k in range(5):
        d = random_diagram(rng)
        p1 = str(tmp_path / f"r{k}.zx")
        p2 = str(tmp_path / f"r{k}b.zx")
        save_diagram(d, p1)
        d2 = load_diagram(p1)
        save_diagram(d2, p2)
        ok &= load_diagram(p2).structural_key() == d2.structural_key()
    # rules: clean build passes, corrupted build fails
    ok &= runner.invoke(cli_main, ["rules", "--samples", "2"]).exit_code == 0
    ok &= runner.invoke(cli_main, ["rules", "--samples", "2",
                                   "--corrupt", "Hopf"]).exit_code == 1
    _report(9, ok, "CLI exit codes stable, file round-trip identical, rules "
                   "sweep passes clean and fails when a rule is corrupted")
