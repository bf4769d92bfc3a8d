import functools

import numpy as np
import pytest

from zxel import diagram as D
from zxel import rewrite as RW
from zxel.semantics import interpret, matrices_equal

from helpers import random_complex, random_diagram


def test_s1_match_on_chain():
    a, b = 0.5 + 0.25j, -1.5
    chain = D.compose(D.z_spider(1, 1, a), D.z_spider(1, 1, b))
    sites = RW.find_matches(chain, "S1")
    assert len(sites) == 1
    out = RW.apply(chain, sites[0])
    assert len(out.nodes) == 1
    assert matrices_equal(interpret(out), np.diag([1, a * b]))


def test_s1_no_match_on_single_h():
    assert RW.find_matches(D.h_box(), "S1") == []


def test_hopf_match_on_double_h_path():
    host = D.compose(D.z_spider(1, 2, 1.0),
                     D.compose(D.tensor(D.h_box(), D.h_box()),
                               D.z_spider(2, 1, 1.0)))
    sites = RW.find_matches(host, "Hopf")
    assert len(sites) == 1
    out = RW.apply(host, sites[0])
    assert matrices_equal(interpret(out), interpret(host))
    assert len(out.nodes) == 2  # the two spiders, disconnected


def test_stale_site_rejected():
    chain = D.compose(D.z_spider(1, 1, 2.0), D.z_spider(1, 1, 3.0))
    site = RW.find_matches(chain, "S1")[0]
    with pytest.raises(RW.StaleSiteError):
        RW.apply(D.triangle(), site)


def test_unsupported_rule_matching():
    with pytest.raises(RW.UnsupportedRuleError):
        RW.find_matches(D.h_box(), "EU")


def test_apply_preserves_semantics_everywhere():
    rng = np.random.default_rng(9)
    checked = 0
    for _ in range(80):
        d = random_diagram(rng)
        for name in RW.MATCHABLE_RULES:
            for site in RW.find_matches(d, name)[:2]:
                out = RW.apply(d, site)
                out.check_validity()
                assert matrices_equal(interpret(out), interpret(d), 1e-9), \
                    (name, site)
                checked += 1
    assert checked > 50


def test_all_b3_variants_sound():
    a = random_complex(np.random.default_rng(2))
    hosts = [
        D.compose(D.x_spider(1, 1, D.TAU_PI), D.x_spider(1, 1, D.TAU_PI)),
        D.compose(D.z_spider(0, 1, a or 1.0), D.x_spider(1, 1, D.TAU_PI)),
        D.compose(D.x_spider(1, 1, D.TAU_PI), D.z_spider(1, 2, 1.0)),
        D.compose(D.x_spider(1, 1, D.TAU_PI), D.z_spider(1, 3, 2.0 + 1j)),
    ]
    for host in hosts:
        sites = RW.find_matches(host, "B3")
        assert sites, host
        for site in sites:
            out = RW.apply(host, site)
            assert matrices_equal(interpret(out), interpret(host), 1e-9), \
                site.rule


def test_simplify_fuses_spider_chain():
    k = 6
    chain = functools.reduce(
        D.compose, [D.z_spider(1, 1, 1.0 + 0.1j * i) for i in range(k)])
    res = RW.simplify(chain)
    assert len(res.diagram.nodes) == 1
    assert not res.budget_exhausted
    assert matrices_equal(interpret(res.diagram), interpret(chain))


def test_simplify_budget_zero_unchanged():
    d = D.compose(D.z_spider(1, 1, 2.0), D.z_spider(1, 1, 3.0))
    res = RW.simplify(d, budget=0)
    assert res.diagram is d and res.steps == 0 and res.budget_exhausted


def test_simplify_fixpoint_unchanged():
    d = D.triangle()
    res = RW.simplify(d)
    assert res.steps == 0
    assert res.diagram.structural_key() == d.structural_key()


def test_simplify_negative_budget():
    with pytest.raises(ValueError):
        RW.simplify(D.triangle(), budget=-1)


def test_simplify_deterministic():
    rng = np.random.default_rng(77)
    for _ in range(10):
        d = random_diagram(rng)
        r1 = RW.simplify(d, trace=True)
        r2 = RW.simplify(d, trace=True)
        assert r1.trace == r2.trace
        assert r1.diagram.structural_key() == r2.diagram.structural_key()


def test_simplify_corpus_semantics_and_termination():
    rng = np.random.default_rng(123)
    for _ in range(200):
        d = random_diagram(rng)
        res = RW.simplify(d, budget=10 * len(d.nodes) + 20)
        assert not res.budget_exhausted
        assert matrices_equal(interpret(res.diagram), interpret(d), 1e-9)


def test_simplify_never_grows_node_count():
    rng = np.random.default_rng(321)
    for _ in range(60):
        d = random_diagram(rng)
        res = RW.simplify(d, trace=True)
        cur = d
        for step in res.trace:
            sites = [s for s in RW.find_matches(cur, step["rule"])
                     if list(s.nodes) == step["nodes"]]
            assert sites
            nxt = RW.apply(cur, sites[0])
            assert len(nxt.nodes) <= len(cur.nodes)
            cur = nxt


def test_scalar_components_kept():
    # H2 leaves an explicit scalar-2 dot instead of silently dropping it
    d = D.compose(D.h_box(), D.h_box())
    res = RW.simplify(d)
    scalars = [n for n in res.diagram.nodes.values()
               if n.kind == "z" and abs(n.phase - 1.0) < 1e-12]
    assert scalars
    assert matrices_equal(interpret(res.diagram), 2 * np.eye(2))
