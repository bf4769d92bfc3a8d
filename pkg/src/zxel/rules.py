"""The algebraic rule set and derived-rule library, with a soundness harness.

Every rule is a pair of diagram builders over complex parameter slots.
Nothing here is trusted on sight: a rule enters the catalog only if
``check_soundness`` finds the two sides (and their upside-down flips)
semantically equal on randomised and forced parameter draws.  The harness
is the transcription oracle for the figure material.

Derived rules carry a provenance label naming the lemma or proposition
they encode.  The commutation propositions are stated over the
elementary-transformation gadgets: ``row addition`` / ``row
multiplication`` diagrams, optionally conjugated by pairs of pink pi
nodes on a wire subset (the "decorated" family members used by the
tensor-of-normal-forms protocol).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import diagram as dg
from .diagram import (Diagram, compose, compose_all, flip, tensor,
                      tensor_all, identity, permutation, swap, cap, cup,
                      h_box, scalar_z, triangle, triangle_inv,
                      triangle_flipped, triangle_inv_flipped, x_spider,
                      z_spider, empty)
from .normalform import (and_gate, decorated_row_addition,
                         decorated_row_multiplication, pi_layer,
                         row_addition_diagram, row_multiplication_diagram)
from .semantics import interpret, max_deviation

RuleBuilder = Callable[[Sequence[complex]], tuple[Diagram, Diagram]]


@dataclass(frozen=True)
class RewriteRule:
    """A named LHS/RHS diagram-pattern pair with complex parameter slots.

    ``flipped`` records that the upside-down version of the rule holds as
    well (true for the whole catalog) and makes the harness check it.
    ``provenance`` is None for the base rule set and names the source
    lemma/proposition for derived rules.
    """

    name: str
    arity: int
    build: RuleBuilder
    domain: Callable[[Sequence[complex]], bool] | None = None
    provenance: str | None = None
    flipped: bool = True

    def admissible(self, params: Sequence[complex]) -> bool:
        if len(params) != self.arity:
            return False
        return self.domain(params) if self.domain else True


# DerivedRule has the same shape as RewriteRule plus mandatory provenance.
DerivedRule = RewriteRule


class RuleError(ValueError):
    pass


def instantiate(rule: RewriteRule, params: Sequence[complex]) -> tuple[Diagram, Diagram]:
    """Concrete LHS/RHS pair for a parameter assignment."""
    if len(params) != rule.arity:
        raise RuleError(
            f"rule {rule.name} takes {rule.arity} parameters, got {len(params)}")
    if not rule.admissible(params):
        raise RuleError(f"parameters {params} outside domain of {rule.name}")
    lhs, rhs = rule.build([complex(p) for p in params])
    if lhs.type != rhs.type:
        raise RuleError(
            f"rule {rule.name}: boundary mismatch {lhs.type} vs {rhs.type}")
    return lhs, rhs


# -- soundness harness ----------------------------------------------------

FORCED_DRAWS = (0.0 + 0.0j, 1.0 + 0.0j, -1.0 + 0.0j, 1.0j)


@dataclass
class RuleReport:
    name: str
    checked: int
    max_deviation: float
    failures: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_jsonable(self) -> dict:
        return {
            "rule": self.name,
            "checked": self.checked,
            "max_deviation": self.max_deviation,
            "ok": self.ok,
            "failures": [{"params": [[p.real, p.imag] for p in ps],
                          "deviation": dev} for ps, dev in self.failures],
            "skipped": [[[p.real, p.imag] for p in ps] for ps in self.skipped],
        }


def _random_params(rule: RewriteRule, rng: np.random.Generator, tries: int = 100):
    for _ in range(tries):
        params = []
        for _ in range(rule.arity):
            r = 2.0 * math.sqrt(rng.uniform())
            th = rng.uniform(0.0, 2.0 * math.pi)
            params.append(r * complex(math.cos(th), math.sin(th)))
        if rule.admissible(params):
            return params
    raise RuleError(f"could not sample admissible parameters for {rule.name}")


def check_soundness(rule: RewriteRule, samples: int = 20, tol: float = 1e-9,
                    rng: np.random.Generator | None = None,
                    corrupt: bool = False) -> RuleReport:
    """Interpret both sides (and their flipped versions) on forced and
    random draws; failures are reported, never raised."""
    if samples < 1:
        raise RuleError("samples must be at least 1")
    rng = rng if rng is not None else np.random.default_rng(0)
    report = RuleReport(rule.name, 0, 0.0)

    draws: list[list[complex]] = []
    for v in FORCED_DRAWS:
        ps = [v] * rule.arity
        if rule.admissible(ps):
            draws.append(ps)
        elif rule.arity:
            report.skipped.append(ps)
    if rule.arity == 0:
        draws = [[]]
    else:
        draws += [_random_params(rule, rng) for _ in range(samples)]

    for params in draws:
        lhs, rhs = rule.build([complex(p) for p in params])
        if corrupt:
            rhs = tensor(rhs, scalar_z(-2.0))  # flips the sign of the RHS
        ml, mr = interpret(lhs), interpret(rhs)
        dev = max_deviation(ml, mr)
        if rule.flipped:
            fl, fr = interpret(flip(lhs)), interpret(flip(rhs))
            dev = max(dev, max_deviation(fl, fr), max_deviation(fl, ml.T))
        report.checked += 1
        report.max_deviation = max(report.max_deviation, dev)
        if not (dev <= tol):
            report.failures.append((list(params), float(dev)))
    return report


def check_catalog(rules: Sequence[RewriteRule], samples: int = 20,
                  tol: float = 1e-9, seed: int = 0) -> list[RuleReport]:
    rng = np.random.default_rng(seed)
    return [check_soundness(r, samples=samples, tol=tol, rng=rng)
            for r in rules]


# -- shared gadgets -------------------------------------------------------

def adder() -> Diagram:
    """2 -> 1 bit adder without overflow: |00>-><0|, |01>,|10>->|1>,
    |11> -> 0.  On green states it adds the labels."""
    return compose(row_multiplication_diagram(2, 0.0), x_spider(2, 1, dg.TAU_ZERO))


def w_map() -> Diagram:
    """The 1 -> 2 W map: |0> -> |00>, |1> -> |01> + |10>."""
    return compose(x_spider(1, 2, dg.TAU_ZERO), row_multiplication_diagram(2, 0.0))


def state_on_wire(m: int, i: int, state: Diagram) -> Diagram:
    """(m-1) -> m diagram placing a 0 -> 1 state on wire i."""
    pieces = [state if (m - 1 - slot) == i else identity(1)
              for slot in range(m)]
    return tensor_all(pieces)


def cnot(m: int, control: int, target: int) -> Diagram:
    """CNOT on m wires: green dot on the control, pink dot on the target."""
    if control == target:
        raise RuleError("cnot needs distinct wires")
    core = compose(tensor(z_spider(1, 2, 1.0), identity(1)),
                   tensor(identity(1), x_spider(2, 1, dg.TAU_ZERO)))
    # route (control, target) to the top two slots and back
    slots = [m - 1 - control, m - 1 - target]
    rest = [s for s in range(m) if s not in slots]
    to_top = permutation(slots + rest)
    back = [0] * m
    for new, old in enumerate(slots + rest):
        back[old] = new
    return compose_all([to_top, tensor(core, identity(m - 2)), permutation(back)])


def _partial_cup(m: int) -> Diagram:
    """m -> m-2 cup plugging wires 0 and 1 (the right-most pair)."""
    return tensor(identity(m - 2), cup())


# -- Figure rule set ------------------------------------------------------

def _r(name, arity, build, domain=None, provenance=None):
    return RewriteRule(name, arity, build, domain, provenance)


def _s1(ps):
    a, b = ps
    lhs = compose(tensor(z_spider(1, 2, a), identity(1)),
                  tensor(identity(1), z_spider(2, 1, b)))
    rhs = z_spider(2, 2, a * b)
    return lhs, rhs


def _s2(ps):
    return z_spider(1, 1, 1.0), identity(1)


def _s3(ps):
    return z_spider(0, 2, 1.0), cap()


def _ept(ps):
    return x_spider(0, 0, dg.TAU_ZERO), empty()


def _b1(ps):
    lhs = compose(x_spider(0, 1, dg.TAU_ZERO), z_spider(1, 2, 1.0))
    rhs = tensor(x_spider(0, 1, dg.TAU_ZERO), x_spider(0, 1, dg.TAU_ZERO))
    return lhs, rhs


def _b2(ps):
    lhs = compose(z_spider(2, 1, 1.0), x_spider(1, 2, dg.TAU_ZERO))
    rhs = compose_all([
        tensor(x_spider(1, 2, dg.TAU_ZERO), x_spider(1, 2, dg.TAU_ZERO)),
        tensor_all([identity(1), swap(), identity(1)]),
        tensor(z_spider(2, 1, 1.0), z_spider(2, 1, 1.0)),
    ])
    return lhs, rhs


def _b3(ps):
    lhs = compose(x_spider(1, 1, dg.TAU_PI), z_spider(1, 2, 1.0))
    rhs = compose(z_spider(1, 2, 1.0),
                  tensor(x_spider(1, 1, dg.TAU_PI), x_spider(1, 1, dg.TAU_PI)))
    return lhs, rhs


def _brk(ps):
    lhs = compose(z_spider(1, 2, 1.0), and_gate())
    return lhs, identity(1)


def _bas0(ps):
    lhs = compose(x_spider(0, 1, dg.TAU_ZERO), triangle())
    return lhs, x_spider(0, 1, dg.TAU_ZERO)


def _bas1(ps):
    lhs = compose(x_spider(0, 1, dg.TAU_PI), triangle())
    return lhs, z_spider(0, 1, 1.0)


def _suc(ps):
    a, = ps
    lhs = compose(z_spider(0, 1, a), triangle_flipped())
    return lhs, z_spider(0, 1, a + 1.0)


def _inv(ps):
    return compose(triangle(), triangle_inv()), identity(1)


def _zero(ps):
    lhs = z_spider(1, 1, 0.0)
    rhs = compose(x_spider(1, 0, dg.TAU_ZERO), x_spider(0, 1, dg.TAU_ZERO))
    return lhs, rhs


def _eu(ps):
    zi = z_spider(1, 1, 1.0j)
    lhs = compose_all([zi, h_box(), zi, h_box(), zi])
    rhs = tensor(h_box(), scalar_z(1.0j))
    return lhs, rhs


def _sym(ps):
    w = w_map()
    return w, compose(w, swap())


def _aso(ps):
    w = w_map()
    lhs = compose(w, tensor(w, identity(1)))
    rhs = compose(w, tensor(identity(1), w))
    return lhs, rhs


def _pcy(ps):
    a, = ps
    w = w_map()
    lhs = compose(z_spider(1, 1, a), w)
    rhs = compose(w, tensor(z_spider(1, 1, a), z_spider(1, 1, a)))
    return lhs, rhs


def figure_catalog() -> list[RewriteRule]:
    """The base rule set (the figure rules; flipped variants are checked
    by the harness for every entry)."""
    return [
        _r("S1", 2, _s1),
        _r("S2", 0, _s2),
        _r("S3", 0, _s3),
        _r("Ept", 0, _ept),
        _r("B1", 0, _b1),
        _r("B2", 0, _b2),
        _r("B3", 0, _b3),
        _r("Brk", 0, _brk),
        _r("Bas0", 0, _bas0),
        _r("Bas1", 0, _bas1),
        _r("Suc", 1, _suc),
        _r("Inv", 0, _inv),
        _r("Zero", 0, _zero),
        _r("EU", 0, _eu),
        _r("Sym", 0, _sym),
        _r("Aso", 0, _aso),
        _r("Pcy", 1, _pcy),
    ]


# -- derived rules: scalar and colour layer -------------------------------

def _sca(ps):
    a, b = ps
    lhs = compose(z_spider(0, 1, a), z_spider(1, 0, b))
    return lhs, scalar_z(a * b)


def _zos(ps):
    return scalar_z(0.0), empty()


def _sml(ps):
    a, b = ps
    lhs = compose(z_spider(0, 1, a), z_spider(1, 2, b))
    return lhs, z_spider(0, 2, a * b)


def _siv(ps):
    return tensor(scalar_z(1.0), scalar_z(-0.5)), empty()


def _h2(ps):
    lhs = compose(h_box(), h_box())
    return lhs, tensor(identity(1), scalar_z(1.0))


def _colour(ps):
    lhs = compose_all([tensor_all([h_box()] * 2), z_spider(2, 1, -1.0), h_box()])
    rhs = tensor(x_spider(2, 1, dg.TAU_PI), scalar_z(1.0))
    return lhs, rhs


def _s1x(ps):
    lhs = compose(tensor(x_spider(1, 2, dg.TAU_PI), identity(1)),
                  tensor(identity(1), x_spider(2, 1, dg.TAU_PI)))
    rhs = x_spider(2, 2, dg.TAU_ZERO)
    return lhs, rhs


def _hopf(ps):
    lhs = compose(z_spider(1, 2, 1.0), x_spider(2, 1, dg.TAU_ZERO))
    rhs = compose(z_spider(1, 0, 1.0), x_spider(0, 1, dg.TAU_ZERO))
    return lhs, rhs


def _hopfvar2(ps):
    lhs = compose(z_spider(1, 2, 1.0), x_spider(2, 1, dg.TAU_PI))
    rhs = compose(z_spider(1, 0, 1.0), x_spider(0, 1, dg.TAU_PI))
    return lhs, rhs


def _bas1p(ps):
    return x_spider(0, 1, dg.TAU_PI), compose(z_spider(0, 1, 1.0), triangle_inv())


def _zx2e(ps):
    return compose(cap(), cup()), scalar_z(1.0)


def _adprime(ps):
    a, b = ps
    lhs = compose(tensor(z_spider(0, 1, a), z_spider(0, 1, b)), adder())
    return lhs, z_spider(0, 1, a + b)


def _additiongbx(ps):
    a, b = ps
    lhs = compose(row_addition_diagram(1, a, [0]), row_addition_diagram(1, b, [0]))
    return lhs, row_addition_diagram(1, a + b, [0])


def _ivt(ps):
    rhs = compose_all([z_spider(1, 1, -1.0), triangle(), z_spider(1, 1, -1.0)])
    return triangle_inv(), rhs


def _pic(ps):
    a, = ps
    lhs = compose(x_spider(1, 1, dg.TAU_PI), z_spider(1, 2, a))
    rhs = tensor(
        compose(z_spider(1, 2, 1.0 / a),
                tensor(x_spider(1, 1, dg.TAU_PI), x_spider(1, 1, dg.TAU_PI))),
        scalar_z(a - 1.0))
    return lhs, rhs


def _pic_colour(ps):
    lhs = compose(z_spider(1, 1, -1.0), x_spider(1, 2, dg.TAU_ZERO))
    rhs = compose(x_spider(1, 2, dg.TAU_ZERO),
                  tensor(z_spider(1, 1, -1.0), z_spider(1, 1, -1.0)))
    return lhs, rhs


def _picommutation(ps):
    a, = ps
    lhs = compose(x_spider(1, 1, dg.TAU_PI), z_spider(1, 1, a))
    rhs = tensor(compose(z_spider(1, 1, 1.0 / a), x_spider(1, 1, dg.TAU_PI)),
                 scalar_z(a - 1.0))
    return lhs, rhs


def _brk1p(ps):
    lhs = compose_all([cap(), tensor(triangle(), triangle_inv_flipped()), cup()])
    return lhs, scalar_z(1.0)


def _deloop(ps):
    lhs = compose_all([cap(), tensor(triangle(), triangle_inv()), cup()])
    return lhs, empty()


def _zerop(ps):
    lhs = z_spider(2, 1, 0.0)
    rhs = compose(tensor(x_spider(1, 0, dg.TAU_ZERO), x_spider(1, 0, dg.TAU_ZERO)),
                  x_spider(0, 1, dg.TAU_ZERO))
    return lhs, rhs


def _tr5prime(ps):
    lhs = compose(z_spider(0, 1, -1.0), triangle())
    return lhs, tensor(x_spider(0, 1, dg.TAU_PI), scalar_z(-2.0))


def _trianglehopf(ps):
    lhs = compose_all([z_spider(1, 2, 1.0), tensor(triangle(), identity(1)),
                       x_spider(2, 1, dg.TAU_ZERO)])
    return lhs, triangle()


def _hopfgtr(ps):
    lhs = compose_all([z_spider(1, 2, 1.0), tensor(triangle(), identity(1)),
                       z_spider(2, 1, 1.0)])
    return lhs, identity(1)


def _gpiinhada(ps):
    lhs = compose_all([h_box(), z_spider(1, 1, -1.0), h_box()])
    return lhs, tensor(x_spider(1, 1, dg.TAU_PI), scalar_z(1.0))


def _gpiintriangles(ps):
    lhs = compose_all([x_spider(1, 1, dg.TAU_PI), triangle(),
                       x_spider(1, 1, dg.TAU_PI)])
    return lhs, triangle_flipped()


def _pitinvcomut(ps):
    lhs = compose(x_spider(1, 1, dg.TAU_PI), triangle_inv())
    rhs = compose(triangle_inv_flipped(), x_spider(1, 1, dg.TAU_PI))
    return lhs, rhs


def _trianglerpidot(ps):
    lhs = compose(triangle(), x_spider(1, 1, dg.TAU_PI))
    rhs = compose(x_spider(1, 1, dg.TAU_PI), triangle_flipped())
    return lhs, rhs


def _triangleonreddot(ps):
    lhs = compose(x_spider(0, 1, dg.TAU_PI), triangle_flipped())
    return lhs, x_spider(0, 1, dg.TAU_PI)


def _two_tri_between_greens(ps):
    lhs = compose_all([z_spider(1, 2, 1.0), tensor(triangle(), triangle()),
                       z_spider(2, 1, 1.0)])
    return lhs, triangle()


def _one_tri_one_pi(ps):
    lhs = compose_all([z_spider(1, 2, 1.0),
                       tensor(triangle(), x_spider(1, 1, dg.TAU_PI)),
                       z_spider(2, 1, 1.0)])
    rhs = compose(x_spider(1, 0, dg.TAU_PI), x_spider(0, 1, dg.TAU_ZERO))
    return lhs, rhs


def _tr4g(ps):
    a, = ps
    lhs = compose(z_spider(0, 1, a), triangle())
    rhs = tensor(z_spider(0, 1, a / (1.0 + a)), scalar_z(a))
    return lhs, rhs


def _brkvariant(ps):
    lhs = compose(z_spider(1, 2, 1.0), adder())
    return lhs, z_spider(1, 1, 0.0)


def _brkp(ps):
    a, = ps
    lhs = compose(z_spider(0, 1, a), flip(and_gate()))
    rhs = dg.bend_to_state(
        compose_all([triangle(), z_spider(1, 1, a - 1.0), triangle_flipped()]))
    return lhs, rhs


def _bia(ps):
    lhs = compose(and_gate(), z_spider(1, 2, 1.0))
    rhs = compose_all([
        tensor(z_spider(1, 2, 1.0), z_spider(1, 2, 1.0)),
        permutation([0, 2, 1, 3]),
        tensor(and_gate(), and_gate()),
    ])
    return lhs, rhs


def _general_bia(ps):
    lhs = compose(z_spider(2, 1, 1.0), x_spider(1, 3, dg.TAU_ZERO))
    rhs = compose_all([
        tensor(x_spider(1, 3, dg.TAU_ZERO), x_spider(1, 3, dg.TAU_ZERO)),
        permutation([0, 3, 1, 4, 2, 5]),
        tensor_all([z_spider(2, 1, 1.0)] * 3),
    ])
    return lhs, rhs


def _andcopy(ps):
    lhs = compose(and_gate(), z_spider(1, 0, 1.0))
    return lhs, tensor(z_spider(1, 0, 1.0), z_spider(1, 0, 1.0))


def _andgate2v(ps):
    return compose(swap(), and_gate()), and_gate()


def _andaddition(ps):
    a, b = ps
    lhs = compose(row_multiplication_diagram(2, a), row_multiplication_diagram(2, b))
    return lhs, row_multiplication_diagram(2, a * b)


def _andpicomt(ps):
    lhs = compose_all([
        z_spider(1, 2, 1.0),
        tensor(x_spider(1, 1, dg.TAU_PI), x_spider(1, 1, dg.TAU_PI)),
        and_gate(),
        x_spider(1, 1, dg.TAU_PI),
    ])
    return lhs, identity(1)


def _dis(ps):
    lhs = compose(tensor(identity(1), x_spider(2, 1, dg.TAU_ZERO)), and_gate())
    rhs = compose_all([
        tensor(z_spider(1, 2, 1.0), identity(2)),
        permutation([0, 2, 1, 3]),
        tensor(and_gate(), and_gate()),
        x_spider(2, 1, dg.TAU_ZERO),
    ])
    return lhs, rhs


def _dis2(ps):
    a, = ps
    lhs = compose(tensor(z_spider(0, 1, a), identity(2)), _dis([])[0])
    rhs = compose(tensor(z_spider(0, 1, a), identity(2)), _dis([])[1])
    return lhs, rhs


# -- derived rules: commutation propositions over elementary gadgets ------

def _commute_pair(g1: Diagram, g2: Diagram):
    return compose(g1, g2), compose(g2, g1)


def _picntcommut(ps):
    a, = ps
    m, S, i = 2, [0], 1
    lhs = compose(pi_layer(m, [i]), row_addition_diagram(m, a, S))
    rhs = compose(decorated_row_addition(m, a, S, [i]), pi_layer(m, [i]))
    return lhs, rhs


def _picntcommutcro(ps):
    a, = ps
    m, S, P = 3, [0], [1, 2]
    lhs = compose(pi_layer(m, P), row_addition_diagram(m, a, S))
    rhs = compose(decorated_row_addition(m, a, S, P), pi_layer(m, P))
    return lhs, rhs


def _picntcommutesam(ps):
    a, = ps
    m, S, i = 2, [0], 1
    lhs = compose(pi_layer(m, [i]), decorated_row_addition(m, a, S, [i]))
    rhs = compose(row_addition_diagram(m, a, S), pi_layer(m, [i]))
    return lhs, rhs


def _picntcommutesamgrn(ps):
    a, = ps
    m, S, i, k = 3, [0], 1, 2
    lhs = compose(pi_layer(m, [k]), decorated_row_addition(m, a, S, [i]))
    rhs = compose(decorated_row_addition(m, a, S, [i, k]), pi_layer(m, [k]))
    return lhs, rhs


def _picntcommutcro2(ps):
    a, = ps
    m, S, P, Q = 3, [0, 1], [2], [2]
    lhs = compose(pi_layer(m, Q), decorated_row_addition(m, a, S, P))
    rhs = compose(row_addition_diagram(m, a, S), pi_layer(m, Q))
    return lhs, rhs


def _picntcommuteand(ps):
    a, = ps
    m, i = 2, 1
    lhs = compose(pi_layer(m, [i]), row_multiplication_diagram(m, a))
    rhs = compose(decorated_row_multiplication(m, a, [i]), pi_layer(m, [i]))
    return lhs, rhs


def _picntcommuteandcr1(ps):
    a, = ps
    m, P = 3, [0, 2]
    lhs = compose(pi_layer(m, P), row_multiplication_diagram(m, a))
    rhs = compose(decorated_row_multiplication(m, a, P), pi_layer(m, P))
    return lhs, rhs


def _piredonpair(ps):
    a, = ps
    m, S, i = 2, [0], 1
    layer = state_on_wire(m, i, x_spider(0, 1, dg.TAU_PI))
    lhs = compose(layer, decorated_row_addition(m, a, S, [i]))
    return lhs, layer


def _prop1(ps):
    a, = ps
    k, S = 2, [0]
    S2 = [i + 1 for i in S]
    lhs = tensor(row_addition_diagram(k, a, S), identity(1))
    rhs = compose(row_addition_diagram(k + 1, a, S2),
                  decorated_row_addition(k + 1, a, S2, [0]))
    return lhs, rhs


def _prop1cro2(ps):
    a, = ps
    k, S = 2, [0, 1]
    lhs = tensor(identity(1), row_addition_diagram(k, a, S))
    rhs = compose(row_addition_diagram(k + 1, a, S),
                  decorated_row_addition(k + 1, a, S, [k]))
    return lhs, rhs


def _itensorand(ps):
    a, = ps
    k = 2
    lhs = tensor(row_multiplication_diagram(k, a), identity(1))
    rhs = compose(row_multiplication_diagram(k + 1, a),
                  decorated_row_multiplication(k + 1, a, [0]))
    return lhs, rhs


def _expansion(gadget, decorated, m, a, S, new_wires, on_left):
    """Lift an m-wire gadget over fresh parallel wires: the product of the
    2^n family members with every pi-pair distribution on the new wires."""
    n = len(new_wires)
    if on_left:
        lhs = tensor(identity(n), gadget(m, a, *S and [S]) if S else gadget(m, a))
    else:
        lhs = tensor(gadget(m, a, *[S] if S else []), identity(n))
    total = m + n
    subsets = []
    for mask in range(2 ** n):
        subsets.append([w for b, w in enumerate(new_wires) if mask >> b & 1])
    members = []
    for P in subsets:
        if S:
            members.append(decorated(total, a, S, P))
        else:
            members.append(decorated(total, a, P))
    return lhs, compose_all(members)


def _nlines_tensor_nf(ps):
    a, = ps
    # addition gadget with two new wires appended on the right (low side)
    m, S, n = 1, [0], 2
    S2 = [i + n for i in S]
    lhs = tensor(row_addition_diagram(m, a, S), identity(n))
    members = [decorated_row_addition(m + n, a, S2, P)
               for P in ([], [0], [1], [0, 1])]
    return lhs, compose_all(members)


def _nf_tensor_nlines(ps):
    a, = ps
    m, S, n = 1, [0], 2
    lhs = tensor(identity(n), row_addition_diagram(m, a, S))
    members = [decorated_row_addition(m + n, a, S, P)
               for P in ([], [1], [2], [1, 2])]
    return lhs, compose_all(members)


def _nlines_tensor_nf_add(ps):
    a, = ps
    m, n = 1, 2
    lhs = tensor(identity(n), row_multiplication_diagram(m, a))
    members = [decorated_row_multiplication(m + n, a, P)
               for P in ([], [1], [2], [1, 2])]
    return lhs, compose_all(members)


def _nlines_tensor_mmult(ps):
    a, = ps
    m, n = 1, 2
    lhs = tensor(row_multiplication_diagram(m, a), identity(n))
    members = [decorated_row_multiplication(m + n, a, P)
               for P in ([], [0], [1], [0, 1])]
    return lhs, compose_all(members)


def _propadprime(ps):
    a, b = ps
    m, S = 2, [0, 1]
    lhs = compose(row_addition_diagram(m, a, S), row_addition_diagram(m, b, S))
    return lhs, row_addition_diagram(m, a + b, S)


def _propadprimecro(ps):
    a, b = ps
    m, S, P = 2, [0], [1]
    lhs = compose(decorated_row_addition(m, a, S, P),
                  decorated_row_addition(m, b, S, P))
    return lhs, decorated_row_addition(m, a + b, S, P)


def _addcommutat(ps):
    a, b = ps
    return _commute_pair(row_addition_diagram(1, a, [0]),
                         row_addition_diagram(1, b, [0]))


def _addcommutatgen(ps):
    a, b = ps
    m = 3
    return _commute_pair(row_addition_diagram(m, a, list(range(m))),
                         row_addition_diagram(m, b, list(range(m))))


def _addcommutatgencont(ps):
    a, b = ps
    m = 3
    return _commute_pair(row_addition_diagram(m, a, [0, 2]),
                         row_addition_diagram(m, b, [1, 2]))


def _raddcomplex(ps):
    a, b = ps
    m = 2
    return _commute_pair(decorated_row_addition(m, a, [0], [1]),
                         row_addition_diagram(m, b, [0, 1]))


def _raddcomplexsym(ps):
    a, b = ps
    m = 2
    return _commute_pair(decorated_row_addition(m, a, [1], [0]),
                         decorated_row_addition(m, b, [0], [1]))


def _ruletensorad(ps):
    a, b = ps
    lhs1 = tensor(row_addition_diagram(1, a, [0]), identity(1))
    lhs2 = tensor(identity(1), row_addition_diagram(1, b, [0]))
    return _commute_pair(lhs1, lhs2)


def _ruletensorLsim(ps):
    a, = ps
    lhs = tensor(row_addition_diagram(1, a, [0]), identity(1))
    rhs = compose(row_addition_diagram(2, a, [1]),
                  decorated_row_addition(2, a, [1], [0]))
    return lhs, rhs


def _ruletensorL(ps):
    a, = ps
    lhs = tensor(row_multiplication_diagram(1, a), identity(1))
    rhs = compose(row_multiplication_diagram(2, a),
                  decorated_row_multiplication(2, a, [0]))
    return lhs, rhs


def _multiplypimulticommutesim(ps):
    a, b = ps
    m = 2
    return _commute_pair(decorated_row_multiplication(m, a, [0]),
                         row_multiplication_diagram(m, b))


def _multiplypimulticommutg(ps):
    a, b = ps
    m = 2
    return _commute_pair(row_multiplication_diagram(m, a),
                         decorated_row_multiplication(m, b, [0, 1]))


def _multiplypimulticommute(ps):
    a, b = ps
    m = 2
    return _commute_pair(decorated_row_multiplication(m, a, [1]),
                         decorated_row_multiplication(m, b, [0]))


def _multiplypimulticommutgcro2(ps):
    a, b = ps
    m, S, i = 2, [0, 1], 1  # i in S with |S| >= 2
    return _commute_pair(decorated_row_addition(m, a, S, [i]),
                         decorated_row_addition(m, b, S, [i]))


def _addpidoublecom(ps):
    a, b = ps
    m, S = 3, [0]
    return _commute_pair(decorated_row_addition(m, a, S, [1]),
                         decorated_row_addition(m, b, S, [2]))


def _multipidoublecom(ps):
    a, b = ps
    m = 2
    return _commute_pair(decorated_row_multiplication(m, a, [0]),
                         decorated_row_multiplication(m, b, [1]))


def _addpimultiplycommut(ps):
    a, b = ps
    m, S, k = 2, [0, 1], 0  # k in S, |S| >= 2
    return _commute_pair(row_addition_diagram(m, a, S),
                         decorated_row_multiplication(m, b, [k]))


def _addpimultiplycommutg(ps):
    a, b = ps
    m, S, k = 3, [0, 1], 2  # k not in S
    return _commute_pair(row_addition_diagram(m, a, S),
                         decorated_row_multiplication(m, b, [k]))


def _addpipairmultiplycommutgp(ps):
    a, b = ps
    m, S, P, Q = 3, [0], [1], [2]  # P != Q, Q disjoint from S
    return _commute_pair(decorated_row_addition(m, a, S, P),
                         decorated_row_multiplication(m, b, Q))


def _tr15(ps):
    a, b = ps
    m, P = 2, [1]
    lhs = compose(decorated_row_multiplication(m, a, P),
                  decorated_row_multiplication(m, b, P))
    return lhs, decorated_row_multiplication(m, a * b, P)


def _pimultiaddcombine(ps):
    a, b = ps
    m, S = 2, [0]
    lhs = compose(row_addition_diagram(m, a, S),
                  decorated_row_multiplication(m, b, S))
    rhs = compose(decorated_row_multiplication(m, b, S),
                  row_addition_diagram(m, a * b, S))
    return lhs, rhs


def _pitopaddpipair(ps):
    a, b = ps
    # wires: block N = {0}, block M = {1}; a on J={1}, b on I={0} with
    # pi pairs on J
    J, I = [1], [0]
    lhs = compose(row_addition_diagram(2, a, J),
                  decorated_row_addition(2, b, I, J))
    rhs = compose_all([
        decorated_row_addition(2, b, I, J),
        row_addition_diagram(2, a * b, I + J),
        row_addition_diagram(2, a, J),
    ])
    return lhs, rhs


def _cnotscommute(ps):
    lhs = compose(cnot(3, 0, 1), cnot(3, 0, 2))
    rhs = compose(cnot(3, 0, 2), cnot(3, 0, 1))
    return lhs, rhs


def _prop27(ps):
    a, b = ps
    # blocks: N = {2,3}, M = {0,1}
    return _commute_pair(decorated_row_addition(4, a, [3], [0]),
                         decorated_row_addition(4, b, [2], [0, 1]))


def _prop28(ps):
    a, b = ps
    return _commute_pair(decorated_row_addition(4, a, [0], [2]),
                         decorated_row_addition(4, b, [3], [1]))


def _prop29(ps):
    a, b = ps
    return _commute_pair(row_addition_diagram(4, a, [0, 2]),
                         decorated_row_addition(4, b, [1], [2, 3]))


def _prop29b(ps):
    a, b = ps
    return _commute_pair(row_addition_diagram(4, a, [1, 3]),
                         decorated_row_addition(4, b, [2], [0]))


def _prop30a(ps):
    a, b = ps
    return _commute_pair(decorated_row_addition(4, a, [2], [0]),
                         decorated_row_multiplication(4, b, [3]))


def _prop30b(ps):
    a, b = ps
    return _commute_pair(row_addition_diagram(4, a, [1, 2]),
                         decorated_row_multiplication(4, b, [2, 3]))


def _prop30bcro(ps):
    a, b = ps
    return _commute_pair(row_addition_diagram(4, a, [0, 3]),
                         decorated_row_multiplication(4, b, [1]))


def _prop30c(ps):
    a, b = ps
    return _commute_pair(row_addition_diagram(4, a, [2, 3]),
                         decorated_row_multiplication(4, b, [2]))


def _prop30ccro(ps):
    a, b = ps
    return _commute_pair(row_addition_diagram(4, a, [0, 1]),
                         decorated_row_multiplication(4, b, [0]))


# -- derived rules: self-plugging layer ------------------------------------

def _rule10(ps):
    b, c = ps
    m = 2
    lhs = compose_all([row_addition_diagram(m, c, [0, 1]),
                       row_multiplication_diagram(m, b), cup()])
    rhs = compose(row_multiplication_diagram(m, b + c), cup())
    return lhs, rhs


def _rule10exten(ps):
    b, c = ps
    m = 3
    lhs = compose_all([row_addition_diagram(m, c, [0, 1]),
                       row_multiplication_diagram(m, b), _partial_cup(m)])
    rhs = compose(row_multiplication_diagram(m, b + c), _partial_cup(m))
    return lhs, rhs


def _rule12th(ps):
    a, = ps
    lhs = compose(row_addition_diagram(2, a, [1]), cup())
    return lhs, cup()


def _rule12thexten(ps):
    a, = ps
    m = 3
    lhs = compose(row_addition_diagram(m, a, [1, 2]), _partial_cup(m))
    return lhs, _partial_cup(m)


def _rule12extengen(ps):
    a, = ps
    m = 3
    lhs = compose(row_addition_diagram(m, a, [2]), _partial_cup(m))
    rhs = compose(row_addition_diagram(m, a, [0, 1, 2]), _partial_cup(m))
    return lhs, rhs


def _3and3gdotcirc(ps):
    a, = ps
    lhs = compose(row_addition_diagram(2, a, [0, 1]), cup())
    rhs = compose(row_multiplication_diagram(2, 1.0 + a), cup())
    return lhs, rhs


def _3and3gdotcircsimp(ps):
    a, = ps
    lhs = compose(row_multiplication_diagram(2, a), cup())
    rhs = compose(tensor(identity(1), z_spider(1, 1, a)), cup())
    return lhs, rhs


def derived_catalog() -> list[DerivedRule]:
    """The derived-rule library; every entry is certified by the
    soundness harness, never assumed."""
    nonzero = lambda ps: all(abs(p) > 1e-6 for p in ps)

    return [
        _r("Sca", 2, _sca, provenance="scalartimes"),
        _r("Zos", 0, _zos, provenance="zeroiscalarempty"),
        _r("Sml", 2, _sml, provenance="scalartimesgeneral"),
        _r("Siv", 0, _siv, provenance="halfinverse"),
        _r("H2", 0, _h2, provenance="nhsquare"),
        _r("H", 0, _colour, provenance="colorchanges"),
        _r("S1x", 0, _s1x, provenance="redspider0pifusion"),
        _r("Hopf", 0, _hopf, provenance="hopfnslm"),
        _r("hopfvar2", 0, _hopfvar2, provenance="hopfvar2"),
        _r("Bas1'", 0, _bas1p, provenance="redpitogreen2"),
        _r("zx2e", 0, _zx2e, provenance="2eprf"),
        _r("AD'", 2, _adprime, provenance="equivalentaddrulens"),
        _r("additiongbx", 2, _additiongbx, provenance="additiongbxlm"),
        _r("Ivt", 0, _ivt, provenance="definitionTriangleInverse2"),
        _r("Pic", 1, _pic, domain=nonzero, provenance="pimultiplecplm"),
        _r("Pic'", 0, _pic_colour, provenance="pimultiplecp"),
        _r("picommutation", 1, _picommutation, domain=nonzero,
           provenance="1iprf"),
        _r("Brk1'", 0, _brk1p, provenance="2triangledeloopnopiflipns"),
        _r("2m", 0, _deloop, provenance="2mprf"),
        _r("Zero'", 0, _zerop, provenance="zerodecom2"),
        _r("tr5prime", 0, _tr5prime, provenance="tr5primelm"),
        _r("trianglehopf", 0, _trianglehopf, provenance="trianglehopflm"),
        _r("Hopfgtr", 0, _hopfgtr, provenance="Hopfgtr"),
        _r("gpiinhada", 0, _gpiinhada, provenance="gpiinhadalm"),
        _r("gpiintriangles", 0, _gpiintriangles, provenance="gpiintriangleslm"),
        _r("pitinvcomut", 0, _pitinvcomut, provenance="pitinvcomut"),
        _r("trianglerpidot", 0, _trianglerpidot, provenance="trianglerpidotlm"),
        _r("triangleonreddot", 0, _triangleonreddot,
           provenance="triangleonreddotlm"),
        _r("2trianglebw2gn", 0, _two_tri_between_greens,
           provenance="2trianglebw2gnlm"),
        _r("1triangle1pibw2gn", 0, _one_tri_one_pi,
           provenance="1triangle1pibw2gnlm"),
        _r("TR4g", 1, _tr4g, domain=lambda ps: abs(ps[0] + 1.0) > 1e-6,
           provenance="TR4g"),
        _r("Brk-var", 0, _brkvariant, provenance="brkvariant"),
        _r("Brkp", 1, _brkp, provenance="anddflipwitha2"),
        _r("BiA", 0, _bia, provenance="andbial"),
        _r("generalBiA", 0, _general_bia, provenance="generalbialgebra"),
        _r("andcopy", 0, _andcopy, provenance="andcopy"),
        _r("andgate2v", 0, _andgate2v, provenance="andgate2v"),
        _r("andadditionco", 2, _andaddition, provenance="andadditionco"),
        _r("andpicomt", 0, _andpicomt, provenance="andpicomt"),
        _r("Dis", 0, _dis, provenance="distribute"),
        _r("Dis2", 1, _dis2, provenance="distribute2"),
        # commutation propositions over elementary gadgets
        _r("picntcommut", 1, _picntcommut, provenance="picntcommut"),
        _r("picntcommutcro", 1, _picntcommutcro, provenance="picntcommutcro"),
        _r("picntcommutesam", 1, _picntcommutesam, provenance="picntcommutesam"),
        _r("picntcommutesamgrn", 1, _picntcommutesamgrn,
           provenance="picntcommutesamgrn"),
        _r("picntcommutcro2", 1, _picntcommutcro2, provenance="picntcommutcro2"),
        _r("picntcommuteand", 1, _picntcommuteand, provenance="picntcommuteand"),
        _r("picntcommuteandcr1", 1, _picntcommuteandcr1,
           provenance="picntcommuteandcr1"),
        _r("piredonpairpidm", 1, _piredonpair, provenance="piredonpairpidm"),
        _r("prop1", 1, _prop1, provenance="prop1"),
        _r("prop1cro2", 1, _prop1cro2, provenance="propo1cro2"),
        _r("itensorand", 1, _itensorand, provenance="itensorand"),
        _r("nlinestensornormalform", 1, _nlines_tensor_nf,
           provenance="nlinestensornormalform"),
        _r("normalformtensornlines", 1, _nf_tensor_nlines,
           provenance="normalformtensornlines"),
        _r("nlinestensornormalformadd", 1, _nlines_tensor_nf_add,
           provenance="nlinestensornormalformadd"),
        _r("nlinestensormmultiply", 1, _nlines_tensor_mmult,
           provenance="nlinestensormmultiply"),
        _r("propadprime", 2, _propadprime, provenance="propadprime"),
        _r("propadprimecro", 2, _propadprimecro, provenance="propadprimecro"),
        _r("addcommutat", 2, _addcommutat, provenance="addcommutat"),
        _r("addcommutatgen", 2, _addcommutatgen, provenance="addcommutatgen"),
        _r("addcommutatgencont", 2, _addcommutatgencont,
           provenance="addcommutatgencont"),
        _r("raddcomplex", 2, _raddcomplex, provenance="raddcomplex"),
        _r("raddcomplexsym", 2, _raddcomplexsym, provenance="raddcomplexsym"),
        _r("ruletensorad", 2, _ruletensorad, provenance="ruletensorad"),
        _r("ruletensorLsim", 1, _ruletensorLsim, provenance="ruletensorLsimpler"),
        _r("ruletensorL", 1, _ruletensorL, provenance="ruletensor"),
        _r("multiplypimulticommutesim", 2, _multiplypimulticommutesim,
           provenance="multiplypimulticommutesim"),
        _r("multiplypimulticommutg", 2, _multiplypimulticommutg,
           provenance="multiplypimulticommutg"),
        _r("multiplypimulticommute", 2, _multiplypimulticommute,
           provenance="multiplypimulticommute"),
        _r("multiplypimulticommutgcro2", 2, _multiplypimulticommutgcro2,
           provenance="multiplypimulticommutgcro2"),
        _r("addpidoublecom", 2, _addpidoublecom, provenance="addpidoublecom"),
        _r("multipidoublecom", 2, _multipidoublecom,
           provenance="multipidoublecom"),
        _r("addpimultiplycommut", 2, _addpimultiplycommut,
           provenance="addpimultiplycommut"),
        _r("addpimultiplycommutg", 2, _addpimultiplycommutg,
           provenance="addpimultiplycommutg"),
        _r("addpipairmultiplycommutgp", 2, _addpipairmultiplycommutgp,
           provenance="addpipairmultiplycommutgp"),
        _r("TR15", 2, _tr15, provenance="pimultiplyabsorbtion"),
        _r("pimultiaddcombinepro", 2, _pimultiaddcombine,
           provenance="pimultiaddcombinepro"),
        _r("pitopaddpipaircommutprop", 2, _pitopaddpipair,
           provenance="pitopaddpipaircommutprop"),
        _r("cnotscomutelm", 0, _cnotscommute, provenance="cnotscomutelm"),
        _r("addpipair2sidecommutprop", 2, _prop27,
           provenance="addpipair2sidecommutprop"),
        _r("addpipair2sidecommutprop28", 2, _prop28,
           provenance="addpipair2sidecommutprop28"),
        _r("addpipair2sidecommutprop29", 2, _prop29,
           provenance="addpipair2sidecommutprop29"),
        _r("addpipair2sidecommutprop29b", 2, _prop29b,
           provenance="addpipair2sidecommutprop29b"),
        _r("addpipairmulcommutprop30a", 2, _prop30a,
           provenance="addpipairmulcommutprop30a"),
        _r("addpipairmulcommutprop30b", 2, _prop30b,
           provenance="addpipairmulcommutprop30b"),
        _r("addpipairmulcommutprop30bcro", 2, _prop30bcro,
           provenance="addpipairmulcommutprop30bcro"),
        _r("addpipairmulcommutprop30c", 2, _prop30c,
           provenance="addpipairmulcommutprop30c"),
        _r("addpipairmulcommutprop30ccro", 2, _prop30ccro,
           provenance="addpipairmulcommutprop30ccro"),
        # self-plugging layer
        _r("rule10", 2, _rule10, provenance="rule10"),
        _r("rule10exten", 2, _rule10exten, provenance="rule10exten"),
        _r("rule12th", 1, _rule12th, provenance="rule12th"),
        _r("rule12thexten", 1, _rule12thexten, provenance="rule12thexten"),
        _r("rule12extengen", 1, _rule12extengen, provenance="rule12extengen"),
        _r("3and3gdotcirc", 1, _3and3gdotcirc, provenance="3and3gdotcirc"),
        _r("3and3gdotcircsimp", 1, _3and3gdotcircsimp,
           provenance="3and3gdotcircsimp"),
    ]


def full_catalog() -> list[RewriteRule]:
    return figure_catalog() + derived_catalog()


def catalog_by_name() -> dict[str, RewriteRule]:
    cat = {}
    for rule in full_catalog():
        if rule.name in cat:
            raise RuleError(f"duplicate rule name {rule.name}")
        cat[rule.name] = rule
    return cat
