"""Shared random generators and independent oracles for the test suite."""

from __future__ import annotations

import random

from connexive.formula import And, Formula, Imp, Neg, Or, Var, closure_set, key
from connexive.natded import (
    RULES_OF_SYSTEM,
    Derivation,
    NdRule,
    NdSystem,
    assumption,
    bind_open,
    check_derivation,
    max_label,
    open_assumptions,
    replace_at,
)
from connexive.sequent import Sequent, seq

ATOMS = (Var("p"), Var("q"), Var("r"))


# ---------------------------------------------------------------------------
# Random formulas and sequents.

def rand_formula(rng: random.Random, max_size: int, atoms=ATOMS, allow_neg: bool = True) -> Formula:
    return _build(rng, rng.randint(1, max_size), atoms, allow_neg)


def _build(rng, n, atoms, allow_neg):
    if n <= 1 or (n == 2 and not allow_neg):
        return rng.choice(atoms)
    if allow_neg and (n == 2 or rng.random() < 0.3):
        return Neg(_build(rng, n - 1, atoms, allow_neg))
    k = rng.randint(1, n - 2)
    conn = rng.choice((And, Or, Imp))
    return conn(_build(rng, k, atoms, allow_neg), _build(rng, n - 1 - k, atoms, allow_neg))


def rand_sequent(
    rng: random.Random, max_size: int, max_ctx: int = 2, atoms=ATOMS, allow_neg: bool = True
) -> Sequent:
    ctx = [rand_formula(rng, max_size, atoms, allow_neg) for _ in range(rng.randint(0, max_ctx))]
    return seq(ctx, rand_formula(rng, max_size, atoms, allow_neg))


# ---------------------------------------------------------------------------
# Random checker-valid natural deduction derivations, built bottom-up by
# wrapping a growing derivation in randomly chosen rule applications.

def rand_derivation(rng: random.Random, sys_id: NdSystem, max_nodes: int = 15, atoms=ATOMS) -> Derivation:
    counter = [1]

    def fresh() -> int:
        counter[0] += 1
        return counter[0]

    def small() -> Formula:
        return rand_formula(rng, 3, atoms)

    d = assumption(small())
    while d.node_count() < max_nodes:
        d = _grow(rng, sys_id, d, fresh, small)
    rep = check_derivation(sys_id, d)
    assert rep.ok, rep.message()
    return d


def _grow(rng, sys_id, d, fresh, small):
    phi = d.formula
    rules = RULES_OF_SYSTEM[sys_id]

    def pick_hyp() -> Formula:
        opened = sorted(open_assumptions(d), key=key)
        if opened and rng.random() < 0.7:
            return rng.choice(opened)
        return small()

    options = []

    def imp_i():
        a = pick_hyp()
        l = fresh()
        return Derivation(NdRule.IMP_I, Imp(a, phi), (bind_open(d, a, l),), l)

    def imp_e():
        b = small()
        return Derivation(NdRule.IMP_E, b, (assumption(Imp(phi, b)), d))

    def and_i():
        other = small()
        return Derivation(NdRule.AND_I, And(phi, other), (d, assumption(other)))

    def or_i():
        if rng.random() < 0.5:
            return Derivation(NdRule.OR_I1, Or(phi, small()), (d,))
        return Derivation(NdRule.OR_I2, Or(small(), phi), (d,))

    def negneg_i():
        return Derivation(NdRule.NEGNEG_I, Neg(Neg(phi)), (d,))

    def or_e():
        a, b = pick_hyp(), small()
        l = fresh()
        major = assumption(Or(a, b))
        return Derivation(NdRule.OR_E, phi, (major, bind_open(d, a, l), assumption(phi)), l)

    def neg_imp_e():
        b = small()
        return Derivation(NdRule.NEG_IMP_E, Neg(b), (assumption(Neg(Imp(phi, b))), d))

    options += [imp_i, imp_e, and_i, or_i, negneg_i, or_e, neg_imp_e]

    if isinstance(phi, And):
        options.append(lambda: Derivation(NdRule.AND_E1, phi.left, (d,)))
        options.append(lambda: Derivation(NdRule.AND_E2, phi.right, (d,)))
    if isinstance(phi, Neg) and isinstance(phi.body, Neg):
        options.append(lambda: Derivation(NdRule.NEGNEG_E, phi.body.body, (d,)))
    if isinstance(phi, Neg) and isinstance(phi.body, Or):
        options.append(lambda: Derivation(NdRule.NEG_OR_E1, Neg(phi.body.left), (d,)))
        options.append(lambda: Derivation(NdRule.NEG_OR_E2, Neg(phi.body.right), (d,)))
    if isinstance(phi, Neg):

        def neg_imp_i():
            a = pick_hyp()
            l = fresh()
            return Derivation(NdRule.NEG_IMP_I, Neg(Imp(a, phi.body)), (bind_open(d, a, l),), l)

        def neg_and_i():
            if rng.random() < 0.5:
                return Derivation(NdRule.NEG_AND_I1, Neg(And(phi.body, small())), (d,))
            return Derivation(NdRule.NEG_AND_I2, Neg(And(small(), phi.body)), (d,))

        def neg_or_i():
            other = small()
            return Derivation(
                NdRule.NEG_OR_I, Neg(Or(phi.body, other)), (d, assumption(Neg(other)))
            )

        def neg_and_e():
            a, b = phi.body, small()
            l = fresh()
            major = assumption(Neg(And(a, b)))
            # branch 1 binds ~a leaves; phi is ~a so d's own open ~a leaves qualify
            return Derivation(NdRule.NEG_AND_E, phi, (major, bind_open(d, Neg(a), l), assumption(phi)), l)

        options += [neg_imp_i, neg_and_i, neg_or_i, neg_and_e]

    if NdRule.EM in rules:

        def em():
            a = small()
            l = fresh()
            return Derivation(NdRule.EM, phi, (bind_open(d, Neg(a), l), assumption(phi)), l)

        options.append(em)
    if NdRule.GEM in rules:

        def gem():
            a, b = small(), small()
            l = fresh()
            return Derivation(NdRule.GEM, phi, (bind_open(d, Imp(a, b), l), assumption(phi)), l)

        options.append(gem)

    return rng.choice(options)()


# ---------------------------------------------------------------------------
# Detour planting: wrap a subderivation in an introduction immediately
# eliminated, creating a maximum formula at a known spot.

def plant_detour(rng: random.Random, d: Derivation, path: tuple[int, ...] = ()) -> Derivation:
    node = d.at(path)
    phi = node.formula
    fresh = max_label(d) + 1
    kind = rng.randrange(4)
    if kind == 0:
        inner = Derivation(NdRule.NEGNEG_I, Neg(Neg(phi)), (node,))
        new = Derivation(NdRule.NEGNEG_E, phi, (inner,))
    elif kind == 1:
        other = rand_formula(rng, 3)
        inner = Derivation(NdRule.AND_I, And(phi, other), (node, assumption(other)))
        new = Derivation(NdRule.AND_E1, phi, (inner,))
    elif kind == 2:
        a = rand_formula(rng, 3)
        body = Derivation(NdRule.IMP_I, Imp(a, phi), (bind_open(node, a, fresh),), fresh)
        new = Derivation(NdRule.IMP_E, phi, (body, assumption(a)))
    else:
        a, b = rand_formula(rng, 2), rand_formula(rng, 2)
        major = Derivation(NdRule.OR_I1, Or(a, b), (assumption(a),))
        new = Derivation(
            NdRule.OR_E, phi, (major, bind_open(node, a, fresh), assumption(phi)), fresh
        )
    return replace_at(d, path, new)


def plant_detours(rng: random.Random, sys_id: NdSystem, d: Derivation, count: int) -> Derivation:
    for _ in range(count):
        paths = [()]
        if d.premises:
            paths.append((rng.randrange(len(d.premises)),))
        d = plant_detour(rng, d, rng.choice(paths))
    rep = check_derivation(sys_id, d)
    assert rep.ok, rep.message()
    return d


# ---------------------------------------------------------------------------
# Independent brute-force decision procedure for sC3 with the (ex-middle)
# rule instantiated by every formula of the goal's closure.  Backward search
# with full context retention (weakening is admissible, so retention loses
# no provable sequents), branch-history loop pruning, and caching of
# successes plus of failures that consulted no branch ancestor.  Instances
# whose premises all follow from the conclusion by weakening or a cut
# against an identity (the invertible ones) are committed to eagerly.
# Successes are shared across oracles; failures only within one universe.

_NO_DEP = 1 << 30
_ORACLE_PROVED: set[Sequent] = set()
_ORACLES: dict[frozenset[Formula], "_BruteOracle"] = {}


class _BruteOracle:
    def __init__(self, universe: frozenset[Formula]):
        self.universe = sorted(universe, key=key)
        self.failed: set[Sequent] = set()
        self.onpath: dict[Sequent, int] = {}

    def committed(self, t: Sequent):
        """Premises of an invertible instance, or None."""
        c, g = t.ctx, t.suc
        if isinstance(g, Imp):
            return [Sequent(c | {g.left}, g.right)]
        if isinstance(g, And):
            return [Sequent(c, g.left), Sequent(c, g.right)]
        if isinstance(g, Neg):
            b = g.body
            if isinstance(b, Neg):
                return [Sequent(c, b.body)]
            if isinstance(b, Imp):
                return [Sequent(c | {b.left}, Neg(b.right))]
            if isinstance(b, Or):
                return [Sequent(c, Neg(b.left)), Sequent(c, Neg(b.right))]
        for f in c:
            prems = None
            if isinstance(f, And):
                prems = [Sequent(c | {f.left, f.right}, g)]
            elif isinstance(f, Or):
                prems = [Sequent(c | {f.left}, g), Sequent(c | {f.right}, g)]
            elif isinstance(f, Neg):
                b = f.body
                if isinstance(b, Neg):
                    prems = [Sequent(c | {b.body}, g)]
                elif isinstance(b, And):
                    prems = [Sequent(c | {Neg(b.left)}, g), Sequent(c | {Neg(b.right)}, g)]
                elif isinstance(b, Or):
                    prems = [Sequent(c | {Neg(b.left), Neg(b.right)}, g)]
            if prems is not None and not any(x == t for x in prems):
                return prems
        return None

    def choices(self, t: Sequent):
        c, g = t.ctx, t.suc
        if isinstance(g, Or):
            yield [Sequent(c, g.left)]
            yield [Sequent(c, g.right)]
        if isinstance(g, Neg) and isinstance(g.body, And):
            yield [Sequent(c, Neg(g.body.left))]
            yield [Sequent(c, Neg(g.body.right))]
        for f in c:
            if isinstance(f, Imp):
                yield [Sequent(c, f.left), Sequent(c | {f.right}, g)]
            elif isinstance(f, Neg) and isinstance(f.body, Imp):
                b = f.body
                yield [Sequent(c, b.left), Sequent(c | {Neg(b.right)}, g)]
        for a in self.universe:
            yield [Sequent(c | {Neg(a)}, g), Sequent(c | {a}, g)]

    def axiom(self, t: Sequent) -> bool:
        g = t.suc
        if isinstance(g, Var):
            return g in t.ctx
        return isinstance(g, Neg) and isinstance(g.body, Var) and g in t.ctx

    def search(self, t: Sequent, depth: int) -> tuple[bool, int]:
        if t in _ORACLE_PROVED:
            return True, _NO_DEP
        if t in self.failed:
            return False, _NO_DEP
        if t in self.onpath:
            return False, self.onpath[t]
        if self.axiom(t):
            _ORACLE_PROVED.add(t)
            return True, _NO_DEP
        committed = self.committed(t)
        instances = [committed] if committed is not None else [
            prems for prems in self.choices(t) if not any(p == t for p in prems)
        ]
        self.onpath[t] = depth
        min_dep = _NO_DEP
        try:
            for prems in instances:
                inst_dep = _NO_DEP
                ok = True
                for prem in prems:
                    good, dep = self.search(prem, depth + 1)
                    if not good:
                        ok = False
                        inst_dep = dep
                        break
                if ok:
                    _ORACLE_PROVED.add(t)
                    return True, _NO_DEP
                min_dep = min(min_dep, inst_dep)
        finally:
            del self.onpath[t]
        if min_dep >= depth:
            self.failed.add(t)
            return False, _NO_DEP
        return False, min_dep


def brute_force_sc3(s: Sequent) -> bool:
    import sys

    if sys.getrecursionlimit() < 100_000:
        sys.setrecursionlimit(100_000)
    universe = closure_set({s.suc} | s.ctx)
    oracle = _ORACLES.get(universe)
    if oracle is None:
        oracle = _ORACLES[universe] = _BruteOracle(universe)
    return oracle.search(s, 0)[0]


# ---------------------------------------------------------------------------
# Exhaustive enumeration of formulas over a fixed atom set.

def all_formulas(atoms: tuple[Var, ...], max_size: int) -> list[Formula]:
    by_size: dict[int, list[Formula]] = {1: list(atoms)}
    for n in range(2, max_size + 1):
        layer: list[Formula] = [Neg(f) for f in by_size[n - 1]]
        for k in range(1, n - 1):
            for left in by_size[k]:
                for right in by_size[n - 1 - k]:
                    layer += [And(left, right), Or(left, right), Imp(left, right)]
        by_size[n] = layer
    return [f for n in range(1, max_size + 1) for f in by_size[n]]
