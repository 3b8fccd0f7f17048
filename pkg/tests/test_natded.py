import random

import pytest

from connexive.formula import And, Imp, Neg, Or, Var
from connexive.natded import (
    Derivation,
    NdRule,
    NdSystem,
    assumption,
    bind_open,
    check_derivation,
    derivation_from_json,
    derivation_to_json,
    discharge_labels,
    end_formula,
    is_normal,
    max_label,
    maximum_formulas,
    open_assumptions,
    replace_at,
    require_valid,
    subst_label,
    subst_open,
)

from helpers import rand_derivation

p, q, r = Var("p"), Var("q"), Var("r")


def imp_intro(body, alpha, label):
    return Derivation(NdRule.IMP_I, Imp(alpha, body.formula), (bind_open(body, alpha, label),), label)


def test_identity_derivation():
    d = imp_intro(assumption(p), p, 1)
    rep = check_derivation(NdSystem.NC, d)
    assert rep.ok, rep.message()
    assert end_formula(d) == Imp(p, p)
    assert open_assumptions(d) == frozenset()
    assert is_normal(d)


def test_aristotle_derivation():
    # ~(p -> ~p) from no assumptions: double-negate the discharged p
    body = Derivation(NdRule.NEGNEG_I, Neg(Neg(p)), (assumption(p, 1),))
    d = Derivation(NdRule.NEG_IMP_I, Neg(Imp(p, Neg(p))), (body,), 1)
    rep = check_derivation(NdSystem.NC, d)
    assert rep.ok, rep.message()
    assert open_assumptions(d) == frozenset()


def test_vacuous_discharge():
    d = imp_intro(assumption(q), p, 1)
    assert check_derivation(NdSystem.NC, d).ok
    assert end_formula(d) == Imp(p, q)
    assert open_assumptions(d) == frozenset({q})


def test_duplicate_labels_rejected():
    inner = imp_intro(assumption(p), p, 1)
    outer = Derivation(NdRule.IMP_I, Imp(q, inner.formula), (inner,), 1)
    assert not check_derivation(NdSystem.NC, outer).ok


def test_unbound_label_rejected():
    d = Derivation(NdRule.OR_I1, Or(p, q), (assumption(p, 7),))
    assert not check_derivation(NdSystem.NC, d).ok


def test_wrong_discharge_formula_rejected():
    # label 1 binds a q leaf but (imp_I) concludes p -> q
    d = Derivation(NdRule.IMP_I, Imp(p, q), (assumption(q, 1),), 1)
    assert not check_derivation(NdSystem.NC, d).ok


def test_em_only_beyond_nc():
    # p | ~p via EM on p: both branches conclude the goal
    goal = Or(p, Neg(p))
    b1 = Derivation(NdRule.OR_I2, goal, (assumption(Neg(p), 1),))
    b2 = Derivation(NdRule.OR_I1, goal, (assumption(p, 1),))
    d = Derivation(NdRule.EM, goal, (b1, b2), 1)
    assert not check_derivation(NdSystem.NC, d).ok
    rep = check_derivation(NdSystem.NC3, d)
    assert rep.ok, rep.message()
    assert open_assumptions(d) == frozenset()


def test_gem():
    # Peirce's law from (GEM) on p -> q
    peirce = Imp(Imp(Imp(p, q), p), p)
    minor = assumption(Imp(Imp(p, q), p), 2)
    b1 = Derivation(NdRule.IMP_E, p, (minor, assumption(Imp(p, q), 1)))
    b2 = assumption(p, 1)
    gem = Derivation(NdRule.GEM, p, (b1, b2), 1)
    d = Derivation(NdRule.IMP_I, peirce, (gem,), 2)
    rep = check_derivation(NdSystem.NMC, d)
    assert rep.ok, rep.message()
    assert not check_derivation(NdSystem.NC3, d).ok
    assert open_assumptions(d) == frozenset()


def test_or_e_branch_formulas():
    major = assumption(Or(p, q))
    b1 = Derivation(NdRule.OR_I1, Or(p, q), (assumption(p, 1),))
    b2 = Derivation(NdRule.OR_I2, Or(p, q), (assumption(q, 1),))
    d = Derivation(NdRule.OR_E, Or(p, q), (major, b1, b2), 1)
    assert check_derivation(NdSystem.NC, d).ok
    # swapping the branches binds the wrong formulas
    bad = Derivation(NdRule.OR_E, Or(p, q), (major, b2, b1), 1)
    assert not check_derivation(NdSystem.NC, bad).ok


def test_maximum_formulas():
    # ((p & q) intro then immediately eliminated) is a maximum
    inner = Derivation(NdRule.AND_I, And(p, q), (assumption(p), assumption(q)))
    d = Derivation(NdRule.AND_E1, p, (inner,))
    maxima = maximum_formulas(d)
    assert len(maxima) == 1
    assert maxima[0].path == (0,)
    assert maxima[0].formula == And(p, q)
    assert not is_normal(d)


def test_elim_major_is_first_premise():
    # an assumption major premise is not a maximum
    d = Derivation(NdRule.AND_E1, p, (assumption(And(p, q)),))
    assert is_normal(d)
    # minor premises do not create maxima either
    minor = Derivation(NdRule.AND_I, And(p, q), (assumption(p), assumption(q)))
    e = Derivation(NdRule.IMP_E, r, (assumption(Imp(And(p, q), r)), minor))
    assert is_normal(e)


def test_require_valid_raises():
    from connexive.checking import InvalidProof

    with pytest.raises(InvalidProof):
        require_valid(NdSystem.NC, Derivation(NdRule.AND_E1, p, (assumption(p),)))


def test_subst_open():
    d = Derivation(NdRule.OR_I1, Or(p, q), (assumption(p),))
    repl = Derivation(NdRule.AND_E1, p, (assumption(And(p, r)),))
    out, _ = subst_open(d, p, repl, 10)
    assert check_derivation(NdSystem.NC, out).ok
    assert open_assumptions(out) == frozenset({And(p, r)})


def test_subst_label():
    d = imp_intro(assumption(p), p, 1)
    body = d.premises[0]
    out, _ = subst_label(body, 1, assumption(q, None), 10)
    assert out.formula == p or out.rule is NdRule.ASSUMPTION
    # substituting for a bound leaf replaces it wholesale
    repl = Derivation(NdRule.AND_E1, p, (assumption(And(p, q)),))
    out2, _ = subst_label(body, 1, repl, 10)
    assert out2 == repl


def test_random_derivations_valid():
    rng = random.Random(21)
    for sys_id in NdSystem:
        for _ in range(25):
            d = rand_derivation(rng, sys_id, max_nodes=15)
            assert d.node_count() >= 15
            rep = check_derivation(sys_id, d)
            assert rep.ok, rep.message()


def test_json_roundtrip():
    rng = random.Random(22)
    for _ in range(20):
        d = rand_derivation(rng, NdSystem.NCN, max_nodes=12)
        assert derivation_from_json(derivation_to_json(d)) == d
        assert derivation_from_json(derivation_to_json(d, indent=2)) == d


def test_replace_at_and_labels():
    rng = random.Random(23)
    d = rand_derivation(rng, NdSystem.NC, max_nodes=10)
    assert replace_at(d, (), assumption(p)) == assumption(p)
    assert max_label(d) >= max(discharge_labels(d), default=0)
