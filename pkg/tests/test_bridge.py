import random

import pytest

from connexive.bridge import PAIRED_CALCULUS, nd_to_sc, normalize, sc_to_nd
from connexive.formula import And, Imp, Neg, Or, Var
from connexive.natded import (
    Derivation,
    NdRule,
    NdSystem,
    assumption,
    check_derivation,
    end_formula,
    is_normal,
    open_assumptions,
)
from connexive.prover import Verdict, decide, eliminate_cut
from connexive.sequent import Calculus, Sequent, check_proof, seq

from helpers import plant_detours, rand_derivation, rand_sequent

p, q, r = Var("p"), Var("q"), Var("r")


def oa_relevant(d):
    # open assumptions in the bridge's sense: leaves not discharged in d
    bound = set()

    def labels(n):
        if n.discharge is not None:
            bound.add(n.discharge)
        for sub in n.premises:
            labels(sub)

    labels(d)
    out = set()

    def leaves(n):
        if n.rule is NdRule.ASSUMPTION and (n.label is None or n.label not in bound):
            out.add(n.formula)
        for sub in n.premises:
            leaves(sub)

    leaves(d)
    return frozenset(out)


def test_nd_to_sc_identity():
    body = assumption(p, 1)
    d = Derivation(NdRule.IMP_I, Imp(p, p), (body,), 1)
    proof = nd_to_sc(NdSystem.NC, d)
    assert proof.conclusion == seq([], Imp(p, p))
    assert check_proof(Calculus.SC, proof).ok


def test_nd_to_sc_open_assumptions():
    d = Derivation(NdRule.AND_E1, p, (assumption(And(p, q)),))
    proof = nd_to_sc(NdSystem.NC, d)
    assert proof.conclusion == seq([And(p, q)], p)
    assert check_proof(Calculus.SC, proof).ok


def test_nd_to_sc_neg_imp_e():
    # the displayed two-cut composition for (~->E)
    minor = assumption(p)
    major = assumption(Neg(Imp(p, q)))
    d = Derivation(NdRule.NEG_IMP_E, Neg(q), (major, minor))
    proof = nd_to_sc(NdSystem.NC, d)
    assert proof.conclusion == seq([Neg(Imp(p, q)), p], Neg(q))
    rep = check_proof(Calculus.SC, proof)
    assert rep.ok, rep.message()


def test_nd_to_sc_random():
    rng = random.Random(41)
    for sys_id in NdSystem:
        calc = PAIRED_CALCULUS[sys_id]
        for _ in range(20):
            d = rand_derivation(rng, sys_id, max_nodes=12)
            proof = nd_to_sc(sys_id, d)
            rep = check_proof(calc, proof)
            assert rep.ok, rep.message()
            assert proof.conclusion == Sequent(oa_relevant(d), end_formula(d))


def test_sc_to_nd_on_prover_proofs():
    rng = random.Random(42)
    for calc, sys_id in [
        (Calculus.SC, NdSystem.NC),
        (Calculus.SC3, NdSystem.NC3),
        (Calculus.SMC, NdSystem.NMC),
        (Calculus.SCN, NdSystem.NCN),
    ]:
        done = 0
        while done < 15:
            s = rand_sequent(rng, 6)
            res = decide(calc, s)
            if res.verdict is not Verdict.PROVABLE:
                continue
            done += 1
            d = sc_to_nd(calc, res.proof)
            rep = check_derivation(sys_id, d)
            assert rep.ok, rep.message()
            assert is_normal(d)
            assert end_formula(d) == s.suc
            assert oa_relevant(d) <= s.ctx


def test_sc_to_nd_gem():
    peirce = Imp(Imp(Imp(p, q), p), p)
    res = decide(Calculus.SMC_STAR, seq([], peirce))
    assert res.verdict is Verdict.PROVABLE
    d = sc_to_nd(Calculus.SMC_STAR, res.proof)
    rep = check_derivation(NdSystem.NMC, d)
    assert rep.ok, rep.message()
    assert is_normal(d)
    assert end_formula(d) == peirce


def test_roundtrip_provability():
    rng = random.Random(43)
    for sys_id in NdSystem:
        calc = PAIRED_CALCULUS[sys_id]
        for _ in range(10):
            d = rand_derivation(rng, sys_id, max_nodes=10)
            proof = nd_to_sc(sys_id, d)
            back = sc_to_nd(calc, eliminate_cut(calc, proof))
            assert end_formula(back) == end_formula(d)
            assert oa_relevant(back) <= proof.conclusion.ctx


def test_normalize_pipeline():
    rng = random.Random(44)
    for sys_id in NdSystem:
        for _ in range(10):
            base = rand_derivation(rng, sys_id, max_nodes=8)
            d = plant_detours(rng, sys_id, base, 2)
            out = normalize(sys_id, d)
            rep = check_derivation(sys_id, out)
            assert rep.ok, rep.message()
            assert is_normal(out)
            assert end_formula(out) == end_formula(d)
            assert oa_relevant(out) <= oa_relevant(d)


def test_nd_to_sc_rejects_invalid():
    from connexive.checking import InvalidProof

    with pytest.raises(InvalidProof):
        nd_to_sc(NdSystem.NC, Derivation(NdRule.AND_E1, p, (assumption(p),)))


def test_sc_to_nd_requires_cut_free():
    from connexive.sequent import Rule, SequentProof, identity_proof

    prem1 = identity_proof(Calculus.SC, p, {q})
    prem2 = identity_proof(Calculus.SC, r, {p})
    cut = SequentProof(seq([q, p, r], r), Rule.CUT, p, (prem1, prem2))
    with pytest.raises(ValueError):
        sc_to_nd(Calculus.SC, cut)
