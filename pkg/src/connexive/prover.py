"""Terminating cut-free backward proof search for every calculus, plus
cut elimination realized as re-derivation.

The decision procedure is a depth-first backward search with
branch-repetition pruning: a branch never revisits a sequent already on
it.  Minimal proofs never repeat a sequent along a branch (a repeat
could be spliced out), so pruning preserves completeness, and the
closure-bounded sequent space is finite, so the search halts on every
input and Unprovable is definitive.  Failures are cached when they are
branch-independent: if a subtree's failure consulted no ancestor strictly
above the node, the node is absolutely unprovable (a proof revisiting the
node could be spliced), so caching it is sound.  Unprovable is never
cached across decide calls.

Search is additionally pruned by a sound countervaluation filter: a
four-valued table semantics (independent truth and falsity bits per
atom, connexive falsity condition for implication) validates every rule
of every calculus here, with the t-or-f restriction when (ex-middle) is
present, so any sequent refuted by some valuation is unprovable and its
subtree is skipped.  The filter only removes unprovable nodes, so
completeness is untouched; its rule-wise soundness is property-tested.

Invertible rules are applied eagerly (one committed instance per node);
this is completeness-preserving because each such rule's premises are
interderivable with its conclusion via cut, weakening, and identity,
all admissible in every calculus here.
"""

from __future__ import annotations

import sys
import threading
import time
from dataclasses import dataclass, field
from enum import Enum

from .checking import InvalidProof
from .formula import (
    And,
    Formula,
    Imp,
    Neg,
    Or,
    Var,
    closure,
    closure_set,
    has_negation,
    has_primed,
    key,
)
from .sequent import (
    CONNEXIVE_CALCULI,
    RULES_OF,
    Calculus,
    Rule,
    Sequent,
    SequentProof,
    check_proof,
    identity_proof,
)


class Verdict(str, Enum):
    PROVABLE = "provable"
    UNPROVABLE = "unprovable"
    RESOURCE_EXCEEDED = "resource-exceeded"


@dataclass(frozen=True)
class SearchStats:
    nodes_expanded: int
    max_depth: int
    wall_time: float


@dataclass(frozen=True)
class ProveResult:
    verdict: Verdict
    proof: SequentProof | None
    stats: SearchStats

    def __bool__(self) -> bool:
        return self.verdict is Verdict.PROVABLE


@dataclass(frozen=True)
class SearchConfig:
    node_budget: int = 5_000_000
    allow_g_ex_middle_direct: bool = False
    memo: bool = True

    def __post_init__(self):
        if self.node_budget <= 0:
            raise ValueError("node_budget must be positive")


class ResourceExceeded(RuntimeError):
    def __init__(self, stats: SearchStats):
        super().__init__(f"node budget exhausted after {stats.nodes_expanded} expansions")
        self.stats = stats


_MEMO: dict[tuple[Calculus, Sequent], SequentProof] = {}
_MEMO_LOCK = threading.Lock()

# starred calculi are decided through their unstarred equivalents, then
# the (Peirce) nodes are rewritten into (g-ex-middle) nodes
_UNSTAR = {Calculus.SMC_STAR: Calculus.SMC, Calculus.SCN_STAR: Calculus.SCN}

# invertible rules, committed eagerly in this order
_RIGHT_INVERTIBLE = (
    Rule.AND_RIGHT,
    Rule.IMP_RIGHT,
    Rule.NEG_RIGHT,
    Rule.NEG_IMP_RIGHT,
    Rule.NEG_OR_RIGHT,
)
_LEFT_INVERTIBLE = (
    Rule.AND_LEFT,
    Rule.NEG_OR_LEFT,
    Rule.NEG_LEFT,
    Rule.OR_LEFT,
    Rule.NEG_AND_LEFT,
)


def decide(calc: Calculus, s: Sequent, cfg: SearchConfig | None = None) -> ProveResult:
    cfg = cfg or SearchConfig()
    if calc in CONNEXIVE_CALCULI:
        if any(has_primed(f) for f in s.ctx | {s.suc}):
            raise ValueError("primed atoms belong to the positive language only")
    elif any(has_negation(f) for f in s.ctx | {s.suc}):
        raise ValueError(f"connexive negation is outside the language of {calc.value}")
    if calc in _UNSTAR and not cfg.allow_g_ex_middle_direct:
        inner = decide(_UNSTAR[calc], s, cfg)
        if inner.verdict is not Verdict.PROVABLE:
            return inner
        proof = _destar(inner.proof)
        rep = check_proof(calc, proof)
        assert rep.ok, rep.message()
        return ProveResult(Verdict.PROVABLE, proof, inner.stats)

    if cfg.memo:
        with _MEMO_LOCK:
            hit = _MEMO.get((calc, s))
        if hit is not None:
            return ProveResult(Verdict.PROVABLE, hit, SearchStats(0, hit.depth(), 0.0))

    t0 = time.perf_counter()
    limit = sys.getrecursionlimit()
    if limit < 100_000:
        sys.setrecursionlimit(100_000)
    search = _Search(calc, s, cfg)
    try:
        proof, _ = search.dfs(s, 0)
    except _BudgetExhausted:
        wall = time.perf_counter() - t0
        return ProveResult(
            Verdict.RESOURCE_EXCEEDED, None, SearchStats(search.nodes, search.max_depth, wall)
        )
    wall = time.perf_counter() - t0
    if proof is not None:
        rep = check_proof(calc, proof)
        assert rep.ok, rep.message()
        assert proof.is_cut_free()
        if cfg.memo:
            with _MEMO_LOCK:
                _MEMO.setdefault((calc, s), proof)
        return ProveResult(
            Verdict.PROVABLE, proof, SearchStats(search.nodes, proof.depth(), wall)
        )
    return ProveResult(Verdict.UNPROVABLE, None, SearchStats(search.nodes, search.max_depth, wall))


def clear_memo() -> None:
    with _MEMO_LOCK:
        _MEMO.clear()


def _destar(proof: SequentProof) -> SequentProof:
    """Rewrite (Peirce) nodes as (g-ex-middle) nodes, closing the extra
    premise (alpha, Gamma => alpha) by generalized identity."""
    premises = tuple(_destar(p) for p in proof.premises)
    if proof.rule is not Rule.PEIRCE:
        return SequentProof(proof.conclusion, proof.rule, proof.principal, premises)
    alpha = proof.conclusion.suc
    ident = identity_proof(Calculus.SMC_STAR, alpha, proof.conclusion.ctx - {alpha})
    return SequentProof(proof.conclusion, Rule.G_EX_MIDDLE, proof.principal, premises + (ident,))


class _BudgetExhausted(Exception):
    pass


class Tables:
    """Bit-vector evaluation of the four-valued table semantics over all
    valuations of a fixed atom set.  Valuation v assigns atom i the truth
    bit (v >> 2i) & 1 and the falsity bit (v >> 2i+1) & 1; each formula
    gets a pair of masks with one bit per valuation."""

    def __init__(self, atoms_: list[Var], require_t_or_f: bool, pem_pairs: bool = False):
        self.index = {a: i for i, a in enumerate(sorted(atoms_, key=key))}
        n = len(self.index)
        self.nvals = 1 << (2 * n)
        self.full = (1 << self.nvals) - 1
        self._bit = [self._bit_mask(b) for b in range(2 * n)]
        self._memo: dict[Formula, tuple[int, int]] = {}
        self.allowed = self.full
        if require_t_or_f:
            for i in range(n):
                self.allowed &= self._bit[2 * i] | self._bit[2 * i + 1]
        if pem_pairs:
            for a, i in self.index.items():
                if not a.primed:
                    j = self.index.get(Var(a.name, True))
                    if j is not None:
                        self.allowed &= self._bit[2 * i] | self._bit[2 * j]

    def _bit_mask(self, b: int) -> int:
        half = 1 << b
        mask = ((1 << half) - 1) << half
        width = half << 1
        while width < self.nvals:
            mask |= mask << width
            width <<= 1
        return mask

    def tf(self, phi: Formula) -> tuple[int, int]:
        hit = self._memo.get(phi)
        if hit is not None:
            return hit
        if isinstance(phi, Var):
            i = self.index[phi]
            out = (self._bit[2 * i], self._bit[2 * i + 1])
        elif isinstance(phi, Neg):
            t, f = self.tf(phi.body)
            out = (f, t)
        elif isinstance(phi, And):
            ta, fa = self.tf(phi.left)
            tb, fb = self.tf(phi.right)
            out = (ta & tb, fa | fb)
        elif isinstance(phi, Or):
            ta, fa = self.tf(phi.left)
            tb, fb = self.tf(phi.right)
            out = (ta | tb, fa & fb)
        else:
            ta, _ = self.tf(phi.left)
            tb, fb = self.tf(phi.right)
            nta = ~ta & self.full
            out = (nta | tb, nta | fb)
        self._memo[phi] = out
        return out

    def refutes(self, s: Sequent) -> bool:
        m = self.allowed
        for phi in s.ctx:
            m &= self.tf(phi)[0]
            if not m:
                return False
        return bool(m & ~self.tf(s.suc)[0] & self.full)


_NO_DEP = 1 << 60  # failure consulted no branch ancestor


class _Search:
    def __init__(self, calc: Calculus, goal: Sequent, cfg: SearchConfig):
        self.calc = calc
        self.rules = RULES_OF[calc]
        self.goal = goal
        self.cfg = cfg
        self.universe = self._build_universe(goal)
        self.tables = Tables(
            [a for a in self.universe if isinstance(a, Var)],
            require_t_or_f=Rule.EX_MIDDLE in self.rules,
            pem_pairs=Rule.P_EX_MIDDLE in self.rules,
        )
        self.proved: dict[Sequent, SequentProof] = {}
        self.failed: set[Sequent] = set()
        self.history: dict[Sequent, int] = {}
        self.nodes = 0
        self.max_depth = 0

    def _build_universe(self, goal: Sequent) -> frozenset[Formula]:
        uni = closure(goal, add_negations=self.calc in CONNEXIVE_CALCULI).members
        if Rule.P_EX_MIDDLE in self.rules:
            extra = {Var(a.name, True) for a in uni if isinstance(a, Var) and not a.primed}
            uni = closure_set(uni | extra, add_negations=False)
        return uni

    def dfs(self, s: Sequent, depth: int) -> tuple[SequentProof | None, int]:
        """Returns (proof, dep) where dep is the shallowest branch depth
        of an ancestor whose presence on the branch influenced a failure;
        _NO_DEP for successes and absolute failures."""
        hit = self.proved.get(s)
        if hit is not None:
            return hit, _NO_DEP
        if s in self.failed:
            return None, _NO_DEP
        prior = self.history.get(s)
        if prior is not None:
            return None, prior
        self.nodes += 1
        if self.nodes > self.cfg.node_budget:
            raise _BudgetExhausted
        self.max_depth = max(self.max_depth, depth)
        if self.tables.refutes(s):
            self.failed.add(s)
            return None, _NO_DEP
        ax = self._axiom(s)
        if ax is not None:
            proof = SequentProof(s, ax)
            self.proved[s] = proof
            return proof, _NO_DEP
        self.history[s] = depth
        min_dep = _NO_DEP
        try:
            for rule, principal, prems in self._instances(s):
                built: list[SequentProof] = []
                inst_dep = _NO_DEP
                for p in prems:
                    sub, dep = self.dfs(p, depth + 1)
                    if sub is None:
                        inst_dep = dep
                        break
                    built.append(sub)
                else:
                    proof = SequentProof(s, rule, principal, tuple(built))
                    self.proved[s] = proof
                    return proof, _NO_DEP
                min_dep = min(min_dep, inst_dep)
        finally:
            del self.history[s]
        if min_dep >= depth:
            self.failed.add(s)
            return None, _NO_DEP
        return None, min_dep

    def _axiom(self, s: Sequent) -> Rule | None:
        g = s.suc
        if isinstance(g, Var) and g in s.ctx:
            return Rule.INIT1
        if (
            Rule.INIT2 in self.rules
            and isinstance(g, Neg)
            and isinstance(g.body, Var)
            and g in s.ctx
        ):
            return Rule.INIT2
        return None

    def _instances(self, s: Sequent):
        """All rule instances with the node's full context retained in
        every premise (G3-style).  Instances with a premise equal to the
        node itself are dropped: any proof through such an instance
        contains a smaller proof of the node in that premise."""
        first = self._invertible(s)
        if first is not None:
            yield first
            return
        yield from self._choices(s)

    def _emit(self, s, rule, principal, prem_specs):
        prems = tuple(Sequent(s.ctx | frozenset(a), g) for a, g in prem_specs)
        if any(p == s for p in prems):
            return None
        for p in prems:
            for f in p.ctx | {p.suc}:
                assert self._covered(f), f"universe escape: {f}"
        return (rule, principal, prems)

    def _covered(self, f: Formula) -> bool:
        """Universe membership modulo leading double negations: the
        universe truncates ~~~ chains because (neg left)/(neg right)
        peel them off immediately."""
        while isinstance(f, Neg) and isinstance(f.body, Neg) and f not in self.universe:
            f = f.body.body
        if f in self.universe:
            return True
        return isinstance(f, Imp) and f.left in self.universe and f.right in self.universe

    def _invertible(self, s: Sequent):
        g = s.suc
        for rule in _RIGHT_INVERTIBLE:
            if rule not in self.rules:
                continue
            inst = None
            if rule is Rule.AND_RIGHT and isinstance(g, And):
                inst = self._emit(s, rule, None, [((), g.left), ((), g.right)])
            elif rule is Rule.IMP_RIGHT and isinstance(g, Imp):
                inst = self._emit(s, rule, None, [((g.left,), g.right)])
            elif rule is Rule.NEG_RIGHT and isinstance(g, Neg) and isinstance(g.body, Neg):
                inst = self._emit(s, rule, None, [((), g.body.body)])
            elif rule is Rule.NEG_IMP_RIGHT and isinstance(g, Neg) and isinstance(g.body, Imp):
                inst = self._emit(s, rule, None, [((g.body.left,), Neg(g.body.right))])
            elif rule is Rule.NEG_OR_RIGHT and isinstance(g, Neg) and isinstance(g.body, Or):
                inst = self._emit(
                    s, rule, None, [((), Neg(g.body.left)), ((), Neg(g.body.right))]
                )
            if inst is not None:
                return inst
        for phi in sorted(s.ctx, key=key):
            for rule in _LEFT_INVERTIBLE:
                if rule not in self.rules:
                    continue
                inst = None
                if rule is Rule.AND_LEFT and isinstance(phi, And):
                    inst = self._emit(s, rule, phi, [((phi.left, phi.right), g)])
                elif rule is Rule.NEG_OR_LEFT and isinstance(phi, Neg) and isinstance(phi.body, Or):
                    inst = self._emit(
                        s, rule, phi, [((Neg(phi.body.left), Neg(phi.body.right)), g)]
                    )
                elif rule is Rule.NEG_LEFT and isinstance(phi, Neg) and isinstance(phi.body, Neg):
                    inst = self._emit(s, rule, phi, [((phi.body.body,), g)])
                elif rule is Rule.OR_LEFT and isinstance(phi, Or):
                    inst = self._emit(s, rule, phi, [((phi.left,), g), ((phi.right,), g)])
                elif rule is Rule.NEG_AND_LEFT and isinstance(phi, Neg) and isinstance(phi.body, And):
                    inst = self._emit(
                        s, rule, phi, [((Neg(phi.body.left),), g), ((Neg(phi.body.right),), g)]
                    )
                if inst is not None:
                    return inst
        return None

    def _choices(self, s: Sequent):
        g = s.suc
        rules = self.rules
        if isinstance(g, Or):
            yield from filter(None, (
                self._emit(s, Rule.OR_RIGHT1, None, [((), g.left)]),
                self._emit(s, Rule.OR_RIGHT2, None, [((), g.right)]),
            ))
        if Rule.NEG_AND_RIGHT1 in rules and isinstance(g, Neg) and isinstance(g.body, And):
            yield from filter(None, (
                self._emit(s, Rule.NEG_AND_RIGHT1, None, [((), Neg(g.body.left))]),
                self._emit(s, Rule.NEG_AND_RIGHT2, None, [((), Neg(g.body.right))]),
            ))
        for phi in sorted(s.ctx, key=key):
            if isinstance(phi, Imp):
                inst = self._emit(s, Rule.IMP_LEFT, phi, [((), phi.left), ((phi.right,), g)])
                if inst is not None:
                    yield inst
            if Rule.NEG_IMP_LEFT in rules and isinstance(phi, Neg) and isinstance(phi.body, Imp):
                inst = self._emit(
                    s,
                    Rule.NEG_IMP_LEFT,
                    phi,
                    [((), phi.body.left), ((Neg(phi.body.right),), g)],
                )
                if inst is not None:
                    yield inst
        sorted_uni = sorted(self.universe, key=key)
        if Rule.EX_MIDDLE in rules:
            # atomic instantiation only (at-ex-middle form)
            for p in sorted_uni:
                if isinstance(p, Var) and not p.primed:
                    inst = self._emit(s, Rule.EX_MIDDLE, p, [((Neg(p),), g), ((p,), g)])
                    if inst is not None:
                        yield inst
        if Rule.PEIRCE in rules:
            # alpha is fixed by the goal succedent; beta ranges over the universe
            for beta in sorted_uni:
                wit = Imp(g, beta)
                inst = self._emit(s, Rule.PEIRCE, wit, [((wit,), g)])
                if inst is not None:
                    yield inst
        if Rule.G_EX_MIDDLE in rules:
            for alpha in sorted_uni:
                for beta in sorted_uni:
                    wit = Imp(alpha, beta)
                    inst = self._emit(s, Rule.G_EX_MIDDLE, wit, [((wit,), g), ((alpha,), g)])
                    if inst is not None:
                        yield inst
        if Rule.P_EX_MIDDLE in rules:
            for p in sorted_uni:
                if isinstance(p, Var) and not p.primed:
                    inst = self._emit(
                        s, Rule.P_EX_MIDDLE, p, [((Var(p.name, True),), g), ((p,), g)]
                    )
                    if inst is not None:
                        yield inst


def eliminate_cut(calc: Calculus, proof: SequentProof, cfg: SearchConfig | None = None) -> SequentProof:
    """Checker-valid cut-free proof of the same conclusion, by re-derivation.
    Already-cut-free input is returned unchanged."""
    rep = check_proof(calc, proof)
    if not rep.ok:
        raise InvalidProof(rep)
    if proof.is_cut_free():
        return proof
    result = decide(calc, proof.conclusion, cfg)
    if result.verdict is Verdict.RESOURCE_EXCEEDED:
        raise ResourceExceeded(result.stats)
    if result.verdict is Verdict.UNPROVABLE:
        raise RuntimeError("cut admissibility violated: no cut-free re-derivation found")
    return result.proof


_MATRIX_CALCULI = (Calculus.SC, Calculus.SC3, Calculus.SMC, Calculus.SCN)


@dataclass(frozen=True)
class MatrixRow:
    formula: Formula
    verdicts: tuple[Verdict, ...] = field(default=())

    def cells(self) -> dict[Calculus, Verdict]:
        return dict(zip(_MATRIX_CALCULI, self.verdicts))


def separation_matrix(formulas, cfg: SearchConfig | None = None) -> list[MatrixRow]:
    """decide verdict for each formula across sC, sC3, sMC, sCN."""
    rows = []
    for phi in formulas:
        s = Sequent(frozenset(), phi)
        rows.append(MatrixRow(phi, tuple(decide(c, s, cfg).verdict for c in _MATRIX_CALCULI)))
    return rows
