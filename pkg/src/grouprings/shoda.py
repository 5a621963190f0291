"""Shoda pairs, strong Shoda pairs, strong inductive chains and the classification report."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .algebra import (
    AlgebraElement,
    are_orthogonal,
    centralizer_of_element,
    epsilon,
    is_idempotent,
)
from .characters import central_idempotent_from_character, faithful_character, induce
from .errors import BudgetExceeded, InvalidChain, NotAShodaPair
from .groups import (
    all_subgroups,
    conjugate_subgroup,
    is_normal_in,
    normal_closure,
    normalizer,
    quotient_is_cyclic,
    right_transversal,
)

log = logging.getLogger(__name__)

GSM = "GeneralizedStronglyMonomial"
INCOMPLETE = "Incomplete"
DEFAULT_CHAIN_BUDGET = 20000


@dataclass(eq=False)
class ShodaPair:
    H: object
    K: object
    witness_character: object
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def group(self):
        return self.H.parent

    @property
    def index(self):
        return self.H.order // self.K.order

    def key(self):
        return (self.H.mask, self.K.mask)

    def induced_idempotent(self, X):
        """e_Q(lambda^X) for a subgroup X containing H (cached)."""
        if X.mask not in self._cache:
            self._cache[X.mask] = central_idempotent_from_character(induce(self.witness_character, X))
        return self._cache[X.mask]

    @cached_property
    def epsilon(self):
        return epsilon(self.H, self.K)

    @cached_property
    def idempotent(self):
        return self.induced_idempotent(self.group.whole)

    def describe(self):
        return {"H": list(self.H.members), "K": list(self.K.members), "index": self.index}


@dataclass(eq=False)
class StrongInductiveChain:
    tower: list
    centralizers: list
    indices: list
    chain_idempotents: list

    @property
    def length(self):
        return len(self.tower) - 1

    @property
    def k(self):
        out = 1
        for x in self.indices:
            out *= x
        return out

    @property
    def kk(self):
        """Product of |C_i/H_i|."""
        out = 1
        for C, Hi in zip(self.centralizers, self.tower):
            out *= C.order // Hi.order
        return out

    def describe(self):
        return {
            "tower": [list(S.members) for S in self.tower],
            "tower_orders": [S.order for S in self.tower],
            "centralizer_orders": [C.order for C in self.centralizers],
            "k": self.k,
            "kk": self.kk,
        }


@dataclass(eq=False)
class StrongShodaWitness:
    normalizer: object
    epsilon: object
    idempotent: object
    transversal: tuple


@dataclass(eq=False)
class ClassifiedPair:
    pair: ShodaPair
    chain: StrongInductiveChain
    strong: bool

    @property
    def idempotent(self):
        return self.chain.chain_idempotents[-1]


@dataclass(eq=False)
class ClassificationReport:
    group: object
    pairs: list
    coverage_idempotent: object
    verdict: str
    uncovered: list = field(default_factory=list)

    @property
    def all_strong(self):
        return all(p.strong for p in self.pairs)

    @property
    def covered(self):
        return self.verdict == GSM


# -- Shoda conditions ------------------------------------------------------

def _section_ok(H, K):
    return K <= H and is_normal_in(K, H) and quotient_is_cyclic(H, K) is not None


def is_shoda_pair(G, H, K):
    """Shoda pair test: every g outside H has some h in H with [h, g] in H but not in K.

    The test is elementwise. Asking only that the subgroup generated by the
    commutators meets H outside K accepts reducible inductions (D16 has such sections).
    """
    if not _section_ok(H, K):
        return None
    hs = np.array(H.members)
    inv_h = G.inv[hs]
    outside_K = H.indicator & ~K.indicator
    for g in range(G.order):
        if g in H:
            continue
        # g^-1 h^-1 g h for all h in H
        comms = G.mul[G.mul[G.inv[g], inv_h], G.mul[g, hs]]
        if not outside_K[comms].any():
            return None
    return ShodaPair(H, K, faithful_character(H, K))


def is_strong_shoda_pair(G, H, K):
    if not _section_ok(H, K):
        return None
    N = normalizer(G, K)
    if not (H <= N and is_normal_in(H, N)):
        return None
    h = quotient_is_cyclic(H, K)
    for n in N.members:
        if n not in H and G.commutator(n, h) in K:
            return None
    eps = epsilon(H, K)
    T = right_transversal(G.whole, N).reps
    for g in T[1:]:
        if not (eps * eps.conjugate_by(g)).is_zero():
            return None
    e = AlgebraElement.zero(G)
    for g in T:
        e = e + eps.conjugate_by(g)
    return StrongShodaWitness(N, eps, e, tuple(T))


# -- chains ----------------------------------------------------------------

def chain_step(pair, Hi, Hnext):
    """Check GSSP conditions (i) and (ii) for the step Hi <= Hnext.

    Returns (C_i, e_i) on success, None otherwise.
    """
    e_i = pair.induced_idempotent(Hi)
    C = centralizer_of_element(e_i, Hnext)
    if not (Hi <= C and is_normal_in(Hi, C)):
        return None
    conjs = [e_i.conjugate_by(t) for t in right_transversal(Hnext, C).reps]
    if len(conjs) != Hnext.order // C.order:
        return None
    for a in range(len(conjs)):
        for b in range(a + 1, len(conjs)):
            if not are_orthogonal(conjs[a], conjs[b]):
                return None
    return C, e_i


def build_chain(pair, tower):
    """Validate a tower [H, ..., G] and return the StrongInductiveChain or raise InvalidChain."""
    G = pair.group
    if tower[0] != pair.H or tower[-1] != G.whole:
        raise InvalidChain("tower must start at H and end at G")
    for a, b in zip(tower, tower[1:]):
        if not a <= b:
            raise InvalidChain("tower is not increasing")
    cents, idx, idems = [], [], []
    for a, b in zip(tower, tower[1:]):
        step = chain_step(pair, a, b)
        if step is None:
            raise InvalidChain("chain condition fails", step=[a.order, b.order])
        C, e_i = step
        cents.append(C)
        idx.append(b.order // C.order)
        idems.append(e_i)
    idems.append(pair.induced_idempotent(G.whole))
    for x, y in zip(idems, idems[1:]):
        if x * y != x:
            raise InvalidChain("absorption law fails along the chain")
    chain = StrongInductiveChain(list(tower), cents, idx, idems)
    if chain.k * chain.kk != G.order // pair.H.order:
        raise InvalidChain("k * kk differs from [G:H]")
    return chain


def find_strong_inductive_chain(G, pair, budget=DEFAULT_CHAIN_BUDGET, subgroups=None):
    """Search towers H < H_1 < ... < G (shorter first); None if none exists among ``subgroups``."""
    if is_strong_shoda_pair(G, pair.H, pair.K) is not None:
        return build_chain(pair, [pair.H, G.whole])
    if subgroups is None:
        subgroups = all_subgroups(G)
    H, K = pair.H, pair.K
    preferred = []
    for S in (normalizer(G, K), normal_closure(G, H)):
        if H < S < G.whole and S not in preferred:
            preferred.append(S)
    middle = [S for S in subgroups if H < S < G.whole]
    rest = sorted((S for S in middle if S not in preferred), key=lambda S: (-S.order, S.members))
    ordered = preferred + rest
    counter = [0]

    def tick():
        counter[0] += 1
        if counter[0] > budget:
            raise BudgetExceeded("strong inductive chain search budget exhausted", budget=budget)

    step_cache = {}

    def step(a, b):
        key = (a.mask, b.mask)
        if key not in step_cache:
            tick()
            step_cache[key] = chain_step(pair, a, b)
        return step_cache[key]

    def dfs(current, depth_left, tower):
        if depth_left == 1:
            if step(current, G.whole) is not None:
                return tower + [G.whole]
            return None
        for S in ordered:
            if current < S and step(current, S) is not None:
                found = dfs(S, depth_left - 1, tower + [S])
                if found:
                    return found
        return None

    max_len = max(1, (G.order // H.order).bit_length())
    for length in range(2, max_len + 1):
        tower = dfs(H, length, [H])
        if tower:
            return build_chain(pair, tower)
    return None


# -- equivalence ---------------------------------------------------------

def are_equivalent(pair1, pair2):
    return pair1.idempotent == pair2.idempotent


def subgroup_criterion(G, pair1, pair2):
    """Exists g with H1^g ∩ K2 = K1^g ∩ H2."""
    for g in range(G.order):
        H1g = conjugate_subgroup(pair1.H, g)
        K1g = conjugate_subgroup(pair1.K, g)
        if (H1g.mask & pair2.K.mask) == (K1g.mask & pair2.H.mask):
            return True
    return False


def candidate_sections(G, subgroups):
    """(H, K) with K normal in H and H/K cyclic, H by decreasing order then K by decreasing order."""
    subs = sorted(subgroups, key=lambda S: (-S.order, S.members))
    out = []
    for H in subs:
        for K in subs:
            if K <= H and H.order % K.order == 0 and _section_ok(H, K):
                out.append((H, K))
    return out


def all_shoda_pairs(G, cap=200):
    subs = all_subgroups(G, cap)
    out = []
    for H, K in candidate_sections(G, subs):
        p = is_shoda_pair(G, H, K)
        if p is not None:
            out.append(p)
    return out


def complete_irredundant_set(G, budget=DEFAULT_CHAIN_BUDGET, cap=200):
    subs = all_subgroups(G, cap)
    classes = {}
    order = []
    for H, K in candidate_sections(G, subs):
        p = is_shoda_pair(G, H, K)
        if p is None:
            continue
        k = p.idempotent.key()
        if k not in classes:
            classes[k] = []
            order.append(k)
        classes[k].append(p)
    chosen, uncovered = [], []
    for k in order:
        members = classes[k]
        found = None
        for p in members:
            if is_strong_shoda_pair(G, p.H, p.K) is not None:
                found = ClassifiedPair(p, build_chain(p, [p.H, G.whole]), True)
                break
        if found is None:
            for p in members:
                chain = find_strong_inductive_chain(G, p, budget, subs)
                if chain is not None:
                    found = ClassifiedPair(p, chain, False)
                    break
        if found is None:
            uncovered.append(members[0])
        else:
            chosen.append(found)
    return _report(G, chosen, uncovered)


def classify_declared(G, declared):
    """Verify user-declared pairs; ``declared`` is a list of (H, K, tower-or-None)."""
    chosen = []
    seen = set()
    for H, K, tower in declared:
        p = is_shoda_pair(G, H, K)
        if p is None:
            raise NotAShodaPair("declared pair is not a Shoda pair", H=H.order, K=K.order)
        strong = is_strong_shoda_pair(G, H, K) is not None
        if tower is None:
            if not strong:
                raise InvalidChain("declared pair needs a chain: it is not a strong Shoda pair")
            tower = [H, G.whole]
        chain = build_chain(p, tower)
        key = chain.chain_idempotents[-1].key()
        if key in seen:
            raise InvalidChain("two declared pairs give the same primitive central idempotent")
        seen.add(key)
        chosen.append(ClassifiedPair(p, chain, strong))
    return _report(G, chosen, [])


def _report(G, chosen, uncovered):
    total = AlgebraElement.zero(G)
    for c in chosen:
        total = total + c.idempotent
    one = AlgebraElement.one(G)
    assert is_idempotent(total) and is_idempotent(one - total)
    verdict = GSM if total == one else INCOMPLETE
    return ClassificationReport(G, chosen, total, verdict, uncovered)
