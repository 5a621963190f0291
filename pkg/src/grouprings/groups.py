"""Finite groups as dense Cayley tables, with subgroup machinery."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    InputError,
    NotAPermutation,
    NotASubgroup,
    NotContained,
    NotNormal,
    OrderBoundExceeded,
)

DEFAULT_CLOSURE_CAP = 5000
DEFAULT_SUBGROUP_CAP = 200


class FiniteGroup:
    """A group given by its multiplication table.

    ``mul[g, h]`` is the index of ``g*h``; index 0 is the identity.
    """

    def __init__(self, mul, generators=None, labels=None, name=None):
        mul = np.asarray(mul, dtype=np.int32)
        n = mul.shape[0]
        if mul.shape != (n, n) or n == 0:
            raise InputError("multiplication table must be square")
        if mul.min() < 0 or mul.max() >= n:
            raise InputError("table entries out of range")
        if not (np.array_equal(mul[0], np.arange(n)) and np.array_equal(mul[:, 0], np.arange(n))):
            raise InputError("element 0 is not the identity")
        inv = np.full(n, -1, dtype=np.int32)
        rows, cols = np.nonzero(mul == 0)
        for r, c in zip(rows, cols):
            if inv[r] != -1:
                raise InputError("table is not a latin square")
            inv[r] = c
        if (inv < 0).any():
            raise InputError("some element has no inverse")
        for row in mul:
            if len(np.unique(row)) != n:
                raise InputError("table is not a latin square")
        self.order = n
        self.mul = mul
        self.inv = inv
        self.name = name
        if generators is None:
            generators = _greedy_generators(self)
        self.generators = list(generators)
        if labels is None:
            labels = [f"g{i + 1}" for i in range(len(self.generators))]
        self.generator_labels = list(labels)

    def __repr__(self):
        return f"FiniteGroup(order={self.order}, name={self.name!r})"

    # -- element level ---------------------------------------------------
    def product(self, *elements):
        acc = 0
        for x in elements:
            acc = int(self.mul[acc, x])
        return acc

    def power(self, g, k):
        if k < 0:
            g, k = int(self.inv[g]), -k
        acc = 0
        for _ in range(k):
            acc = int(self.mul[acc, g])
        return acc

    def conj(self, x, g):
        """g^-1 x g"""
        return int(self.conj_table[g, x])

    def commutator(self, x, y):
        """[x, y] = x^-1 y^-1 x y"""
        return self.product(int(self.inv[x]), int(self.inv[y]), x, y)

    @cached_property
    def conj_table(self):
        # conj_table[g, x] = g^-1 x g
        left = self.mul[self.inv]  # left[g, x] = g^-1 x
        return self.mul[left, np.arange(self.order)[:, None]]

    @cached_property
    def ldiv(self):
        # ldiv[g, t] = g^-1 t, used by convolution
        return self.mul[self.inv]

    @cached_property
    def element_orders(self):
        orders = np.zeros(self.order, dtype=np.int64)
        for g in range(self.order):
            k, acc = 1, g
            while acc != 0:
                acc = int(self.mul[acc, g])
                k += 1
            orders[g] = k
        return orders

    def element_order(self, g):
        return int(self.element_orders[g])

    @cached_property
    def class_of(self):
        """Index of the conjugacy-class representative (least element) of each element."""
        rep = np.full(self.order, -1, dtype=np.int64)
        for x in range(self.order):
            if rep[x] < 0:
                cls = np.unique(self.conj_table[:, x])
                rep[cls] = x
        return rep

    @cached_property
    def class_reps(self):
        return sorted(set(int(r) for r in self.class_of))

    def is_abelian(self):
        return bool(np.array_equal(self.mul, self.mul.T))

    # -- parsing words ----------------------------------------------------
    def element_from_word(self, word):
        """Evaluate a word such as ``a^2*b`` or ``y*z^-1`` over generator labels.

        Integers are taken as raw element indices.
        """
        if isinstance(word, (int, np.integer)):
            if not 0 <= int(word) < self.order:
                raise InputError(f"element index {word} out of range")
            return int(word)
        word = word.strip()
        if word in ("", "1", "e", "id"):
            return 0
        if re.fullmatch(r"\d+", word):
            return self.element_from_word(int(word))
        lookup = dict(zip(self.generator_labels, self.generators))
        acc = 0
        for factor in word.replace(" ", "").split("*"):
            m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?", factor)
            if not m or m.group(1) not in lookup:
                raise InputError(f"cannot parse word factor {factor!r}")
            g = lookup[m.group(1)]
            acc = int(self.mul[acc, self.power(g, int(m.group(2) or 1))])
        return acc

    def subgroup(self, elements):
        """Subgroup generated by the given elements or words."""
        return generate(self, [self.element_from_word(w) for w in elements])

    @cached_property
    def whole(self):
        return Subgroup(self, range(self.order), gens=self.generators)

    @cached_property
    def trivial(self):
        return Subgroup(self, [0], gens=[])


def _greedy_generators(G):
    gens = []
    members = {0}
    for g in range(G.order):
        if g not in members:
            gens.append(g)
            members = set(generate(G, gens).members)
            if len(members) == G.order:
                break
    return gens


class Subgroup:
    """A subgroup of a FiniteGroup; members kept sorted and as a bit set."""

    __slots__ = ("parent", "members", "mask", "gens", "_set", "__dict__")

    def __init__(self, parent, members, gens=None):
        self.parent = parent
        self.members = tuple(sorted(int(m) for m in members))
        mask = 0
        for m in self.members:
            mask |= 1 << m
        self.mask = mask
        self._set = frozenset(self.members)
        self.gens = list(gens) if gens is not None else None

    @property
    def order(self):
        return len(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, g):
        return int(g) in self._set

    def __iter__(self):
        return iter(self.members)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and other.parent is self.parent and other.mask == self.mask

    def __hash__(self):
        return hash(self.mask)

    def __le__(self, other):
        return self.mask & other.mask == self.mask

    def __lt__(self, other):
        return self <= other and self.mask != other.mask

    def __repr__(self):
        if self.order <= 12:
            return f"Subgroup({list(self.members)})"
        return f"Subgroup(order={self.order})"

    @cached_property
    def indicator(self):
        ind = np.zeros(self.parent.order, dtype=bool)
        ind[list(self.members)] = True
        return ind

    @cached_property
    def generators(self):
        if self.gens is not None:
            return self.gens
        gens, current = [], Subgroup(self.parent, [0])
        for g in self.members:
            if g not in current:
                gens.append(g)
                current = generate(self.parent, gens)
        return gens

    def index_in(self, other):
        return other.order // self.order

    def sort_key(self):
        return (self.order, self.members)


def generate(G, gens, cap=DEFAULT_CLOSURE_CAP):
    """Closure of ``gens`` under multiplication (finite, so this is a subgroup)."""
    gens = [int(g) for g in gens if int(g) != 0]
    seen = np.zeros(G.order, dtype=bool)
    seen[0] = True
    frontier = np.array([0], dtype=np.int64)
    count = 1
    if gens:
        garr = np.array(sorted(set(gens)), dtype=np.int64)
        while frontier.size:
            prods = np.unique(G.mul[frontier][:, garr].ravel())
            new = prods[~seen[prods]]
            seen[new] = True
            count += new.size
            if count > cap:
                raise OrderBoundExceeded("closure exceeds cap", cap=cap)
            frontier = new
    return Subgroup(G, np.nonzero(seen)[0], gens=gens)


def group_from_permutation_generators(perms, labels=None, cap=DEFAULT_CLOSURE_CAP, name=None):
    """Build the Cayley table of the group generated by permutations.

    Each permutation is a sequence ``p`` on ``range(N)`` (image of i is p[i]).
    Products compose left to right: (g*h)(x) = h(g(x)).
    Elements are numbered in BFS discovery order from the identity.
    """
    perms = [tuple(int(x) for x in p) for p in perms]
    if not perms:
        perms = [()]
    degree = max(len(p) for p in perms)
    fixed = []
    for p in perms:
        if sorted(p) != list(range(len(p))):
            raise NotAPermutation(f"not a bijection: {p}")
        fixed.append(p + tuple(range(len(p), degree)))
    perms = fixed
    ident = tuple(range(degree))
    elements = [ident]
    index = {ident: 0}
    queue = 0
    while queue < len(elements):
        x = elements[queue]
        queue += 1
        for p in perms:
            y = tuple(p[x[i]] for i in range(degree))
            if y not in index:
                index[y] = len(elements)
                elements.append(y)
                if len(elements) > cap:
                    raise OrderBoundExceeded("group order exceeds cap", cap=cap)
    n = len(elements)
    arr = np.array(elements, dtype=np.int32).reshape(n, degree)
    keys = np.ascontiguousarray(arr).view(np.dtype((np.void, 4 * degree))).ravel()
    order = np.argsort(keys)
    sorted_keys = keys[order]
    mul = np.empty((n, n), dtype=np.int32)
    for i in range(n):
        # (g_i * g_j)(x) = g_j(g_i(x))
        composed = np.ascontiguousarray(arr[:, arr[i]])
        ck = composed.view(np.dtype((np.void, 4 * degree))).ravel()
        mul[i] = order[np.searchsorted(sorted_keys, ck)]
    gens = [index[p] for p in perms]
    G = FiniteGroup(mul, generators=gens, labels=labels, name=name)
    G.permutations = elements
    return G


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text, degree=None):
    """Parse cycle notation such as ``(1 2 3)(4 5)`` into a 0-based image tuple.

    Points are positive integers; returns the permutation on range(max point).
    """
    text = text.strip()
    if not text:
        raise NotAPermutation("empty permutation")
    if _CYCLE_RE.sub("", text).strip():
        raise NotAPermutation(f"malformed cycle notation: {text!r}")
    cycles = []
    for body in _CYCLE_RE.findall(text):
        pts = [p for p in re.split(r"[,\s]+", body.strip()) if p]
        try:
            pts = [int(p) for p in pts]
        except ValueError as exc:
            raise NotAPermutation(f"non-integer point in {text!r}") from exc
        if any(p < 1 for p in pts) or len(set(pts)) != len(pts):
            raise NotAPermutation(f"bad cycle {body!r}")
        cycles.append(pts)
    seen = [p for c in cycles for p in c]
    if len(seen) != len(set(seen)):
        raise NotAPermutation(f"cycles are not disjoint in {text!r}")
    n = max([degree or 0] + seen)
    image = list(range(n))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            image[a - 1] = b - 1
    return tuple(image)


def parse_group_text(text, cap=DEFAULT_CLOSURE_CAP, name=None):
    """Parse a group file: JSON Cayley table or one (optionally labelled) permutation per line."""
    import json

    stripped = text.strip()
    if stripped.startswith("{"):
        data = json.loads(stripped)
        if "mul" not in data:
            raise InputError("JSON group needs a 'mul' table")
        mul = data["mul"]
        if "order" in data and int(data["order"]) != len(mul):
            raise InputError("order does not match table size")
        if len(mul) > cap:
            raise OrderBoundExceeded("group order exceeds cap", cap=cap)
        G = FiniteGroup(mul, name=data.get("name", name))
        check_associative(G)
        return G
    perms, labels = [], []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        label = None
        m = re.match(r"^([A-Za-z_][A-Za-z_0-9]*)\s*:\s*(.*)$", line)
        if m:
            label, line = m.group(1), m.group(2)
        perms.append(parse_cycles(line))
        labels.append(label or f"g{len(labels) + 1}")
    if not perms:
        raise InputError("no generators found")
    return group_from_permutation_generators(perms, labels=labels, cap=cap, name=name)


def check_associative(G, samples=None):
    """Exhaustive associativity check for small tables, strided sample otherwise."""
    n = G.order
    idx = np.arange(n)
    if samples is None and n <= 64:
        for a in range(n):
            lhs = G.mul[G.mul[a][:, None], idx[None, :]]
            rhs = G.mul[a][G.mul]
            if not np.array_equal(lhs, rhs):
                raise InputError("multiplication table is not associative")
        return
    step = max(1, n // 37)
    for a in range(0, n, step):
        for b in range(0, n, step):
            ab = G.mul[a, b]
            if not np.array_equal(G.mul[ab], G.mul[a][G.mul[b]]):
                raise InputError("multiplication table is not associative")


# -- subgroup machinery ----------------------------------------------------

def all_subgroups(G, cap=DEFAULT_SUBGROUP_CAP):
    """Every subgroup once, sorted by order then member tuple (cyclic extension method)."""
    if G.order > cap:
        raise OrderBoundExceeded("group too large for subgroup enumeration", cap=cap)
    cyclic = {}
    for g in range(G.order):
        C = generate(G, [g])
        cyclic.setdefault(C.mask, (C, g))
    found = {mask: S for mask, (S, _) in cyclic.items()}
    cyclic_gens = [g for _, (_, g) in sorted(cyclic.items(), key=lambda kv: kv[1][0].sort_key())]
    layer = list(found.values())
    while layer:
        nxt = []
        for S in layer:
            for g in cyclic_gens:
                if g in S:
                    continue
                T = generate(G, list(S.generators) + [g])
                if T.mask not in found:
                    found[T.mask] = T
                    nxt.append(T)
        layer = nxt
    return sorted(found.values(), key=Subgroup.sort_key)


def as_subgroup(G, members):
    """Verify that ``members`` is a subgroup of G and wrap it."""
    members = sorted(set(int(m) for m in members))
    if not members or members[0] != 0:
        raise NotASubgroup("identity missing")
    if G.order % len(members):
        raise NotASubgroup("order does not divide |G|")
    arr = np.array(members)
    ind = np.zeros(G.order, dtype=bool)
    ind[arr] = True
    if not ind[G.mul[np.ix_(arr, arr)]].all() or not ind[G.inv[arr]].all():
        raise NotASubgroup("set is not closed")
    return Subgroup(G, members)


def is_normal_in(K, H):
    """K normal in H (K must be contained in H)."""
    if not K <= H:
        return False
    G = K.parent
    gens = H.generators
    if not gens:
        return True
    images = G.conj_table[np.ix_(gens, K.members)]
    return bool(K.indicator[images].all())


def conjugate_subgroup(S, g):
    """S^g = g^-1 S g"""
    G = S.parent
    return Subgroup(G, G.conj_table[g, list(S.members)])


def normalizer(G, K, within=None):
    ambient = within if within is not None else G.whole
    amb = np.array(ambient.members)
    images = G.conj_table[np.ix_(amb, K.members)]
    ok = K.indicator[images].all(axis=1)
    return Subgroup(G, amb[ok])


def centralizer_subgroup(G, S, within=None):
    """Elements of ``within`` commuting with every element of S."""
    ambient = within if within is not None else G.whole
    amb = np.array(ambient.members)
    gens = S.generators or [0]
    ok = (G.mul[np.ix_(amb, gens)] == G.mul[np.ix_(gens, amb)].T).all(axis=1)
    return Subgroup(G, amb[ok])


def commutator_subgroup(G, S=None):
    S = S if S is not None else G.whole
    m = np.array(S.members)
    inv = G.inv[m]
    left = G.mul[np.ix_(inv, inv)]  # x^-1 y^-1
    right = G.mul[np.ix_(m, m)]  # x y
    comms = np.unique(G.mul[left, right])
    return generate_incremental(G, comms)


def generate_incremental(G, elements, start=None):
    """Subgroup generated by many elements, adding only those not yet covered."""
    current = start if start is not None else G.trivial
    gens = list(current.generators)
    for c in elements:
        c = int(c)
        if c not in current:
            gens.append(c)
            current = generate(G, gens)
    return current


def normal_closure(G, S, within=None):
    ambient = within if within is not None else G.whole
    current = S
    while True:
        imgs = np.unique(G.conj_table[np.ix_(ambient.generators or [0], current.generators or [0])])
        nxt = generate_incremental(G, imgs, start=current)
        if nxt == current:
            return current
        current = nxt


def quotient_is_cyclic(H, K):
    """Return h with <hK> = H/K if H/K is cyclic (K normal in H assumed), else None."""
    G = H.parent
    m = H.order // K.order
    if m == 1:
        return 0
    for h in H.members:
        acc, i = h, 1
        while acc not in K:
            acc = int(G.mul[acc, h])
            i += 1
        if i == m:
            return h
    return None


@dataclass(frozen=True)
class CosetTransversal:
    subgroup: Subgroup
    ambient: Subgroup
    reps: tuple

    def __len__(self):
        return len(self.reps)

    def __iter__(self):
        return iter(self.reps)


def left_transversal(ambient, sub):
    """Representatives t of the left cosets t*sub; lowest unused index first, identity first."""
    if not sub <= ambient:
        raise NotContained("subgroup not contained in ambient")
    G = ambient.parent
    covered = np.zeros(G.order, dtype=bool)
    reps = []
    sub_arr = np.array(sub.members)
    for t in ambient.members:
        if not covered[t]:
            reps.append(t)
            covered[G.mul[t, sub_arr]] = True
    return CosetTransversal(sub, ambient, tuple(reps))


def right_transversal(ambient, sub):
    """Representatives t of the right cosets sub*t; identity first."""
    if not sub <= ambient:
        raise NotContained("subgroup not contained in ambient")
    G = ambient.parent
    covered = np.zeros(G.order, dtype=bool)
    reps = []
    sub_arr = np.array(sub.members)
    for t in ambient.members:
        if not covered[t]:
            reps.append(t)
            covered[G.mul[sub_arr, t]] = True
    return CosetTransversal(sub, ambient, tuple(reps))


def normal_core(G, S):
    """Largest normal subgroup of G inside S."""
    inside = S.indicator[G.conj_table].all(axis=0)
    return Subgroup(G, np.nonzero(inside)[0])


def quotient_group(G, N):
    """G/N as a FiniteGroup together with the projection (array: element -> coset index)."""
    if not is_normal_in(N, G.whole):
        raise NotNormal("quotient needs a normal subgroup")
    proj = np.full(G.order, -1, dtype=np.int64)
    n_arr = np.array(N.members)
    reps = []
    for g in range(G.order):
        if proj[g] < 0:
            proj[G.mul[g, n_arr]] = len(reps)
            reps.append(g)
    mul = proj[G.mul[np.ix_(reps, reps)]]
    gens, labels = [], []
    for g, lab in zip(G.generators, G.generator_labels):
        q = int(proj[g])
        if q and q not in gens:
            gens.append(q)
            labels.append(lab)
    name = f"{G.name}/N" if G.name else None
    return FiniteGroup(mul, generators=gens or None, labels=labels or None, name=name), proj
