"""Finitely presented groups and the rewriting machinery around them.

A word is a tuple of ``(generator index, exponent)`` pairs with exponent
+1 or -1.  Kernels of maps onto finite abelian groups are presented by
Reidemeister-Schreier rewriting; Tietze moves then shrink the result.
"""

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from . import intervals as ivl
from .errors import (
    DedupInconclusive,
    NotAHomomorphism,
    NotSurjective,
    PatternMismatch,
)
from .linalg import rank


# words

def free_reduce(word):
    out = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def cyclic_reduce(word):
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return tuple(w)


def inverse(word):
    return tuple((g, -e) for g, e in reversed(word))


def concat(*words):
    out = ()
    for w in words:
        out = free_reduce(out + tuple(w))
    return out


def word_power(word, n):
    if n < 0:
        return word_power(inverse(word), -n)
    return free_reduce(tuple(word) * n)


def substitute(word, images):
    """Replace every generator g by the word images[g]."""
    out = ()
    for g, e in word:
        w = images[g]
        out = concat(out, w if e > 0 else inverse(w))
    return out


def exponent_sums(word, ngens):
    v = [0] * ngens
    for g, e in word:
        v[g] += e
    return v


def word_to_str(word, names):
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        g, e = word[i]
        j = i
        while j < len(word) and word[j] == (g, e):
            j += 1
        n = (j - i) * e
        parts.append(names[g] if n == 1 else "%s^%d" % (names[g], n))
        i = j
    return " ".join(parts)


_TOKEN = re.compile(r"([A-Za-z][A-Za-z0-9_']*)(?:\^(-?\d+))?")


def parse_word(text, names):
    """Parse 'c1 c2^-1 x^2' into a word over ``names``."""
    index = {n: i for i, n in enumerate(names)}
    out = []
    for tok in text.replace("*", " ").split():
        if tok == "1":
            continue
        m = _TOKEN.fullmatch(tok)
        if not m or m.group(1) not in index:
            raise ValueError("bad token %r" % tok)
        n = int(m.group(2) or 1)
        g = index[m.group(1)]
        out.extend([(g, 1 if n > 0 else -1)] * abs(n))
    return free_reduce(out)


@dataclass(frozen=True)
class FpGroup:
    """Group given by generator names and cyclically reduced relators."""

    generators: tuple
    relators: tuple

    def __post_init__(self):
        rels = []
        for r in self.relators:
            r = cyclic_reduce(r)
            if r:
                rels.append(r)
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(rels))

    @classmethod
    def from_strings(cls, names, relators):
        return cls(tuple(names), tuple(parse_word(r, names) for r in relators))

    @property
    def ngens(self):
        return len(self.generators)

    def word(self, text):
        return parse_word(text, self.generators)

    def show(self, word):
        return word_to_str(word, self.generators)

    def exponent_matrix(self):
        return [exponent_sums(r, self.ngens) for r in self.relators]

    def __str__(self):
        return "< %s | %s >" % (", ".join(self.generators),
                                ", ".join(self.show(r) for r in self.relators))

    def to_json(self):
        return {"gens": list(self.generators),
                "rels": [[[self.generators[g], e] for g, e in r] for r in self.relators]}

    @classmethod
    def from_json(cls, obj):
        names = list(obj["gens"])
        index = {n: i for i, n in enumerate(names)}
        rels = []
        for r in obj["rels"]:
            rels.append(tuple((index[g] if isinstance(g, str) else int(g), int(e)) for g, e in r))
        return cls(tuple(names), tuple(rels))


def abelianization(G):
    """(free rank, torsion invariants) of G^ab via the Smith normal form."""
    M = G.exponent_matrix()
    n = G.ngens
    if not M:
        return n, []
    r = rank(M)
    inv = invariant_factors(Matrix(M), domain=ZZ)
    torsion = [abs(int(x)) for x in inv if abs(int(x)) > 1]
    return n - r, torsion


def abelianization_rank(G):
    return abelianization(G)[0]


# Reidemeister-Schreier

def _normalize_hom(G, images, moduli):
    if isinstance(moduli, int):
        moduli = (moduli,)
    moduli = tuple(int(m) for m in moduli)
    if isinstance(images, dict):
        images = [images[g] for g in G.generators]
    out = []
    for v in images:
        if isinstance(v, int):
            v = (v,)
        out.append(tuple(int(x) % m for x, m in zip(v, moduli)))
    if len(out) != G.ngens:
        raise ValueError("one image per generator required")
    return out, moduli


def _hom_add(a, b, moduli, sign=1):
    return tuple((x + sign * y) % m for x, y, m in zip(a, b, moduli))


def evaluate_hom(word, images, moduli):
    v = tuple(0 for _ in moduli)
    for g, e in word:
        v = _hom_add(v, images[g], moduli, e)
    return v


@dataclass
class SubgroupData:
    """Kernel of a map onto a finite abelian group, presented by rewriting."""

    parent: FpGroup
    images: list
    moduli: tuple
    transversal: list
    cosets: list
    rewriting: dict
    generator_words: list
    presentation: FpGroup
    index: int
    tietze: object = field(default=None, repr=False)

    def coset_of(self, word):
        return evaluate_hom(word, self.images, self.moduli)

    def contains(self, word):
        return all(x == 0 for x in self.coset_of(word))

    def rewrite(self, word):
        """Express a parent word lying in the subgroup in Schreier generators."""
        pos = {c: i for i, c in enumerate(self.cosets)}
        cur = pos[self.cosets[0]]
        out = []
        for g, e in word:
            if e > 0:
                s = self.rewriting.get((cur, g))
                if s is not None:
                    out.append((s, 1))
                cur = pos[_hom_add(self.cosets[cur], self.images[g], self.moduli)]
            else:
                prev = pos[_hom_add(self.cosets[cur], self.images[g], self.moduli, -1)]
                s = self.rewriting.get((prev, g))
                if s is not None:
                    out.append((s, -1))
                cur = prev
        if cur != 0:
            raise ValueError("word is not in the subgroup")
        return free_reduce(out)

    def to_parent(self, word):
        """Parent word of a word in the subgroup's presentation generators."""
        if self.tietze is not None:
            word = substitute(word, self.tietze.new_in_old)
        return substitute(word, self.generator_words)

    def from_parent(self, word):
        """Word in the subgroup's presentation generators of a parent word."""
        w = self.rewrite(word)
        if self.tietze is not None:
            w = substitute(w, self.tietze.old_in_new)
        return w


def _letters(ngens):
    return [(g, e) for g in range(ngens) for e in (1, -1)]


def reidemeister_schreier(G, images, moduli, transversal_hint=None):
    """Presentation of the kernel of ``G -> prod Z/moduli`` given on generators.

    Schreier generators t x (rep(t x))^-1 that are freely nontrivial are
    numbered by running through the transversal from its last element back to
    the identity and, within a coset, through the parent generators in order.
    """
    images, moduli = _normalize_hom(G, images, moduli)
    zero = tuple(0 for _ in moduli)
    for r in G.relators:
        if evaluate_hom(r, images, moduli) != zero:
            raise NotAHomomorphism("relator %s survives" % G.show(r))
    # image subgroup and transversal
    if transversal_hint is None:
        reps = {zero: ()}
        order = [zero]
        queue = deque([zero])
        while queue:
            c = queue.popleft()
            for g, e in _letters(G.ngens):
                d = _hom_add(c, images[g], moduli, e)
                if d not in reps:
                    reps[d] = reps[c] + ((g, e),)
                    order.append(d)
                    queue.append(d)
        transversal = [reps[c] for c in order]
    else:
        transversal = [free_reduce(G.word(w) if isinstance(w, str) else w)
                       for w in transversal_hint]
        order = [evaluate_hom(w, images, moduli) for w in transversal]
        if len(set(order)) != len(order) or order[0] != zero:
            raise ValueError("transversal hint must start at 1 and hit each coset once")
        tset = set(transversal)
        if any(w[:-1] not in tset for w in transversal if w):
            raise ValueError("transversal hint is not prefix closed")
        reps = dict(zip(order, transversal))
        # every coset reachable from the image must be represented
        for c in order:
            for g, e in _letters(G.ngens):
                if _hom_add(c, images[g], moduli, e) not in reps:
                    raise ValueError("transversal hint misses a coset")
    pos = {c: i for i, c in enumerate(order)}
    rewriting = {}
    gen_words = []
    names = []
    for ci in reversed(range(len(order))):
        t = transversal[ci]
        for g in range(G.ngens):
            d = _hom_add(order[ci], images[g], moduli)
            w = free_reduce(t + ((g, 1),) + inverse(reps[d]))
            if not w:
                continue
            rewriting[(ci, g)] = len(gen_words)
            gen_words.append(w)
            names.append(word_to_str(w, G.generators).replace(" ", ""))
    sub = SubgroupData(G, images, moduli, transversal, order, rewriting, gen_words,
                       None, len(order))
    rels = []
    for ci, t in enumerate(transversal):
        for r in G.relators:
            rels.append(sub.rewrite(concat(t, r, inverse(t))))
    sub.presentation = FpGroup(tuple(names), tuple(rels))
    return sub


def kernel_of_cyclic(G, assignments, n):
    """Kernel of the map G -> Z/n given by ``assignments`` (list or dict)."""
    if isinstance(assignments, dict):
        assignments = [assignments[g] for g in G.generators]
    vals = [int(a) % n for a in assignments]
    g = n
    for v in vals:
        g = gcd(g, v)
    for r in G.relators:
        if sum(vals[x] * e for x, e in r) % n:
            raise NotAHomomorphism("relator %s survives" % G.show(r))
    if g != 1 and n > 1:
        raise NotSurjective("image is a proper subgroup of Z/%d" % n)
    return reidemeister_schreier(G, vals, n)


# Tietze elimination

@dataclass
class TietzeResult:
    """Simplified presentation with the bookkeeping maps.

    ``old_in_new`` maps each input generator to a word in the output ones,
    ``new_in_old`` goes the other way.  ``standard`` is True when the
    surface relator [x,y][x',y'] was reached.
    """

    presentation: FpGroup
    old_in_new: list
    new_in_old: list
    standard: bool
    intermediate: FpGroup = None


def _is_standard_surface(G):
    if len(G.relators) != 1 or G.ngens % 2:
        return False
    r = G.relators[0]
    want = []
    for i in range(0, G.ngens, 2):
        want += [(i, 1), (i + 1, 1), (i, -1), (i + 1, -1)]
    return _same_cyclic(r, tuple(want))


def _same_cyclic(r, s):
    if len(r) != len(s):
        return False
    for cand in (s, inverse(s)):
        for k in range(len(cand)):
            if r == cand[k:] + cand[:k]:
                return True
    return False


def _eliminate_once(gens_alive, rels):
    """Pick (relator index, generator) with the generator occurring once.

    Shortest relators go first; among their candidates the highest
    numbered generator is removed.
    """
    order = sorted(range(len(rels)), key=lambda i: (len(rels[i]), i))
    for i in order:
        r = rels[i]
        counts = {}
        for g, _ in r:
            counts[g] = counts.get(g, 0) + 1
        cands = [g for g, c in counts.items() if c == 1 and g in gens_alive]
        if cands:
            return i, max(cands)
    return None


def _surface_pattern(r):
    """Match g1 g2 g3 g4 g1^-1 g2^-1 g3^-1 g4^-1 up to rotation/inversion."""
    if len(r) != 8:
        return None
    found = []
    for cand in (r, inverse(r)):
        for k in range(8):
            w = cand[k:] + cand[:k]
            head = w[:4]
            if len({g for g, _ in head}) != 4:
                continue
            if all(w[4 + i] == (head[i][0], -head[i][1]) for i in range(4)):
                found.append(head)
    if not found:
        return None
    # deterministic choice: lowest generators first, positive exponents first
    return min(found, key=lambda h: tuple((g, -e) for g, e in h))


def tietze_eliminate(sub, strict=False):
    """Eliminate redundant generators, then normalize to a surface relator.

    Accepts a :class:`SubgroupData` or an :class:`FpGroup`.  When the
    remaining one-relator presentation is abcd(dcba)^-1 it is rewritten
    to <x, y, x', y' | [x,y][x',y']> through
    x = a b^-2, y = b, x' = b a c, y' = d c.
    """
    G = sub.presentation if isinstance(sub, SubgroupData) else sub
    n = G.ngens
    if _is_standard_surface(G):
        ident = [((g, 1),) for g in range(n)]
        res = TietzeResult(G, ident, ident, True, G)
        if isinstance(sub, SubgroupData):
            sub.tietze = res
        return res
    rels = [cyclic_reduce(r) for r in G.relators]
    rels = [r for r in rels if r]
    alive = set(range(n))
    expr = [((g, 1),) for g in range(n)]  # old generator -> word in old survivors
    while True:
        pick = _eliminate_once(alive, rels)
        if pick is None:
            break
        i, g = pick
        r = rels[i]
        k = next(j for j, (h, _) in enumerate(r) if h == g)
        e = r[k][1]
        U, V = r[:k], r[k + 1:]
        # U g^e V = 1
        value = concat(inverse(U), inverse(V)) if e > 0 else concat(V, U)
        images = [((h, 1),) for h in range(n)]
        images[g] = value
        rels = [cyclic_reduce(substitute(x, images)) for j, x in enumerate(rels) if j != i]
        rels = [x for x in rels if x]
        expr = [substitute(w, images) for w in expr]
        alive.discard(g)
    survivors = sorted(alive)
    renum = {g: i for i, g in enumerate(survivors)}
    mid = FpGroup(tuple(G.generators[g] for g in survivors),
                  tuple(tuple((renum[h], e) for h, e in r) for r in rels))
    old_in_mid = [tuple((renum[h], e) for h, e in w) for w in expr]
    mid_in_old = [((g, 1),) for g in survivors]

    head = _surface_pattern(mid.relators[0]) if len(mid.relators) == 1 and mid.ngens == 4 else None
    if head is None:
        if strict:
            raise PatternMismatch("intermediate presentation is %s" % mid)
        res = TietzeResult(mid, old_in_mid, mid_in_old, _is_standard_surface(mid), mid)
        if isinstance(sub, SubgroupData):
            sub.tietze = res
        return res
    # a..d as words in the intermediate generators
    abcd = [((g, e),) for g, e in head]
    X, Y, XP, YP = 0, 1, 2, 3
    x, y, xp, yp = ((X, 1),), ((Y, 1),), ((XP, 1),), ((YP, 1),)
    # a = x y^2, b = y, c = y^-2 x^-1 y^-1 x', d = y' x'^-1 y x y^2
    abcd_in_new = [
        concat(x, y, y),
        y,
        concat(inverse(y), inverse(y), inverse(x), inverse(y), xp),
        concat(yp, inverse(xp), y, x, y, y),
    ]
    a, b, c, d = abcd
    new_in_mid = [
        concat(a, inverse(b), inverse(b)),
        b,
        concat(b, a, c),
        concat(d, c),
    ]
    # intermediate generator -> word in new generators
    mid_in_new = [None] * 4
    for (g, e), w in zip(head, abcd_in_new):
        mid_in_new[g] = w if e > 0 else inverse(w)
    rel = cyclic_reduce(substitute(mid.relators[0], mid_in_new))
    std = ((X, 1), (Y, 1), (X, -1), (Y, -1), (XP, 1), (YP, 1), (XP, -1), (YP, -1))
    if not _same_cyclic(rel, std):
        if strict:
            raise PatternMismatch("substitution did not reach [x,y][x',y']")
        res = TietzeResult(mid, old_in_mid, mid_in_old, False, mid)
        if isinstance(sub, SubgroupData):
            sub.tietze = res
        return res
    final = FpGroup(("x", "y", "x'", "y'"), (std,))
    old_in_new = [substitute(w, mid_in_new) for w in old_in_mid]
    new_in_old = [substitute(w, mid_in_old) for w in new_in_mid]
    res = TietzeResult(final, old_in_new, new_in_old, True, mid)
    if isinstance(sub, SubgroupData):
        sub.tietze = res
    return res


# standard objects

def hexagon_group_presentation():
    """<c1..c6 | c_i^2, c1 c2 c3 c4 c5 c6>."""
    names = ["c%d" % i for i in range(1, 7)]
    return FpGroup.from_strings(names, ["%s^2" % n for n in names] + [" ".join(names)])


def surface_group_presentation(genus):
    names = []
    rel = []
    for i in range(genus):
        a, b = ("x", "y") if i == 0 else ("x%s" % ("'" * i), "y%s" % ("'" * i))
        names += [a, b]
        rel.append("%s %s %s^-1 %s^-1" % (a, b, a, b))
    return FpGroup.from_strings(names, [" ".join(rel)])


def free_group(n, names=None):
    names = names or ["f%d" % i for i in range(1, n + 1)]
    return FpGroup(tuple(names), ())


_GENUS2 = None


def genus_two_kernel():
    """The index-two kernel of c_i -> 1 in Z/2, simplified to [x,y][x',y'].

    Uses the transversal {1, c1}.  Returns the SubgroupData with its Tietze
    result attached.
    """
    global _GENUS2
    if _GENUS2 is None:
        G = hexagon_group_presentation()
        sub = reidemeister_schreier(G, [1] * 6, 2, transversal_hint=["1", "c1"])
        tietze_eliminate(sub, strict=True)
        _GENUS2 = sub
    return _GENUS2


# the distinguished element c1 c2 written in the surface generators
DISTINGUISHED = ((0, 1), (1, 1), (1, 1))  # x y^2

# x, y, x', y' -> 0, 0, 1, 0: c1 c2 = x y^2 is killed and the map is onto
ETA_ASSIGNMENT = (0, 0, 1, 0)


@dataclass
class CoverTower:
    """Nested kernels Gamma > K (genus 2) > K_n with composed membership."""

    genus_two: SubgroupData
    inner: SubgroupData = None

    @property
    def genus(self):
        return 2 if self.inner is None else self.inner.index + 1

    @property
    def index_in_parent(self):
        return self.genus_two.index * (1 if self.inner is None else self.inner.index)

    def contains(self, parent_word):
        if not self.genus_two.contains(parent_word):
            return False
        if self.inner is None:
            return True
        return self.inner.contains(self.genus_two.from_parent(parent_word))

    def presentation(self):
        return (self.genus_two.tietze.presentation if self.inner is None
                else self.inner.presentation)


def surface_cover(genus):
    """Genus-g surface kernel inside the hexagon group (g >= 2)."""
    if genus < 2:
        raise ValueError("genus must be at least 2")
    K = genus_two_kernel()
    if genus == 2:
        return CoverTower(K)
    inner = kernel_of_cyclic(K.tietze.presentation, ETA_ASSIGNMENT, genus - 1)
    return CoverTower(K, inner)


# the free-group action used for the basepoint stabilizer check

class PermAction:
    """Action of F2 = <x, y> on X_m = Y_0 u ... u Y_{2m}.

    Y_0 = {0} and |Y_q| = m^q for q >= 1, laid out consecutively.  The
    permutation zeta_q moves Y_q u Y_{q+1} by the cycles
    (i, i+a, ..., i+m a), a = |Y_q|.  x acts through the even zetas, y
    through the odd ones.  Points are never materialized unless asked.
    """

    def __init__(self, m):
        if m < 1:
            raise ValueError("m must be >= 1")
        self.m = m
        offs = [0, 1]
        sizes = [1]
        for q in range(1, 2 * m + 1):
            sizes.append(m ** q)
            offs.append(offs[-1] + sizes[-1])
        self.offsets = offs[:2 * m + 1]
        self.sizes = sizes
        self.size = offs[2 * m + 1]
        self.basepoint = 0

    def block(self, p):
        lo, hi = 0, 2 * self.m
        # offsets are increasing; binary search for the block holding p
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.offsets[mid] <= p:
                lo = mid
            else:
                hi = mid - 1
        return lo

    def zeta(self, q, p, e=1):
        a = self.sizes[q]
        off = self.offsets[q]
        rel = p - off
        i, j = rel % a, rel // a
        return off + i + ((j + e) % (self.m + 1)) * a

    def _which(self, letter, p):
        q = self.block(p)
        if letter == 0:
            z = q if q % 2 == 0 else q - 1
        else:
            z = q if q % 2 == 1 else q - 1
        if z < 0 or z > 2 * self.m - 1:
            return None
        return z

    def apply(self, letter, e, p):
        z = self._which(letter, p)
        return p if z is None else self.zeta(z, p, e)

    def act(self, word, p=0):
        """z . p for a word over (0 = x, 1 = y); rightmost letter acts first."""
        for g, e in reversed(word):
            p = self.apply(g, e, p)
        return p

    def images(self, cap=10 ** 6):
        if self.size > cap:
            raise ValueError("X_m has %d points, above the cap" % self.size)
        return ([self.apply(0, 1, p) for p in range(self.size)],
                [self.apply(1, 1, p) for p in range(self.size)])


def build_perm_action(m):
    return PermAction(m)


def isotropy_test(action, z, m=None):
    """Whether z fixes the basepoint."""
    return action.act(free_reduce(z), action.basepoint) == action.basepoint


def reduced_words(ngens, max_len):
    """All freely reduced words of length <= max_len, shortlex order."""
    letters = _letters(ngens)
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for g, e in letters:
                if w and w[-1] == (g, -e):
                    continue
                nxt.append(w + ((g, e),))
        out.extend(nxt)
        frontier = nxt
    return out


def is_power_of(word, g):
    return all(h == g for h, _ in word)


# word balls

@dataclass
class BallEntry:
    word: tuple
    element: object

    @property
    def length(self):
        return len(self.word)

    def __iter__(self):
        return iter((self.word, self.element))


def word_ball(generators, L, dedup="exact", max_prec=1024):
    """Distinct elements of word length <= L over the generators and inverses.

    BFS in shortlex order, so each element carries a shortest word.  The
    identity (empty word) is included.
    """
    from .hypgeom import identity_like
    if L < 0:
        raise ValueError("L must be >= 0")
    gens = list(generators)
    invs = [g.inverse() for g in gens]
    one = identity_like(gens[0])
    # an involution and its inverse give the same letter
    involution = [_is_involution(g, one) for g in gens]
    entries = [BallEntry((), one)]
    if dedup == "exact":
        seen = {one.key()}
    else:
        seen_iv = [_ball_box(one, 64)]
    frontier = [entries[0]]
    for _ in range(L):
        nxt = []
        for ent in frontier:
            w = ent.word
            for g in range(len(gens)):
                for e in ((1,) if involution[g] else (1, -1)):
                    if w and w[-1][0] == g and (involution[g] or w[-1][1] == -e):
                        continue
                    h = ent.element * (gens[g] if e > 0 else invs[g])
                    if dedup == "exact":
                        k = h.key()
                        if k is None:
                            raise ValueError("exact dedup needs exact entries")
                        if k in seen:
                            continue
                        seen.add(k)
                    else:
                        if _interval_seen(h, seen_iv, max_prec):
                            continue
                        seen_iv.append(_ball_box(h, 64))
                    new = BallEntry(w + ((g, e),), h)
                    nxt.append(new)
        entries.extend(nxt)
        frontier = nxt
    return entries


def _is_involution(g, one):
    try:
        k, k1 = (g * g).key(), one.key()
        return k is not None and k == k1 and g.key() != k1
    except (TypeError, AttributeError):
        return False


def _ball_box(h, prec):
    return (h.parity, [ivl.enclose(x, prec) for x in h.entries()])


def _overlap(a, b):
    return ivl.lo(a) <= ivl.hi(b) and ivl.lo(b) <= ivl.hi(a)


def _interval_seen(h, boxes, max_prec):
    box = _ball_box(h, 64)
    for par, other in boxes:
        if par != box[0]:
            continue
        for s in (1, -1):
            if all(_overlap(x if s > 0 else -x, y) for x, y in zip(box[1], other)):
                if all(abs(ivl.width(x)) == 0 for x in box[1] + other):
                    return True
                raise DedupInconclusive("interval boxes overlap; cannot decide equality")
    return False
