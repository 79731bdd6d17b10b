"""Noncommutative coordinate algebra of the deformed Galilei group.

Generators are encoded as small integers whose numeric order *is* the
canonical letter order: translations a^1..a^3, then boosts v^1..v^3, then the
nine rotation entries R^i_j in lexicographic (i, j) order, then the time
coordinate tau.  A word is canonical exactly when its letter codes are
non-decreasing, so normal ordering is relation-driven bubble sorting.

The defining commutators (everything else commutes):

    [tau, a^i]   = (i/k) a^i
    [tau, v^i]   = (i/k) v^i
    [v^i, a^j]   = (i/k) (1/2 delta_ij sum_m v^m v^m - v^i v^j)
    [R^i_j, a^k] = (i/k) (delta_ik sum_m v^m R^m_j - v^i R^k_j)

The module is generic over the presentation, so the dual generator algebra
reuses the same rewriter.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from fractions import Fraction as Q

from .scalars import (
    EC_I,
    EC_ONE,
    ExactComplex,
    GradedScalar,
    GS_ONE,
    graded_mul,
)

sys.setrecursionlimit(100000)


# ---------------------------------------------------------------------------
# Generator encoding (group side)
# ---------------------------------------------------------------------------

def trans(i):
    """Translation coordinate a^i, i in 1..3."""
    return i - 1


def boost(i):
    """Boost coordinate v^i, i in 1..3."""
    return 2 + i


def rot(i, j):
    """Rotation entry R^i_j, i, j in 1..3."""
    return 5 + 3 * (i - 1) + j


TAU = 15

GROUP_GENERATORS = tuple(range(16))


def gen_kind(code):
    if code <= 2:
        return "trans"
    if code <= 5:
        return "boost"
    if code <= 14:
        return "rot"
    return "time"


def gen_indices(code):
    """(kind, i, j) triple describing a generator; j is 0 unless rotation."""
    k = gen_kind(code)
    if k == "trans":
        return k, code + 1, 0
    if k == "boost":
        return k, code - 2, 0
    if k == "rot":
        return k, (code - 6) // 3 + 1, (code - 6) % 3 + 1
    return k, 0, 0


def gen_name(code):
    k, i, j = gen_indices(code)
    if k == "trans":
        return f"a[{i}]"
    if k == "boost":
        return f"v[{i}]"
    if k == "rot":
        return f"R[{i},{j}]"
    return "tau"


def eps(i, j, k):
    """Totally antisymmetric symbol on 1..3."""
    if (i, j, k) in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        return 1
    if (i, j, k) in ((3, 2, 1), (1, 3, 2), (2, 1, 3)):
        return -1
    return 0


# ---------------------------------------------------------------------------
# Presentations
# ---------------------------------------------------------------------------

I_LAM = GradedScalar.of(EC_I, lam=1)


class Presentation:
    """A PBW-style presentation: letter order plus swap corrections.

    ``swaps`` maps an out-of-order adjacent pair ``(x, y)`` (codes with
    ``x > y``) to the correction terms of ``x y = y x + corrections``; pairs
    missing from the table simply commute.  All generators are self-adjoint,
    so the star operation is word reversal plus coefficient conjugation.
    """

    def __init__(self, name, size, swaps, names):
        self.name = name
        self.size = size
        self.swaps = swaps
        self.names = names

    def swap(self, x, y):
        return self.swaps.get((x, y), ())

    def gen_name(self, code):
        return self.names(code)


def _group_swaps():
    swaps = {}
    for i in range(1, 4):
        swaps[(TAU, trans(i))] = (((trans(i),), I_LAM),)
        swaps[(TAU, boost(i))] = (((boost(i),), I_LAM),)
    half_i_lam = GradedScalar.of(ExactComplex(0, Q(1, 2)), lam=1)
    for i in range(1, 4):
        for j in range(1, 4):
            corr = []
            if i == j:
                for m in range(1, 4):
                    corr.append(((boost(m), boost(m)), half_i_lam))
            word = tuple(sorted((boost(i), boost(j))))
            corr.append((word, -I_LAM))
            swaps[(boost(i), trans(j))] = tuple(corr)
    for i in range(1, 4):
        for j in range(1, 4):
            for k in range(1, 4):
                corr = []
                if i == k:
                    for m in range(1, 4):
                        corr.append(((boost(m), rot(m, j)), I_LAM))
                corr.append(((boost(i), rot(k, j)), -I_LAM))
                swaps[(rot(i, j), trans(k))] = tuple(corr)
    return swaps


GROUP = Presentation("group", 16, _group_swaps(), gen_name)


@dataclass(frozen=True)
class Policy:
    """Truncation policy: maximum power of 1/k and maximum word length."""

    N: int
    D: int


# ---------------------------------------------------------------------------
# Relation-driven normal ordering
# ---------------------------------------------------------------------------

class Rewriter:
    """Memoized normal-ordering engine for one (presentation, policy) pair."""

    def __init__(self, pres, policy, strategy="left"):
        self.pres = pres
        self.policy = policy
        self.strategy = strategy
        self.cache = {}
        # words longer than this cannot rewrite back under the length cap:
        # each shortening step costs one power of 1/k
        self.len_cap = policy.D + policy.N + 2
        self.max_chain = 0

    def _find_inversion(self, word):
        rng = range(len(word) - 1)
        if self.strategy == "right":
            rng = reversed(rng)
        for p in rng:
            if word[p] > word[p + 1]:
                return p
        return -1

    def nf(self, word, _depth=0):
        """Normal form of a single word: (terms dict, drop count)."""
        hit = self.cache.get(word)
        if hit is not None:
            return hit
        if _depth > self.max_chain:
            self.max_chain = _depth
        n = len(word)
        if _depth > (n + 2) * (n + 2) * 4:
            raise RuntimeError(f"rewrite chain exceeded bound for word {word}")
        p = self._find_inversion(word)
        if p < 0:
            if n > self.policy.D:
                result = ({}, 1)
            else:
                result = ({word: GS_ONE}, 0)
            self.cache[word] = result
            return result
        x, y = word[p], word[p + 1]
        prefix, suffix = word[:p], word[p + 2:]
        terms = {}
        drops = 0

        def acc(sub_terms, sub_drops, coeff=None):
            nonlocal drops
            drops += sub_drops
            for w, c in sub_terms.items():
                if coeff is not None:
                    c = graded_mul(coeff, c, self.policy.N)
                    if c.is_zero():
                        drops += 1
                        continue
                cur = terms.get(w)
                cur = c if cur is None else cur + c
                if cur.is_zero():
                    terms.pop(w, None)
                else:
                    terms[w] = cur

        base_terms, base_drops = self.nf(prefix + (y, x) + suffix, _depth + 1)
        acc(base_terms, base_drops)
        for corr_word, corr_coeff in self.pres.swap(x, y):
            if corr_coeff.max_lambda() > self.policy.N:
                drops += 1
                continue
            cand = prefix + corr_word + suffix
            if len(cand) > self.len_cap:
                drops += 1
                continue
            sub_terms, sub_drops = self.nf(cand, _depth + 1)
            acc(sub_terms, sub_drops, corr_coeff)
        result = (terms, drops)
        self.cache[word] = result
        return result

    def word_mul(self, w1, w2):
        return self.nf(w1 + w2)


_REWRITERS = {}


def rewriter_for(pres, policy, strategy="left"):
    key = (pres.name, policy, strategy)
    rw = _REWRITERS.get(key)
    if rw is None:
        rw = Rewriter(pres, policy, strategy)
        _REWRITERS[key] = rw
    return rw


# ---------------------------------------------------------------------------
# Algebra elements
# ---------------------------------------------------------------------------

class NCElement:
    """Finite sum of graded-scalar coefficients times canonical words.

    ``drops`` counts truncation events (terms discarded above the policy
    grade); an element with ``drops == 0`` is exact, otherwise it is exact in
    the quotient by powers of 1/k above N and word degrees above D.
    """

    __slots__ = ("pres", "policy", "terms", "drops")

    def __init__(self, pres, policy, terms=None, drops=0):
        self.pres = pres
        self.policy = policy
        self.terms = terms if terms is not None else {}
        self.drops = drops

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(policy, pres=GROUP):
        return NCElement(pres, policy)

    @staticmethod
    def one(policy, pres=GROUP):
        return NCElement(pres, policy, {(): GS_ONE})

    @staticmethod
    def gen(code, policy, pres=GROUP):
        return NCElement(pres, policy, {(code,): GS_ONE})

    @staticmethod
    def from_terms(terms, policy, pres=GROUP):
        e = NCElement(pres, policy)
        for word, coeff in terms:
            e._add_term(word, coeff)
        return e

    def _add_term(self, word, coeff):
        if coeff.is_zero():
            return
        cur = self.terms.get(word)
        cur = coeff if cur is None else cur + coeff
        if cur.is_zero():
            self.terms.pop(word, None)
        else:
            self.terms[word] = cur

    def _check_compatible(self, other):
        if self.pres is not other.pres or self.policy != other.policy:
            raise ValueError("mismatched presentations or truncation policies")

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        self._check_compatible(other)
        out = NCElement(self.pres, self.policy, dict(self.terms),
                        self.drops + other.drops)
        for w, c in other.terms.items():
            out._add_term(w, c)
        return out

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return NCElement(self.pres, self.policy,
                         {w: -c for w, c in self.terms.items()}, self.drops)

    def scale(self, coeff):
        if isinstance(coeff, GradedScalar):
            out = NCElement(self.pres, self.policy, drops=self.drops)
            for w, c in self.terms.items():
                prod = graded_mul(coeff, c, self.policy.N)
                if prod.is_zero() and not c.is_zero() and not coeff.is_zero():
                    out.drops += 1
                out._add_term(w, prod)
            return out
        return NCElement(self.pres, self.policy,
                         {w: c.scale(coeff) for w, c in self.terms.items()},
                         self.drops)

    def mul(self, other):
        self._check_compatible(other)
        rw = rewriter_for(self.pres, self.policy)
        n = self.policy.N
        out = NCElement(self.pres, self.policy,
                        drops=self.drops + other.drops)
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                c = graded_mul(c1, c2, n)
                if c.is_zero():
                    out.drops += 1
                    continue
                if len(w1) + len(w2) > rw.len_cap:
                    out.drops += 1
                    continue
                sub_terms, sub_drops = rw.word_mul(w1, w2)
                out.drops += sub_drops
                for w, cw in sub_terms.items():
                    prod = graded_mul(c, cw, n)
                    if prod.is_zero():
                        out.drops += 1
                        continue
                    out._add_term(w, prod)
        return out

    def commutator(self, other):
        return self.mul(other) - other.mul(self)

    def star(self):
        """Star involution: conjugate coefficients, reverse words, reorder."""
        rw = rewriter_for(self.pres, self.policy)
        out = NCElement(self.pres, self.policy, drops=self.drops)
        for w, c in self.terms.items():
            sub_terms, sub_drops = rw.nf(tuple(reversed(w)))
            out.drops += sub_drops
            cc = c.conjugate()
            for wr, cw in sub_terms.items():
                prod = graded_mul(cc, cw, self.policy.N)
                if prod.is_zero():
                    out.drops += 1
                    continue
                out._add_term(wr, prod)
        return out

    # -- queries -------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, NCElement):
            return NotImplemented
        return (self.pres is other.pres and self.policy == other.policy
                and self.terms == other.terms)

    def coeff(self, word):
        return self.terms.get(word, GradedScalar())

    def truncate_lambda(self, n):
        """Discard every term whose lowest surviving power of 1/k exceeds n."""
        out = NCElement(self.pres, self.policy, drops=self.drops)
        for w, c in self.terms.items():
            kept, _ = c.truncate_lambda(n)
            out._add_term(w, kept)
        return out

    def lambda_component(self, n):
        """The part of the element carrying exactly (1/k)^n."""
        out = NCElement(self.pres, self.policy)
        for w, c in self.terms.items():
            part = GradedScalar({k: v for k, v in c.t.items() if k[0] == n})
            out._add_term(w, part)
        return out

    def without_letters(self, letters):
        """Terms whose words avoid all the given letter codes (e.g. the
        boost-free part, which is the v = 0 substitution)."""
        letters = set(letters)
        out = NCElement(self.pres, self.policy, drops=self.drops)
        for w, c in self.terms.items():
            if not letters.intersection(w):
                out._add_term(w, c)
        return out

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w, c in self.sorted_terms():
            word = "*".join(self.pres.gen_name(x) for x in w) or "1"
            bits.append(f"({c!r})*{word}")
        s = " + ".join(bits)
        return s if not self.drops else s + f"  [+{self.drops} dropped]"


def normal_form(e: NCElement):
    """Re-normalize an element; idempotent on engine-produced elements."""
    rw = rewriter_for(e.pres, e.policy)
    out = NCElement(e.pres, e.policy, drops=e.drops)
    for w, c in e.terms.items():
        sub_terms, sub_drops = rw.nf(w)
        out.drops += sub_drops
        for wr, cw in sub_terms.items():
            prod = graded_mul(c, cw, e.policy.N)
            out._add_term(wr, prod)
    return out


def mul(a: NCElement, b: NCElement):
    return a.mul(b)


def commutator(a: NCElement, b: NCElement):
    return a.commutator(b)


def star(e: NCElement):
    return e.star()


def exp_series(x: NCElement, policy=None):
    """Truncated exponential sum of x^n / n!.

    Every word of x must have length >= 1 so powers terminate under the
    policy: a power can only fall back below the length cap by spending
    powers of 1/k, so the loop stops once the running power vanishes.
    """
    policy = policy or x.policy
    if policy != x.policy:
        raise ValueError("policy mismatch")
    if () in x.terms:
        raise ValueError("exponent must have no constant term")
    acc = NCElement.one(policy, x.pres)
    power = NCElement.one(policy, x.pres)
    nmax = policy.D + policy.N + 2
    for n in range(1, nmax + 1):
        power = power.mul(x).scale(ExactComplex(Q(1, n)))
        if power.is_zero():
            acc.drops += power.drops
            break
        acc = acc + power
    return acc


def random_element(rng, policy, pres=GROUP, max_terms=3, max_len=3,
                   letters=None, allow_lambda=True):
    """Seeded random element, used by property tests."""
    letters = letters if letters is not None else list(range(pres.size))
    e = NCElement.zero(policy, pres)
    for _ in range(rng.randint(1, max_terms)):
        word = tuple(rng.choice(letters) for _ in range(rng.randint(0, max_len)))
        coeff = GradedScalar.of(
            ExactComplex(Q(rng.randint(-4, 4), rng.randint(1, 3)),
                         Q(rng.randint(-4, 4), rng.randint(1, 3))),
            lam=rng.randint(0, 1) if allow_lambda else 0,
            m=rng.randint(0, 1),
        )
        e = e + normal_form(NCElement(pres, policy, {word: coeff}))
    return e
