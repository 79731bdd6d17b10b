"""Exact scalar arithmetic for the symbolic verification engine.

Everything in this module is exact: Gaussian rationals (complex numbers with
rational parts), scalars graded by powers of the deformation parameter
``L = 1/k`` and of the formal mass symbol ``M``, commutative polynomials over
arbitrary hashable indeterminates, an exact linear solver that produces
replayable infeasibility witnesses, and bounded-degree membership in the
orthogonality ideal of rotation-matrix entries.  No floating point appears
anywhere here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

Q = Fraction


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------

class ExactComplex:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Q else Q(re)
        self.im = im if type(im) is Q else Q(im)

    def __add__(self, other):
        other = _coerce(other)
        return ExactComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return ExactComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __mul__(self, other):
        other = _coerce(other)
        return ExactComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by exact zero")
        return ExactComplex(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def conjugate(self):
        return ExactComplex(self.re, -self.im)

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Q)):
            return self.re == other and self.im == 0
        if not isinstance(other, ExactComplex):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*I"
        return f"({self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}*I)"

    def to_complex(self):
        return complex(self.re, self.im)


def _coerce(x):
    if isinstance(x, ExactComplex):
        return x
    if isinstance(x, (int, Q)):
        return ExactComplex(x, 0)
    raise TypeError(f"cannot coerce {type(x)} to ExactComplex")


EC_ZERO = ExactComplex(0, 0)
EC_ONE = ExactComplex(1, 0)
EC_I = ExactComplex(0, 1)


# ---------------------------------------------------------------------------
# Scalars graded by powers of L = 1/k and of the mass symbol M
# ---------------------------------------------------------------------------

class GradedScalar:
    """Finite sum of ``coeff * L^p * M^q`` terms with exact coefficients.

    ``L`` stands for the inverse deformation parameter and only occurs with
    nonnegative powers; truncation in ``L`` happens in :func:`graded_mul`.
    """

    __slots__ = ("t",)

    def __init__(self, terms=None):
        # terms: dict[(lam_power, m_power)] -> ExactComplex, zero values absent
        self.t = terms if terms is not None else {}

    @staticmethod
    def of(coeff, lam=0, m=0):
        c = _coerce(coeff)
        if c.is_zero():
            return GradedScalar()
        return GradedScalar({(lam, m): c})

    def __add__(self, other):
        t = dict(self.t)
        for k, v in other.t.items():
            s = t.get(k)
            s = v if s is None else s + v
            if s.is_zero():
                t.pop(k, None)
            else:
                t[k] = s
        return GradedScalar(t)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return GradedScalar({k: -v for k, v in self.t.items()})

    def scale(self, c):
        c = _coerce(c)
        if c.is_zero():
            return GradedScalar()
        return GradedScalar({k: v * c for k, v in self.t.items()})

    def conjugate(self):
        # L and M are real formal symbols; only the numeric part conjugates.
        return GradedScalar({k: v.conjugate() for k, v in self.t.items()})

    def is_zero(self):
        return not self.t

    def __bool__(self):
        return bool(self.t)

    def __eq__(self, other):
        if not isinstance(other, GradedScalar):
            return NotImplemented
        return self.t == other.t

    def __hash__(self):
        return hash(frozenset(self.t.items()))

    def coeff(self, lam=0, m=0):
        return self.t.get((lam, m), EC_ZERO)

    def max_lambda(self):
        return max((k[0] for k in self.t), default=-1)

    def truncate_lambda(self, n):
        """Keep powers L^p with p <= n; return (kept, number_dropped)."""
        kept = {k: v for k, v in self.t.items() if k[0] <= n}
        return GradedScalar(kept), len(self.t) - len(kept)

    def items(self):
        return sorted(self.t.items())

    def __repr__(self):
        if not self.t:
            return "0"
        bits = []
        for (lam, m), c in self.items():
            s = repr(c)
            if lam:
                s += f"*L^{lam}" if lam > 1 else "*L"
            if m:
                s += f"*M^{m}" if m > 1 else "*M"
            bits.append(s)
        return " + ".join(bits)


GS_ZERO = GradedScalar()
GS_ONE = GradedScalar.of(EC_ONE)


def graded_mul(a: GradedScalar, b: GradedScalar, n=None):
    """Product of graded scalars, discarding all powers L^p with p > n.

    ``n=None`` means no truncation.  Returns the product only; callers that
    track truncation metadata compare term counts themselves.
    """
    t = {}
    for (la, ma), ca in a.t.items():
        for (lb, mb), cb in b.t.items():
            lam = la + lb
            if n is not None and lam > n:
                continue
            k = (lam, ma + mb)
            c = ca * cb
            s = t.get(k)
            s = c if s is None else s + c
            if s.is_zero():
                t.pop(k, None)
            else:
                t[k] = s
    return GradedScalar(t)


def graded_would_drop(a: GradedScalar, b: GradedScalar, n):
    """True when the truncated product of a and b loses at least one term."""
    if n is None:
        return False
    return a.max_lambda() + b.max_lambda() > n


# ---------------------------------------------------------------------------
# Commutative polynomials over arbitrary hashable indeterminates
# ---------------------------------------------------------------------------

class CommPoly:
    """Sparse commutative polynomial with ExactComplex coefficients.

    Monomials are canonically sorted tuples of ``(indeterminate, exponent)``
    pairs.  Indeterminates are arbitrary hashable keys, e.g. ``("r", slot, i,
    j)`` for slot-tagged rotation entries.
    """

    __slots__ = ("t",)

    def __init__(self, terms=None):
        self.t = terms if terms is not None else {}

    @staticmethod
    def const(c):
        c = _coerce(c)
        return CommPoly({(): c} if not c.is_zero() else {})

    @staticmethod
    def var(v, exp=1):
        return CommPoly({((v, exp),): EC_ONE})

    def __add__(self, other):
        t = dict(self.t)
        for k, v in other.t.items():
            s = t.get(k)
            s = v if s is None else s + v
            if s.is_zero():
                t.pop(k, None)
            else:
                t[k] = s
        return CommPoly(t)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return CommPoly({k: -v for k, v in self.t.items()})

    def __mul__(self, other):
        t = {}
        for m1, c1 in self.t.items():
            for m2, c2 in other.t.items():
                m = mono_mul(m1, m2)
                c = c1 * c2
                s = t.get(m)
                s = c if s is None else s + c
                if s.is_zero():
                    t.pop(m, None)
                else:
                    t[m] = s
        return CommPoly(t)

    def scale(self, c):
        c = _coerce(c)
        if c.is_zero():
            return CommPoly()
        return CommPoly({k: v * c for k, v in self.t.items()})

    def is_zero(self):
        return not self.t

    def __eq__(self, other):
        if not isinstance(other, CommPoly):
            return NotImplemented
        return self.t == other.t

    def degree(self):
        return max((sum(e for _, e in m) for m in self.t), default=0)

    def variables(self):
        out = set()
        for m in self.t:
            out.update(v for v, _ in m)
        return out

    def coeff(self, mono):
        return self.t.get(mono, EC_ZERO)

    def evaluate(self, point):
        """Evaluate at a dict indeterminate -> ExactComplex/Fraction/int."""
        total = EC_ZERO
        for m, c in self.t.items():
            val = c
            for v, e in m:
                x = _coerce(point[v])
                for _ in range(e):
                    val = val * x
            total = total + val
        return total

    def __repr__(self):
        if not self.t:
            return "0"
        bits = []
        for m, c in sorted(self.t.items()):
            mono = "*".join(f"{v}^{e}" if e > 1 else f"{v}" for v, e in m)
            bits.append(f"({c!r})*{mono}" if mono else f"({c!r})")
        return " + ".join(bits)


def mono_mul(m1, m2):
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_degree(m):
    return sum(e for _, e in m)


def monomials_up_to_degree(variables, degree):
    """All monomials (as canonical tuples) of total degree <= degree."""
    variables = sorted(variables)
    out = [()]
    for d in range(1, degree + 1):
        for combo in itertools.combinations_with_replacement(variables, d):
            mono = {}
            for v in combo:
                mono[v] = mono.get(v, 0) + 1
            out.append(tuple(sorted(mono.items())))
    return out


# ---------------------------------------------------------------------------
# Exact linear solving with infeasibility witnesses
# ---------------------------------------------------------------------------

@dataclass
class LinearSolution:
    x: list  # ExactComplex per column; free variables fixed to zero
    rank: int


@dataclass
class Infeasible:
    witness: list  # y with y^T A = 0 and y^T b != 0, exact

    def check(self, rows, b):
        """Replay the witness against a row-dict system; True when valid."""
        ncols = max((c for r in rows for c in r), default=-1) + 1
        comb = [EC_ZERO] * ncols
        rhs = EC_ZERO
        for y, row, bv in zip(self.witness, rows, b):
            if y.is_zero():
                continue
            for c, v in row.items():
                comb[c] = comb[c] + y * v
            rhs = rhs + y * _coerce(bv)
        return all(v.is_zero() for v in comb) and not rhs.is_zero()


def solve_linear_exact(a_matrix, b):
    """Solve ``A x = b`` exactly over Gaussian rationals.

    Accepts a dense matrix (sequence of sequences) or sparse rows (sequence
    of dicts column -> coefficient).  Returns a :class:`LinearSolution`, or
    :class:`Infeasible` carrying a left null-vector ``y`` with ``y^T A = 0``
    and ``y^T b != 0``.
    """
    rows = []
    ncols = 0
    for r in a_matrix:
        if isinstance(r, dict):
            row = {c: _coerce(v) for c, v in r.items() if not _coerce(v).is_zero()}
        else:
            row = {j: _coerce(v) for j, v in enumerate(r) if not _coerce(v).is_zero()}
        rows.append(row)
        if row:
            ncols = max(ncols, max(row) + 1)
    if len(rows) != len(b):
        raise ValueError("matrix/vector shape mismatch")
    return _solve_sparse(rows, [_coerce(v) for v in b], ncols)


def _solve_sparse(rows, b, ncols):
    m = len(rows)
    work = [dict(r) for r in rows]
    rhs = list(b)
    # transform[i] tracks row i of the elimination matrix T with T*A = R,
    # which is exactly what an infeasibility witness needs.
    transform = [{i: EC_ONE} for i in range(m)]
    pivot_of_col = {}
    used = [False] * m

    col_rows = {}
    for i, r in enumerate(work):
        for c in r:
            col_rows.setdefault(c, set()).add(i)

    for col in range(ncols):
        candidates = [i for i in col_rows.get(col, ()) if not used[i] and col in work[i]]
        if not candidates:
            continue
        piv = min(candidates, key=lambda i: len(work[i]))
        used[piv] = True
        pivot_of_col[col] = piv
        pv = work[piv][col]
        targets = [i for i in col_rows.get(col, ()) if i != piv and col in work[i]]
        for i in targets:
            factor = work[i][col] / pv
            for c, v in work[piv].items():
                s = work[i].get(c)
                s = -factor * v if s is None else s - factor * v
                if s.is_zero():
                    if c in work[i]:
                        del work[i][c]
                        col_rows[c].discard(i)
                else:
                    if c not in work[i]:
                        col_rows.setdefault(c, set()).add(i)
                    work[i][c] = s
            rhs[i] = rhs[i] - factor * rhs[piv]
            for c, v in transform[piv].items():
                s = transform[i].get(c)
                s = -factor * v if s is None else s - factor * v
                if s.is_zero():
                    transform[i].pop(c, None)
                else:
                    transform[i][c] = s

    for i in range(m):
        if not work[i] and not rhs[i].is_zero():
            witness = [EC_ZERO] * m
            for c, v in transform[i].items():
                witness[c] = v
            return Infeasible(witness=witness)

    x = [EC_ZERO] * ncols
    # Eliminated rows have a single unresolved pivot once solved in
    # decreasing column order.
    for col in sorted(pivot_of_col, reverse=True):
        i = pivot_of_col[col]
        acc = rhs[i]
        for c, v in work[i].items():
            if c != col:
                acc = acc - v * x[c]
        x[col] = acc / work[i][col]
    return LinearSolution(x=x, rank=len(pivot_of_col))


# ---------------------------------------------------------------------------
# Orthogonality ideal of rotation entries
# ---------------------------------------------------------------------------

def rvar(slot, i, j):
    """Indeterminate for the (i, j) rotation entry of a tensor slot."""
    return ("r", slot, i, j)


def svar(slot, axis):
    """Skew parameter of the rational rotation chart for a tensor slot."""
    return ("s", slot, axis)


def orthogonality_generators(slot):
    """The 12 entries of R^T R - I and R R^T - I for one slot.

    Symmetry leaves 6 independent entries in each product; both families are
    kept so certificates can cite either side.
    """
    gens = []
    for i in range(1, 4):
        for j in range(i, 4):
            p = CommPoly()
            q = CommPoly()
            for k in range(1, 4):
                p = p + CommPoly.var(rvar(slot, k, i)) * CommPoly.var(rvar(slot, k, j))
                q = q + CommPoly.var(rvar(slot, i, k)) * CommPoly.var(rvar(slot, j, k))
            if i == j:
                one = CommPoly.const(1)
                p = p - one
                q = q - one
            gens.append(p)
            gens.append(q)
    return gens


@dataclass
class MemberCertificate:
    multipliers: list  # (generator_index, CommPoly) pairs

    def replay(self, slot):
        gens = orthogonality_generators(slot)
        total = CommPoly()
        for idx, mult in self.multipliers:
            total = total + mult * gens[idx]
        return total


@dataclass
class NotFoundAtBound:
    degree_bound: int


def ideal_membership(p: CommPoly, slot, degree_bound):
    """Decide membership of ``p`` in the orthogonality ideal of one slot.

    Multiplier polynomials are drawn from monomials of total degree at most
    ``degree_bound``; the decision is a single exact linear solve, so a
    ``NotFoundAtBound`` answer only rules out combinations at this bound.
    """
    variables = [rvar(slot, i, j) for i in range(1, 4) for j in range(1, 4)]
    for v in p.variables():
        if v not in variables:
            raise ValueError(f"indeterminate {v} does not belong to slot {slot}")
    gens = orthogonality_generators(slot)
    monos = monomials_up_to_degree(variables, degree_bound)

    columns = []  # (gen_index, monomial, column poly terms)
    for gi, g in enumerate(gens):
        for m in monos:
            prod = g * CommPoly({m: EC_ONE})
            columns.append((gi, m, prod.t))

    row_index = {}
    for _, _, terms in columns:
        for mono in terms:
            row_index.setdefault(mono, len(row_index))
    for mono in p.t:
        row_index.setdefault(mono, len(row_index))

    rows = [dict() for _ in row_index]
    for ci, (_, _, terms) in enumerate(columns):
        for mono, c in terms.items():
            rows[row_index[mono]][ci] = c
    b = [EC_ZERO] * len(row_index)
    for mono, c in p.t.items():
        b[row_index[mono]] = c

    outcome = _solve_sparse(rows, b, len(columns))
    if isinstance(outcome, Infeasible):
        return NotFoundAtBound(degree_bound=degree_bound)
    mults = {}
    for ci, xc in enumerate(outcome.x):
        if xc.is_zero():
            continue
        gi, m, _ = columns[ci]
        mults.setdefault(gi, CommPoly())
        mults[gi] = mults[gi] + CommPoly({m: xc})
    return MemberCertificate(multipliers=sorted(mults.items()))


# ---------------------------------------------------------------------------
# Rational rotation chart (Cayley transform) and exact ideal reduction
# ---------------------------------------------------------------------------

def _cayley_data(slot):
    """Numerator matrix N and denominator w with N/w in SO(3).

    N = (I - S) adj(I + S) for the skew matrix S built from the three chart
    parameters; w = det(I + S) = 1 + s1^2 + s2^2 + s3^2.
    """
    s1 = CommPoly.var(svar(slot, 1))
    s2 = CommPoly.var(svar(slot, 2))
    s3 = CommPoly.var(svar(slot, 3))
    zero = CommPoly()
    one = CommPoly.const(1)
    s = [[zero, -s3, s2], [s3, zero, -s1], [-s2, s1, zero]]
    a = [[one + s[i][j] if i == j else s[i][j] for j in range(3)] for i in range(3)]
    ident = [[one if i == j else zero for j in range(3)] for i in range(3)]
    i_minus_s = [[ident[i][j] - s[i][j] for j in range(3)] for i in range(3)]

    def minor(mat, r, c):
        rs = [i for i in range(3) if i != r]
        cs = [j for j in range(3) if j != c]
        return mat[rs[0]][cs[0]] * mat[rs[1]][cs[1]] - mat[rs[0]][cs[1]] * mat[rs[1]][cs[0]]

    adj = [[minor(a, j, i).scale(ExactComplex((-1) ** (i + j))) for j in range(3)]
           for i in range(3)]
    num = [[zero for _ in range(3)] for _ in range(3)]
    for i in range(3):
        for j in range(3):
            acc = zero
            for m in range(3):
                acc = acc + i_minus_s[i][m] * adj[m][j]
            num[i][j] = acc
    w = one + s1 * s1 + s2 * s2 + s3 * s3
    return num, w


_CAYLEY_CACHE = {}


def cayley_chart(slot):
    data = _CAYLEY_CACHE.get(slot)
    if data is None:
        data = _cayley_data(slot)
        _CAYLEY_CACHE[slot] = data
    return data


def reduce_rotation_vars(p: CommPoly, signs=None):
    """Substitute every rotation entry by its rational chart image.

    ``signs`` maps a slot to +1 or -1 and selects the orthogonal-group
    component (determinant +1 or -1) for that slot; default is +1 for all.
    The result is polynomial: each term is padded with denominator powers so
    all terms share the common denominator w^deg per slot, making the zero
    test exact.
    """
    slots = sorted({v[1] for v in p.variables() if v[0] == "r"})
    if not slots:
        return p
    signs = signs or {}
    maxdeg = {}
    for mono, _ in p.t.items():
        degs = {}
        for v, e in mono:
            if v[0] == "r":
                degs[v[1]] = degs.get(v[1], 0) + e
        for s, d in degs.items():
            maxdeg[s] = max(maxdeg.get(s, 0), d)

    out = CommPoly()
    for mono, c in p.t.items():
        term = CommPoly({(): c})
        degs = {s: 0 for s in slots}
        for v, e in mono:
            if v[0] == "r":
                _, slot, i, j = v
                num, _ = cayley_chart(slot)
                factor = num[i - 1][j - 1]
                if signs.get(slot, 1) < 0:
                    factor = -factor
                for _ in range(e):
                    term = term * factor
                degs[slot] += e
            else:
                term = term * CommPoly.var(v, e)
        for s in slots:
            _, w = cayley_chart(s)
            for _ in range(maxdeg.get(s, 0) - degs[s]):
                term = term * w
        out = out + term
    return out


def vanishes_on_rotation_group(p: CommPoly):
    """Exact zero test modulo the per-slot ideals of SO(3)."""
    return reduce_rotation_vars(p).is_zero()


def vanishes_on_orthogonal_group(p: CommPoly):
    """Exact zero test modulo the per-slot orthogonality ideals (both
    determinant components per slot)."""
    slots = sorted({v[1] for v in p.variables() if v[0] == "r"})
    if not slots:
        return p.is_zero()
    for combo in itertools.product((1, -1), repeat=len(slots)):
        signs = dict(zip(slots, combo))
        if not reduce_rotation_vars(p, signs).is_zero():
            return False
    return True
