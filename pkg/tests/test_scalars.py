import random
from fractions import Fraction as Q

import pytest

from kgalilei.scalars import (
    EC_I,
    EC_ONE,
    EC_ZERO,
    CommPoly,
    ExactComplex,
    GradedScalar,
    Infeasible,
    LinearSolution,
    MemberCertificate,
    NotFoundAtBound,
    graded_mul,
    ideal_membership,
    monomials_up_to_degree,
    orthogonality_generators,
    reduce_rotation_vars,
    rvar,
    solve_linear_exact,
    vanishes_on_orthogonal_group,
    vanishes_on_rotation_group,
)


def rand_ec(rng, span=6):
    return ExactComplex(
        Q(rng.randint(-span, span), rng.randint(1, 4)),
        Q(rng.randint(-span, span), rng.randint(1, 4)),
    )


def rand_graded(rng, nterms=4):
    g = GradedScalar()
    for _ in range(nterms):
        g = g + GradedScalar.of(rand_ec(rng), lam=rng.randint(0, 3), m=rng.randint(0, 2))
    return g


def test_exact_complex_field_ops():
    a = ExactComplex(Q(2, 3), Q(-1, 5))
    b = ExactComplex(Q(-7, 2), Q(4))
    assert (a + b) - b == a
    assert a * b == b * a
    assert (a / b) * b == a
    assert (a * a.conjugate()).im == 0
    assert EC_I * EC_I == ExactComplex(-1)
    assert not EC_ZERO
    assert EC_ONE


def test_graded_scalar_ring_axioms_random():
    rng = random.Random(7)
    for _ in range(50):
        a, b, c = (rand_graded(rng) for _ in range(3))
        for n in (None, 0, 2, 5):
            lhs = graded_mul(graded_mul(a, b, n), c, n)
            rhs = graded_mul(a, graded_mul(b, c, n), n)
            assert lhs == rhs
            assert graded_mul(a, b + c, n) == graded_mul(a, b, n) + graded_mul(a, c, n)


def test_graded_mul_examples():
    one = GradedScalar.of(1)
    lam_m = GradedScalar.of(1, lam=1, m=1)
    assert graded_mul(one, lam_m, 3) == lam_m

    lam = GradedScalar.of(1, lam=1)
    lam3 = GradedScalar.of(1, lam=3)
    assert graded_mul(lam, lam3, 3).is_zero()

    one_plus_lam = one + lam
    sq = graded_mul(one_plus_lam, one_plus_lam, 1)
    assert sq == one + GradedScalar.of(2, lam=1)


def test_solve_zero_case():
    out = solve_linear_exact([[1]], [0])
    assert isinstance(out, LinearSolution)
    assert out.x == [EC_ZERO]


def test_solve_rank_one_inconsistency_witness():
    rows = [[1, 1], [1, 1]]
    out = solve_linear_exact(rows, [1, 2])
    assert isinstance(out, Infeasible)
    y = out.witness
    # y^T A = 0 and y^T b != 0, checked exactly
    assert (y[0] + y[1]).is_zero()
    assert not (y[0] * EC_ONE + y[1] * ExactComplex(2)).is_zero()
    assert out.check([{0: EC_ONE, 1: EC_ONE}, {0: EC_ONE, 1: EC_ONE}], [1, 2])


def test_solve_random_square_systems_multiply_back():
    rng = random.Random(11)
    for _ in range(8):
        n = 6
        a = [[rand_ec(rng) for _ in range(n)] for _ in range(n)]
        b = [rand_ec(rng) for _ in range(n)]
        out = solve_linear_exact(a, b)
        if isinstance(out, Infeasible):
            # singular draw: witness must replay exactly
            rows = [{j: v for j, v in enumerate(r) if not v.is_zero()} for r in a]
            assert out.check(rows, b)
            continue
        for i in range(n):
            acc = EC_ZERO
            for j in range(n):
                acc = acc + a[i][j] * out.x[j]
            assert acc == b[i]


def test_solver_never_returns_both():
    out = solve_linear_exact([[1, 2], [2, 4]], [1, 2])
    assert isinstance(out, (LinearSolution, Infeasible))


def test_shape_mismatch_is_usage_error():
    with pytest.raises(ValueError):
        solve_linear_exact([[1, 0]], [1, 2])


def test_ideal_membership_generator_itself():
    # (R R^T)_{12} = sum_k r[1][k] r[2][k] is an ideal generator
    p = CommPoly()
    for k in range(1, 4):
        p = p + CommPoly.var(rvar(1, 1, k)) * CommPoly.var(rvar(1, 2, k))
    out = ideal_membership(p, 1, 2)
    assert isinstance(out, MemberCertificate)
    assert out.replay(1) == p


def test_ideal_membership_not_found_at_bound():
    p = CommPoly.var(rvar(1, 1, 1))
    out = ideal_membership(p, 1, 3)
    assert isinstance(out, NotFoundAtBound)


def test_ideal_membership_generator_times_monomial():
    p = CommPoly()
    for i in range(1, 4):
        p = p + CommPoly.var(rvar(1, i, 1)) * CommPoly.var(rvar(1, i, 2))
    p = p * CommPoly.var(rvar(1, 3, 3))
    out = ideal_membership(p, 1, 2)
    assert isinstance(out, MemberCertificate)
    assert out.replay(1) == p


def test_certificates_replay_for_random_combinations():
    rng = random.Random(3)
    gens = orthogonality_generators(2)
    for _ in range(5):
        p = CommPoly()
        for _ in range(2):
            gi = rng.randrange(len(gens))
            mult = CommPoly({(): rand_ec(rng)}) + CommPoly.var(
                rvar(2, rng.randint(1, 3), rng.randint(1, 3))
            ).scale(rand_ec(rng))
            p = p + mult * gens[gi]
        out = ideal_membership(p, 2, 1)
        assert isinstance(out, MemberCertificate)
        assert out.replay(2) == p


def test_cayley_chart_is_orthogonal():
    # N^T N = w^2 I symbolically, so N/w really lies in SO(3)
    from kgalilei.scalars import cayley_chart

    num, w = cayley_chart(1)
    w2 = w * w
    for i in range(3):
        for j in range(3):
            acc = CommPoly()
            for m in range(3):
                acc = acc + num[m][i] * num[m][j]
            expected = w2 if i == j else CommPoly()
            assert acc == expected


def test_rotation_reduction_kills_ideal_members():
    gens = orthogonality_generators(1)
    for g in gens:
        assert vanishes_on_rotation_group(g)
        assert vanishes_on_orthogonal_group(g)


def test_rotation_reduction_detects_nonmembers():
    p = CommPoly.var(rvar(1, 1, 1))
    assert not vanishes_on_rotation_group(p)
    # trace is 3 on neither component
    tr = CommPoly()
    for i in range(1, 4):
        tr = tr + CommPoly.var(rvar(1, i, i))
    assert not vanishes_on_orthogonal_group(tr - CommPoly.const(3))


def test_orthogonal_group_vs_rotation_group_determinant():
    # det(R) - 1 vanishes on SO(3) but not on the full orthogonal group
    det = CommPoly()
    from itertools import permutations

    for perm in permutations((1, 2, 3)):
        sign = 1
        p = list(perm)
        for i in range(3):
            for j in range(i + 1, 3):
                if p[i] > p[j]:
                    sign = -sign
        term = CommPoly.const(sign)
        for i, pi in enumerate(perm, start=1):
            term = term * CommPoly.var(rvar(1, i, pi))
        det = det + term
    p = det - CommPoly.const(1)
    assert vanishes_on_rotation_group(p)
    assert not vanishes_on_orthogonal_group(p)


def test_reduce_keeps_non_rotation_vars():
    p = CommPoly.var(("v", 1, 2)) * CommPoly.var(rvar(1, 1, 1))
    red = reduce_rotation_vars(p)
    assert ("v", 1, 2) in red.variables()


def test_monomials_up_to_degree_count():
    vars3 = ["x", "y", "z"]
    assert len(monomials_up_to_degree(vars3, 2)) == 10  # C(5,2)
