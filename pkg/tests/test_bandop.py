import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from woldkit.bandop import (
    BandOp,
    GramSolveParams,
    Lattice,
    LatticeMismatch,
    NoConvergence,
    constant,
    identity,
    left_inverse_apply,
    lower_bound_estimate,
    power_ratio,
    solve_gram,
    table,
    union,
)
from woldkit.seqspace import FinVec, RankMismatch, unit, zero
from woldkit.zoo import bergman_shift, dirichlet_shift, quasinormal_block, unilateral_shift

from conftest import rand_vec


# ---------------------------------------------------------------------------
# lattices
# ---------------------------------------------------------------------------

def test_lattice_contains():
    nat = Lattice.nat(1)
    assert nat.contains((0,)) and nat.contains((5,)) and not nat.contains((-1,))
    grid = Lattice(("nat", 3))
    assert grid.contains((4, 2)) and not grid.contains((4, 3)) and not grid.contains((-1, 0))
    u = union(Lattice.integers(1), Lattice.nat(1))
    assert u.contains((0, -4)) and u.contains((1, 4))
    assert not u.contains((1, -4)) and not u.contains((2, 0))


def test_lattice_windows():
    assert Lattice.nat(1).window(3) == [(0,), (1,), (2,), (3,)]
    assert Lattice.integers(1).window(1) == [(0,), (-1,), (1,)]
    w = Lattice(("nat", 2)).window(2)
    assert w[0] == (0, 0) and set(w) == {(i, j) for i in range(3) for j in range(2)}
    uw = union(Lattice.nat(1), Lattice.nat(1)).window(1)
    assert set(uw) == {(0, 0), (0, 1), (1, 0), (1, 1)}


def test_lattice_shift_closure():
    nat = Lattice.nat(1)
    assert nat.always_contains_shift((2,)) and not nat.always_contains_shift((-1,))
    assert Lattice.integers(1).always_contains_shift((-5,))
    assert Lattice(("nat", 3)).always_contains_shift((1, 0))
    assert not Lattice(("nat", 3)).always_contains_shift((1, 1))


# ---------------------------------------------------------------------------
# apply / adjoint / compose
# ---------------------------------------------------------------------------

def test_apply_bergman_weight_at_zero():
    B = bergman_shift()
    out = B.apply(unit(0))
    assert out.support() == ((1,),)
    assert abs(out[(1,)] - math.sqrt(1 / 2)) < 1e-15


def test_apply_zero_vector():
    S = unilateral_shift()
    assert S.apply(zero(1)).is_zero


def test_apply_dirichlet_weight_at_one():
    out = dirichlet_shift().apply(unit(1))
    assert out.support() == ((2,),)
    assert abs(out[(2,)] - math.sqrt(3 / 2)) < 1e-15


def test_apply_validates_rank_and_lattice():
    S = unilateral_shift()
    with pytest.raises(RankMismatch):
        S.apply(unit((0, 0)))
    with pytest.raises(LatticeMismatch):
        S.apply(unit(-1))


def test_adjoint_kills_boundary():
    S = unilateral_shift()
    assert S.adjoint().apply(unit(0)).is_zero


def test_adjoint_involution_band_for_band():
    for T in (unilateral_shift(), bergman_shift(), quasinormal_block(np.diag([2.0, 3.0]))):
        assert T.adjoint().adjoint() == T


def test_adjoint_bergman_at_one():
    out = bergman_shift().adjoint().apply(unit(1))
    assert out.support() == ((0,),)
    assert abs(out[(0,)] - math.sqrt(1 / 2)) < 1e-15


def test_compose_with_identity():
    B = bergman_shift()
    assert B.compose(identity(B.lattice)) == B
    assert identity(B.lattice).compose(B) == B


def test_compose_isometry_gram_is_identity():
    S = unilateral_shift()
    assert S.adjoint().compose(S) == identity(S.lattice)


def test_compose_boundary_mask():
    # S S* is the identity minus the projection onto the first basis vector
    S = unilateral_shift()
    P = S.compose(S.adjoint())
    assert P.apply(unit(0)).is_zero
    assert P.apply(unit(3)) == unit(3)


def test_gram_bergman_diagonal_exact():
    B = bergman_shift()
    G = B.gram()
    assert G.is_diagonal()
    w = G.bands[0][1]
    for k in range(12):
        # analytic merge: exactly (k+1)/(k+2), not a rounded square of sqrt
        assert w.evaluate((k,), G.lattice) == (k + 1) / (k + 2)


def test_gram_matches_dense_oracle():
    for T in (bergman_shift(), dirichlet_shift()):
        n = 10
        M = np.zeros((n + 1, n), dtype=complex)
        for k in range(n):
            M[k + 1, k] = T.bands[0][1].evaluate((k,), T.lattice)
        dense = M.conj().T @ M
        G = T.gram()
        for k in range(n):
            got = G.bands[0][1].evaluate((k,), G.lattice)
            assert abs(got - dense[k, k]) <= 1e-15
        assert np.abs(dense - np.diag(np.diag(dense))).max() == 0.0


def test_gram_scaled_identity():
    lat = Lattice.nat(1)
    G = (2 * identity(lat)).gram()
    assert G == 4 * identity(lat)


def test_gram_quasinormal_block_is_squared_matrix():
    Q = quasinormal_block(np.diag([2.0, 3.0]))
    G = Q.gram()
    assert G.is_diagonal()
    w = G.bands[0][1]
    for k in range(4):
        assert w.evaluate((k, 0), G.lattice) == 4.0
        assert w.evaluate((k, 1), G.lattice) == 9.0


def test_compose_associativity_on_probes():
    B = bergman_shift()
    A = B.adjoint()
    C = B.compose(B)
    rng = np.random.default_rng(3)
    for _ in range(4):
        u = rand_vec(B.lattice, rng)
        lhs = A.compose(B.compose(C)).apply(u)
        rhs = (A.compose(B)).compose(C).apply(u)
        assert (lhs - rhs).norm() <= 1e-13 * max(1.0, u.norm())


def test_apply_support_growth_bound():
    # support of T u never exceeds (support of u) x (number of bands)
    S = unilateral_shift()
    T = S + 0.5 * identity(S.lattice) + 2 * S.adjoint()
    rng = np.random.default_rng(17)
    for _ in range(4):
        u = rand_vec(T.lattice, rng)
        assert len(T.apply(u)) <= len(u) * len(T.bands)


def test_operator_sums_and_scalars():
    S = unilateral_shift()
    T = S + 0.5 * identity(S.lattice)
    out = T.apply(unit(2))
    assert out[(2,)] == 0.5 and out[(3,)] == 1.0
    assert (T - T).apply(unit(2)).is_zero
    assert (-T).apply(unit(2))[(3,)] == -1.0


def test_power():
    B = bergman_shift()
    assert B ** 0 == identity(B.lattice)
    assert B ** 1 == B
    out = (B ** 2).apply(unit(0))
    w0w1 = math.sqrt(1 / 2) * math.sqrt(2 / 3)
    assert abs(out[(2,)] - w0w1) < 1e-15


def test_table_weight_default_is_explicit():
    w = table([1.0, 2.0], default=5.0)
    lat = Lattice.nat(1)
    T = BandOp(lat, (((1,), w),))
    assert T.apply(unit(1))[(2,)] == 2.0
    assert T.apply(unit(7))[(8,)] == 5.0


def test_power_ratio_weight():
    w = power_ratio(2.0, 1.0, 2)
    lat = Lattice.nat(1)
    for j in range(5):
        assert abs(w.evaluate((j,), lat) - ((j + 3) / (j + 1)) ** 2) < 1e-14


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(st.integers(min_value=0, max_value=15),
                       st.complex_numbers(max_magnitude=10, allow_nan=False,
                                          allow_infinity=False),
                       max_size=6),
       st.dictionaries(st.integers(min_value=0, max_value=16),
                       st.complex_numbers(max_magnitude=10, allow_nan=False,
                                          allow_infinity=False),
                       max_size=6))
def test_adjoint_pairing(du, dv):
    u = FinVec({(k,): v for k, v in du.items()}, rank=1)
    v = FinVec({(k,): a for k, a in dv.items()}, rank=1)
    for T in (bergman_shift(), dirichlet_shift()):
        lhs = T.apply(u).inner(v)
        rhs = u.inner(T.adjoint().apply(v))
        assert abs(lhs - rhs) <= 1e-13 * max(1.0, u.norm() * v.norm())


def test_adjoint_pairing_union_lattice():
    from woldkit.zoo import bilateral_shift, direct_sum
    D = direct_sum(bilateral_shift(), unilateral_shift())
    rng = np.random.default_rng(11)
    for _ in range(5):
        u = rand_vec(D.lattice, rng)
        v = rand_vec(D.lattice, rng)
        lhs = D.apply(u).inner(v)
        rhs = u.inner(D.adjoint().apply(v))
        assert abs(lhs - rhs) <= 1e-13 * max(1.0, u.norm() * v.norm())


# ---------------------------------------------------------------------------
# solve_gram / left_inverse_apply
# ---------------------------------------------------------------------------

def test_solve_gram_bergman_exact():
    B = bergman_shift()
    x = solve_gram(B, unit(0))
    assert x == 2 * unit(0)
    # residual re-measured with the exact band Gram is literally zero
    assert (B.gram().apply(x) - unit(0)).norm() == 0.0


def test_solve_gram_isometry_identity():
    S = unilateral_shift()
    v = FinVec({(0,): 1 + 2j, (4,): -3.0})
    assert solve_gram(S, v) == v


def test_solve_gram_quasinormal_block():
    Q = quasinormal_block(np.diag([2.0, 3.0]))
    x = solve_gram(Q, unit((0, 0)))
    assert x == 0.25 * unit((0, 0))
    # dense oracle: gram is block diagonal with L^2 blocks
    L2 = np.diag([4.0, 9.0])
    assert np.allclose(np.linalg.inv(L2)[0, 0], 0.25)


def test_solve_gram_zero_rhs():
    B = bergman_shift()
    assert solve_gram(B, zero(1)).is_zero


def test_solve_gram_windowed_path_certificate():
    # S + I/2 has a genuinely tridiagonal Gram: exercises the guarded solve
    S = unilateral_shift()
    T = S + 0.5 * identity(S.lattice)
    p = GramSolveParams(tol=1e-12)
    for v in (unit(0), unit(3), FinVec({(1,): 1j, (5,): 2.0})):
        x = solve_gram(T, v, p)
        r = (T.gram().apply(x) - v).norm()
        assert r <= p.tol * v.norm()


def test_solve_gram_guard_doubling():
    # a tight initial guard forces at least one window enlargement
    S = unilateral_shift()
    T = S + 0.5 * identity(S.lattice)
    p = GramSolveParams(guard=2, tol=1e-12)
    x = solve_gram(T, unit(0), p)
    assert (T.gram().apply(x) - unit(0)).norm() <= p.tol
    assert len(x) > 5  # the solution window grew past the initial padding


def test_solve_gram_window_cap_raises():
    S = unilateral_shift()
    T = S + 0.5 * identity(S.lattice)
    with pytest.raises(NoConvergence) as exc:
        solve_gram(T, unit(0), GramSolveParams(guard=1, tol=1e-14, max_window=6))
    assert exc.value.residual > 0


def test_left_inverse_bergman():
    B = bergman_shift()
    out = left_inverse_apply(B, unit(1))
    assert out.support() == ((0,),)
    assert abs(out[(0,)] - math.sqrt(2)) < 1e-14
    # dense pseudoinverse oracle
    n = 8
    M = np.zeros((n + 1, n), dtype=complex)
    for k in range(n):
        M[k + 1, k] = math.sqrt((k + 1) / (k + 2))
    e1 = np.zeros(n + 1, dtype=complex)
    e1[1] = 1.0
    x = np.linalg.pinv(M) @ e1
    assert abs(out[(0,)] - x[0]) <= 1e-12


def test_left_inverse_kernel_vector():
    B = bergman_shift()
    assert left_inverse_apply(B, unit(0)).is_zero


def test_left_inverse_isometry_is_adjoint():
    S = unilateral_shift()
    assert left_inverse_apply(S, unit(3)) == unit(2)


def test_left_inverse_reproduces_on_range():
    p = GramSolveParams()
    rng = np.random.default_rng(5)
    for T in (bergman_shift(), dirichlet_shift()):
        for _ in range(3):
            u = rand_vec(T.lattice, rng)
            v = T.apply(u)
            back = left_inverse_apply(T, v, p)
            assert (back - u).norm() <= p.tol * max(1.0, u.norm()) * 10


# ---------------------------------------------------------------------------
# lower_bound_estimate
# ---------------------------------------------------------------------------

def test_lower_bound_isometry():
    assert abs(lower_bound_estimate(unilateral_shift(), 16) - 1.0) < 1e-12


def test_lower_bound_bergman():
    got = lower_bound_estimate(bergman_shift(), 16)
    assert abs(got - math.sqrt(1 / 2)) < 1e-12
    # oracle: singular values of the exact rectangular section
    n = 17
    M = np.zeros((n + 1, n))
    for k in range(n):
        M[k + 1, k] = math.sqrt((k + 1) / (k + 2))
    assert abs(got - np.linalg.svd(M, compute_uv=False)[-1]) < 1e-12


def test_lower_bound_zero_operator():
    lat = Lattice.nat(1)
    Z = 0 * identity(lat)
    assert lower_bound_estimate(Z, 4) == 0.0


def test_lower_bound_monotone_in_window():
    for T in (bergman_shift(), dirichlet_shift()):
        a = lower_bound_estimate(T, 8)
        b = lower_bound_estimate(T, 16)
        assert b <= a + 1e-12


def test_lower_bound_invertible_bilateral():
    from woldkit.zoo import weighted_shift
    T = weighted_shift(constant(2.0), 1, "int")
    assert abs(lower_bound_estimate(T, 8) - 2.0) < 1e-12
