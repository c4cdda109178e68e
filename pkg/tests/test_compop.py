import math

import numpy as np
import pytest

from hardyop import (
    OpMatrix,
    PreconditionError,
    alpha,
    comp_matrix,
    const_matrix,
    constant,
    distance,
    h2_norm,
    identity,
    norm_schedule,
    op_norm,
    p_norm,
    parse_symbol,
    power_norm,
    restricted_norm,
    taylor,
    weighted_matrix,
)

PHI23 = parse_symbol("(z^2+z^3)/2")
PHI12 = parse_symbol("(z+z^2)/2")


# ---------------------------------------------------------------------------
# matrix construction


def test_comp_matrix_square_symbol():
    A = comp_matrix(parse_symbol("z^2"), 4, "full").entries
    expect = np.zeros((4, 4), dtype=complex)
    expect[0, 0] = 1.0
    expect[2, 1] = 1.0  # z^2
    assert np.array_equal(A, expect)


def test_comp_matrix_constant_symbol():
    A = const_matrix(0.5, 3).entries
    expect = np.zeros((3, 3), dtype=complex)
    expect[0, :] = [1.0, 0.5, 0.25]
    assert np.array_equal(A, expect)


def test_comp_matrix_identity_symbol():
    A = comp_matrix(identity(), 6, "full").entries
    assert np.array_equal(A, np.eye(6, dtype=complex))


def test_comp_matrix_h20_square_symbol():
    A = comp_matrix(parse_symbol("z^2"), 4, "h20").entries
    expect = np.zeros((4, 4), dtype=complex)
    expect[1, 0] = 1.0  # column 1: coeffs 1..4 of z^2
    expect[3, 1] = 1.0  # column 2: coeffs 1..4 of z^4
    assert np.array_equal(A, expect)


def test_comp_matrix_columns_are_truncated_powers():
    s = alpha(0.4)
    N = 16
    A = comp_matrix(s, N, "full").entries
    t = taylor(s, N)
    col = np.zeros(N, dtype=complex)
    col[0] = 1.0
    for k in range(N):
        assert np.allclose(A[:, k], col, atol=1e-14)
        col = np.convolve(col, t)[:N]


def test_fft_and_direct_columns_agree():
    # the FFT path kicks in at dimension 512
    s = alpha(0.3)
    big = comp_matrix(s, 512, "full").entries
    small = comp_matrix(s, 128, "full").entries
    assert np.max(np.abs(big[:128, :128] - small)) < 1e-13
    # spot-check deep columns against plain convolution powers
    t = taylor(s, 512)
    col = np.zeros(512, dtype=complex)
    col[0] = 1.0
    for k in range(1, 401):
        col = np.convolve(col, t)[:512]
        if k in (7, 100, 400):
            assert np.max(np.abs(big[:, k] - col)) < 1e-12


def test_weighted_matrix_unit_weight():
    s = parse_symbol("(z+z^2)/2")
    W = weighted_matrix(constant(1.0), s, 12).entries
    C = comp_matrix(s, 12, "full").entries
    assert np.allclose(W, C, atol=1e-14)


def test_weighted_matrix_square_symbol():
    phi = parse_symbol("z^2")
    W = weighted_matrix(phi, phi, 10).entries
    for n in range(4):
        col = np.zeros(10, dtype=complex)
        if 2 * n + 2 < 10:
            col[2 * n + 2] = 1.0
        assert np.array_equal(W[:, n], col)


def test_weighted_equals_restricted_for_origin_fixing():
    # ||T_{phi,phi}|| compression equals the h20 compression of C_phi
    got = op_norm(weighted_matrix(PHI23, PHI23, 64))
    assert got == pytest.approx(restricted_norm(PHI23, 64), abs=1e-12)


def test_opmatrix_basis_mismatch():
    A = comp_matrix(parse_symbol("z^2"), 4, "full")
    B = comp_matrix(parse_symbol("z^2"), 4, "h20")
    with pytest.raises(ValueError):
        _ = A - B


# ---------------------------------------------------------------------------
# op_norm


def test_op_norm_identity():
    assert op_norm(np.eye(8, dtype=complex)) == pytest.approx(1.0, abs=1e-12)


def test_op_norm_constant_row_formula():
    # single nonzero row: norm is the row's Euclidean norm
    A = const_matrix(0.5, 32)
    expect = math.sqrt((1 - 0.5**64) / 0.75)
    assert expect == pytest.approx(1.15470054, abs=1e-8)
    assert op_norm(A) == pytest.approx(expect, abs=1e-12)


def test_op_norm_diagonal_rotation_gaps():
    lam, mu = 1j, 1.0
    diag = np.array([0] + [lam**n - mu**n for n in range(1, 5)], dtype=complex)
    A = np.diag(diag)
    assert op_norm(A) == pytest.approx(2.0, abs=1e-12)


def test_op_norm_zero_matrix():
    assert op_norm(np.zeros((6, 6), dtype=complex)) == 0.0


def test_power_iteration_vs_dense_svd():
    rng = np.random.default_rng(5)
    cases = [rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
             for n in (8, 32, 96)]
    cases.append(comp_matrix(alpha(0.5), 64, "full").entries - np.eye(64))
    cases.append(comp_matrix(PHI12, 64, "h20").entries)
    for M in cases:
        oracle = float(np.linalg.svd(M, compute_uv=False)[0])
        res = power_norm(M, max_iter=200_000)
        assert res.converged
        assert res.value == pytest.approx(oracle, abs=1e-9 * max(1.0, oracle))


def test_escalation_matches_dense_svd():
    # slow spectral gap: the budgeted power iteration escalates internally
    M = comp_matrix(alpha(0.5), 256, "full").entries - np.eye(256)
    oracle = float(np.linalg.svd(M, compute_uv=False)[0])
    assert op_norm(M) == pytest.approx(oracle, abs=1e-10)


# ---------------------------------------------------------------------------
# distances / restrictions


def test_distance_to_self_is_zero():
    s = parse_symbol("z^3")
    assert distance(s, s, 16) == 0.0


def test_distance_inner_const():
    d = distance(parse_symbol("z^2"), constant(0.5), 128)
    assert d == pytest.approx(1 / math.sqrt(0.75), abs=1e-6)


def test_distance_const_const():
    d = distance(constant(0.0), constant(0.5), 64)
    assert d == pytest.approx(math.sqrt(1 / 3), abs=1e-9)


def test_restricted_norm_examples():
    assert restricted_norm(parse_symbol("z^2"), 16) == pytest.approx(1.0, abs=1e-12)
    for N in (4, 16, 64):
        assert restricted_norm(PHI23, N) == pytest.approx(1 / math.sqrt(2), abs=1e-9)
    v256 = restricted_norm(PHI12, 256)
    v512 = restricted_norm(PHI12, 512)
    assert v512 >= v256 - 1e-9
    assert v256 < 1.0 and v512 < 1.0


def test_littlewood_contraction():
    for text in ("z^2", "(z+z^2)/2", "(z^2+z^3)/2", "0.7*z^3", "z*alpha(0.4)"):
        A = comp_matrix(parse_symbol(text), 64, "full")
        assert op_norm(A) <= 1.0 + 1e-9


def test_lower_and_upper_sandwich():
    # ||P_N phi||_2 <= restricted norm <= ||phi||_inf * ||C_phi compression||
    for text in ("(z+z^2)/2", "(z^2+z^3)/2", "z*alpha(0.3)", "0.7*z^3"):
        s = parse_symbol(text)
        N = 64
        lower = h2_norm(taylor(s, N + 1)[1:])
        r = restricted_norm(s, N)
        upper = p_norm(s, math.inf).value * op_norm(comp_matrix(s, N, "full"))
        assert lower - 1e-9 <= r <= upper + 1e-9


def test_distance_to_origin_value_bounded_by_weighted():
    for text in ("alpha(0.3)", "z/2 + 0.25", "(z+z^2)/2"):
        s = parse_symbol(text)
        N = 64
        lhs = distance(s, constant(s.value_at_zero()), N)
        rhs = op_norm(weighted_matrix(s, s, N))
        assert lhs <= rhs + 1e-9


def test_isometry_column_gram():
    # composition with inner symbols fixing 0 is an isometry, so the columns
    # (truncated powers) are orthonormal as long as truncation loses nothing:
    # all k <= N/deg for monomial-type symbols, k <= N/8 for the rational one
    # (the tail mass of (z alpha_p)^k creeps into range as k approaches N/deg)
    for text, k in (("z^3", 128 // 3), ("z*alpha(0.5)", 128 // 8)):
        s = parse_symbol(text)
        A = comp_matrix(s, 128, "full").entries
        G = A[:, :k].conj().T @ A[:, :k]
        assert np.max(np.abs(G - np.eye(k))) <= 1e-12


# ---------------------------------------------------------------------------
# schedules


def test_schedule_inner_const_target():
    rep = norm_schedule("distance", {"a": parse_symbol("z^2"), "b": constant(0.5)},
                        [16, 32, 64, 128])
    assert rep.target == pytest.approx(1 / math.sqrt(0.75), abs=1e-15)
    assert rep.gaps is not None
    assert all(g2 <= g1 + 1e-12 for g1, g2 in zip(rep.gaps, rep.gaps[1:]))
    assert rep.gaps[-1] < 1e-6


def test_schedule_restricted_constant_value():
    rep = norm_schedule("restricted", {"s": parse_symbol("z^3")}, [8, 16, 32])
    assert rep.target == pytest.approx(1.0, abs=1e-15)
    for v in rep.values:
        assert v == pytest.approx(1.0, abs=1e-10)


def test_schedule_monotone_values():
    rep = norm_schedule("opnorm", {"s": alpha(0.4)}, [16, 32, 64])
    assert all(b >= a - 1e-9 for a, b in zip(rep.values, rep.values[1:]))
    assert rep.target == pytest.approx(math.sqrt(1.4 / 0.6), abs=1e-12)


def test_schedule_rejects_bad_dims():
    with pytest.raises(PreconditionError):
        norm_schedule("restricted", {"s": parse_symbol("z^2")}, [16, 16])
    with pytest.raises(PreconditionError):
        norm_schedule("restricted", {"s": parse_symbol("z^2")}, [])


def test_schedule_identical_symbols_target_zero():
    rep = norm_schedule("distance", {"a": PHI23, "b": PHI23}, [8, 16])
    assert rep.target == 0.0
    assert all(v == 0.0 for v in rep.values)


def test_weighted_schedule_target():
    rep = norm_schedule("weighted", {"w": PHI23, "s": PHI23}, [16, 32])
    assert rep.target == pytest.approx(1 / math.sqrt(2), abs=1e-15)
