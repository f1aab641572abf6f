"""Operator algebra layer: local matrices, JW strings, windows, codecs."""

import math

import numpy as np
import pytest
import scipy.sparse as sp

from truncert.fock_algebra import (
    ALL,
    ModeSpec,
    ProjectorSpec,
    ResourceLimitError,
    boson,
    build_basis,
    combine,
    dump_coo,
    fermion,
    hermiticity_defect,
    mode_operator,
    projector,
    rotor,
    spin_half,
    window_mask,
)


def _dense(op):
    return np.asarray(op.todense())


# ---------------------------------------------------------------------------
# mode specs and basis bookkeeping
# ---------------------------------------------------------------------------

def test_mode_dims():
    assert boson(3).dim == 4
    assert rotor(3).dim == 7
    assert fermion().dim == 2
    assert spin_half().dim == 2


def test_rotor_quantum_numbers_fold_sign():
    spec = rotor(2)
    assert list(spec.local_qn()) == [2, 1, 0, 1, 2]


def test_boson_quantum_numbers_are_occupations():
    assert list(boson(3).local_qn()) == [0, 1, 2, 3]


def test_truncatable_flags():
    basis = build_basis([fermion(), boson(2), spin_half(), rotor(1)])
    assert basis.truncatable_modes == (1, 3)


def test_dimension_and_strides():
    basis = build_basis([boson(2), fermion(), boson(1)])
    assert basis.dimension == 3 * 2 * 2


def test_encode_decode_roundtrip():
    basis = build_basis([boson(3), fermion(), rotor(2), spin_half()])
    for idx in range(basis.dimension):
        occ = basis.decode(idx)
        assert basis.encode(occ) == idx
    assert basis.dimension <= 4096


def test_mode_zero_is_most_significant():
    """Index layout must match the kron factor order."""
    basis = build_basis([boson(1), boson(2)])
    # state |n0=1, n1=0> sits at offset dim(mode1) * 1
    assert basis.encode([1, 0]) == 3


def test_local_indices_match_decode():
    basis = build_basis([boson(2), rotor(1), fermion()])
    for m in range(3):
        loc = basis.local_indices(m)
        for idx in range(basis.dimension):
            assert loc[idx] == basis.decode(idx)[m]


def test_dimension_cap_guard():
    with pytest.raises(ResourceLimitError):
        build_basis([boson(1023)] * 8)


def test_bad_cutoff_rejected():
    with pytest.raises(ValueError):
        boson(-1)
    with pytest.raises(ValueError):
        rotor(-1)
    with pytest.raises(ValueError):
        ModeSpec("fermion", cutoff=2)


# ---------------------------------------------------------------------------
# local operators
# ---------------------------------------------------------------------------

def test_annihilate_amplitudes():
    basis = build_basis([boson(4)])
    a = _dense(mode_operator(basis, 0, "annihilate"))
    for n in range(1, 5):
        assert a[n - 1, n] == pytest.approx(math.sqrt(n))
    assert np.count_nonzero(a) == 4


def test_commutator_b_bdag_has_corner_defect():
    """[b, b+] = 1 everywhere except the top Fock level, where it is -n_max."""
    n_max = 5
    basis = build_basis([boson(n_max)])
    a = mode_operator(basis, 0, "annihilate")
    comm = _dense(a @ a.conj().T - a.conj().T @ a)
    expect = np.eye(n_max + 1)
    expect[n_max, n_max] = -n_max
    assert np.allclose(comm, expect, atol=1e-12)


def test_position_momentum_commutator_inside_window():
    n_max = 12
    basis = build_basis([boson(n_max)])
    x = mode_operator(basis, 0, "position")
    p = mode_operator(basis, 0, "momentum")
    comm = _dense(x @ p - p @ x)
    inner = comm[: n_max - 1, : n_max - 1]
    assert np.max(np.abs(inner - 1j * np.eye(n_max - 1))) < 1e-12


def test_position_norm_bound():
    """||x Pi_[0,L]|| <= sqrt(2(L+1)) is what the walk profiles rely on."""
    basis = build_basis([boson(24)])
    x = mode_operator(basis, 0, "position")
    for lam in (0, 3, 10):
        pi = projector(basis, ProjectorSpec(0, 0, lam))
        norm = np.linalg.norm(_dense(x @ pi), ord=2)
        assert norm <= math.sqrt(2.0 * (lam + 1.0)) + 1e-12


def test_efield_is_signed_diagonal():
    basis = build_basis([rotor(2)])
    e = _dense(mode_operator(basis, 0, "efield"))
    assert np.allclose(e, np.diag([-2, -1, 0, 1, 2]))


def test_lower_link_shifts_field_down():
    basis = build_basis([rotor(2)])
    u = _dense(mode_operator(basis, 0, "lower_link"))
    e = np.arange(-2, 3)
    for col in range(1, 5):
        assert u[col - 1, col] == 1.0
        assert e[col - 1] == e[col] - 1
    # the bottom edge is annihilated, not wrapped
    assert np.all(u[:, 0] == 0.0)


def test_link_is_partial_isometry():
    basis = build_basis([rotor(3)])
    u = mode_operator(basis, 0, "lower_link")
    prod = _dense(u @ u.conj().T)
    assert np.allclose(np.diag(prod)[:-1], 1.0)


def test_unknown_kind_raises():
    basis = build_basis([boson(2), fermion()])
    with pytest.raises(TypeError):
        mode_operator(basis, 0, "pauli_x")
    with pytest.raises(TypeError):
        mode_operator(basis, 1, "position")


# ---------------------------------------------------------------------------
# Jordan-Wigner strings
# ---------------------------------------------------------------------------

def test_jw_anticommutation_pure_fermion_chain():
    basis = build_basis([fermion() for _ in range(4)])
    cs = [mode_operator(basis, i, "annihilate") for i in range(4)]
    eye = sp.identity(basis.dimension, format="csr", dtype=complex)
    for i in range(4):
        for j in range(4):
            anti = cs[i] @ cs[j] + cs[j] @ cs[i]
            assert abs(anti).max() < 1e-12
            mixed = cs[i] @ cs[j].conj().T + cs[j].conj().T @ cs[i]
            target = eye if i == j else eye * 0
            assert abs(mixed - target).max() < 1e-12


def test_jw_skips_nonfermion_modes():
    """Strings count only fermion modes, so bosons in between stay untouched."""
    basis = build_basis([fermion(), boson(2), fermion()])
    c0 = mode_operator(basis, 0, "annihilate")
    c2 = mode_operator(basis, 2, "annihilate")
    anti = c0 @ c2 + c2 @ c0
    assert abs(anti).max() < 1e-12
    b = mode_operator(basis, 1, "annihilate")
    comm = c0 @ b - b @ c0
    assert abs(comm).max() < 1e-12


def test_jw_number_operator_has_no_string():
    basis = build_basis([fermion(), fermion()])
    n1 = mode_operator(basis, 1, "number")
    c1 = mode_operator(basis, 1, "annihilate")
    assert abs(n1 - c1.conj().T @ c1).max() < 1e-12


def test_mixed_basis_six_fermions_anticommute():
    modes = [fermion(), spin_half(), fermion(), boson(1), fermion(),
             fermion(), rotor(1), fermion(), fermion()]
    basis = build_basis(modes)
    fidx = [0, 2, 4, 5, 7, 8]
    ops = {i: mode_operator(basis, i, "annihilate") for i in fidx}
    for i in fidx:
        for j in fidx:
            if i >= j:
                continue
            anti = ops[i] @ ops[j] + ops[j] @ ops[i]
            assert abs(anti).max() < 1e-12


# ---------------------------------------------------------------------------
# windows, projectors, assembly helpers
# ---------------------------------------------------------------------------

def test_window_mask_single_mode():
    basis = build_basis([boson(3), boson(3)])
    mask = window_mask(basis, ProjectorSpec(0, 1, 2))
    qn = basis.mode_qn(0)
    assert np.array_equal(mask, (qn >= 1) & (qn <= 2))


def test_window_mask_rotor_keeps_symmetric_band():
    basis = build_basis([rotor(3)])
    mask = window_mask(basis, ProjectorSpec(0, 0, 1))
    # |k| <= 1 keeps k in {-1, 0, 1}
    assert list(np.nonzero(mask)[0]) == [2, 3, 4]


def test_window_mask_all_is_conjunction():
    basis = build_basis([boson(3), fermion(), boson(3)])
    mask = window_mask(basis, ProjectorSpec(ALL, 0, 1))
    per_mode = [window_mask(basis, ProjectorSpec(m, 0, 1)) for m in (0, 2)]
    assert np.array_equal(mask, per_mode[0] & per_mode[1])


def test_projector_idempotent_hermitian():
    basis = build_basis([boson(4), boson(4)])
    pi = projector(basis, ProjectorSpec(ALL, 0, 2))
    assert abs(pi @ pi - pi).max() < 1e-15
    assert hermiticity_defect(pi) == 0.0


def test_projector_empty_window_rejected():
    basis = build_basis([boson(4)])
    with pytest.raises(ValueError):
        ProjectorSpec(0, 3, 2)


def test_combine_sum_and_weights():
    basis = build_basis([boson(2)])
    n = mode_operator(basis, 0, "number")
    a = mode_operator(basis, 0, "annihilate")
    out = combine([n, a], weights=[2.0, -1.0])
    assert abs(out - (2.0 * n - a)).max() < 1e-15


def test_combine_product_order():
    basis = build_basis([boson(3)])
    a = mode_operator(basis, 0, "annihilate")
    ad = mode_operator(basis, 0, "create")
    prod = combine([a, ad], mode="product")
    assert abs(prod - a @ ad).max() < 1e-15


def test_dump_coo_is_sorted_text():
    basis = build_basis([boson(2)])
    n = mode_operator(basis, 0, "number")
    lines = dump_coo(n).strip().splitlines()
    assert lines == ["1 1 1 0", "2 2 2 0"]


def test_dump_coo_row_major_order():
    basis = build_basis([boson(3)])
    x = mode_operator(basis, 0, "position")
    rows = [tuple(map(float, ln.split()[:2])) for ln in dump_coo(x).splitlines()]
    assert rows == sorted(rows)


def test_hermiticity_defect_detects_asymmetry():
    basis = build_basis([boson(2)])
    a = mode_operator(basis, 0, "annihilate")
    assert hermiticity_defect(a) > 0.9
    x = mode_operator(basis, 0, "position")
    assert hermiticity_defect(x) < 1e-15
