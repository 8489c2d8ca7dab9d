import math

import numpy as np
import pytest
import scipy.linalg

from anirabi import ModelParams
from anirabi import ed
from anirabi.errors import TruncationLoss


def test_block_structure_and_symmetry():
    h = ed.build_hamiltonian(ModelParams(0.8, 0.6, 1.7), 60)
    for block in (h.block_even, h.block_odd):
        assert np.max(np.abs(block - block.T)) < 1e-14
    assert len(h.basis_even) + len(h.basis_odd) == 2 * (h.n_trunc + 1)
    # even sector holds (n even, down) and (n odd, up)
    for n, spin in h.basis_even:
        assert spin == (-1 if n % 2 == 0 else +1)
    for n, spin in h.basis_odd:
        assert spin == (+1 if n % 2 == 0 else -1)


def test_matrix_elements():
    p = ModelParams(0.8, 0.6, 1.5)  # g1 = 0.6, g2 = 0.9
    h = ed.build_hamiltonian(p, 30)
    full = ed.full_matrix(h)
    up = lambda n: h.full_index(n, +1)
    down = lambda n: h.full_index(n, -1)
    for n in range(5):
        assert full[down(n), down(n)] == pytest.approx(n - 0.4)
        assert full[up(n), up(n)] == pytest.approx(n + 0.4)
        assert full[down(n + 1), up(n)] == pytest.approx(0.6 * math.sqrt(n + 1))
        assert full[up(n + 1), down(n)] == pytest.approx(0.9 * math.sqrt(n + 1))
    assert full[up(0), down(0)] == 0.0


def test_decoupled_spectrum_and_parities():
    res = ed.diagonalize(ModelParams(0.7, 0.0, 0.3), k=6)
    assert np.allclose(
        res.energies, [-0.35, 0.35, 0.65, 1.35, 1.65, 2.35], atol=1e-12
    )
    assert [int(q) for q in res.parities] == [1, -1, -1, 1, 1, -1]


def test_convergence_contract():
    for p in (ModelParams(0.5, 1.2, 0.7), ModelParams(2.0, 1.5, 2.0)):
        res = ed.diagonalize(p, k=10)
        assert res.converged
        again = ed._diag_once(p, res.n_trunc + ed.TRUNC_STEP, 10, False)
        assert np.max(np.abs(again[0] - res.energies)) < 1e-10


def test_tiny_ceiling_flags_not_converged():
    res = ed.diagonalize(ModelParams(0.5, 1.0, 0.5), n_trunc=20, k=4)
    assert not res.converged
    assert res.n_trunc == 20


def test_parity_labels_match_operator_expectation():
    p = ModelParams(1.1, 0.8, 0.6)
    res = ed.diagonalize(p, k=8, want_vectors=True)
    pi = ed.parity_matrix(res.n_trunc)
    for i, parity in enumerate(res.parities):
        v = res.vectors[:, i]
        expect = v @ pi @ v / (v @ v)
        assert expect == pytest.approx(float(parity), abs=1e-10)


def test_excitation_number_at_zero_coupling():
    p = ModelParams(0.7, 0.0, 0.0)
    res = ed.diagonalize(p, k=6, want_vectors=True)
    n_op = np.diag(
        np.concatenate([np.arange(res.n_trunc + 1) + 1, np.arange(res.n_trunc + 1)])
    ).astype(float)
    for i, parity in enumerate(res.parities):
        v = res.vectors[:, i]
        n_exp = v @ n_op @ v / (v @ v)
        assert abs(n_exp - round(n_exp)) < 1e-12
        assert (-1) ** round(n_exp) == int(parity)


def test_duality():
    rng = np.random.default_rng(11)
    for _ in range(4):
        delta = rng.uniform(0.3, 2.0)
        g1 = rng.uniform(0.1, 1.2)
        g2 = rng.uniform(0.1, 1.2)
        ha = ed.build_hamiltonian_raw(delta, g1, g2, 160)
        hb = ed.build_hamiltonian_raw(-delta, g2, g1, 160)
        ea = np.sort(
            np.concatenate(
                [
                    scipy.linalg.eigh(ha.block_even, eigvals_only=True),
                    scipy.linalg.eigh(ha.block_odd, eigvals_only=True),
                ]
            )
        )
        eb = np.sort(
            np.concatenate(
                [
                    scipy.linalg.eigh(hb.block_even, eigvals_only=True),
                    scipy.linalg.eigh(hb.block_odd, eigvals_only=True),
                ]
            )
        )
        assert np.max(np.abs(ea[:30] - eb[:30])) < 1e-10


def test_ecs_basis_orthonormal_and_vacuum_overlap():
    basis = ed.ecs_basis_matrix(+1, 1.0, 10, 140)
    gram = basis.T @ basis
    assert np.max(np.abs(gram - np.eye(11))) < 1e-10
    assert basis[0, 0] == pytest.approx(math.exp(-0.5), rel=1e-14)


def test_ecs_parity_map():
    # bosonic parity sends |k>_{A+} to (-1)^k |k>_{A-}
    beta, k_max, n_trunc = 0.8, 6, 80
    plus = ed.ecs_basis_matrix(+1, beta, k_max, n_trunc)
    minus = ed.ecs_basis_matrix(-1, beta, k_max, n_trunc)
    signs = (-1.0) ** np.arange(n_trunc + 1)
    for k in range(k_max + 1):
        assert np.allclose(signs * plus[:, k], (-1.0) ** k * minus[:, k], atol=1e-12)


def test_ecs_truncation_loss():
    with pytest.raises(TruncationLoss):
        ed.ecs_basis_matrix(+1, 3.0, 12, 20)


def test_residual_norm():
    p = ModelParams(0.9, 0.7, 1.3)
    res = ed.diagonalize(p, k=3, want_vectors=True)
    h = ed.build_hamiltonian(p, res.n_trunc)
    assert ed.residual_norm(h, res.vectors[:, 0], float(res.energies[0])) < 1e-12
    rng = np.random.default_rng(0)
    v = rng.normal(size=2 * (res.n_trunc + 1))
    assert ed.residual_norm(h, v, float(res.energies[0])) > 0.1
    with pytest.raises(ValueError):
        ed.residual_norm(h, np.zeros(2 * (res.n_trunc + 1)), 0.0)


def test_jc_zero_coupling():
    spec = ed.jc_spectrum(0.7, 0.0, 6)
    energies = [e for e, _ in spec]
    assert np.allclose(energies, [-0.35, 0.35, 0.65, 1.35, 1.65, 2.35], atol=1e-14)


def test_jc_ground_crossing_closed_form():
    for delta in (0.5, 1.0, 2.0):
        assert ed.jc_ground_crossing(delta) == pytest.approx(
            math.sqrt(delta), abs=1e-10
        )


def test_jc_matches_ed_at_small_r():
    for g in (0.3, 0.8, 1.2):
        jc = ed.jc_spectrum(1.0, g, 6)
        res = ed.diagonalize(ModelParams(1.0, g, 1e-3), k=6)
        dev = max(abs(jc[i][0] - float(res.energies[i])) for i in range(6))
        assert dev < 1e-3
    # doublet structure at delta = 1: N - 1/2 +- 0.5 sqrt(N) at g = 0.5
    spec = ed.jc_spectrum(1.0, 0.5, 6)
    for n in (1, 2):
        doublet = sorted(e for e, nn in spec if nn == n)
        assert doublet == pytest.approx(
            [n - 0.5 - 0.5 * math.sqrt(n), n - 0.5 + 0.5 * math.sqrt(n)], abs=1e-14
        )


def test_jc_parity_alternation_with_excitation():
    spec = ed.jc_spectrum(1.0, 0.9, 8)
    assert spec[0] == (-0.5, 0)
    for e, n in spec[1:]:
        assert n >= 1
