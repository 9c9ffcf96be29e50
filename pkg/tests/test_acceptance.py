"""End-to-end acceptance checks, one group per criterion.

The terminal summary (see conftest.py) prints one PASS/FAIL line per
criterion number.
"""
import itertools
import time

import numpy as np
import pytest

from dfskit.algebra import generate_basis, structure_constants, verify_algebra_identities
from dfskit.encoding import block_report, casimir_decompose, encode, octet_states
from dfskit.gates import (
    commutation_table, diagonal_exponential, k_exponential, offdiagonal_half_sum,
    printed_eD_residuals, q_kl, swap_diagnostics, two_site_exchange,
    two_site_exchange_unitary, u_kl, u_x, u_z, xbar, xi_analytic, ybar, zbar,
)
from dfskit.noise import run_trajectory, verify_n_qudit_compat
from dfskit.operators import commutator, expm_hermitian
from dfskit.search import (
    build_constraint_system, collective_generators, commutant_basis, known_coefficients,
    match_against_known, superoperator_nullity,
)


# 1 -----------------------------------------------------------------------------

def test_criterion_1_identity_suite():
    start = time.perf_counter()
    worst = {}
    for d in range(2, 7):
        basis = generate_basis(d)
        rep = verify_algebra_identities(structure_constants(basis), 1e-11, basis)
        assert "sum_diag d_iil=0" in rep.residuals
        assert rep.passed, (d, rep.failures())
        worst[d] = max(rep.residuals.values())
    elapsed = time.perf_counter() - start
    print(f"worst residual per d: {worst}; {elapsed:.1f} s")
    assert elapsed < 30


# 2 -----------------------------------------------------------------------------

def test_criterion_2_commutant_discovery():
    start = time.perf_counter()
    basis = generate_basis(3)
    tensors = structure_constants(basis)
    found = commutant_basis(build_constraint_system(basis, 3, tensors))
    oracle = superoperator_nullity(collective_generators(basis, 3))
    dec = match_against_known(found, known_coefficients(basis, tensors))
    elapsed = time.perf_counter() - start
    print(f"nullspace {found.dim}, oracle {oracle}, max residual {dec.max_residual():.2e}, "
          f"{elapsed:.1f} s")
    assert found.dim == 6 and oracle == 6
    assert dec.max_residual() < 1e-9
    assert elapsed < 300


# 3 -----------------------------------------------------------------------------

def test_criterion_3_commutation_table():
    start = time.perf_counter()
    for d in (3, 4, 5):
        table = commutation_table(generate_basis(d))
        bad = {k: v for k, v in table.items() if v >= 1e-11}
        assert not bad, (d, bad)
    assert time.perf_counter() - start < 60


def test_criterion_3_printed_eD_product_identity():
    # e_i D = (4/d^2)((d^2-4)/d)(e_j + e_k) - (12/d^2) D, as stated in the
    # product-identity list; evaluated exactly as written
    worst = {d: max(printed_eD_residuals(generate_basis(d)).values()) for d in (3, 4, 5)}
    print(f"max residual per d: {worst}")
    assert max(worst.values()) < 1e-11, worst


# 4 -----------------------------------------------------------------------------

def test_criterion_4_logical_gate_action():
    basis = generate_basis(3)
    enc = octet_states()
    rng = np.random.default_rng(4)
    gauge = rng.normal(size=8) + 1j * rng.normal(size=8)
    zero, one = encode(1, 0, gauge).vector, encode(0, 1, gauge).vector
    # a state with weight outside the code space to watch the complement
    probe = zero + 0.5 * enc.singlet[0] + 0.3 * enc.decuplet[4] - 0.2j * enc.decuplet[9]
    probe /= np.linalg.norm(probe)
    comp = enc.complement
    before = np.abs(comp.conj() @ probe) ** 2
    worst_gate = worst_comp = 0.0
    for t in np.linspace(-np.pi, np.pi, 20):
        ux, uz = u_x(basis, t), u_z(basis, t)
        worst_gate = max(
            worst_gate,
            np.abs(ux @ zero - (np.cos(t) * zero + 1j * np.sin(t) * one)).max(),
            np.abs(uz @ zero - np.exp(-1j * t) * zero).max(),
            np.abs(uz @ one - np.exp(1j * t) * one).max(),
        )
        for u in (ux, uz):
            worst_comp = max(worst_comp, np.abs(np.abs(comp.conj() @ (u @ probe)) ** 2 - before).max())
    print(f"gate error {worst_gate:.2e}, complement drift {worst_comp:.2e}")
    assert worst_gate < 1e-10
    assert worst_comp < 1e-11


# 5 -----------------------------------------------------------------------------

@pytest.mark.parametrize("d", [3, 4])
def test_criterion_5_analytic_exponentials(d):
    basis = generate_basis(d)
    x, z = xbar(basis), zbar(basis)
    diag_sum = sum(np.kron(basis[i], basis[i]) for i in basis.diagonal_indices)
    k = offdiagonal_half_sum(d)
    exch = two_site_exchange(basis)
    worst = 0.0
    for t in np.random.default_rng(d).uniform(-2 * np.pi, 2 * np.pi, 10):
        pairs = [
            (u_x(basis, t), expm_hermitian(x, -t)),
            (u_z(basis, t), expm_hermitian(z, t)),
            (diagonal_exponential(d, t), expm_hermitian(diag_sum, t)),
            (k_exponential(d, t), expm_hermitian(k, t)),
            (two_site_exchange_unitary(d, t), expm_hermitian(exch, t)),
        ]
        pairs += [(u_kl(d, a, b, t), expm_hermitian(2 * q_kl(d, a, b), t))
                  for a, b in itertools.combinations(range(d), 2)]
        worst = max(worst, max(np.abs(p - q).max() for p, q in pairs))
    print(f"d={d}: worst deviation {worst:.2e}")
    assert worst < 1e-10


# 6 -----------------------------------------------------------------------------

@pytest.mark.parametrize("d", [3, 4, 5])
def test_criterion_6_swap(d):
    u = two_site_exchange_unitary(d, np.pi / 4)
    phase = -1j * np.exp(1j * np.pi / (2 * d))
    worst = 0.0
    for a, b in itertools.product(range(d), repeat=2):
        src = np.zeros(d * d)
        src[a * d + b] = 1
        dst = np.zeros(d * d, dtype=complex)
        dst[b * d + a] = phase
        worst = max(worst, np.abs(u @ src - dst).max())
    # the generic exponential, not just the closed form, must be SWAP too
    generic = expm_hermitian(two_site_exchange(generate_basis(d)), np.pi / 4)
    worst = max(worst, np.abs(generic - u).max())
    assert worst < 1e-10
    diag = swap_diagnostics(generate_basis(d))
    assert np.abs(diag.xi - xi_analytic(d)).max() < 1e-12
    assert np.allclose(np.diag(diag.xi), 2 * (d - 1) / d, atol=1e-12, rtol=0)
    off = diag.xi[~np.eye(d, dtype=bool)]
    assert np.abs(off + 2 / d).max() < 1e-12


# 7 -----------------------------------------------------------------------------

def test_criterion_7_block_structure():
    basis = generate_basis(3)
    enc = octet_states()
    for s in collective_generators(basis, 3):
        rep = block_report(s, enc)
        assert rep.cross_max < 1e-11
        assert rep.within_mismatch < 1e-11


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_criterion_7_collective_trajectories(seed):
    rng = np.random.default_rng(100 + seed)
    a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
    state = encode(a, b, rng.normal(size=8) + 1j * rng.normal(size=8))
    traj = run_trajectory(state, 100, seed)
    print(f"seed {seed}: leak {traj.max_leak():.2e}, drift {traj.max_population_drift():.2e}")
    assert traj.max_leak() < 1e-10
    assert traj.max_population_drift() < 1e-10


def test_criterion_7_control_leaks():
    state = encode(0.6, 0.8j, np.ones(8))
    traj = run_trajectory(state, 100, 0, control_step=50)
    leak = traj.record[50].leak
    print(f"control leak {leak:.4f}")
    assert leak > 0.01


# 8 -----------------------------------------------------------------------------

def test_criterion_8_n_qudit_sweep():
    start = time.perf_counter()
    for d, n in ((3, 3), (3, 4), (3, 5), (4, 3)):
        rep = verify_n_qudit_compat(generate_basis(d), n, 1e-11)
        print(f"d={d} n={n}: max {rep.max_residual():.2e} over {len(rep.residuals)} terms")
        assert rep.passed
    assert time.perf_counter() - start < 180


# 9 -----------------------------------------------------------------------------

def test_criterion_9_su2_closure():
    basis = generate_basis(3)
    x, y, z = xbar(basis), ybar(basis), zbar(basis)
    assert np.abs(commutator(z, x) - 2j * y).max() < 1e-11
    assert np.abs(commutator(x, y) - 2j * z).max() < 1e-11
    assert np.abs(commutator(y, z) - 2j * x).max() < 1e-11


@pytest.mark.parametrize("d,want", [(3, [1, 8, 8, 10]), (2, [2, 2, 4])])
def test_criterion_9_casimir_dims(d, want):
    blocks = casimir_decompose(generate_basis(d), 3)
    dims = sorted(dim for blk in blocks for dim in blk.block_dims)
    assert dims == want
