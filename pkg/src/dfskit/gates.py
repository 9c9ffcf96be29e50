"""Exchange Hamiltonians, logical Pauli operators and their closed-form unitaries.

Sign conventions
----------------
``u_x(t)`` is ``I + i X sin t - X^2 (1 - cos t)``, i.e. ``exp(+i X t)``, so
that ``u_x(t)|0_L> = cos t |0_L> + i sin t |1_L>``. ``u_z(t)`` and
:func:`euler` use ``exp(-i H t)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import GellMannBasis, StructureTensors, structure_constants
from .operators import commutator, embed, expm_hermitian
from .search import known_hamiltonians

SQRT3 = np.sqrt(3.0)


def _check_sites(sites, n):
    if len(set(sites)) != len(sites) or any(not 0 <= s < n for s in sites):
        raise ValueError(f"invalid sites {tuple(sites)} for n={n}")


def two_site_exchange(basis: GellMannBasis) -> np.ndarray:
    """``sum_s l_s (x) l_s`` on two qudits."""
    return sum(np.kron(lam, lam) for lam in basis.matrices)


def exchange_hamiltonian(basis: GellMannBasis, p: int, q: int, n: int) -> np.ndarray:
    """``e_pq = sum_i l_i^(p) l_i^(q)`` with identities on the other sites."""
    _check_sites((p, q), n)
    return embed(two_site_exchange(basis), (p, q), basis.dim, n)


def _three_site(basis: GellMannBasis, table: np.ndarray) -> np.ndarray:
    lam = basis.stack
    d = basis.dim
    out = np.einsum("ijk,iab,jce,kfg->acfbeg", table, lam, lam, lam, optimize=True)
    return out.reshape(d**3, d**3)


def f_triple(basis: GellMannBasis, p: int, q: int, r: int, n: int,
             tensors: StructureTensors | None = None) -> np.ndarray:
    """``sum f_ijk l_i^(p) l_j^(q) l_k^(r)``."""
    _check_sites((p, q, r), n)
    tensors = tensors or structure_constants(basis)
    return embed(_three_site(basis, tensors.f_dense), (p, q, r), basis.dim, n)


def d_triple(basis: GellMannBasis, p: int, q: int, r: int, n: int,
             tensors: StructureTensors | None = None) -> np.ndarray:
    """``sum d_ijk l_i^(p) l_j^(q) l_k^(r)``."""
    _check_sites((p, q, r), n)
    tensors = tensors or structure_constants(basis)
    return embed(_three_site(basis, tensors.d_dense), (p, q, r), basis.dim, n)


def xbar(basis: GellMannBasis) -> np.ndarray:
    """Logical X on three qudits, ``(e1 - e2) / (2 sqrt 3)``."""
    h = known_hamiltonians(basis)
    return (h["e1"] - h["e2"]) / (2 * SQRT3)


def zbar(basis: GellMannBasis) -> np.ndarray:
    """Logical Z on three qudits, ``(e1 + e2 - 2 e3) / 6``."""
    h = known_hamiltonians(basis)
    return (h["e1"] + h["e2"] - 2 * h["e3"]) / 6


def ybar(basis: GellMannBasis) -> np.ndarray:
    """``F / (2 sqrt 3)``, normalized so that ``[Z, X] = 2i Y``."""
    return known_hamiltonians(basis)["F"] / (2 * SQRT3)


def _cubic_exp(op: np.ndarray, t: float, sign: int) -> np.ndarray:
    """``exp(sign * i * op * t)`` for an operator with ``op**3 == op``."""
    eye = np.eye(op.shape[0])
    return eye + sign * 1j * op * np.sin(t) - (op @ op) * (1 - np.cos(t))


def u_x(basis: GellMannBasis, t: float) -> np.ndarray:
    """``I + i X sin t - X^2 (1 - cos t)``."""
    return _cubic_exp(xbar(basis), t, +1)


def u_z(basis: GellMannBasis, t: float) -> np.ndarray:
    """``I - i Z sin t - Z^2 (1 - cos t)``."""
    return _cubic_exp(zbar(basis), t, -1)


def euler(basis: GellMannBasis, alpha: float, beta: float, gamma: float) -> np.ndarray:
    """``exp(-i Z alpha) exp(-i X beta) exp(-i Z gamma)``."""
    z, x = zbar(basis), xbar(basis)
    return expm_hermitian(z, alpha) @ expm_hermitian(x, beta) @ expm_hermitian(z, gamma)


# --- two-qudit exchange unitary -------------------------------------------------

def _outer(d: int, k: int, l: int) -> np.ndarray:
    e = np.zeros((d, d))
    e[k, l] = 1.0
    return e


def q_kl(d: int, k: int, l: int) -> np.ndarray:
    """``|k><l| (x) |l><k| + |l><k| (x) |k><l|``."""
    return np.kron(_outer(d, k, l), _outer(d, l, k)) + np.kron(_outer(d, l, k), _outer(d, k, l))


def r_kl(d: int, k: int, l: int) -> np.ndarray:
    """``|k><k| (x) |l><l| + |l><l| (x) |k><k|``."""
    return np.kron(_outer(d, k, k), _outer(d, l, l)) + np.kron(_outer(d, l, l), _outer(d, k, k))


def u_kl(d: int, k: int, l: int, t: float) -> np.ndarray:
    """``exp(-i t M_kl) = I - i Q sin 2t + R (cos 2t - 1)`` with ``M = 2Q``."""
    return np.eye(d * d) - 1j * q_kl(d, k, l) * np.sin(2 * t) + r_kl(d, k, l) * (np.cos(2 * t) - 1)


def offdiagonal_half_sum(d: int) -> np.ndarray:
    """``K = sum_(k<l) Q_kl``, half the off-diagonal exchange terms."""
    return sum((q_kl(d, k, l) for k, l in itertools.combinations(range(d), 2)),
               np.zeros((d * d, d * d)))


def k_exponential(d: int, t: float) -> np.ndarray:
    """``exp(-i t K) = (I - K^2) + K^2 cos t - i K sin t``."""
    k = offdiagonal_half_sum(d)
    k2 = k @ k
    return (np.eye(d * d) - k2) + k2 * np.cos(t) - 1j * k * np.sin(t)


def xi_analytic(d: int) -> np.ndarray:
    """``xi_mm = 2(d-1)/d`` and ``xi_mn = -2/d``."""
    return np.full((d, d), -2.0 / d) + np.eye(d) * 2.0


def diagonal_exponential(d: int, t: float) -> np.ndarray:
    """``exp(-i t sum_(diag) l_i (x) l_i)`` from the closed-form xi."""
    return np.diag(np.exp(-1j * t * xi_analytic(d).reshape(-1)))


def two_site_exchange_unitary(d: int, t: float) -> np.ndarray:
    """``exp(-i t sum_s l_s (x) l_s)`` from the commuting factors.

    The diagonal part comes first, then ``U_kl`` in lexicographic ``(k, l)``
    order; every factor commutes with every other one.
    """
    u = diagonal_exponential(d, t)
    for k, l in itertools.combinations(range(d), 2):
        u = u @ u_kl(d, k, l, t)
    return u


def exchange_unitary(basis: GellMannBasis, p: int, q: int, n: int, t: float) -> np.ndarray:
    """Closed-form ``exp(-i t e_pq)`` on an ``n``-qudit register."""
    _check_sites((p, q), n)
    return embed(two_site_exchange_unitary(basis.dim, t), (p, q), basis.dim, n)


def swap_phase(d: int) -> complex:
    """Global phase of the exchange unitary at ``t = pi/4``: ``-i exp(i pi / 2d)``."""
    return -1j * np.exp(1j * np.pi / (2 * d))


def swap_operator(d: int) -> np.ndarray:
    """Plain two-qudit SWAP, ``|ab> -> |ba>``."""
    s = np.zeros((d * d, d * d))
    for a, b in itertools.product(range(d), repeat=2):
        s[b * d + a, a * d + b] = 1.0
    return s


@dataclass
class SwapDiagnostics:
    d: int
    K: np.ndarray
    ksq_diagonal: np.ndarray
    xi: np.ndarray
    phase: complex
    k_cubed_residual: float
    ksq_offdiag: float


def swap_diagnostics(basis: GellMannBasis) -> SwapDiagnostics:
    """Numerical K, its square, the xi matrix and the SWAP phase.

    ``xi`` is read off the diagonal of ``sum_(diag) l_i (x) l_i`` built from
    the basis itself; the phase is the common entry of the numerically
    exponentiated exchange at ``t = pi/4``.
    """
    d = basis.dim
    k = offdiagonal_half_sum(d)
    k2 = k @ k
    diag_sum = sum(np.kron(basis[i], basis[i]) for i in basis.diagonal_indices)
    xi = np.real(np.diag(diag_sum)).reshape(d, d)
    u = expm_hermitian(two_site_exchange(basis), np.pi / 4)
    ratio = u @ swap_operator(d).T
    phase = complex(ratio[0, 0])
    return SwapDiagnostics(
        d=d, K=k, ksq_diagonal=np.real(np.diag(k2)), xi=xi, phase=phase,
        k_cubed_residual=float(np.abs(k2 @ k - k).max()),
        ksq_offdiag=float(np.abs(k2 - np.diag(np.diag(k2))).max()),
    )


# --- algebraic relations ---------------------------------------------------------

def commutation_table(basis: GellMannBasis) -> dict[str, float]:
    """Residuals of the e/F/D commutators and product identities (n = 3).

    ``e_i D`` is checked as ``(2(d^2-4)/d^2)(e_j + e_k) - (6/d) D``; the
    entry ``eD (printed coefficients)`` evaluates the alternative
    ``(4/d^2)((d^2-4)/d)(e_j + e_k) - (12/d^2) D`` for comparison and is
    not part of the pass criterion.
    """
    d = basis.dim
    h = known_hamiltonians(basis)
    e1, e2, e3, f, dm = h["e1"], h["e2"], h["e3"], h["F"], h["D"]
    eye = np.eye(d**3)
    c = commutator
    res = {
        "[e1,e2]=-2iF": c(e1, e2) + 2j * f,
        "[e1,e3]=+2iF": c(e1, e3) - 2j * f,
        "[e2,e3]=-2iF": c(e2, e3) + 2j * f,
        "[e1,F]=4i(e2-e3)": c(e1, f) - 4j * (e2 - e3),
        "[e2,F]=4i(e3-e1)": c(e2, f) - 4j * (e3 - e1),
        "[e3,F]=4i(e1-e2)": c(e3, f) - 4j * (e1 - e2),
        "[e1,D]=0": c(e1, dm),
        "[e2,D]=0": c(e2, dm),
        "[e3,D]=0": c(e3, dm),
        "[F,D]=0": c(f, dm),
        "[e1-e2,F]=4i(e1+e2-2e3)": c(e1 - e2, f) - 4j * (e1 + e2 - 2 * e3),
        "[e1-e2,e1+e2-2e3]=-12iF": c(e1 - e2, e1 + e2 - 2 * e3) + 12j * f,
        "e1e2=(2/d)e3-iF+D": e1 @ e2 - (2 / d * e3 - 1j * f + dm),
        "e1e3=(2/d)e2+iF+D": e1 @ e3 - (2 / d * e2 + 1j * f + dm),
        "e2e3=(2/d)e1-iF+D": e2 @ e3 - (2 / d * e1 - 1j * f + dm),
    }
    es = {1: e1, 2: e2, 3: e3}
    for i, e in es.items():
        res[f"e{i}^2=(4/d^2)(d^2-1)I-(4/d)e{i}"] = e @ e - (4 / d**2 * (d**2 - 1) * eye - 4 / d * e)
        j, k = (x for x in es if x != i)
        res[f"e{i}D=(2(d^2-4)/d^2)(e{j}+e{k})-(6/d)D"] = (
            e @ dm - (2 * (d**2 - 4) / d**2 * (es[j] + es[k]) - 6 / d * dm))
    return {name: float(np.abs(r).max()) for name, r in res.items()}


def printed_eD_residuals(basis: GellMannBasis) -> dict[str, float]:
    """``e_i D - [(4/d^2)((d^2-4)/d)(e_j+e_k) - (12/d^2) D]`` for i = 1, 2, 3."""
    d = basis.dim
    h = known_hamiltonians(basis)
    es = {1: h["e1"], 2: h["e2"], 3: h["e3"]}
    dm = h["D"]
    out = {}
    for i, e in es.items():
        j, k = (x for x in es if x != i)
        rhs = (4 / d**2) * ((d**2 - 4) / d) * (es[j] + es[k]) - (12 / d**2) * dm
        out[f"e{i}D printed"] = float(np.abs(e @ dm - rhs).max())
    return out


def gate_matrix(basis: GellMannBasis, kind: str, t: float | None = None,
                sites: tuple[int, int] = (0, 1), n: int = 2) -> np.ndarray:
    """Unitary for a named gate; used by the command line front end.

    ``xbar``/``zbar``/``ybar`` act on three qudits. ``swap`` is the exchange
    unitary at ``t = pi/4`` unless ``t`` is given; ``exchange`` defaults to
    ``t = 0``.
    """
    if kind == "xbar":
        return u_x(basis, t or 0.0)
    if kind == "zbar":
        return u_z(basis, t or 0.0)
    if kind == "ybar":
        return expm_hermitian(ybar(basis), t or 0.0)
    if kind in ("swap", "exchange"):
        default = np.pi / 4 if kind == "swap" else 0.0
        return exchange_unitary(basis, sites[0], sites[1], n, default if t is None else t)
    raise ValueError(f"unknown gate kind {kind!r}")
