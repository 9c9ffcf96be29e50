"""Dense operator helpers: tensor products, mu-basis operators, exponentials.

Operators are plain complex ``numpy`` arrays. Multi-qudit coefficient
tensors use the mu-basis ``mu_(i1..in) = l_i1 (x) ... (x) l_in`` with label
0 standing for the identity.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

import numpy as np

from .algebra import GellMannBasis

DEFAULT_TOL = 1e-10


def kron(factors: Sequence[np.ndarray]) -> np.ndarray:
    """Left-to-right Kronecker product of a nonempty list of matrices."""
    if len(factors) == 0:
        raise ValueError("kron needs at least one factor")
    return reduce(np.kron, (np.asarray(f) for f in factors))


def mu(basis: GellMannBasis, indices: Sequence[int]) -> np.ndarray:
    """``l_i1 (x) l_i2 (x) ...`` where label 0 is the identity."""
    for i in indices:
        if not 0 <= i <= basis.size:
            raise IndexError(f"basis label {i} outside 0..{basis.size}")
    return kron([basis[i] for i in indices])


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b - b @ a


def is_hermitian(a: np.ndarray, tol: float = 1e-12) -> bool:
    return a.shape[0] == a.shape[1] and np.abs(a - a.conj().T).max() <= tol


def is_unitary(u: np.ndarray, tol: float = 1e-11) -> bool:
    return np.abs(u.conj().T @ u - np.eye(u.shape[0])).max() <= tol


def expm_hermitian(h: np.ndarray, t: float = 1.0, *, tol: float = DEFAULT_TOL) -> np.ndarray:
    """``exp(-i h t)`` for Hermitian ``h`` via its eigendecomposition."""
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("expected a square matrix")
    if np.abs(h - h.conj().T).max() > tol:
        raise ValueError("expm_hermitian needs a Hermitian operator")
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    return (v * np.exp(-1j * t * w)) @ v.conj().T


def haar_unitary(d: int, seed: int) -> np.ndarray:
    """Haar-random U(d) matrix from the QR decomposition of a Ginibre matrix.

    The phases of ``diag(R)`` are folded back into ``Q`` so the result is
    Haar distributed rather than biased by the QR sign convention.
    """
    if d < 1:
        raise ValueError("d must be positive")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph


def embed(op: np.ndarray, sites: Sequence[int], d: int, n: int) -> np.ndarray:
    """Place a ``k``-site operator on ``sites`` of an ``n``-qudit register.

    ``op`` acts on the tensor factors in the order given by ``sites``;
    identities fill every other site.
    """
    k = len(sites)
    if len(set(sites)) != k or any(not 0 <= s < n for s in sites):
        raise ValueError(f"invalid sites {tuple(sites)} for n={n}")
    if op.shape != (d**k, d**k):
        raise ValueError(f"operator shape {op.shape} does not match {k} qudits of dim {d}")
    rest = [s for s in range(n) if s not in sites]
    full = np.kron(op, np.eye(d ** (n - k)))
    order = list(sites) + rest
    # axes of `full` are ordered (sites..., rest...); move them to 0..n-1
    perm = np.argsort(order)
    t = full.reshape((d,) * (2 * n))
    t = t.transpose(list(perm) + [n + p for p in perm])
    return t.reshape(d**n, d**n)


def site_operator(a: np.ndarray, site: int, n: int) -> np.ndarray:
    d = a.shape[0]
    return kron([a if r == site else np.eye(d) for r in range(n)])


@dataclass
class CoeffTensor:
    """Real coefficients of an n-qudit operator in the mu-basis.

    ``coeffs`` is a dense array of shape ``(d**2,) * n``; entry
    ``coeffs[i1, ..., in]`` multiplies ``mu_(i1..in)``.
    """

    d: int
    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs)
        if self.coeffs.shape != (self.d**2,) * self.n:
            raise ValueError(f"coefficient shape {self.coeffs.shape} does not match d={self.d}, n={self.n}")

    @classmethod
    def from_vector(cls, d: int, n: int, vec: np.ndarray) -> "CoeffTensor":
        return cls(d, n, np.asarray(vec).reshape((d**2,) * n))

    @property
    def vector(self) -> np.ndarray:
        return self.coeffs.reshape(-1)

    def items(self, cutoff: float = 1e-13):
        """Nonzero ``(index_tuple, value)`` pairs in lexicographic order."""
        for idx in zip(*np.nonzero(np.abs(self.coeffs) >= cutoff)):
            yield tuple(int(i) for i in idx), float(self.coeffs[idx])

    def to_operator(self, basis: GellMannBasis) -> np.ndarray:
        return reconstruct(self, basis)


def _mu_norms(d: int, n: int) -> np.ndarray:
    """``Tr(mu_b mu_b)`` for every index tuple ``b``."""
    per_site = np.full(d * d, 2.0)
    per_site[0] = d
    return reduce(np.multiply.outer, [per_site] * n)


def _letters(n: int, offset: int) -> list[str]:
    return [chr(ord("a") + offset + r) for r in range(n)]


def coeff_expand(h: np.ndarray, basis: GellMannBasis, n: int) -> CoeffTensor:
    """Project ``h`` onto the mu-basis: ``a_b = Tr(h mu_b) / Tr(mu_b mu_b)``.

    Real parts are kept; for Hermitian ``h`` the imaginary parts are zero.
    """
    d = basis.dim
    if h.shape != (d**n, d**n):
        raise ValueError(f"operator shape {h.shape} is not ({d}**{n}, {d}**{n})")
    if n > 8:
        raise ValueError("coeff_expand supports at most 8 sites")
    rows, cols, labels = _letters(n, 0), _letters(n, 8), _letters(n, 16)
    ops = [h.reshape((d,) * (2 * n))]
    subs = ["".join(rows + cols)]
    for r in range(n):
        ops.append(basis.stack)
        subs.append(labels[r] + cols[r] + rows[r])
    spec = ",".join(subs) + "->" + "".join(labels)
    traces = np.einsum(spec, *ops, optimize=True)
    return CoeffTensor(d, n, (traces / _mu_norms(d, n)).real)


def reconstruct(c: CoeffTensor, basis: GellMannBasis) -> np.ndarray:
    """``sum_b a_b mu_b`` as a dense ``d**n x d**n`` matrix."""
    d, n = c.d, c.n
    if basis.dim != d:
        raise ValueError("basis dimension does not match the coefficient tensor")
    rows, cols, labels = _letters(n, 0), _letters(n, 8), _letters(n, 16)
    ops = [c.coeffs.astype(complex)]
    subs = ["".join(labels)]
    for r in range(n):
        ops.append(basis.stack)
        subs.append(labels[r] + rows[r] + cols[r])
    spec = ",".join(subs) + "->" + "".join(rows + cols)
    return np.einsum(spec, *ops, optimize=True).reshape(d**n, d**n)
