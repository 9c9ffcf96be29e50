"""Generalized Gell-Mann bases for SU(d) and their structure tensors.

Index convention: generators are labelled ``1 .. d**2 - 1`` and label ``0``
is reserved for the d x d identity, so ``basis.matrices[i - 1]`` is
:math:`\\lambda_i`. Computational kets are 0-based (``|0>, |1>, ...``).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

#: entries with magnitude below this are treated as exact zeros
ZERO_CUTOFF = 1e-13


@dataclass(frozen=True, eq=False)
class GellMannBasis:
    """Ordered traceless Hermitian basis with ``Tr(l_i l_j) = 2 delta_ij``."""

    dim: int
    matrices: tuple[np.ndarray, ...]
    diagonal_indices: tuple[int, ...]

    @property
    def size(self) -> int:
        """Number of generators, ``d**2 - 1``."""
        return len(self.matrices)

    def __getitem__(self, label: int) -> np.ndarray:
        if label == 0:
            return np.eye(self.dim, dtype=complex)
        if not 1 <= label <= self.size:
            raise IndexError(f"basis label {label} outside 0..{self.size}")
        return self.matrices[label - 1]

    @cached_property
    def stack(self) -> np.ndarray:
        """All ``d**2`` matrices as a ``(d**2, d, d)`` array, identity at 0."""
        out = np.empty((self.size + 1, self.dim, self.dim), dtype=complex)
        out[0] = np.eye(self.dim)
        out[1:] = self.matrices
        out.setflags(write=False)
        return out

    @cached_property
    def offdiagonal_indices(self) -> tuple[int, ...]:
        diag = set(self.diagonal_indices)
        return tuple(i for i in range(1, self.size + 1) if i not in diag)

    def check(self, tol: float = 1e-12) -> None:
        """Raise ``ValueError`` if the basis invariants are violated."""
        for i, m in enumerate(self.matrices, start=1):
            if np.abs(m - m.conj().T).max() > 1e-14:
                raise ValueError(f"lambda_{i} is not Hermitian")
            if abs(np.trace(m)) > 1e-14:
                raise ValueError(f"lambda_{i} is not traceless")
        gram = np.einsum("aij,bji->ab", self.stack[1:], self.stack[1:])
        if np.abs(gram - 2 * np.eye(self.size)).max() > tol:
            raise ValueError("basis is not trace-orthonormal (Tr = 2 delta)")
        if len(self.diagonal_indices) != self.dim - 1:
            raise ValueError("wrong number of diagonal generators")
        for i in self.diagonal_indices:
            m = self[i]
            if np.count_nonzero(m - np.diag(np.diag(m))):
                raise ValueError(f"lambda_{i} listed as diagonal but is not")


def diagonal_generator(d: int, l: int) -> np.ndarray:
    """The diagonal generator of sub-dimension ``l`` embedded in d x d.

    ``sqrt(2 / (l (l - 1))) * diag(1, ..., 1, -(l - 1), 0, ..., 0)`` with
    ``l - 1`` ones.
    """
    if not 2 <= l <= d:
        raise ValueError(f"need 2 <= l <= d, got l={l}, d={d}")
    entries = np.zeros(d)
    entries[: l - 1] = 1.0
    entries[l - 1] = -(l - 1)
    return np.sqrt(2.0 / (l * (l - 1))) * np.diag(entries).astype(complex)


def generate_basis(d: int) -> GellMannBasis:
    """Build the canonical generalized Gell-Mann basis of SU(d).

    For ``l = 2..d`` and ``k = 1..l-1`` the symmetric and antisymmetric
    generators on levels ``(k, l)`` are emitted, followed by the diagonal
    generator of sub-dimension ``l``. For d = 3 this is the standard
    ``lambda_1 .. lambda_8`` ordering and the diagonal labels are
    ``l**2 - 1``.
    """
    if not isinstance(d, (int, np.integer)) or isinstance(d, bool):
        raise TypeError("d must be an integer")
    if d < 2:
        raise ValueError(f"SU(d) basis needs d >= 2, got {d}")
    mats: list[np.ndarray] = []
    diag: list[int] = []
    for l in range(2, d + 1):
        for k in range(1, l):
            sym = np.zeros((d, d), dtype=complex)
            sym[k - 1, l - 1] = sym[l - 1, k - 1] = 1.0
            anti = np.zeros((d, d), dtype=complex)
            anti[k - 1, l - 1] = -1j
            anti[l - 1, k - 1] = 1j
            mats += [sym, anti]
        mats.append(diagonal_generator(d, l))
        diag.append(len(mats))
    for m in mats:
        m.setflags(write=False)
    return GellMannBasis(dim=int(d), matrices=tuple(mats), diagonal_indices=tuple(diag))


def _canonical(i: int, j: int, k: int) -> tuple[tuple[int, int, int], int]:
    """Sorted triple and the sign of the permutation that sorts it."""
    triple = (i, j, k)
    order = sorted(range(3), key=triple.__getitem__)
    inversions = sum(order[a] > order[b] for a in range(3) for b in range(a + 1, 3))
    return tuple(triple[o] for o in order), (-1 if inversions % 2 else 1)


@dataclass(frozen=True, eq=False)
class StructureTensors:
    """Totally antisymmetric ``f`` and totally symmetric ``d`` tensors.

    Only sorted index triples are stored; :meth:`f_value` and
    :meth:`d_value` apply the permutation rules.
    """

    dim: int
    f: dict[tuple[int, int, int], float]
    dsym: dict[tuple[int, int, int], float]
    diagonal_indices: tuple[int, ...] = field(default=())

    @property
    def size(self) -> int:
        return self.dim**2 - 1

    def f_value(self, i: int, j: int, k: int) -> float:
        key, sign = _canonical(i, j, k)
        if key[0] == key[1] or key[1] == key[2]:
            return 0.0
        return sign * self.f.get(key, 0.0)

    def d_value(self, i: int, j: int, k: int) -> float:
        key, _ = _canonical(i, j, k)
        return self.dsym.get(key, 0.0)

    def _expand(self, table, antisymmetric: bool) -> np.ndarray:
        n = self.size + 1
        out = np.zeros((n, n, n))
        for key, value in table.items():
            for perm in itertools.permutations(range(3)):
                idx = tuple(key[p] for p in perm)
                sign = _canonical(*perm)[1] if antisymmetric else 1
                out[idx] = sign * value
        out.setflags(write=False)
        return out

    @cached_property
    def f_dense(self) -> np.ndarray:
        """Dense ``(N+1)**3`` array of f; slot 0 (identity) is all zero."""
        return self._expand(self.f, antisymmetric=True)

    @cached_property
    def d_dense(self) -> np.ndarray:
        """Dense ``(N+1)**3`` array of the symmetric tensor."""
        return self._expand(self.dsym, antisymmetric=False)


def structure_constants(basis: GellMannBasis) -> StructureTensors:
    """Compute f and d from traces.

    ``f_ijk = -(i/4) Tr([l_i, l_j] l_k)`` and
    ``d_ijk = (1/4) Tr({l_i, l_j} l_k)``.

    Raises
    ------
    ValueError
        if any trace has an imaginary part of 1e-12 or more, which only
        happens for a basis that is not Hermitian.
    """
    lam = np.asarray(basis.matrices)
    prod = np.einsum("iab,jbc->ijac", lam, lam)
    comm = prod - prod.transpose(1, 0, 2, 3)
    anti = prod + prod.transpose(1, 0, 2, 3)
    f_full = -0.25j * np.einsum("ijab,kba->ijk", comm, lam)
    d_full = 0.25 * np.einsum("ijab,kba->ijk", anti, lam)
    worst = max(np.abs(f_full.imag).max(), np.abs(d_full.imag).max())
    if worst >= 1e-12:
        raise ValueError(f"structure constants not real (imag residue {worst:.2e})")
    f_full, d_full = f_full.real, d_full.real

    n = basis.size
    f: dict[tuple[int, int, int], float] = {}
    dsym: dict[tuple[int, int, int], float] = {}
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                key = (i + 1, j + 1, k + 1)
                fv, dv = f_full[i, j, k], d_full[i, j, k]
                if abs(fv) >= ZERO_CUTOFF:
                    f[key] = float(fv)
                if abs(dv) >= ZERO_CUTOFF:
                    dsym[key] = float(dv)
    return StructureTensors(dim=basis.dim, f=f, dsym=dsym,
                            diagonal_indices=basis.diagonal_indices)


@dataclass
class IdentityReport:
    residuals: dict[str, float]
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(r <= self.tolerance for r in self.residuals.values())

    def failures(self) -> list[str]:
        return [k for k, r in self.residuals.items() if r > self.tolerance]


def _cyclic(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """``a_piq b_qjr c_rkp`` as two BLAS-backed contractions."""
    x = np.tensordot(a, b, axes=([2], [0]))           # p i j r
    return np.tensordot(x, c, axes=([3, 0], [0, 2]))  # i j k


def _identity_residuals(t: StructureTensors, basis: GellMannBasis | None) -> dict[str, float]:
    d = t.dim
    # drop the identity slot so every contraction runs over generators only
    f = t.f_dense[1:, 1:, 1:]
    g = t.d_dense[1:, 1:, 1:]
    delta = np.eye(t.size)
    ein = lambda spec, *ops: np.einsum(spec, *ops, optimize=True)  # noqa: E731

    res: dict[str, float] = {}
    res["jacobi"] = np.abs(ein("ilm,jkl->ijkm", f, f) + ein("jlm,kil->ijkm", f, f)
                           + ein("klm,ijl->ijkm", f, f)).max()
    res["jacobi_like"] = np.abs(ein("ilm,jkl->ijkm", f, g) + ein("jlm,kil->ijkm", f, g)
                                + ein("klm,ijl->ijkm", f, g)).max()
    res["d_iik=0"] = np.abs(ein("iik->k", g)).max()
    res["d_ijk f_ljk=0"] = np.abs(ein("ijk,ljk->il", g, f)).max()
    res["f_ijk f_ljk=d delta"] = np.abs(ein("ijk,ljk->il", f, f) - d * delta).max()
    res["d_ijk d_ljk=(d^2-4)/d delta"] = np.abs(
        ein("ijk,ljk->il", g, g) - (d * d - 4) / d * delta).max()
    dd = ein("ik,jl->ijkl", delta, delta) - ein("il,jk->ijkl", delta, delta)
    res["f_ijm f_klm expansion"] = np.abs(
        ein("ijm,klm->ijkl", f, f) - (2 / d) * dd
        - (ein("ikm,jlm->ijkl", g, g) - ein("jkm,ilm->ijkl", g, g))).max()
    res["fff=-(d/2)f"] = np.abs(_cyclic(f, f, f) + d / 2 * f).max()
    res["dff=-(d/2)d"] = np.abs(_cyclic(g, f, f) + d / 2 * g).max()
    res["ddf=(d^2-4)/(2d)f"] = np.abs(
        _cyclic(g, g, f) - (d * d - 4) / (2 * d) * f).max()
    res["ddd=(d^2-12)/(2d)d"] = np.abs(
        _cyclic(g, g, g) - (d * d - 12) / (2 * d) * g).max()
    diag = [i - 1 for i in t.diagonal_indices]
    if diag:
        res["sum_diag d_iil=0"] = np.abs(g[diag, diag, :].sum(axis=0)).max()
    if basis is not None:
        lam = basis.stack[1:]
        lhs = ein("iab,jbc->ijac", lam, lam)
        rhs = ((2 / d) * ein("ij,ac->ijac", delta, np.eye(d))
               + ein("ijk,kac->ijac", 1j * f + g, lam))
        res["product expansion"] = np.abs(lhs - rhs).max()
    return {k: float(v) for k, v in res.items()}


def verify_algebra_identities(tensors: StructureTensors, tolerance: float = 1e-11,
                              basis: GellMannBasis | None = None) -> IdentityReport:
    """Evaluate every f/d identity and report the worst residual of each.

    Failures are reported, not raised. Passing ``basis`` adds the check that
    ``l_i l_j`` is rebuilt from delta, f and d.
    """
    return IdentityReport(residuals=_identity_residuals(tensors, basis),
                          tolerance=tolerance)


def basis_to_json(basis: GellMannBasis) -> dict:
    return {
        "d": basis.dim,
        "matrices": [[[[float(z.real), float(z.imag)] for z in row] for row in m]
                     for m in basis.matrices],
        "diagonal_indices": list(basis.diagonal_indices),
    }


def basis_from_json(data: dict) -> GellMannBasis:
    mats = []
    for m in data["matrices"]:
        arr = np.array([[complex(re, im) for re, im in row] for row in m])
        arr.setflags(write=False)
        mats.append(arr)
    basis = GellMannBasis(dim=int(data["d"]), matrices=tuple(mats),
                          diagonal_indices=tuple(data["diagonal_indices"]))
    basis.check()
    return basis


def tensors_to_json(tensors: StructureTensors) -> dict:
    return {
        "d": tensors.dim,
        "f": [[*key, value] for key, value in sorted(tensors.f.items())],
        "dsym": [[*key, value] for key, value in sorted(tensors.dsym.items())],
    }
