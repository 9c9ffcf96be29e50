"""Search for Hamiltonians that commute with every collective error.

The constraint ``[H, S_a] = 0`` is linear in the mu-basis coefficients of
``H``. Using ``[l_j, l_a] = 2i f_jak l_k`` slot by slot, the coefficient of
``mu_b`` in ``[H, S_a]`` is ``2i sum_r sum_j f_(j a b_r) a_(b | b_r -> j)``,
so the whole system is a sum of Kronecker products of small ``d**2 x d**2``
matrices and never needs a ``d**n x d**n`` commutator.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .algebra import GellMannBasis, StructureTensors, structure_constants
from .operators import CoeffTensor, commutator, reconstruct, site_operator

log = logging.getLogger(__name__)

KNOWN_NAMES = ("I", "e1", "e2", "e3", "F", "D")


def collective_generators(basis: GellMannBasis, n: int) -> list[np.ndarray]:
    """``S_a = sum_r l_a^(r)`` for ``a = 1 .. d**2 - 1``."""
    if n < 1:
        raise ValueError("need at least one site")
    return [sum(site_operator(lam, r, n) for r in range(n)) for lam in basis.matrices]


def known_coefficients(basis: GellMannBasis, tensors: StructureTensors | None = None
                       ) -> dict[str, CoeffTensor]:
    """Three-site coefficient tensors of I, e1, e2, e3, F and D."""
    d = basis.dim
    tensors = tensors or structure_constants(basis)
    m = d * d
    out = {name: np.zeros((m, m, m)) for name in KNOWN_NAMES}
    out["I"][0, 0, 0] = 1.0
    gens = np.arange(1, m)
    out["e1"][0, gens, gens] = 1.0
    out["e2"][gens, 0, gens] = 1.0
    out["e3"][gens, gens, 0] = 1.0
    out["F"] = np.array(tensors.f_dense)
    out["D"] = np.array(tensors.d_dense)
    return {name: CoeffTensor(d, 3, c) for name, c in out.items()}


def known_coefficients_n(basis: GellMannBasis, n: int,
                         tensors: StructureTensors | None = None) -> dict[str, CoeffTensor]:
    """Identity, every ``e_pq`` and every ``F_pqr``/``D_pqr`` on ``n`` sites.

    Names follow the site labels, e.g. ``e_02`` or ``F_013`` (0-based).
    """
    import itertools

    d = basis.dim
    m = d * d
    three = known_coefficients(basis, tensors)
    out = {}
    ident = np.zeros((m,) * n)
    ident[(0,) * n] = 1.0
    out["I"] = ident

    def place(small: np.ndarray, sites) -> np.ndarray:
        # small is indexed by the listed sites; every other slot is the identity
        full = np.zeros((m,) * n)
        idx = [0] * n
        for key in zip(*np.nonzero(small)):
            for s, k in zip(sites, key):
                idx[s] = k
            full[tuple(idx)] = small[key]
        return full

    pair = three["e3"].coeffs[:, :, 0]
    for p, q in itertools.combinations(range(n), 2):
        out[f"e_{p}{q}"] = place(pair, (p, q))
    for p, q, r in itertools.combinations(range(n), 3):
        out[f"F_{p}{q}{r}"] = place(three["F"].coeffs, (p, q, r))
        out[f"D_{p}{q}{r}"] = place(three["D"].coeffs, (p, q, r))
    return {name: CoeffTensor(d, n, c) for name, c in out.items()}


def known_hamiltonians(basis: GellMannBasis, tensors: StructureTensors | None = None
                       ) -> dict[str, np.ndarray]:
    """``e1, e2, e3, F, D`` on three qudits as dense matrices.

    For d = 2 the symmetric tensor vanishes, so ``D`` is the zero matrix.
    """
    coeffs = known_coefficients(basis, tensors)
    return {name: reconstruct(coeffs[name], basis) for name in KNOWN_NAMES if name != "I"}


@dataclass
class ConstraintSystem:
    """Stacked real rows ``A`` with ``A @ a = 0`` iff ``[H(a), S_alpha] = 0``.

    Rows are grouped by generator: block ``alpha`` holds the ``(d**2)**n``
    projections of ``[H, S_alpha] / 2i`` onto the mu-basis.
    """

    d: int
    n: int
    rows: sp.csr_matrix

    @property
    def n_coeffs(self) -> int:
        return (self.d**2) ** self.n

    def residual(self, coeffs: CoeffTensor | np.ndarray) -> float:
        vec = coeffs.vector if isinstance(coeffs, CoeffTensor) else np.asarray(coeffs).reshape(-1)
        if vec.size != self.n_coeffs:
            raise ValueError("coefficient vector has the wrong length")
        return float(np.abs(self.rows @ vec).max(initial=0.0))


def _slot_matrices(tensors: StructureTensors) -> np.ndarray:
    """``F_alpha[b, j] = f_(j alpha b)``, zero on the identity label."""
    f = tensors.f_dense
    return np.transpose(f, (1, 2, 0))[1:]


def build_constraint_system(basis: GellMannBasis, n: int = 3,
                            tensors: StructureTensors | None = None) -> ConstraintSystem:
    if n < 2:
        raise ValueError("the constraint system needs n >= 2 sites")
    tensors = tensors or structure_constants(basis)
    m = basis.dim**2
    eye = sp.identity(m, format="csr")
    blocks = []
    for fa in _slot_matrices(tensors):
        fa = sp.csr_matrix(fa)
        block = None
        for r in range(n):
            term = None
            for s in range(n):
                factor = fa if s == r else eye
                term = factor if term is None else sp.kron(term, factor, format="csr")
            block = term if block is None else block + term
        blocks.append(block)
    rows = sp.vstack(blocks, format="csr")
    rows.eliminate_zeros()
    return ConstraintSystem(basis.dim, n, rows)


@dataclass
class CommutantBasis:
    d: int
    n: int
    elements: list[CoeffTensor]
    singular_values: np.ndarray
    threshold: float
    spectral_gap: float
    includes_identity: bool = True
    warnings: list[str] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.elements)

    def matrix(self) -> np.ndarray:
        """Elements as rows of a ``(dim, n_coeffs)`` array."""
        return np.array([e.vector for e in self.elements]).reshape(self.dim, -1)


def modified_gram_schmidt(vectors: np.ndarray) -> np.ndarray:
    """Orthonormalize the rows of ``vectors`` in order."""
    out = []
    for v in np.array(vectors, dtype=float):
        for q in out:
            v = v - (q @ v) * q
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            out.append(v / norm)
    return np.array(out).reshape(len(out), vectors.shape[1])


def commutant_basis(system: ConstraintSystem, tolerance: float = 1e-9,
                    dense_limit: int = 1024) -> CommutantBasis:
    """Null space of the constraint rows by singular-value thresholding.

    Singular values below ``tolerance * sigma_max`` are treated as zero.
    Systems with more than ``dense_limit`` coefficients are reduced through
    the Gram matrix ``A^T A`` instead of a dense SVD of ``A``; there the
    threshold is applied to ``sigma**2 / sigma_max**2`` because the Gram
    eigenvalues only resolve ``sigma`` down to about ``sqrt(eps)``.

    A spectral gap (smallest kept singular value over largest discarded)
    below 1e3 is recorded in ``warnings`` rather than raised.
    """
    a = system.rows
    ncol = system.n_coeffs
    if ncol <= dense_limit:
        dense = a.toarray()
        # thin SVD still yields all right singular vectors when rows >= cols
        _, s, vt = np.linalg.svd(dense, full_matrices=dense.shape[0] < ncol)
        sv = np.zeros(ncol)
        sv[: s.size] = s
        smax = sv.max(initial=0.0)
        null = sv <= tolerance * smax
        range_sv, null_sv = sv[~null], sv[null]
        vecs = vt[null]
    else:
        log.info("dense SVD skipped: %d coefficients, using the Gram matrix", ncol)
        gram = (a.T @ a).toarray()
        w, v = scipy.linalg.eigh(gram)
        w = np.clip(w, 0.0, None)
        wmax = w.max(initial=0.0)
        null = w <= tolerance * wmax
        sv = np.sqrt(w)[::-1]
        range_sv, null_sv = np.sqrt(w[~null]), np.sqrt(w[null])
        vecs = v[:, null].T
    kept_min = range_sv.min(initial=np.inf)
    disc_max = null_sv.max(initial=0.0)
    gap = np.inf if disc_max == 0 else kept_min / disc_max
    warnings = []
    if gap < 1e3:
        warnings.append(f"ill-conditioned spectral gap: {gap:.3g}")
        log.warning("commutant search: %s", warnings[-1])
    vecs = modified_gram_schmidt(vecs)
    elements = [CoeffTensor.from_vector(system.d, system.n, v) for v in vecs]
    return CommutantBasis(system.d, system.n, elements, sv, tolerance * sv.max(initial=0.0),
                          float(gap), warnings=warnings)


def superoperator_nullity(generators: list[np.ndarray], tolerance: float = 1e-9) -> int:
    """Dimension of ``{H : [H, S] = 0 for all S}`` from the dense superoperator.

    Independent of the coefficient route: vectorizes ``H -> [H, S]`` as
    ``I (x) S^T - S (x) I`` (row-major) and counts small singular values.
    """
    dim = generators[0].shape[0]
    eye = np.eye(dim)
    sup = np.vstack([np.kron(eye, s.T) - np.kron(s, eye) for s in generators])
    s = np.linalg.svd(sup, compute_uv=False)
    full = np.zeros(dim * dim)
    full[: s.size] = s
    return int(np.sum(full <= tolerance * full.max()))


@dataclass
class Decomposition:
    names: tuple[str, ...]
    coefficients: np.ndarray   # (n_found, n_known)
    residuals: np.ndarray      # per found element

    def max_residual(self) -> float:
        return float(self.residuals.max(initial=0.0))


def match_against_known(found: CommutantBasis | list[CoeffTensor],
                        known: dict[str, CoeffTensor]) -> Decomposition:
    """Least-squares expansion of each found element over the known set."""
    elements = found.elements if isinstance(found, CommutantBasis) else list(found)
    names = tuple(known)
    ref = np.array([known[k].vector for k in names]).T
    coeffs, res = [], []
    for e in elements:
        x, *_ = np.linalg.lstsq(ref, e.vector, rcond=None)
        coeffs.append(x)
        res.append(np.abs(ref @ x - e.vector).max())
    return Decomposition(names, np.array(coeffs).reshape(len(elements), len(names)),
                         np.array(res))


def direct_residual(h: np.ndarray, generators: list[np.ndarray]) -> float:
    """``max_alpha ||[h, S_alpha]||_max`` computed with dense matrices."""
    return max(float(np.abs(commutator(h, s)).max()) for s in generators)


def exhaustive_search_report(d: int, n: int = 3, tolerance: float = 1e-9) -> dict:
    """Full commutant search, matched against the known Hamiltonians."""
    from .algebra import generate_basis

    basis = generate_basis(d)
    tensors = structure_constants(basis)
    system = build_constraint_system(basis, n, tensors)
    found = commutant_basis(system, tolerance)
    report = {"d": d, "n": n, "nullspace_dim": found.dim, "spectral_gap": found.spectral_gap,
              "warnings": found.warnings}
    if n == 3:
        dec = match_against_known(found, known_coefficients(basis, tensors))
        report["residuals"] = [float(r) for r in dec.residuals]
        report["decomposition"] = [[[name, float(c)] for name, c in zip(dec.names, row)]
                                   for row in dec.coefficients]
    return report


def verification_report(d: int, n: int = 3) -> dict:
    """Check only that the known Hamiltonians satisfy the constraints."""
    from .algebra import generate_basis

    basis = generate_basis(d)
    tensors = structure_constants(basis)
    system = build_constraint_system(basis, n, tensors)
    if n == 3:
        known = known_coefficients(basis, tensors)
        names = list(KNOWN_NAMES)
    else:
        known = known_coefficients_n(basis, n, tensors)
        names = list(known)
    return {"d": d, "n": n, "nullspace_dim": None, "known": names,
            "residuals": [system.residual(known[name]) for name in names],
            "decomposition": []}

