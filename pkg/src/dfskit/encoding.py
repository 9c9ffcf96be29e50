"""Three-qutrit noiseless-subsystem qubit built from the two octets.

Kets ``|abc>`` put site 0 leftmost (most significant) and use levels
0, 1, 2. The two octets are entered term by term; the singlet and decuplet
that complete the 27-dimensional space are found numerically.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg

from .algebra import GellMannBasis, generate_basis
from .search import collective_generators, known_hamiltonians

_R2, _R6, _R12 = np.sqrt(2), np.sqrt(6), np.sqrt(12)

# (coefficient, ket) terms and the normalization of each octet state
OCTET0 = (
    ([(1, "200"), (-1, "020")], _R2),
    ([(1, "100"), (-1, "010")], _R2),
    ([(1, "011"), (-1, "101")], _R2),
    ([(1, "211"), (-1, "121")], _R2),
    ([(1, "122"), (-1, "212")], _R2),
    ([(1, "022"), (-1, "202")], _R2),
    ([(-1, "021"), (-1, "120"), (1, "201"), (1, "210")], 2.0),
    ([(2, "012"), (1, "021"), (-2, "102"), (-1, "120"), (-1, "201"), (1, "210")], _R12),
)
OCTET1 = (
    ([(-2, "002"), (1, "020"), (1, "200")], _R6),
    ([(-2, "001"), (1, "010"), (1, "100")], _R6),
    ([(-2, "110"), (1, "011"), (1, "101")], _R6),
    ([(-2, "112"), (1, "121"), (1, "211")], _R6),
    ([(-2, "221"), (1, "122"), (1, "212")], _R6),
    ([(-2, "220"), (1, "022"), (1, "202")], _R6),
    ([(-2, "012"), (1, "021"), (-2, "102"), (1, "120"), (1, "201"), (1, "210")], _R12),
    ([(1, "021"), (-1, "120"), (1, "201"), (-1, "210")], 2.0),
)


def ket(label: str, d: int = 3) -> np.ndarray:
    """Computational basis vector ``|label>`` with site 0 leftmost."""
    v = np.zeros(d ** len(label), dtype=complex)
    v[int(label, d)] = 1.0
    return v


def _state(terms, norm) -> np.ndarray:
    return sum(c * ket(s) for c, s in terms) / norm


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude entry is real positive."""
    k = np.argmax(np.abs(v))
    return v * (abs(v[k]) / v[k])


def _subspace_eigh(op: np.ndarray, q: np.ndarray, decimals: int = 8):
    """Eigen-split of ``op`` restricted to the orthonormal columns of ``q``.

    Returns ``[(eigenvalue, columns), ...]`` with eigenvalues grouped after
    rounding.
    """
    w, v = np.linalg.eigh(q.conj().T @ op @ q)
    vecs = q @ v
    groups: dict[float, list[int]] = {}
    for i, val in enumerate(np.round(w, decimals)):
        groups.setdefault(float(val) + 0.0, []).append(i)
    return [(val, vecs[:, idx]) for val, idx in sorted(groups.items())]


def casimir(basis: GellMannBasis, n: int) -> np.ndarray:
    """Quadratic Casimir ``C2 = sum_a S_a**2`` of the collective action."""
    return sum(s @ s for s in collective_generators(basis, n))


@dataclass
class DfsEncoding:
    """Rows of ``octet0``/``octet1`` are the logical-0/1 octet states.

    ``complement`` holds the singlet first, then the ten decuplet states.
    """

    octet0: np.ndarray
    octet1: np.ndarray
    singlet: np.ndarray
    decuplet: np.ndarray
    casimir_values: dict[str, float] = field(default_factory=dict)

    @property
    def complement(self) -> np.ndarray:
        return np.vstack([self.singlet, self.decuplet])

    @property
    def all_states(self) -> np.ndarray:
        return np.vstack([self.octet0, self.octet1, self.complement])

    def projector(self, block: str) -> np.ndarray:
        rows = {"octet0": self.octet0, "octet1": self.octet1,
                "complement": self.complement, "singlet": self.singlet,
                "decuplet": self.decuplet}[block]
        return rows.T @ rows.conj()

    def labels(self) -> list[str]:
        return ([f"psi_{j}^(8,0)" for j in range(1, 9)]
                + [f"psi_{j}^(8,1)" for j in range(1, 9)]
                + ["singlet"] + [f"decuplet_{j}" for j in range(1, 11)])

    def to_json(self) -> dict:
        return {
            "d": 3, "n": 3,
            "convention": "|abc> has site 0 leftmost; levels 0..2; index = int(abc, 3)",
            "states": [{"label": lab, "vector": [[float(z.real), float(z.imag)] for z in v]}
                       for lab, v in zip(self.labels(), self.all_states)],
            "casimir": self.casimir_values,
        }


@lru_cache(maxsize=1)
def octet_states() -> DfsEncoding:
    """The 16 octet states plus a numerically constructed singlet and decuplet."""
    o0 = np.array([_state(t, s) for t, s in OCTET0])
    o1 = np.array([_state(t, s) for t, s in OCTET1])
    basis = generate_basis(3)
    c2 = casimir(basis, 3)
    octets = np.vstack([o0, o1])
    # orthogonal complement of the 16 octet vectors
    comp = scipy.linalg.null_space(octets.conj())
    split = _subspace_eigh(c2, comp)
    if [v.shape[1] for _, v in split] != [1, 10]:
        raise RuntimeError(f"unexpected complement split {[v.shape[1] for _, v in split]}")
    (singlet_val, singlet), (dec_val, dec) = split
    # a fixed, reproducible basis inside the decuplet: weight states
    weights = sum(np.pi ** (k + 1) * _number_operator(3, 3, k) for k in range(3))
    dec = np.hstack([v for _, v in _subspace_eigh(weights, dec)])
    singlet = np.array([fix_phase(singlet[:, 0])])
    dec = np.array([fix_phase(v) for v in dec.T])
    octet_val = float(np.real(o0[0].conj() @ c2 @ o0[0]))
    enc = DfsEncoding(o0, o1, singlet, dec,
                      {"octet": octet_val, "singlet": singlet_val, "decuplet": dec_val})
    for arr in (enc.octet0, enc.octet1, enc.singlet, enc.decuplet):
        arr.setflags(write=False)
    return enc


def _number_operator(d: int, n: int, level: int) -> np.ndarray:
    """Collective population of ``level``: ``sum_r |level><level|^(r)``."""
    digits = np.array(np.unravel_index(np.arange(d**n), (d,) * n))
    return np.diag((digits == level).sum(axis=0).astype(float))


def _collective_transition(d: int, n: int, k: int, l: int) -> np.ndarray:
    """``sum_r |k><l|^(r)``."""
    e = np.zeros((d, d))
    e[k, l] = 1.0
    out = np.zeros((d**n, d**n))
    for r in range(n):
        out += np.kron(np.kron(np.eye(d**r), e), np.eye(d ** (n - r - 1)))
    return out


@dataclass
class CasimirBlock:
    eigenvalue: float
    irrep_dim: int
    multiplicity: int

    @property
    def block_dims(self) -> list[int]:
        return [self.irrep_dim] * self.multiplicity

    @property
    def total_dim(self) -> int:
        return self.irrep_dim * self.multiplicity


def casimir_decompose(basis: GellMannBasis, n: int, tol: float = 1e-9) -> list[CasimirBlock]:
    """Split the n-qudit space into irreducible blocks of the collective action.

    Each eigenspace of ``C2`` is searched for highest-weight vectors (those
    killed by every collective raising operator). Their number per weight is
    the multiplicity and the span reached from one of them with lowering
    operators is the irrep dimension.
    """
    d = basis.dim
    if d**n > 1024:
        raise ValueError("casimir_decompose is limited to d**n <= 1024")
    raising = [_collective_transition(d, n, k, l) for k in range(d) for l in range(k + 1, d)]
    lowering = [r.T for r in raising]
    weights = sum(np.pi ** (k + 1) * _number_operator(d, n, k) for k in range(d))
    blocks = []
    for val, q in _subspace_eigh(casimir(basis, n), np.eye(d**n, dtype=complex)):
        stacked = np.vstack([r @ q for r in raising]) if raising else np.zeros((1, q.shape[1]))
        hw = q @ _null_space(stacked, tol)
        for _, hw_w in _subspace_eigh(weights, hw):
            blocks.append(CasimirBlock(float(val), _orbit_dim(hw_w[:, 0], lowering, tol),
                                       hw_w.shape[1]))
    return blocks


def _null_space(a: np.ndarray, tol: float) -> np.ndarray:
    """Null space with an absolute floor so all-zero blocks keep every vector."""
    _, s, vh = np.linalg.svd(a)
    cutoff = tol * max(1.0, s.max(initial=0.0))
    rank = int(np.sum(s > cutoff))
    return vh[rank:].conj().T


def _orbit_dim(v: np.ndarray, ops: list[np.ndarray], tol: float) -> int:
    """Dimension of the smallest subspace containing ``v`` and closed under ``ops``."""
    span = [v / np.linalg.norm(v)]
    frontier = list(span)
    while frontier:
        nxt = []
        for w in frontier:
            for op in ops:
                u = op @ w
                for s in span:
                    u = u - (s.conj() @ u) * s
                nu = np.linalg.norm(u)
                if nu > tol:
                    u = u / nu
                    span.append(u)
                    nxt.append(u)
        frontier = nxt
    return len(span)


def numerical_octets(tol: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Recover the 16 octet states without the hand-entered table.

    Restrict to the ``C2`` eigenspace of dimension 16, then jointly
    diagonalize commuting operators that resolve every state there: the
    logical ``Z`` (sorts the two octets), the collective level populations
    (weights) and the isospin Casimir of levels 0, 1. Returns the states
    sorted into the two octets, each with its phase fixed.
    """
    basis = generate_basis(3)
    c2 = casimir(basis, 3)
    space = [v for _, v in _subspace_eigh(c2, np.eye(27, dtype=complex)) if v.shape[1] == 16]
    if len(space) != 1:
        raise RuntimeError("no unique 16-dimensional Casimir eigenspace")
    q = space[0]
    h = known_hamiltonians(basis)
    zbar = (h["e1"] + h["e2"] - 2 * h["e3"]) / 6
    gens = collective_generators(basis, 3)
    isospin = sum(s @ s for s in gens[:3])
    pops = [_number_operator(3, 3, k) for k in range(3)]
    probe = 1000.0 * zbar + 100.0 * isospin + sum((np.e ** (k + 1)) * p for k, p in enumerate(pops))
    w, v = np.linalg.eigh(q.conj().T @ probe @ q)
    if np.min(np.diff(w)) < 1e-6:
        raise RuntimeError("probe operator left a degeneracy")
    vecs = (q @ v).T
    zvals = np.real(np.einsum("ij,jk,ik->i", vecs.conj(), zbar, vecs))
    first = np.array([fix_phase(x) for x, z in zip(vecs, zvals) if z > 0])
    second = np.array([fix_phase(x) for x, z in zip(vecs, zvals) if z < 0])
    return first, second


@dataclass
class LogicalState:
    a: complex
    b: complex
    gauge: np.ndarray
    vector: np.ndarray


def _as_gauge(gauge) -> np.ndarray:
    g = np.asarray(gauge, dtype=complex).reshape(-1)
    if g.size != 8:
        raise ValueError(f"gauge needs 8 weights, got {g.size}")
    norm = np.linalg.norm(g)
    if norm == 0:
        raise ValueError("gauge weights are all zero")
    return g / norm


def encode(a: complex, b: complex, gauge=None, enc: DfsEncoding | None = None) -> LogicalState:
    """``a |0_L> + b |1_L>`` with the same gauge weights in both octets.

    Amplitudes and gauge are normalized; the default gauge is ``psi_1``.
    """
    enc = enc or octet_states()
    amp = np.array([a, b], dtype=complex)
    norm = np.linalg.norm(amp)
    if norm == 0:
        raise ValueError("logical amplitudes are both zero")
    a, b = amp / norm
    g = _as_gauge(np.eye(8)[0] if gauge is None else gauge)
    vec = a * (g @ enc.octet0) + b * (g @ enc.octet1)
    return LogicalState(complex(a), complex(b), g, vec)


def logical_populations(state, enc: DfsEncoding | None = None) -> tuple[float, float, float]:
    """Populations of the two octets and the leaked remainder."""
    enc = enc or octet_states()
    v = state.vector if isinstance(state, LogicalState) else np.asarray(state)
    norm2 = float(np.vdot(v, v).real)
    if abs(norm2 - 1) > 1e-8:
        raise ValueError(f"state is not normalized (|v|^2 = {norm2:.3g})")
    p0 = float(np.sum(np.abs(enc.octet0.conj() @ v) ** 2))
    p1 = float(np.sum(np.abs(enc.octet1.conj() @ v) ** 2))
    return p0, p1, 1.0 - p0 - p1


def gauge_amplitudes(state, enc: DfsEncoding | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Components ``<psi_j^(8,0)|v>`` and ``<psi_j^(8,1)|v>``."""
    enc = enc or octet_states()
    v = state.vector if isinstance(state, LogicalState) else np.asarray(state)
    return enc.octet0.conj() @ v, enc.octet1.conj() @ v


@dataclass
class BlockReport:
    """Matrix elements of an operator in the octet basis.

    ``within0[j, k] = <psi_j^(8,0)|A|psi_k^(8,0)>`` and likewise
    ``within1``; ``cross01[j, k] = <psi_j^(8,0)|A|psi_k^(8,1)>``.
    """

    within0: np.ndarray
    within1: np.ndarray
    cross01: np.ndarray
    cross10: np.ndarray
    leakage: float

    @property
    def cross_max(self) -> float:
        return float(max(np.abs(self.cross01).max(), np.abs(self.cross10).max()))

    @property
    def within_mismatch(self) -> float:
        return float(np.abs(self.within0 - self.within1).max())

    def to_json(self) -> dict:
        def mat(m):
            return [[[float(z.real), float(z.imag)] for z in row] for row in m]
        return {"within0": mat(self.within0), "within1": mat(self.within1),
                "cross_max": self.cross_max, "within_mismatch": self.within_mismatch,
                "leakage": self.leakage}


def block_report(op: np.ndarray, enc: DfsEncoding | None = None) -> BlockReport:
    enc = enc or octet_states()
    if op.shape != (27, 27):
        raise ValueError("block_report expects a 27 x 27 operator")
    o0, o1, comp = enc.octet0, enc.octet1, enc.complement
    octets = np.vstack([o0, o1])
    leak = max(np.abs(comp.conj() @ op @ octets.T).max(),
               np.abs(octets.conj() @ op @ comp.T).max())
    return BlockReport(
        within0=o0.conj() @ op @ o0.T,
        within1=o1.conj() @ op @ o1.T,
        cross01=o0.conj() @ op @ o1.T,
        cross10=o1.conj() @ op @ o0.T,
        leakage=float(leak),
    )
