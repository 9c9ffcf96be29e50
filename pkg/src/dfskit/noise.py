"""Collective-noise channels, stabilizer exponentials and compatibility sweeps."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
import scipy.linalg

from .algebra import GellMannBasis, generate_basis, structure_constants
from .encoding import LogicalState, gauge_amplitudes, logical_populations, octet_states
from .gates import d_triple, exchange_hamiltonian, f_triple
from .operators import commutator, expm_hermitian, haar_unitary, kron, site_operator
from .search import collective_generators


@dataclass
class StabilizerElement:
    v: np.ndarray
    matrix: np.ndarray
    unitary: bool


def stabilizer_element(basis: GellMannBasis, v: Sequence[complex], n: int) -> StabilizerElement:
    """``exp(sum_a v_a S_a)`` for complex coefficients ``v``.

    Purely imaginary ``v`` gives a unitary element (computed through the
    Hermitian eigendecomposition); anything else goes through a general
    matrix exponential and is flagged as non-unitary.
    """
    v = np.asarray(v, dtype=complex).reshape(-1)
    if v.size != basis.size:
        raise ValueError(f"need {basis.size} coefficients, got {v.size}")
    gens = collective_generators(basis, n)
    if np.all(v.real == 0):
        h = sum(c.imag * s for c, s in zip(v, gens))
        return StabilizerElement(v, expm_hermitian(h, -1.0), True)
    a = sum(c * s for c, s in zip(v, gens))
    return StabilizerElement(v, scipy.linalg.expm(a), False)


def random_collective_unitary(d: int, n: int, seed: int) -> np.ndarray:
    """``U (x) U (x) ... (x) U`` with a seeded Haar ``U``."""
    u = haar_unitary(d, seed)
    return kron([u] * n)


def step_seeds(seed: int, steps: int) -> list[int]:
    """Independent 64-bit seeds for each step of a trajectory."""
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(steps, dtype=np.uint64)]


@dataclass
class TrajectoryPoint:
    step: int
    p0: float
    p1: float
    leak: float
    gauge_overlap: float


@dataclass
class NoiseTrajectory:
    seed: int
    step_seeds: list[int]
    record: list[TrajectoryPoint] = field(default_factory=list)
    final_state: np.ndarray | None = None

    def max_leak(self) -> float:
        return max(abs(p.leak) for p in self.record)

    def max_population_drift(self) -> float:
        p0 = self.record[0].p0
        return max(abs(p.p0 - p0) for p in self.record)

    def to_jsonl(self) -> str:
        from .serialize import dumps

        return "".join(dumps({"step": p.step, "p0": p.p0, "p1": p.p1, "leak": p.leak}) + "\n"
                       for p in self.record)


def _point(step: int, vec: np.ndarray, enc) -> TrajectoryPoint:
    p0, p1, leak = logical_populations(vec, enc)
    c0, c1 = gauge_amplitudes(vec, enc)
    n0, n1 = np.linalg.norm(c0), np.linalg.norm(c1)
    overlap = abs(np.vdot(c0, c1)) / (n0 * n1) if n0 > 1e-12 and n1 > 1e-12 else float("nan")
    return TrajectoryPoint(step, p0, p1, leak, float(overlap))


def run_trajectory(state: LogicalState | np.ndarray, steps: int, seed: int, *,
                   gates: Mapping[int, np.ndarray] | None = None,
                   control_step: int | None = None,
                   control_angle: float = np.pi / 2) -> NoiseTrajectory:
    """Apply ``steps`` independent Haar collective unitaries to a 3-qutrit state.

    After step ``k`` the optional ``gates[k]`` is applied. ``control_step``
    replaces that step's noise by ``exp(-i angle l_1)`` on site 0 only, a
    non-collective error used as a negative control.

    The record holds the initial point followed by one point per step; the
    gauge overlap ``|<c0|c1>| / (|c0||c1|)`` compares the gauge vectors of
    the two octets and stays 1 under collective noise.
    """
    enc = octet_states()
    vec = state.vector if isinstance(state, LogicalState) else np.asarray(state, dtype=complex)
    gates = dict(gates or {})
    seeds = step_seeds(seed, steps)
    traj = NoiseTrajectory(seed, seeds, [_point(0, vec, enc)])
    basis = generate_basis(3)
    for k, s in enumerate(seeds, start=1):
        if k == control_step:
            op = site_operator(expm_hermitian(basis[1], control_angle), 0, 3)
        else:
            op = random_collective_unitary(3, 3, s)
        vec = op @ vec
        if k in gates:
            vec = gates[k] @ vec
        traj.record.append(_point(k, vec, enc))
    traj.final_state = vec
    return traj


@dataclass
class CompatReport:
    d: int
    n: int
    tolerance: float
    residuals: dict[str, float]

    @property
    def passed(self) -> bool:
        return all(r < self.tolerance for r in self.residuals.values())

    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)


def verify_n_qudit_compat(basis: GellMannBasis, n: int, tolerance: float = 1e-11) -> CompatReport:
    """Commutators of every ``e_pq``, ``F_pqr`` and ``D_pqr`` with every ``S_a``."""
    d = basis.dim
    if d**n > 1024:
        raise ValueError("verify_n_qudit_compat is limited to d**n <= 1024")
    tensors = structure_constants(basis)
    gens = collective_generators(basis, n)
    res: dict[str, float] = {}

    def worst(h):
        return max(float(np.abs(commutator(h, s)).max()) for s in gens)

    for p, q in itertools.combinations(range(n), 2):
        res[f"e_{p}{q}"] = worst(exchange_hamiltonian(basis, p, q, n))
    for p, q, r in itertools.combinations(range(n), 3):
        res[f"F_{p}{q}{r}"] = worst(f_triple(basis, p, q, r, n, tensors))
        res[f"D_{p}{q}{r}"] = worst(d_triple(basis, p, q, r, n, tensors))
    return CompatReport(d, n, tolerance, res)


def commutes_with_stabilizers(u: np.ndarray, elements: Sequence[StabilizerElement]) -> float:
    """Largest ``||U S - S U||_max`` over the given stabilizer elements."""
    return max(float(np.abs(u @ s.matrix - s.matrix @ u).max()) for s in elements)


def write_jsonl(traj: NoiseTrajectory, path) -> None:
    with open(path, "w") as fh:
        fh.write(traj.to_jsonl())


def read_jsonl(path) -> list[dict]:
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]
