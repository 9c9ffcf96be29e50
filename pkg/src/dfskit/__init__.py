"""Decoherence-free subspace toolkit for qudits.

Modules:

* ``algebra``    generalized Gell-Mann basis and the f/d structure tensors
* ``operators``  tensor products, exponentials, Haar sampling, mu-basis expansion
* ``search``     commutant (compatible Hamiltonian) search
* ``encoding``   the two-octet three-qutrit logical qubit
* ``gates``      exchange Hamiltonians, logical rotations, SWAP
* ``noise``      collective-noise trajectories and compatibility sweeps
* ``cli``        ``dfskit`` command line tool
"""
from .algebra import GellMannBasis, StructureTensors, generate_basis, structure_constants
from .encoding import encode, logical_populations, octet_states
from .operators import CoeffTensor, coeff_expand, expm_hermitian, haar_unitary, kron

__all__ = [
    "CoeffTensor",
    "GellMannBasis",
    "StructureTensors",
    "coeff_expand",
    "encode",
    "expm_hermitian",
    "generate_basis",
    "haar_unitary",
    "kron",
    "logical_populations",
    "octet_states",
    "structure_constants",
]
__version__ = "0.1.0"
