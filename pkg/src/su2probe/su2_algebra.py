"""Small-dimension SU(2) algebra for spin-1/2 and spin-1.

Spin-1 matrices use the J_z eigenbasis ordered as m_z = (+1, 0, -1);
every module in the package follows that order.
"""

from dataclasses import dataclass
from math import comb

import numpy as np

from .errors import InvalidAxis, InvalidBloch


@dataclass(frozen=True)
class Tolerances:
    identity: float = 1e-10
    norm: float = 1e-12
    singular: float = 1e-10
    small_rotation: float = 1e-4


TOL = Tolerances()

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_SZ = np.array([[1, 0], [0, -1]], dtype=complex)

_R2 = 1 / np.sqrt(2)
_JX = _R2 * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex)
_JY = _R2 * np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex)
_JZ = np.diag([1.0, 0.0, -1.0]).astype(complex)

QUBIT = "qubit"
QUTRIT = "qutrit"


def pauli_matrices():
    """Return copies of (sigma_x, sigma_y, sigma_z)."""
    return [_SX.copy(), _SY.copy(), _SZ.copy()]


def spin1_generators():
    """Return copies of (J_x, J_y, J_z) in the (+1, 0, -1) basis."""
    return [_JX.copy(), _JY.copy(), _JZ.copy()]


def generators(rep):
    if rep == QUBIT:
        return [0.5 * s for s in pauli_matrices()]
    if rep == QUTRIT:
        return spin1_generators()
    raise ValueError(f"unknown representation {rep!r}")


def dot_generators(v, mats):
    """v . (M_x, M_y, M_z)"""
    return v[0] * mats[0] + v[1] * mats[1] + v[2] * mats[2]


def check_bloch(r, tol=TOL.norm):
    r = np.asarray(r, dtype=float)
    if r.shape != (3,) or not np.all(np.isfinite(r)):
        raise InvalidBloch(f"Bloch vector must be a finite 3-vector, got {r!r}")
    if np.linalg.norm(r) > 1 + tol:
        raise InvalidBloch(f"|r| = {np.linalg.norm(r):.6g} exceeds 1")
    return r


def is_pure(r, tol=TOL.norm):
    return abs(np.linalg.norm(r) - 1) < tol


def bloch_to_density(r):
    r = check_bloch(r)
    return 0.5 * (np.eye(2, dtype=complex) + dot_generators(r, pauli_matrices()))


def density_to_bloch(rho):
    rho = np.asarray(rho, dtype=complex)
    return np.array([np.trace(rho @ s).real for s in pauli_matrices()])


def unit_axis(n, tol=TOL.norm):
    n = np.asarray(n, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1) > tol:
        raise InvalidAxis(f"rotation axis must be a unit 3-vector, got {n!r}")
    return n


def expm_hermitian(H, t=1.0):
    """exp(-i t H) for Hermitian H via its eigendecomposition."""
    w, V = np.linalg.eigh(H)
    return (V * np.exp(-1j * t * w)) @ V.conj().T


def su2_unitary(n, B, rep=QUBIT):
    """Rotation by angle B about unit axis n.

    qubit: exp(-i B n.sigma / 2); qutrit: exp(-i B n.J).
    """
    n = unit_axis(n)
    if rep == QUBIT:
        return np.cos(B / 2) * np.eye(2) - 1j * np.sin(B / 2) * dot_generators(n, pauli_matrices())
    return expm_hermitian(dot_generators(n, generators(rep)), B)


def extreme_eigenvectors(phi, rep=QUTRIT):
    """Top and bottom eigenvectors of exp(-i phi J_z) J_x exp(i phi J_z).

    Built from the Wigner-d expansion of the J_x extremal states, with
    components ordered m_z = +j, ..., -j.
    """
    twoj = 1 if rep == QUBIT else 2
    j = twoj / 2
    ms = [j - k for k in range(twoj + 1)]
    amp = np.array([np.sqrt(comb(twoj, int(round(j + m)))) for m in ms]) / 2**j
    phase = np.exp(-1j * np.array(ms) * phi)
    sign = np.array([(-1) ** int(round(j + m)) for m in ms])
    return amp * phase, amp * sign * phase


def rotated_jx(phi, rep=QUTRIT):
    g = generators(rep)
    return np.cos(phi) * g[0] + np.sin(phi) * g[1]
