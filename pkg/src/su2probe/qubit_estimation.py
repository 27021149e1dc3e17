"""Bounds and optimal probes for two SU(2) phases on a single qubit.

A qubit probe is described by its Bloch vector r.  For pure probes the
QFIM is F_ij = eta_i.eta_j - (r.eta_i)(r.eta_j) and the single Uhlmann
entry is D_12 = r.(eta1 x eta2).  The encoded model is D-invariant, so the
Holevo bound has the closed form Tr(W F^-1) + ||sqrt(W) F^-1 D F^-1 sqrt(W)||_1.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidWeight, NoOptimalProbe, RequiresPureState, SingularQFIM
from .su2_algebra import TOL, check_bloch, is_pure


@dataclass(frozen=True)
class WeightMatrix:
    w11: float
    w22: float
    w12: float = 0.0

    def __post_init__(self):
        vals = (self.w11, self.w22, self.w12)
        if not all(np.isfinite(v) for v in vals):
            raise InvalidWeight("weight matrix entries must be finite")
        if self.w11 <= 0 or self.w22 <= 0 or self.det <= 0:
            raise InvalidWeight("weight matrix not positive definite")

    @classmethod
    def identity(cls):
        return cls(1.0, 1.0, 0.0)

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m, dtype=float)
        if m.shape != (2, 2) or abs(m[0, 1] - m[1, 0]) > TOL.identity:
            raise InvalidWeight("weight matrix must be a symmetric 2x2 matrix")
        return cls(m[0, 0], m[1, 1], m[0, 1])

    @property
    def det(self):
        return self.w11 * self.w22 - self.w12**2

    @property
    def matrix(self):
        return np.array([[self.w11, self.w12], [self.w12, self.w22]])

    def scaled(self, c):
        return WeightMatrix(c * self.w11, c * self.w22, c * self.w12)


# default weight used for the theta scans
DEFAULT_WEIGHT = WeightMatrix(1.0, 1.0, 0.2)


def _pure(r):
    r = check_bloch(r)
    if not is_pure(r, TOL.identity):
        raise RequiresPureState(f"expected a pure probe, |r| = {np.linalg.norm(r):.12g}")
    return r


def _qfim(r, etas):
    e = (etas.eta1, etas.eta2)
    return np.array([[e[i] @ e[j] - (r @ e[i]) * (r @ e[j]) for j in range(2)] for i in range(2)])


def qfim_pure_qubit(r, etas):
    return _qfim(_pure(r), etas)


def uhlmann_pure_qubit(r, etas):
    return float(_pure(r) @ etas.cross)


def _triple(r, etas):
    t = float(r @ etas.cross)
    if abs(t) < TOL.singular:
        raise SingularQFIM("probe lies in the plane of eta1, eta2: QFIM is singular")
    return t


def _q_term(r, etas, W):
    x1 = np.cross(r, etas.eta1)
    x2 = np.cross(r, etas.eta2)
    return W.w11 * (x2 @ x2) + W.w22 * (x1 @ x1) - 2 * W.w12 * (x1 @ x2)


def hcrb_qubit(r, etas, W):
    r = _pure(r)
    t = _triple(r, etas)
    return _q_term(r, etas, W) / t**2 + 2 * np.sqrt(W.det) / abs(t)


def _cross_norm(etas):
    c = etas.cross
    n = float(np.linalg.norm(c))
    if n < TOL.norm:
        raise NoOptimalProbe("commuting encodings: estimation infeasible (|eta1 x eta2| = 0)")
    return c, n


def optimal_qubit_probes(etas):
    """Both optimal Bloch vectors, +(eta1 x eta2)/|.| first."""
    c, n = _cross_norm(etas)
    return c / n, -c / n


def optimal_qubit_probe(etas):
    """The optimal Bloch vector with the sign fixed by z, then y, then x >= 0."""
    r, _ = optimal_qubit_probes(etas)
    for comp in (r[2], r[1], r[0]):
        if abs(comp) > TOL.norm:
            return r if comp > 0 else -r
    return r


def min_hcrb_qubit(etas, W):
    if not isinstance(W, WeightMatrix):
        W = WeightMatrix.from_matrix(W)
    c, n = _cross_norm(etas)
    e1, e2 = etas.eta1, etas.eta2
    num = W.w11 * (e2 @ e2) + W.w22 * (e1 @ e1) - 2 * W.w12 * (e1 @ e2)
    return num / n**2 + 2 * np.sqrt(W.det) / n


@dataclass(frozen=True)
class MixedBounds:
    qfim: np.ndarray
    uhlmann: float
    hcrb: float


def mixed_state_bounds(r, etas, W):
    """QFIM, Uhlmann entry and HCRB for a mixed probe with Bloch vector r.

    With purity factor p = 2 Tr(rho^2) - 1 = |r|^2 and u = r/|r|,
    F = p F(u) and D = p^(3/2) D(u).
    """
    r = check_bloch(r)
    p = float(r @ r)
    if p < TOL.norm:
        raise SingularQFIM("maximally mixed probe carries no information")
    u = r / np.sqrt(p)
    F = p * _qfim(u, etas)
    D = p**1.5 * float(u @ etas.cross)
    if abs(D) < TOL.singular:
        raise SingularQFIM("probe lies in the plane of eta1, eta2: QFIM is singular")
    detF = np.linalg.det(F)
    q = np.trace(W.matrix @ np.linalg.inv(F))
    return MixedBounds(F, D, float(q + 2 * np.sqrt(W.det) * abs(D) / detF))


def small_param_optimal_probe(cfg):
    """Leading-order optimal Bloch vector for small phases (planar axes)."""
    st = cfg.sin_theta
    B2 = cfg.magnitude**2
    v = np.array([-cfg.phi2 * st, cfg.phi1 + cfg.phi2 * cfg.cos_theta, 2.0])
    return v / np.sqrt(4 + B2)
