"""Effective-Hamiltonian vectors for the two-phase SU(2) encoding.

The encoding is U = exp(-i (phi1 a1 + phi2 a2) . S) with S = sigma/2 for a
qubit and S = J for a qutrit. The effective Hamiltonians
i (d U^dag / d phi_j) U equal eta_j . S in either representation.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRotation, InvalidAxis, SingularReparam
from .su2_algebra import TOL


@dataclass(frozen=True)
class EncodingConfig:
    a1: np.ndarray
    a2: np.ndarray
    phi1: float
    phi2: float

    def __post_init__(self):
        for name in ("a1", "a2"):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != (3,) or abs(np.linalg.norm(v) - 1) > TOL.identity:
                raise InvalidAxis(f"{name} must be a unit 3-vector, got {v!r}")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "phi1", float(self.phi1))
        object.__setattr__(self, "phi2", float(self.phi2))

    @classmethod
    def planar(cls, theta, phi1, phi2):
        """a1 = x, a2 = (cos theta, sin theta, 0)."""
        return cls(np.array([1.0, 0.0, 0.0]),
                   np.array([np.cos(theta), np.sin(theta), 0.0]), phi1, phi2)

    @property
    def cos_theta(self):
        return float(np.clip(self.a1 @ self.a2, -1.0, 1.0))

    @property
    def theta(self):
        return float(np.arccos(self.cos_theta))

    @property
    def sin_theta(self):
        return float(np.linalg.norm(np.cross(self.a1, self.a2)))

    @property
    def f1(self):
        return self.phi1 * self.cos_theta + self.phi2

    @property
    def f2(self):
        return self.phi1 + self.phi2 * self.cos_theta

    @property
    def magnitude(self):
        """Total rotation angle |phi1 a1 + phi2 a2|."""
        return float(np.linalg.norm(self.phi1 * self.a1 + self.phi2 * self.a2))


@dataclass(frozen=True)
class EtaPair:
    eta1: np.ndarray
    eta2: np.ndarray

    @property
    def cross(self):
        return np.cross(self.eta1, self.eta2)


@dataclass(frozen=True)
class ReparamCoords:
    B: float
    phi: float


def rotation_axis(cfg):
    v = cfg.phi1 * cfg.a1 + cfg.phi2 * cfg.a2
    B = np.linalg.norm(v)
    if B < TOL.norm:
        raise DegenerateRotation("total rotation angle is zero; axis undefined")
    return v / B


def reparam(cfg):
    """(B, phi): rotation magnitude and axis angle measured from a1.

    atan2 reproduces the two-branch arctan definition and picks the upper
    branch where phi1 + phi2 cos(theta) = 0.
    """
    B = cfg.magnitude
    if B < TOL.norm:
        return ReparamCoords(0.0, 0.0)
    phi = float(np.arctan2(cfg.phi2 * cfg.sin_theta, cfg.f2))
    if phi == -np.pi:
        phi = np.pi
    return ReparamCoords(B, phi)


def _series_coeffs(B):
    # (B - sin B)/B^3 and sin^2(B/2)/B^2, Taylor-expanded near zero
    if B < TOL.small_rotation:
        B2 = B * B
        g = 1 / 6 - B2 / 120 + B2 * B2 / 5040
        h = 0.25 - B2 / 48 + B2 * B2 / 1440
        return g, h
    return (B - np.sin(B)) / B**3, np.sin(B / 2) ** 2 / B**2


def eta_pair(cfg):
    g, h = _series_coeffs(cfg.magnitude)
    a1, a2 = cfg.a1, cfg.a2
    mix = cfg.f1 * a1 - cfg.f2 * a2
    c = np.cross(a1, a2)
    eta1 = -a1 + cfg.phi2 * g * mix - 2 * cfg.phi2 * h * c
    eta2 = -a2 - cfg.phi1 * g * mix + 2 * cfg.phi1 * h * c
    return EtaPair(eta1, eta2)


def eta_reparam(coords):
    """Return (eta_phi, eta_B) for the (B, phi) parameterisation."""
    B, phi = coords.B, coords.phi
    s, c = np.sin(B / 2), np.cos(B / 2)
    eta_phi = 2 * s * np.array([c * np.sin(phi), -c * np.cos(phi), s])
    eta_B = -np.array([np.cos(phi), np.sin(phi), 0.0])
    return eta_phi, eta_B


def jacobian(cfg):
    """d(phi, B)/d(phi1, phi2); rows ordered (phi, B), columns (phi1, phi2)."""
    B = cfg.magnitude
    st = cfg.sin_theta
    if B < TOL.norm or st < TOL.norm:
        raise SingularReparam(f"reparameterisation singular (B={B:.3g}, sin theta={st:.3g})")
    B2 = B * B
    return np.array([
        [-cfg.phi2 * st / B2, cfg.phi1 * st / B2],
        [cfg.f2 / B, cfg.f1 / B],
    ])
