"""Two SU(2) phases on a single qutrit probe.

Kets are length-3 complex arrays in the J_z basis ordered m_z = (+1, 0, -1).
Re-parameterised quantities are indexed (phi, B) in that order.
"""

from dataclasses import dataclass

import numpy as np

from .effective_hamiltonians import jacobian, reparam
from .errors import InvalidWeight, SingularQFIM
from .qubit_estimation import WeightMatrix
from .su2_algebra import TOL, dot_generators, extreme_eigenvectors, spin1_generators

_J = spin1_generators()


@dataclass(frozen=True)
class AnsatzParams:
    alpha: float
    psi: float

    def __post_init__(self):
        if not (-TOL.norm <= self.alpha <= np.pi / 2 + TOL.norm):
            raise ValueError(f"alpha must lie in [0, pi/2], got {self.alpha}")
        if not (-np.pi - TOL.norm <= self.psi <= np.pi + TOL.norm):
            raise ValueError(f"psi must lie in [-pi, pi], got {self.psi}")


@dataclass(frozen=True)
class CommutingSpectra:
    lam: np.ndarray
    lam_prime: np.ndarray

    def __post_init__(self):
        for name in ("lam", "lam_prime"):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != (3,) or not np.all(np.isfinite(v)):
                raise ValueError(f"{name} must be 3 finite reals")
            object.__setattr__(self, name, v)


def normalize(ket):
    ket = np.asarray(ket, dtype=complex)
    return ket / np.linalg.norm(ket)


def fidelity(a, b):
    """|<a|b>|, insensitive to global phase."""
    return float(abs(np.vdot(a, b)))


def wrap_angle(x):
    """Map x into [-pi, pi)."""
    return (x + np.pi) % (2 * np.pi) - np.pi


def ansatz_probe(p, coords):
    """cos(alpha)|lambda_max> + e^{i psi} sin(alpha)|lambda_min>."""
    vmax, vmin = extreme_eigenvectors(coords.phi)
    return np.cos(p.alpha) * vmax + np.exp(1j * p.psi) * np.sin(p.alpha) * vmin


def su2_expectation(ket, t):
    """<t.J> from the amplitudes, without building t.J."""
    cp, c0, cm = ket
    coh = np.conj(cm) * c0 + np.conj(c0) * cp
    return float(t[2] * (abs(cp) ** 2 - abs(cm) ** 2)
                 + np.sqrt(2) * ((t[0] + 1j * t[1]) * coh).real)


def weak_commutation_residual(ket, etas):
    return su2_expectation(ket, etas.cross)


def qfim_qutrit_general(ket, eta_i, eta_j):
    """4 [Re<(eta_i.J)(eta_j.J)> - <eta_i.J><eta_j.J>]"""
    A = dot_generators(eta_i, _J)
    Bm = dot_generators(eta_j, _J)
    ai = np.vdot(ket, A @ ket).real
    aj = np.vdot(ket, Bm @ ket).real
    return float(4 * (np.vdot(ket, A @ (Bm @ ket)).real - ai * aj))


def qfim_matrix(ket, eta_a, eta_b):
    f = qfim_qutrit_general
    off = f(ket, eta_a, eta_b)
    return np.array([[f(ket, eta_a, eta_a), off], [off, f(ket, eta_b, eta_b)]])


def reparam_qfim_ansatz(p, B):
    s2a = np.sin(2 * p.alpha)
    f_pp = 8 * np.sin(B / 2) ** 2 * (1 - s2a * np.cos(p.psi + B))
    f_bb = 4 * s2a**2
    return np.array([[f_pp, 0.0], [0.0, f_bb]])


def max_reparam_qfim(B):
    return np.diag([16 * np.sin(B / 2) ** 2, 4.0])


def optimal_ansatz_params(B):
    return AnsatzParams(np.pi / 4, float(wrap_angle(np.pi - B)))


def optimal_qutrit_probe(coords):
    B, phi = coords.B, coords.phi
    s, c = np.sin(B / 2), np.cos(B / 2)
    r2 = np.sqrt(2)
    return np.array([s * np.exp(-1j * phi) / r2, -1j * c, s * np.exp(1j * phi) / r2])


def qcrb_trace(qfim, W):
    F = np.asarray(qfim, dtype=float)
    Wm = W.matrix if isinstance(W, WeightMatrix) else np.asarray(W, dtype=float)
    det = F[0, 0] * F[1, 1] - F[0, 1] * F[1, 0]
    if det < 1e-12:
        raise SingularQFIM(f"QFIM is singular (det = {det:.3g})")
    inv = np.array([[F[1, 1], -F[0, 1]], [-F[1, 0], F[0, 0]]]) / det
    return float(np.trace(Wm @ inv))


def optimal_qfim(cfg):
    """QFIM of the optimal probe in the (phi1, phi2) parameterisation."""
    Jm = jacobian(cfg)
    return Jm.T @ max_reparam_qfim(reparam(cfg).B) @ Jm


def min_qcrb_qutrit(cfg, W):
    return qcrb_trace(optimal_qfim(cfg), W)


def random_qutrit(rng, size=None):
    """Haar-random pure qutrits from normalised complex Gaussians."""
    shape = (3,) if size is None else (size, 3)
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def chart_probe(theta0, theta1, ph1, phm1):
    """cos t0|0> + sin t0 cos t1 e^{i ph1}|+1> + sin t0 sin t1 e^{i ph-1}|-1>."""
    theta0, theta1, ph1, phm1 = np.broadcast_arrays(theta0, theta1, ph1, phm1)
    out = np.empty(theta0.shape + (3,), dtype=complex)
    out[..., 0] = np.sin(theta0) * np.cos(theta1) * np.exp(1j * ph1)
    out[..., 1] = np.cos(theta0)
    out[..., 2] = np.sin(theta0) * np.sin(theta1) * np.exp(1j * phm1)
    return out


def batch_qfim(kets, eta_a, eta_b):
    """Covariance-form QFIMs for a stack of kets, shape (n, 2, 2)."""
    A = dot_generators(eta_a, _J)
    Bm = dot_generators(eta_b, _J)
    Ak = kets @ A.T
    Bk = kets @ Bm.T
    ea = np.einsum("ni,ni->n", kets.conj(), Ak).real
    eb = np.einsum("ni,ni->n", kets.conj(), Bk).real
    aa = np.einsum("ni,ni->n", Ak.conj(), Ak).real
    bb = np.einsum("ni,ni->n", Bk.conj(), Bk).real
    ab = np.einsum("ni,ni->n", Ak.conj(), Bk).real
    F = np.empty((len(kets), 2, 2))
    F[:, 0, 0] = 4 * (aa - ea**2)
    F[:, 1, 1] = 4 * (bb - eb**2)
    F[:, 0, 1] = F[:, 1, 0] = 4 * (ab - ea * eb)
    return F


@dataclass(frozen=True)
class LoewnerReport:
    samples: int
    seed: int
    min_eigenvalue: float
    worst_index: int
    threshold: float = -1e-9

    @property
    def passed(self):
        return self.min_eigenvalue >= self.threshold


def loewner_dominance_scan(samples, seed=0, chunk=20000):
    """Smallest eigenvalue of F_max - G over random probes and (B, phi)."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    worst, worst_i, done = np.inf, -1, 0
    while done < samples:
        n = min(chunk, samples - done)
        t0 = rng.uniform(0, np.pi, n)
        t1 = rng.uniform(0, np.pi, n)
        p1 = rng.uniform(0, 2 * np.pi, n)
        pm = rng.uniform(0, 2 * np.pi, n)
        Bs = rng.uniform(0, 2 * np.pi, n)
        phis = rng.uniform(-np.pi, np.pi, n)
        kets = chart_probe(t0, t1, p1, pm)
        diff = _dominance_gap(kets, Bs, phis)
        ev = np.linalg.eigvalsh(diff)[:, 0]
        k = int(np.argmin(ev))
        if ev[k] < worst:
            worst, worst_i = float(ev[k]), done + k
        done += n
    return LoewnerReport(samples, seed, worst, worst_i)


def _dominance_gap(kets, Bs, phis):
    s, c = np.sin(Bs / 2), np.cos(Bs / 2)
    eta_phi = 2 * s[:, None] * np.stack([c * np.sin(phis), -c * np.cos(phis), s], axis=1)
    eta_B = -np.stack([np.cos(phis), np.sin(phis), np.zeros_like(phis)], axis=1)
    Ap = np.einsum("nk,kij->nij", eta_phi, np.array(_J))
    Ab = np.einsum("nk,kij->nij", eta_B, np.array(_J))
    pk = np.einsum("nij,nj->ni", Ap, kets)
    bk = np.einsum("nij,nj->ni", Ab, kets)
    ep = np.einsum("ni,ni->n", kets.conj(), pk).real
    eb = np.einsum("ni,ni->n", kets.conj(), bk).real
    G = np.empty((len(kets), 2, 2))
    G[:, 0, 0] = 4 * (np.einsum("ni,ni->n", pk.conj(), pk).real - ep**2)
    G[:, 1, 1] = 4 * (np.einsum("ni,ni->n", bk.conj(), bk).real - eb**2)
    G[:, 0, 1] = G[:, 1, 0] = 4 * (np.einsum("ni,ni->n", pk.conj(), bk).real - ep * eb)
    Fmax = np.zeros_like(G)
    Fmax[:, 0, 0] = 16 * s**2
    Fmax[:, 1, 1] = 4.0
    return Fmax - G


def commuting_qfim(ket, spectra):
    """4 Cov(H1, H2) for diagonal H1 = diag(lam), H2 = diag(lam_prime)."""
    p = np.abs(np.asarray(ket)) ** 2
    h = (spectra.lam, spectra.lam_prime)
    mean = [p @ x for x in h]
    return np.array([[4 * (p @ (h[i] * h[j]) - mean[i] * mean[j]) for j in range(2)] for i in range(2)])


def commuting_example_spectra(base=0.0, base_prime=0.0):
    """lam_1 = lam_3 = lam_2 - 1 and lam'_2 = lam'_3 = lam'_1 - 1."""
    return CommutingSpectra(np.array([base, base + 1, base]),
                            np.array([base_prime + 1, base_prime, base_prime]))


def commuting_cost(pops, W):
    """QCRB of the commuting example as a function of (|c0|^2, |c1|^2)."""
    a, b = pops[0], pops[1]
    c = 1 - a - b
    return 0.25 * (W.w22 / a + W.w11 / b + (W.w11 + W.w22 + 2 * W.w12) / c)


def commuting_optimal_amplitudes(W):
    """Minimiser (|c0|, |c1|, |c2|) of the commuting-example cost.

    Stationarity on the simplex forces |c0|^2 : |c1|^2 : |c2|^2 =
    sqrt(w22) : sqrt(w11) : sqrt(w11 + w22 + 2 w12).
    """
    if not isinstance(W, WeightMatrix):
        raise InvalidWeight("weight matrix not positive definite")
    roots = np.sqrt([W.w22, W.w11, W.w11 + W.w22 + 2 * W.w12])
    return tuple(float(x) for x in np.sqrt(roots / roots.sum()))

