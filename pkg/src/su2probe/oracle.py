"""Independent numerical checks for the closed-form results.

Nothing here calls the closed-form effective Hamiltonians or QFIM formulas
on the numerical side: derivatives come from finite differences or the
Frechet derivative of the matrix exponential, Fisher information from
explicitly constructed SLD operators, and optima from brute-force grids.
"""

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm, expm_frechet, sqrtm
from scipy.optimize import minimize

from . import qubit_estimation as qb
from . import qutrit_estimation as qt
from .effective_hamiltonians import EncodingConfig, eta_pair, eta_reparam, reparam
from .errors import Infeasible, SingularReparam
from .su2_algebra import QUBIT, QUTRIT, dot_generators, generators, pauli_matrices


@dataclass
class OracleReport:
    name: str
    closed_form: list = field(default_factory=list)
    numerical: list = field(default_factory=list)
    max_abs_error: float = 0.0
    tolerance: float = 0.0
    passed: bool = True

    @classmethod
    def compare(cls, name, closed, numerical, tolerance):
        closed = np.atleast_1d(np.asarray(closed, dtype=float))
        numerical = np.atleast_1d(np.asarray(numerical, dtype=float))
        err = float(np.max(np.abs(closed - numerical))) if closed.size else 0.0
        return cls(name, closed.ravel()[:3].tolist(), numerical.ravel()[:3].tolist(),
                   err, tolerance, err <= tolerance)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name:<26} {status}  max_abs_error={self.max_abs_error:.3e}  tolerance={self.tolerance:.1e}"

    def record(self):
        return {"name": self.name, "max_abs_error": self.max_abs_error,
                "tolerance": self.tolerance, "pass": self.passed}


def reports_to_json(reports):
    return json.dumps([r.record() for r in reports], indent=2) + "\n"


def reports_to_text(reports):
    return "".join(r.line() + "\n" for r in reports)


# -- effective Hamiltonians -------------------------------------------------

def _encoding_unitary(cfg, phi1, phi2, rep):
    g = generators(rep)
    H = dot_generators(phi1 * cfg.a1 + phi2 * cfg.a2, g)
    return expm(-1j * H)


def numerical_effective_hamiltonians(cfg, h=1e-5, rep=QUBIT):
    """i (dU^dag/dphi_j) U by central differences of U^dag."""
    if not 1e-8 <= h <= 1e-3:
        raise ValueError("step must lie in [1e-8, 1e-3]")
    p = np.array([cfg.phi1, cfg.phi2])
    U = _encoding_unitary(cfg, *p, rep)
    out = []
    for k in range(2):
        d = np.zeros(2)
        d[k] = h
        up = _encoding_unitary(cfg, *(p + d), rep).conj().T
        dn = _encoding_unitary(cfg, *(p - d), rep).conj().T
        out.append(1j * (up - dn) / (2 * h) @ U)
    return tuple(out)


def eta_from_hamiltonian(H, rep=QUBIT):
    """Invert H = eta . S using Tr(S_a S_b) = delta_ab / 2 (qubit) or 2 delta_ab (qutrit)."""
    g = generators(rep)
    norm = 0.5 if rep == QUBIT else 2.0
    return np.array([np.trace(H @ s).real / norm for s in g])


def numerical_eta(cfg, h=1e-5, rep=QUBIT):
    return tuple(eta_from_hamiltonian(H, rep) for H in numerical_effective_hamiltonians(cfg, h, rep))


# -- SLD machinery ------------------------------------------------------------

def encoded_state(rho, cfg, rep=QUBIT):
    """rho_phi = U rho U^dag and its exact derivatives with respect to phi1, phi2."""
    g = generators(rep)
    A = -1j * dot_generators(cfg.phi1 * cfg.a1 + cfg.phi2 * cfg.a2, g)
    U = expm(A)
    drhos = []
    for a in (cfg.a1, cfg.a2):
        _, dU = expm_frechet(A, -1j * dot_generators(a, g))
        drhos.append(dU @ rho @ U.conj().T + U @ rho @ dU.conj().T)
    return U @ rho @ U.conj().T, drhos


def sld_from_state(rho, drhos, cutoff=1e-12):
    """SLDs (L)_mn = 2 (d rho)_mn / (l_m + l_n) in the eigenbasis of rho.

    Blocks with l_m + l_n below cutoff are set to zero.
    """
    w, V = np.linalg.eigh(rho)
    denom = w[:, None] + w[None, :]
    mask = denom > cutoff
    out = []
    for dr in drhos:
        d = V.conj().T @ dr @ V
        L = np.zeros_like(d)
        L[mask] = 2 * d[mask] / denom[mask]
        out.append(V @ L @ V.conj().T)
    return out


def lyapunov_residual(rho, drho, L):
    return float(np.max(np.abs(drho - 0.5 * (L @ rho + rho @ L))))


def qfim_uhlmann_from_slds(rho, slds):
    n = len(slds)
    T = np.array([[np.trace(rho @ slds[i] @ slds[j]) for j in range(n)] for i in range(n)])
    return T.real, float(T.imag[0, 1])


def qubit_oracle(r, cfg):
    """(QFIM, D12) of U rho U^dag from SLDs, for Bloch vector r."""
    rho = 0.5 * (np.eye(2) + dot_generators(r, pauli_matrices()))
    rho_phi, drhos = encoded_state(rho, cfg, QUBIT)
    return qfim_uhlmann_from_slds(rho_phi, sld_from_state(rho_phi, drhos))


def holevo_from_matrices(F, D12, W):
    """Tr(W F^-1) + || sqrt(W) F^-1 D F^-1 sqrt(W) ||_1 by dense linear algebra."""
    Wm = W.matrix if isinstance(W, qb.WeightMatrix) else np.asarray(W)
    Fi = np.linalg.inv(F)
    D = np.array([[0.0, D12], [-D12, 0.0]])
    sW = sqrtm(Wm).real
    M = sW @ Fi @ D @ Fi @ sW
    return float(np.trace(Wm @ Fi) + np.linalg.svd(M, compute_uv=False).sum())


# -- brute-force probe searches ----------------------------------------------

@dataclass
class GridResult:
    feasible: bool
    message: str = ""
    best_probe: np.ndarray = None
    best_value: float = np.inf
    closed_form: float = np.inf
    closed_probe: np.ndarray = None
    margin: float = np.nan
    distance: float = np.nan
    near_optimal: list = field(default_factory=list)


def sphere_grid(resolution):
    """Midpoint grid: resolution polar x 2*resolution azimuthal points."""
    chi = (np.arange(resolution) + 0.5) * np.pi / resolution
    vs = np.arange(2 * resolution) * np.pi / resolution
    C, V = np.meshgrid(chi, vs, indexing="ij")
    return np.stack([np.sin(C) * np.cos(V), np.sin(C) * np.sin(V), np.cos(C)], axis=-1).reshape(-1, 3)


def hcrb_on_grid(rs, etas, W):
    """Vectorised pure-state HCRB; infinite where the QFIM is singular."""
    t = rs @ etas.cross
    x1 = np.cross(rs, etas.eta1)
    x2 = np.cross(rs, etas.eta2)
    q = (W.w11 * np.einsum("ij,ij->i", x2, x2) + W.w22 * np.einsum("ij,ij->i", x1, x1)
         - 2 * W.w12 * np.einsum("ij,ij->i", x1, x2))
    with np.errstate(divide="ignore", invalid="ignore"):
        val = q / t**2 + 2 * np.sqrt(W.det) / np.abs(t)
    return np.where(np.abs(t) < 1e-10, np.inf, val)


def _angle(u, v):
    return float(np.arctan2(np.linalg.norm(np.cross(u, v)), u @ v))


def qutrit_qcrb_batch(kets, cfg, W, etas=None):
    etas = etas or eta_pair(cfg)
    F = qt.batch_qfim(kets, etas.eta1, etas.eta2)
    det = F[:, 0, 0] * F[:, 1, 1] - F[:, 0, 1] ** 2
    num = W.w11 * F[:, 1, 1] + W.w22 * F[:, 0, 0] - 2 * W.w12 * F[:, 0, 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        val = num / det
    return np.where(det > 1e-12, val, np.inf)


def grid_search_min_bound(problem, cfg, W, resolution=200, refine=True, rel_tol=1e-6):
    """Brute-force minimum of the qubit HCRB or the qutrit QCRB over pure probes.

    Qubit probes are gridded by sphere angles (resolution x 2 resolution);
    qutrit probes by the (theta0, theta1, ph1, ph-1) chart with `resolution`
    points per angle, optionally polished by a local search.
    """
    if resolution < 20:
        raise ValueError("resolution must be at least 20 points per angle")
    if problem == QUBIT:
        return _grid_qubit(cfg, W, resolution, rel_tol)
    if problem == QUTRIT:
        return _grid_qutrit(cfg, W, resolution, refine, rel_tol)
    raise ValueError(f"unknown problem {problem!r}")


def _grid_qubit(cfg, W, resolution, rel_tol):
    etas = eta_pair(cfg)
    n = float(np.linalg.norm(etas.cross))
    if n < 1e-12:
        return GridResult(False, f"infeasible: |eta1 x eta2| = {n:.3g}")
    rs = sphere_grid(resolution)
    vals = hcrb_on_grid(rs, etas, W)
    k = int(np.argmin(vals))
    best = vals[k]
    closed = qb.min_hcrb_qubit(etas, W)
    ropt = qb.optimal_qubit_probe(etas)
    near = rs[vals <= best * (1 + rel_tol)]
    dist = min(_angle(rs[k], ropt), _angle(rs[k], -ropt))
    return GridResult(True, "", rs[k], float(best), float(closed), ropt,
                      float(best - closed), dist, [v for v in near])


def _grid_qutrit(cfg, W, resolution, refine, rel_tol):
    try:
        closed = qt.min_qcrb_qutrit(cfg, W)
    except (Infeasible, SingularReparam) as exc:
        return GridResult(False, f"infeasible: {exc}")
    etas = eta_pair(cfg)
    t = (np.arange(resolution) + 0.5) * np.pi / resolution
    p = np.arange(resolution) * 2 * np.pi / resolution
    T0, T1, P1, PM = np.meshgrid(t, t, p, p, indexing="ij")
    kets = qt.chart_probe(T0.ravel(), T1.ravel(), P1.ravel(), PM.ravel())
    vals = qutrit_qcrb_batch(kets, cfg, W, etas)
    k = int(np.argmin(vals))
    x0 = np.array([T0.ravel()[k], T1.ravel()[k], P1.ravel()[k], PM.ravel()[k]])
    best, probe = float(vals[k]), kets[k]
    near = [kv for kv in kets[vals <= best * (1 + rel_tol)]]
    if refine:
        f = lambda x: float(qutrit_qcrb_batch(qt.chart_probe(*x)[None, :], cfg, W, etas)[0])
        res = minimize(f, x0, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 20000, "maxfev": 40000})
        if res.fun < best:
            best, probe = float(res.fun), qt.chart_probe(*res.x)
    opt = qt.optimal_qutrit_probe(reparam(cfg))
    return GridResult(True, "", probe, best, float(closed), opt, best - closed,
                      qt.fidelity(probe, opt), near)


# -- aggregate verification --------------------------------------------------

def _random_cfg(rng, planar=True):
    theta = rng.uniform(0.05, np.pi - 0.05)
    p1, p2 = rng.uniform(-2, 2, 2)
    if planar:
        return EncodingConfig.planar(theta, p1, p2)
    a1 = rng.standard_normal(3)
    a1 /= np.linalg.norm(a1)
    a2 = rng.standard_normal(3)
    a2 -= (a2 @ a1) * a1
    a2 /= np.linalg.norm(a2)
    return EncodingConfig(a1, np.cos(theta) * a1 + np.sin(theta) * a2, p1, p2)


def _random_weight(rng):
    M = rng.standard_normal((2, 2))
    return qb.WeightMatrix.from_matrix(M @ M.T + 0.1 * np.eye(2))


def _random_unit(rng):
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


def suite_eta(rng, budget, eta_fn=eta_pair, h=1e-5):
    closed, num = [], []
    for i in range(budget):
        cfg = _random_cfg(rng, planar=i % 2 == 0)
        e = eta_fn(cfg)
        n1, n2 = numerical_eta(cfg, h)
        closed += [e.eta1, e.eta2]
        num += [n1, n2]
    return OracleReport.compare("eta_finite_difference", closed, num, 1e-6)


def suite_fd_convergence(rng, budget):
    """Error ratio for h -> h/10 should be ~100 (second order)."""
    ratios = []
    for _ in range(max(1, budget // 20)):
        cfg = _random_cfg(rng)
        e = eta_pair(cfg)
        errs = [max(np.abs(np.concatenate(numerical_eta(cfg, h)) - np.concatenate([e.eta1, e.eta2])))
                for h in (1e-3, 1e-4)]
        ratios.append(errs[0] / errs[1])
    order = np.log10(np.asarray(ratios))
    return OracleReport.compare("fd_second_order", np.full(len(order), 2.0), order, 0.2)


def suite_qubit_qfim(rng, budget):
    closed, num, lyap = [], [], 0.0
    for _ in range(budget):
        cfg = _random_cfg(rng, planar=False)
        etas = eta_pair(cfg)
        r = _random_unit(rng)
        F_num, D_num = qubit_oracle(r, cfg)
        closed += [qb.qfim_pure_qubit(r, etas).ravel(), [qb.uhlmann_pure_qubit(r, etas)]]
        num += [F_num.ravel(), [D_num]]
    return OracleReport.compare("qubit_qfim_uhlmann_sld", np.concatenate(closed), np.concatenate(num), 1e-9)


def suite_lyapunov(rng, budget):
    worst = 0.0
    for _ in range(budget):
        cfg = _random_cfg(rng)
        r = _random_unit(rng) * rng.uniform(0.1, 1.0)
        rho = 0.5 * (np.eye(2) + dot_generators(r, pauli_matrices()))
        rho_phi, drhos = encoded_state(rho, cfg)
        for dr, L in zip(drhos, sld_from_state(rho_phi, drhos)):
            worst = max(worst, lyapunov_residual(rho_phi, dr, L))
    return OracleReport("sld_lyapunov_residual", [], [worst], worst, 1e-9, worst <= 1e-9)


def suite_det_identity(rng, budget):
    closed, num = [], []
    for _ in range(budget):
        etas = eta_pair(_random_cfg(rng))
        r = _random_unit(rng)
        closed.append(np.linalg.det(qb.qfim_pure_qubit(r, etas)))
        num.append((r @ etas.cross) ** 2)
    return OracleReport.compare("qubit_det_identity", closed, num, 1e-10)


def suite_mixed(rng, budget):
    closed, num = [], []
    for _ in range(budget):
        cfg = _random_cfg(rng)
        etas = eta_pair(cfg)
        r = _random_unit(rng) * rng.uniform(0.2, 0.99)
        m = qb.mixed_state_bounds(r, etas, qb.WeightMatrix.identity())
        F_num, D_num = qubit_oracle(r, cfg)
        closed += [m.qfim.ravel(), [m.uhlmann]]
        num += [F_num.ravel(), [D_num]]
    return OracleReport.compare("mixed_qubit_scaling", np.concatenate(closed), np.concatenate(num), 1e-9)


def suite_hcrb_two_route(rng, budget):
    closed, num = [], []
    for _ in range(budget):
        cfg = _random_cfg(rng)
        etas = eta_pair(cfg)
        W = _random_weight(rng)
        r = _random_unit(rng)
        if abs(r @ etas.cross) < 0.05:
            continue
        F_num, D_num = qubit_oracle(r, cfg)
        c = qb.hcrb_qubit(r, etas, W)
        closed.append(1.0)
        num.append(holevo_from_matrices(F_num, D_num, W) / c)
    return OracleReport.compare("qubit_hcrb_two_route_rel", closed, num, 1e-8)


def suite_qubit_grid(rng, budget, resolution=100):
    under, dist = [], []
    for _ in range(max(1, budget // 25)):
        cfg = _random_cfg(rng)
        res = grid_search_min_bound(QUBIT, cfg, _random_weight(rng), resolution)
        under.append(max(0.0, -res.margin))
        dist.append(res.distance)
    err = float(max(under))
    ok = err <= 1e-9 and max(dist) <= 2 * np.pi / resolution
    return OracleReport("qubit_grid_optimality", [], [max(dist)], err, 1e-9, ok)


def suite_qutrit_reparam(rng, budget):
    closed, num = [], []
    for _ in range(budget):
        p = qt.AnsatzParams(rng.uniform(0, np.pi / 2), rng.uniform(-np.pi, np.pi))
        coords = reparam(_random_cfg(rng))
        coords = type(coords)(rng.uniform(0, 2 * np.pi), coords.phi)
        ket = qt.ansatz_probe(p, coords)
        ep, eb = eta_reparam(coords)
        closed.append(qt.reparam_qfim_ansatz(p, coords.B).ravel())
        num.append(qt.qfim_matrix(ket, ep, eb).ravel())
    return OracleReport.compare("qutrit_reparam_qfim", np.concatenate(closed), np.concatenate(num), 1e-9)


def suite_qutrit_weak(rng, budget):
    vals = []
    for _ in range(budget):
        cfg = _random_cfg(rng)
        p = qt.AnsatzParams(rng.uniform(0, np.pi / 2), rng.uniform(-np.pi, np.pi))
        vals.append(qt.weak_commutation_residual(qt.ansatz_probe(p, reparam(cfg)), eta_pair(cfg)))
    return OracleReport.compare("qutrit_weak_commutation", np.zeros(len(vals)), vals, 1e-10)


def suite_jacobian(rng, budget):
    closed, num = [], []
    for _ in range(budget):
        cfg = _random_cfg(rng)
        etas = eta_pair(cfg)
        ket = qt.optimal_qutrit_probe(reparam(cfg))
        closed.append(qt.optimal_qfim(cfg).ravel())
        num.append(qt.qfim_matrix(ket, etas.eta1, etas.eta2).ravel())
    return OracleReport.compare("qutrit_jacobian_congruence", np.concatenate(closed), np.concatenate(num), 1e-8)


def suite_loewner(rng, budget):
    seed = int(rng.integers(2**31))
    rep = qt.loewner_dominance_scan(max(1, 100 * budget), seed)
    err = max(0.0, -rep.min_eigenvalue)
    return OracleReport("qutrit_loewner_dominance", [], [rep.min_eigenvalue], err, 1e-9, rep.passed)


def suite_qutrit_grid(rng, budget, resolution=20):
    under = []
    for _ in range(max(1, budget // 50)):
        cfg = _random_cfg(rng)
        res = grid_search_min_bound(QUTRIT, cfg, _random_weight(rng), resolution, refine=False)
        under.append(max(0.0, -res.margin))
    err = float(max(under))
    return OracleReport("qutrit_grid_optimality", [], [err], err, 1e-9, err <= 1e-9)


def suite_commuting(rng, budget, steps=1000):
    errs = []
    h = 1.0 / steps
    grid = (np.arange(1, steps) * h)
    A, B = np.meshgrid(grid, grid, indexing="ij")
    ok = A + B < 1 - h / 2
    for _ in range(max(1, budget // 50)):
        W = _random_weight(rng)
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.where(ok, qt.commuting_cost((A, B), W), np.inf)
        k = np.unravel_index(np.argmin(vals), vals.shape)
        c = qt.commuting_optimal_amplitudes(W)
        errs.append(max(abs(c[0] ** 2 - A[k]), abs(c[1] ** 2 - B[k])))
    return OracleReport.compare("commuting_minimiser_grid", np.zeros(len(errs)), errs, 2 * h)


SUITES = [
    ("eta_finite_difference", suite_eta),
    ("fd_second_order", suite_fd_convergence),
    ("qubit_qfim_uhlmann_sld", suite_qubit_qfim),
    ("sld_lyapunov_residual", suite_lyapunov),
    ("qubit_det_identity", suite_det_identity),
    ("mixed_qubit_scaling", suite_mixed),
    ("qubit_hcrb_two_route_rel", suite_hcrb_two_route),
    ("qubit_grid_optimality", suite_qubit_grid),
    ("qutrit_reparam_qfim", suite_qutrit_reparam),
    ("qutrit_weak_commutation", suite_qutrit_weak),
    ("qutrit_jacobian_congruence", suite_jacobian),
    ("qutrit_loewner_dominance", suite_loewner),
    ("qutrit_grid_optimality", suite_qutrit_grid),
    ("commuting_minimiser_grid", suite_commuting),
]


def verify_all(seed=0, budget=100, eta_fn=eta_pair):
    """Run every suite with `budget` random instances; deterministic in seed.

    Each suite draws from its own child stream, so results do not depend on
    suite order.
    """
    if budget <= 0:
        return []
    children = np.random.SeedSequence(seed).spawn(len(SUITES))
    out = []
    for (name, fn), ss in zip(SUITES, children):
        rng = np.random.default_rng(ss)
        if fn is suite_eta:
            out.append(fn(rng, budget, eta_fn=eta_fn))
        else:
            out.append(fn(rng, budget))
    return out

