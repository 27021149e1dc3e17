"""Acceptance criteria, one test each, at their stated tolerances.

Every test prints a single "ACCEPTANCE <n> PASS|FAIL ..." line.  Run the file
directly (python3 tests/test_acceptance.py) for just the summary lines.
"""

import subprocess
import sys
import time

import numpy as np
import pytest

from su2probe.cli import ScanSpec, run_scan
from su2probe.effective_hamiltonians import EncodingConfig, eta_reparam, eta_pair
from su2probe.oracle import (encoded_state, grid_search_min_bound, numerical_eta,
                             qfim_uhlmann_from_slds, qubit_oracle, sld_from_state)
from su2probe.qubit_estimation import (DEFAULT_WEIGHT, WeightMatrix, hcrb_qubit, mixed_state_bounds,
                                       optimal_qubit_probe, qfim_pure_qubit, small_param_optimal_probe,
                                       uhlmann_pure_qubit)
from su2probe.qutrit_estimation import (AnsatzParams, ansatz_probe, commuting_optimal_amplitudes,
                                        loewner_dominance_scan, max_reparam_qfim, optimal_ansatz_params,
                                        qfim_matrix, reparam_qfim_ansatz)
from su2probe.effective_hamiltonians import ReparamCoords
from su2probe.su2_algebra import QUBIT, bloch_to_density


@pytest.fixture
def emit(capsys):
    def _emit(n, ok, detail):
        line = f"ACCEPTANCE {n:>2} {'PASS' if ok else 'FAIL'}  {detail}"
        # printed outside pytest's capture so it shows in every run
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
    return _emit


def _cfgs(rng, n):
    thetas = rng.uniform(0.05, np.pi - 0.05, n)
    phis = rng.uniform(-2, 2, (n, 2))
    return [EncodingConfig.planar(t, p1, p2) for t, (p1, p2) in zip(thetas, phis)]


def _unit(v):
    return v / np.linalg.norm(v)


def _angle(u, v):
    return float(np.arctan2(np.linalg.norm(np.cross(u, v)), u @ v))


def test_1_eta_oracle(emit):
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    err = 0.0
    for cfg in _cfgs(rng, 500):
        e = eta_pair(cfg)
        n1, n2 = numerical_eta(cfg, h=1e-5)
        err = max(err, np.max(np.abs(e.eta1 - n1)), np.max(np.abs(e.eta2 - n2)))
    dt = time.perf_counter() - t0
    emit(1, err < 1e-6 and dt < 10, f"eta closed form vs finite differences: max_err={err:.2e} (<1e-6), "
                                    f"500 configs in {dt:.2f}s (<10s)")


def test_2_qfim_uhlmann_oracle(emit):
    rng = np.random.default_rng(102)
    err_f = err_d = err_det = 0.0
    for cfg in _cfgs(rng, 500):
        e = eta_pair(cfg)
        r = _unit(rng.standard_normal(3))
        F = qfim_pure_qubit(r, e)
        D = uhlmann_pure_qubit(r, e)
        F_num, D_num = qubit_oracle(r, cfg)
        err_f = max(err_f, np.max(np.abs(F - F_num)))
        err_d = max(err_d, abs(D - D_num))
        err_det = max(err_det, abs(np.linalg.det(F) - (r @ e.cross) ** 2))
    ok = err_f < 1e-9 and err_d < 1e-9 and err_det < 1e-10
    emit(2, ok, f"QFIM err={err_f:.2e}, D12 err={err_d:.2e} (<1e-9), det identity err={err_det:.2e} (<1e-10)")


def test_3_qubit_grid_optimality(emit):
    rng = np.random.default_rng(103)
    t0 = time.perf_counter()
    res_n = 200
    step = np.pi / res_n
    worst_margin, worst_dist = np.inf, 0.0
    cfgs = _cfgs(rng, 10)
    for _ in range(20):
        M = rng.standard_normal((2, 2))
        W = WeightMatrix.from_matrix(M @ M.T + 0.1 * np.eye(2))
        for cfg in cfgs:
            g = grid_search_min_bound(QUBIT, cfg, W, resolution=res_n)
            worst_margin = min(worst_margin, g.margin)
            worst_dist = max(worst_dist, g.distance)
    dt = time.perf_counter() - t0
    ok = worst_margin >= -1e-9 and worst_dist <= 2 * step and dt < 60
    emit(3, ok, f"min(grid - closed)={worst_margin:.2e} (>=-1e-9), max argmin angle={worst_dist:.4f} "
                f"(<= {2 * step:.4f}), 200 cases in {dt:.1f}s (<60s)")


def test_4_mixed_state_scaling(emit):
    rng = np.random.default_rng(104)
    cfg = EncodingConfig.planar(1.1, 0.6, -0.8)
    e = eta_pair(cfg)
    err = 0.0
    strict = True
    for p in (0.2, 0.5, 0.8):
        for _ in range(10):
            u = _unit(rng.standard_normal(3))
            if abs(u @ e.cross) < 0.05:
                continue
            r = np.sqrt(p) * u
            F_pure, D_pure = qubit_oracle(u, cfg)
            F_mix, D_mix = qubit_oracle(r, cfg)
            err = max(err, np.max(np.abs(F_mix - p * F_pure)), abs(D_mix - p**1.5 * D_pure))
            m = mixed_state_bounds(r, e, DEFAULT_WEIGHT)
            err = max(err, np.max(np.abs(m.qfim - F_mix)), abs(m.uhlmann - D_mix))
            strict &= m.hcrb > hcrb_qubit(u, e, DEFAULT_WEIGHT)
    emit(4, err < 1e-9 and strict, f"F ~ |r|^2, D ~ +|r|^3 vs SLD oracle: max_err={err:.2e} (<1e-9); "
                                   f"mixed HCRB > pure HCRB: {strict}")


def test_5_qutrit_reparam_qfim(emit):
    rng = np.random.default_rng(105)
    err = off = 0.0
    for _ in range(1000):
        p = AnsatzParams(rng.uniform(0, np.pi / 2), rng.uniform(-np.pi, np.pi))
        coords = ReparamCoords(rng.uniform(0, 2 * np.pi), rng.uniform(-np.pi, np.pi))
        ephi, eB = eta_reparam(coords)
        G = qfim_matrix(ansatz_probe(p, coords), ephi, eB)
        err = max(err, np.max(np.abs(G - reparam_qfim_ansatz(p, coords.B))))
        off = max(off, abs(G[0, 1]))
    opt = 0.0
    for B in rng.uniform(0, 2 * np.pi, 100):
        coords = ReparamCoords(B, rng.uniform(-np.pi, np.pi))
        ephi, eB = eta_reparam(coords)
        G = qfim_matrix(ansatz_probe(optimal_ansatz_params(B), coords), ephi, eB)
        target = np.diag([16 * np.sin(B / 2) ** 2, 4.0])
        opt = max(opt, np.max(np.abs(G - target)), np.max(np.abs(max_reparam_qfim(B) - target)))
    ok = err < 1e-9 and off < 1e-10 and opt < 1e-10
    emit(5, ok, f"closed vs covariance err={err:.2e} (<1e-9), |offdiag|={off:.2e} (<1e-10), "
                f"optimum diag err={opt:.2e} (<1e-10)")


def test_6_loewner_dominance(emit):
    t0 = time.perf_counter()
    rep = loewner_dominance_scan(100_000, seed=106)
    dt = time.perf_counter() - t0
    emit(6, rep.min_eigenvalue >= -1e-9 and dt < 30,
         f"min eig(F_max - G)={rep.min_eigenvalue:.2e} (>=-1e-9) over 1e5 samples in {dt:.2f}s (<30s)")


def test_7_commuting_minimiser(emit):
    expected = np.array([0.5308, 0.7937, 0.2970])
    got = np.array(commuting_optimal_amplitudes(WeightMatrix(1.0, 1.0, 0.2)))
    err = np.abs(got - expected)
    emit(7, bool(np.all(err < 1e-3)),
         f"amplitudes={np.round(got, 6).tolist()} vs {expected.tolist()}: max_err={err.max():.3e} (<1e-3)")


def test_8_theta_scan_shape(emit):
    t0 = time.perf_counter()
    spec = dict(theta_min=0.05, theta_max=np.pi - 0.05, steps=181, phi1=0.5, phi2=0.5,
                weight=DEFAULT_WEIGHT)
    qb = run_scan(ScanSpec(model="qubit", **spec))
    qt = run_scan(ScanSpec(model="qutrit", **spec))
    dt = time.perf_counter() - t0
    th = np.array([r[0] for r in qb])
    b_qb = np.array([r[1] for r in qb])
    b_qt = np.array([r[1] for r in qt])
    step = th[1] - th[0]
    k = int(np.argmin(b_qb))
    ratio = b_qb[0] / b_qb[k]
    gap = float(np.max(b_qt - b_qb))
    ok = ratio > 10 and abs(th[k] - np.pi / 2) > step and gap <= 1e-9 and dt < 10
    emit(8, ok, f"bound(0.05)/min={ratio:.1f} (>10), argmin={th[k]:.4f} |-pi/2|={abs(th[k] - np.pi / 2):.4f} "
                f"(>{step:.4f}), max(qutrit-qubit)={gap:.2e} (<=1e-9), {dt:.2f}s (<10s)")


def test_9_small_parameter_probe(emit):
    angles = []
    for phi in (1e-3, 1e-5):
        cfg = EncodingConfig.planar(np.pi / 2, phi, phi)
        angles.append(_angle(small_param_optimal_probe(cfg), optimal_qubit_probe(eta_pair(cfg))))
    rate = np.log10(angles[0] / angles[1]) / 2
    ok = angles[0] < 1e-5 and angles[1] < 1e-9 and rate >= 2
    emit(9, ok, f"angle(1e-3)={angles[0]:.2e} (<1e-5), angle(1e-5)={angles[1]:.2e} (<1e-9), "
                f"observed order={rate:.2f} (>=2)")


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "su2probe", *args], capture_output=True)


def test_10_determinism(tmp_path, emit):
    outs = []
    for i in range(2):
        csv = tmp_path / f"scan{i}.csv"
        js = tmp_path / f"verify{i}.json"
        s = _cli("scan", "--model", "qutrit", "--phi1", "0.5", "--phi2", "0.5", "--out", str(csv))
        v = _cli("verify", "--seed", "7", "--budget", "50", "--json", str(js))
        outs.append((s.returncode, v.returncode, csv.read_bytes(), v.stdout, js.read_bytes()))
    ok = outs[0] == outs[1] and outs[0][0] == 0 and outs[0][1] == 0
    emit(10, ok, f"scan CSV and verify text/JSON byte-identical across two runs: {outs[0] == outs[1]}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
