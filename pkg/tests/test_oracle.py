import json

import numpy as np
import pytest

from su2probe.effective_hamiltonians import EncodingConfig, EtaPair, eta_pair
from su2probe.oracle import (OracleReport, encoded_state, grid_search_min_bound, lyapunov_residual,
                             numerical_effective_hamiltonians, numerical_eta, qfim_uhlmann_from_slds,
                             reports_to_json, reports_to_text, sld_from_state, verify_all)
from su2probe.qubit_estimation import WeightMatrix, optimal_qubit_probe
from su2probe.su2_algebra import QUBIT, QUTRIT, bloch_to_density, pauli_matrices


def _flipped(cfg):
    e = eta_pair(cfg)
    return EtaPair(e.eta1, -e.eta2)


def test_identity_point_hamiltonian():
    cfg = EncodingConfig.planar(0.7, 0.0, 0.0)
    H1, H2 = numerical_effective_hamiltonians(cfg)
    s = pauli_matrices()
    assert np.allclose(H1, -0.5 * sum(a * m for a, m in zip(cfg.a1, s)), atol=1e-9)


def test_second_order_convergence():
    cfg = EncodingConfig.planar(np.pi / 2, 0.3, 0.7)
    e = np.concatenate([eta_pair(cfg).eta1, eta_pair(cfg).eta2])
    err = [np.max(np.abs(np.concatenate(numerical_eta(cfg, h)) - e)) for h in (1e-3, 2e-4)]
    assert err[0] / err[1] == pytest.approx(25, rel=0.05)


def test_step_size_bounds():
    with pytest.raises(ValueError):
        numerical_effective_hamiltonians(EncodingConfig.planar(1, 1, 1), h=1e-2)


def test_pure_state_sld_residual():
    cfg = EncodingConfig.planar(1.0, 0.4, 0.6)
    rho, drhos = encoded_state(bloch_to_density([0, 0, 1]), cfg)
    slds = sld_from_state(rho, drhos)
    for d, L in zip(drhos, slds):
        assert np.allclose(L, L.conj().T)
        assert lyapunov_residual(rho, d, L) < 1e-12


def test_maximally_mixed_gives_zero_sld():
    cfg = EncodingConfig.planar(1.0, 0.4, 0.6)
    rho, drhos = encoded_state(np.eye(2) / 2, cfg)
    assert all(np.allclose(L, 0) for L in sld_from_state(rho, drhos))


def test_gram_matrix_for_orthogonal_probe():
    cfg = EncodingConfig.planar(1.0, 0.4, 0.6)
    e = eta_pair(cfg)
    r = e.cross / np.linalg.norm(e.cross)
    rho, drhos = encoded_state(bloch_to_density(r), cfg)
    F, D = qfim_uhlmann_from_slds(rho, sld_from_state(rho, drhos))
    assert np.allclose(F, [[e.eta1 @ e.eta1, e.eta1 @ e.eta2], [e.eta1 @ e.eta2, e.eta2 @ e.eta2]], atol=1e-9)


def test_qutrit_encoded_state_runs():
    cfg = EncodingConfig.planar(1.0, 0.4, 0.6)
    rho, drhos = encoded_state(np.diag([0.0, 1.0, 0.0]).astype(complex), cfg, rep=QUTRIT)
    assert rho.shape == (3, 3) and len(drhos) == 2


def test_grid_qubit_argmin_near_optimum():
    cfg = EncodingConfig.planar(np.pi / 2, 0.5, 0.5)
    res = grid_search_min_bound(QUBIT, cfg, WeightMatrix.identity(), resolution=200)
    assert res.feasible and res.margin >= -1e-9
    assert res.distance <= 2 * np.pi / 200
    assert np.allclose(res.closed_probe, optimal_qubit_probe(eta_pair(cfg)))


def test_grid_qutrit_fidelity():
    # B = pi/2, phi = 0.3 from perpendicular axes
    cfg = EncodingConfig.planar(np.pi / 2, np.pi / 2 * np.cos(0.3), np.pi / 2 * np.sin(0.3))
    res = grid_search_min_bound(QUTRIT, cfg, WeightMatrix.identity(), resolution=20)
    assert res.feasible and res.margin >= -1e-9
    assert res.distance > 0.999


def test_grid_reports_infeasible():
    res = grid_search_min_bound(QUBIT, EncodingConfig.planar(0.0, 0.5, 0.5), WeightMatrix.identity(), 20)
    assert not res.feasible and res.message.startswith("infeasible: |eta1 x eta2| = 0")
    res = grid_search_min_bound(QUTRIT, EncodingConfig.planar(0.0, 0.5, 0.5), WeightMatrix.identity(), 20)
    assert not res.feasible
    with pytest.raises(ValueError):
        grid_search_min_bound(QUBIT, EncodingConfig.planar(1, 1, 1), WeightMatrix.identity(), 10)


def test_report_serialisation():
    r = OracleReport.compare("x", [1.0, 2.0], [1.0, 2.0 + 1e-12], 1e-9)
    assert r.passed
    rec = json.loads(reports_to_json([r]))[0]
    assert set(rec) == {"name", "max_abs_error", "tolerance", "pass"}
    assert reports_to_text([r]).startswith("x ")


def test_verify_all_passes_and_is_deterministic():
    a = verify_all(0, 20)
    assert all(r.passed for r in a), reports_to_text(a)
    assert reports_to_json(a) == reports_to_json(verify_all(0, 20))


def test_verify_all_budget_zero():
    assert verify_all(0, 0) == []


def test_sign_flipped_eta2_is_caught():
    reports = verify_all(0, 10, eta_fn=_flipped)
    eta = next(r for r in reports if r.name == "eta_finite_difference")
    assert not eta.passed
