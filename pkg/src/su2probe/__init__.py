"""Optimal probes and precision bounds for estimating two SU(2) phases."""

from .effective_hamiltonians import (EncodingConfig, EtaPair, ReparamCoords, eta_pair,
                                     eta_reparam, jacobian, reparam)
from .errors import EstimationError, Infeasible
from .oracle import OracleReport, grid_search_min_bound, verify_all
from .qubit_estimation import (DEFAULT_WEIGHT, WeightMatrix, hcrb_qubit, min_hcrb_qubit,
                               optimal_qubit_probe, qfim_pure_qubit, uhlmann_pure_qubit)
from .qutrit_estimation import (AnsatzParams, commuting_optimal_amplitudes, min_qcrb_qutrit,
                                optimal_qutrit_probe, qcrb_trace)

__version__ = "0.1.0"
