"""Finite-horizon ruin probabilities for a compound Poisson insurer with
heavy-tailed claims under largest-claims (LCR) and ECOMOR reinsurance."""

from .asymptotics import (PreconstantInputs, asymptotic_ruin_probability, preconstant,
                          preconstant_gamma_form, preconstant_quadrature)
from .claims import ClaimModel, ShiftedPareto
from .config import ExperimentSpec, ScenarioConfig, SimControls
from .montecarlo import (EstimatorResult, crude_mc, default_delta, importance_sampling,
                         prob_big_jump_set, sample_path_conditional, treaty_delta)
from .premiums import drift, expected_ecomor, expected_lcr, net_premium, reinsurance_premium
from .riskpath import SamplePath, Treaty, TreatySpec, is_ruin, ruin_functional

__version__ = "0.1.0"
