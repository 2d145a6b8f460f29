"""Link-level simulator for a two-cell indoor visible-light system where a
cell-edge user is jointly served by both cells through power-domain
superposition."""

from .analytic import (DecisionBoundaries, complexity_counts, decision_boundaries,
                       q_function, ser_center_lower_bound, ser_u2_analytic)
from .channel import (ChannelGains, OpticalFrontEnd, ScenarioGeometry, concentrator_gain,
                      dc_gain, gain_matrix, lambertian_order, link_geometry)
from .config import ExperimentConfig, load_config
from .constellation import (ConstellationSet, SpectralEfficiencies, center_points,
                            design_constellation, edge_points, from_raw_levels,
                            peak_powers, verify_gap_condition)
from .link import (MetricCounter, NoiseModel, OmaConfig, ReceivedSignals, SymbolTuple,
                   awgn_sample, decode_center_sic, decode_u2_jml, decode_u2_sic,
                   oma_pam_points, oma_round, pam_detect, superpose_transmit)
from .montecarlo import (SerEstimate, SerPoint, SweepConfig, philox_stream, run_sweep,
                         sigma_from_snr, wilson_interval)

__all__ = [
    "ChannelGains", "ConstellationSet", "DecisionBoundaries", "ExperimentConfig",
    "MetricCounter", "NoiseModel", "OmaConfig", "OpticalFrontEnd", "ReceivedSignals",
    "ScenarioGeometry", "SerEstimate", "SerPoint", "SpectralEfficiencies", "SweepConfig",
    "SymbolTuple", "awgn_sample", "center_points", "complexity_counts", "concentrator_gain",
    "dc_gain", "decision_boundaries", "decode_center_sic", "decode_u2_jml", "decode_u2_sic",
    "design_constellation", "edge_points", "from_raw_levels", "gain_matrix",
    "lambertian_order", "link_geometry", "load_config", "oma_pam_points", "oma_round", "pam_detect",
    "peak_powers", "philox_stream", "q_function", "run_sweep", "ser_center_lower_bound",
    "ser_u2_analytic", "sigma_from_snr", "superpose_transmit", "verify_gap_condition",
    "wilson_interval",
]

__version__ = "0.1.0"
