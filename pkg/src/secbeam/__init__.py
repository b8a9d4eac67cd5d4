"""Secure periodic beamforming with artificial noise and coset coding."""
from .channel import (EnvironmentSpec, TransmitStep, beampattern, channel_matrix, channel_vector,
                      direction_grid, random_disk_positions, sinr, sinr_over)
from .errors import (FieldTooSmall, IncompleteReception, InvalidGeometry, InvalidInput,
                     InvalidParameters, OracleInfeasible, PhaseInfeasible, RelaxationNotExact,
                     SecbeamError)
from .simulation import TransmissionReport, observed_steps, run
from .synthesis import (PeriodicStrategy, ScenarioSample, SynthesisReport, build_p1_finite,
                        build_p4, draw_scenario, extract_rank_one, sample_bound, synthesize,
                        synthesize_stationary, verify_rank_condition, violation_audit)
from .wiretap import CosetCode, build_code, decode, encode, equivocation

__version__ = "0.1.0"
