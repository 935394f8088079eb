"""Quantum switches over qubit channels.

Conventional (Kraus-level) and universal (spectrum-level) switch
constructions, damping-channel families, divisibility diagnostics, and the
experiment sweeps exposed through the ``qswitch`` command line tool.
"""

from .channels import (ChannelFamily, DensityMatrix, KrausChannel, NoiseStrength,
                       amplitude_damping, apply_channel, basis_state,
                       channel_from_noise, choi_matrix, compose, depolarizing,
                       helstrom_error, make_channel, maximally_mixed, mix_kraus,
                       phase_damping, plus_state, pure_state, trace_distance,
                       unitary_family)
from .cqs import (CommutativityReport, SwitchConfig, SwitchOutcome, apply_cqs,
                  apply_cqs_channels, build_switch_kraus, commutativity_defect,
                  default_certificate_grid, sigma_interval_map, sigma_two_stage)
from .divisibility import (Trajectory, WitnessReport, certify_cp_divisibility,
                           scan_monotonicity)
from .linalg import (EigenDecomposition, hermitian_eig, hermitian_exp,
                     partial_trace, tensor_product, trace_norm)
from .open_system import (FixedInputs, InteractionSchedule, SeHamiltonian,
                          evolve_reduced, reduced_map_trajectory,
                          reference_inputs, se_unitary)
from .uqs import (CausalOrderPair, OptimalBasis, UqsOutput, causal_order_states,
                  optimize_basis, overlap_functional, uqs_outputs)

__version__ = "0.1.0"
