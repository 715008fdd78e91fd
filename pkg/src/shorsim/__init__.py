"""shorsim: compiler, simulator and analysis suite for compiled order-finding
circuits at desk scale."""

__version__ = "0.1.0"

from ._kernels import backend_name
from .builder import (LEVELS, NAMED_CIRCUITS, build_order_finding_circuit,
                      default_argument_width, expand_iqft_marker, inverse_qft_gates,
                      named_circuit)
from .circuit import DENSE_CAP, Circuit
from .errors import (IncompleteDataError, NonConvergenceError, ParseError,
                     PreconditionError, ShorSimError, UnsupportedLevelError)
from .gates import Gate, GateKind, ModMul, gate_matrix
from .metrics import (concurrence, fidelity, ghz_frame_target, ghz_state, ghz_witness,
                      linear_entropy, tangle)
from .noise import Channel, NoiseModel, postselection_yield
from .numtheory import OrderProfile, coprimes, factors_from_order, order, phase_to_order
from .passes import (PIPELINE_ORDER, EquivalenceResult, PassResult,
                     cancel_adjacent_inverses, elide_inverse_qft,
                     eliminate_dead_qubit_gates, equivalence_check,
                     recode_function_register, remove_trivial_controlled_powers,
                     run_pipeline, specialize_cswap_to_cnot)
from .shor import (FactoringOutcome, PipelineStats, ideal_success_fraction,
                   postprocess_outcome, run_full_pipeline)
from .sim import (DENSITY_CAP, DensityMatrix, MeasurementRecord, PureState,
                  circuit_unitary, conditional_function_distribution, measure_logical,
                  partial_trace, register_distribution, run_density, run_pure)
from .textfmt import parse_circuit, serialize_circuit
from .tomography import (ChiMatrix, bootstrap_metric, chained_error_bound,
                         chi_of_channel, chi_of_unitary, pauli_basis, pauli_settings,
                         process_fidelity, process_tomography_records,
                         product_rule_fidelity, reconstruct_process, reconstruct_state,
                         simulate_process_tomography, simulate_state_tomography)

__all__ = [name for name in dir() if not name.startswith("_")]
