"""Quantum state tomography of spin-j decay ensembles."""

from .basis import (BlochState, GellMannBasis, SpinOperatorSet, bloch_to_density,
                    gell_mann_basis, operator_to_bloch, spin_expectations,
                    spin_matrices, spin_operator_set, spin_product_expectations)
from .events import EventArray
from .kinematics import (BeamBasis, ChannelConfig, build_beam_basis,
                         channel_config, reduce_to_angles)
from .lhe import LheLiteEvent, LheParseError, LheParticle, parse_lhe_lite
from .models import (MeasurementModel, model_projector, model_spin_half,
                     model_W_massive, model_W_massless, model_Z_dilepton,
                     model_Z_sm, preset, validate_povm)
from .observables import (ObservableReport, cglmp_expectation, cglmp_max,
                          cglmp_operator, chsh_max, concurrence_bound,
                          concurrence_bound_trace, diagnostics,
                          wootters_concurrence)
from .sampling import (marginal_cos_theta_cdf, pdf_bipartite, pdf_single,
                       sample_bipartite, sample_single)
from .states import reference_state, werner, werner_qubit
from .symbols import (ClosedFormSymbols, RotationOperator, SymbolSet,
                      build_symbols, golden_tables, massive_w_p_mixing,
                      p_symbols, projector, q_symbols, rotation_matrices,
                      rotation_operator, sphere_quadrature, z_dilepton_p_mixing)
from .tomography import (Accumulator, ReconstructionResult, merge,
                         reconstruct_bipartite, reconstruct_identical,
                         reconstruct_single)

__version__ = "0.1.0"
