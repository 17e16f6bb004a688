"""Steady-state Loschmidt-echo probes of topological phase transitions
under Jordan-block-form non-Hermitian quenches."""

from .bdg import (BdgMatrix, KitaevLocalization, ZeroModePair, build_bdg,
                  extract_zero_modes, fold_spectrum, kitaev_x_pm,
                  lift_majorana, quasiparticle_energies)
from .dynamics import (DensityMatrix, QuenchResult, evolve_quench,
                       jordan_oracle_state, loschmidt_echo, run_echo,
                       steady_average, thermal_state, trivial_phase_firstorder,
                       two_level_oracle_rho)
from .errors import (CapacityError, ConfigError, NotPositiveSemidefiniteError,
                     NotTopologicalError, SingularParameterError,
                     TraceUnderflowError)
from .linalg import (HermEigDecomposition, expm, herm_eig, hermitize, psd_sqrt,
                     uhlmann_fidelity)
from .models import (BulkSpectrum, DoubleKitaevSpec, KitaevSpec, NanowireSpec,
                     ParafermionSpec, build_hamiltonian, build_modes,
                     bulk_spectrum, majorana_form_hamiltonian, phase_boundary,
                     spec_from_dict, spec_to_dict)
from .opalg import (FockSpace, ModeOperatorSet, algebra_check,
                    build_fermion_modes, build_parafermion_modes, clock_charge,
                    ground_parity_operator, majorana_modes, total_parity)
from .probes import (DoubleKitaevEdgeProbe, JordanFormReport, KitaevEdgeProbe,
                     KitaevRandomizedProbe, NanowireAuxProbe, NanowireMzmProbe,
                     ParafermionApproxProbe, ParafermionExactProbe,
                     build_probe, jordan_form_report,
                     parity_commutator_residual, probe_from_dict,
                     probe_to_dict)
from .sweep import (PhaseDiagram, render_heatmap, run_quench, run_single,
                    run_sweep)

__version__ = "0.1.0"
