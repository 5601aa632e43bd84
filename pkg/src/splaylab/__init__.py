"""Classical capacity experiments on qubit channels.

Holevo and accessible-information functionals, the splaying and amplitude
damping channels, and deterministic optimizers over input ensembles.
"""

from .channels import (
    AffineBlochMap,
    KrausChannel,
    MeasurePrepareChannel,
    affine_of_channel,
    amplitude_damping,
    apply_affine,
    apply_kraus,
    apply_measure_prepare,
    identity_channel,
    product_extend,
    splaying_kraus,
    splaying_measure_prepare,
    validate_kraus,
)
from .infotheory import (
    BinaryEnsembleSpec,
    accessible_info_binary_symmetric,
    h_fuchs,
    holevo_orthogonal_closed_form,
    holevo_quantity,
    holevo_symmetric_pair,
    mutual_info_fixed_measurement,
    phi,
    shannon_entropy,
    variational_residuals,
    von_neumann_entropy,
)
from .optimize import (
    OptResult,
    best_binary_ensemble,
    best_individual_measurement_info,
    best_k_state_ensemble,
    best_orthogonal_capacity,
    maximize_1d,
    maximize_simplex,
    verify_antipodal_optimality,
)
from .states import (
    DensityOperator,
    Ensemble,
    Povm,
    angles_to_bloch,
    bloch_to_density,
    density_to_bloch,
    outcome_probabilities,
    trine_povm,
    validate_povm,
)

__version__ = "0.1.0"
