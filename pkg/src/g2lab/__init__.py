"""Flat-torus G2 gauge theory: exterior algebra, G2-structures, torus
fibrations, self-dual lifting, Chern-Simons evaluation and the deformation
obstruction, with a CLI front end."""

from .exterior import (
    ConstForm,
    Metric,
    Orientation,
    form_inner,
    hodge,
    interior,
    pullback_linear,
    volume_form,
    wedge,
)
from .fibration import (
    DeformationSplit,
    FibrationSpec,
    TorusFibration,
    build_fibration,
    decompose_deformation,
    poincare_pairing,
    pullback_along_f,
    xi_from_perturbation,
)
from .g2core import (
    G2Structure,
    eigen_split,
    energy_report,
    instanton_residual,
    metric_from_phi,
    standard_phi,
    standard_star_phi,
    standard_structure,
)
from .chernsimons import (
    CSContext,
    ObstructionReport,
    Verdict,
    closedness_residual,
    cs_functional,
    cs_one_form,
    obstruction_verdict,
    obstruction_verdict_lattice,
    pairing_oracle,
    path_integrate,
    perturbed_rho,
    perturbed_rho_lattice,
    rho_lattice,
    rho_on_translation,
    translation_tangent,
)
from .rng import SplitMix64
from . import gauge

__version__ = "0.1.0"
