from aniso_swarm.linestab.ansatz import LineAnsatz, admissible_angles, integer_direction, line_positions
from aniso_swarm.linestab.closed_forms import (
    ThresholdScan,
    closed_form_exponential,
    closed_form_exponential_unshifted,
    closed_form_linear,
    first_unstable_mode,
    kc_attraction_repulsion_integral,
    linear_threshold_a0,
)
from aniso_swarm.linestab.highwave import (
    HighWaveReport,
    RotatedHighWave,
    highwave_check,
    rotated_line_highwave,
    rotated_sweep,
)
from aniso_swarm.linestab.quadrature import QuadratureSpec, half_line_rule, integrate_half_line
from aniso_swarm.linestab.spectrum import (
    SpectrumSource,
    StabilitySpectrum,
    Verdict,
    classify_vertical_line,
    horizontal_line_eigs,
    horizontal_line_eigs_array,
    stability_matrix,
    steady_residual,
    steady_residual_continuum,
    vertical_line_eigs_continuum,
    vertical_line_eigs_continuum_array,
    vertical_line_eigs_discrete,
    vertical_line_eigs_discrete_array,
)

__all__ = [
    "HighWaveReport",
    "LineAnsatz",
    "QuadratureSpec",
    "RotatedHighWave",
    "SpectrumSource",
    "StabilitySpectrum",
    "ThresholdScan",
    "Verdict",
    "admissible_angles",
    "classify_vertical_line",
    "closed_form_exponential",
    "closed_form_exponential_unshifted",
    "closed_form_linear",
    "first_unstable_mode",
    "half_line_rule",
    "highwave_check",
    "horizontal_line_eigs",
    "horizontal_line_eigs_array",
    "integer_direction",
    "integrate_half_line",
    "kc_attraction_repulsion_integral",
    "line_positions",
    "linear_threshold_a0",
    "rotated_line_highwave",
    "rotated_sweep",
    "stability_matrix",
    "steady_residual",
    "steady_residual_continuum",
    "vertical_line_eigs_continuum",
    "vertical_line_eigs_continuum_array",
    "vertical_line_eigs_discrete",
    "vertical_line_eigs_discrete_array",
]
