"""Casimir effect of a massless scalar on metric graphs (quantum networks).

Engines for star graphs (closed form), arbitrary graphs (junction
determinant on the imaginary axis), stars in higher dimensions, and an
independent brute-force spectral route used as an oracle.
"""
from .graph import (
    BC,
    EdgeSpec,
    GraphError,
    Leaf,
    MetricGraph,
    ValidationReport,
    preset_circle,
    preset_loop4,
    preset_star,
    preset_strip,
    preset_tree5,
    total_length,
    validate_graph,
)
from .secular import SecularFunction, det_real, log_derivative_imag, secular_function, star_secular_closed
from .casimir1d import (
    CasimirResult,
    ConvergenceError,
    conformal_residual,
    energy_general,
    energy_star,
    force_general,
    force_star,
)
from .highd import HighDResult, conformal_residual_highd, energy_per_area_star, plate_coefficient, pressure_star
from .oracle import (
    NormalizedMode,
    extrapolate_finite_part,
    find_zeros_general,
    find_zeros_star,
    mode_sum_energy,
    normalize_mode,
    pressure_appendix,
    regulated_energy,
)

__version__ = "0.1.0"
