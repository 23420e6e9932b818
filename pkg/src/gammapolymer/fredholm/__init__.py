"""Fredholm determinants on contours for the finite-n and limiting kernels."""

from .contours import (
    CONTOUR_KINDS,
    Contour,
    QuadratureRule,
    admissible,
    build_contour,
    circle,
    prelimit_contours,
    vertical_line,
    wedge_v,
    wedge_w,
)
from .finite import (
    DegenerateParameterError,
    TruncationError,
    det_matrix_formula,
    det_matrix_formula_limit,
    lt_det,
    sklyanin_lt,
)
from .kernels import (
    ContourConfigurationError,
    KernelSpec,
    ParameterSet,
    finite_lt_spec,
    kernel_finite_LT,
    kernel_limit,
    kernel_prelimit,
    limit_spec,
    line_rule,
    prelimit_spec,
)
from .nystrom import ImaginaryResidueError, NumericalError, nystrom_det, nystrom_det_complex
from .prelimit import prelimit_det
from .tracy_widom import (
    RangeError,
    limit_det,
    matched_argument,
    tracy_widom_cdf,
    tracy_widom_direct,
    tracy_widom_mean,
    tw_scale_candidates,
)
