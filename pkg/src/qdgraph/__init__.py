"""Critical graphs, short trajectories and periods of rational quadratic differentials."""

from .algebra import (INFINITY, BranchState, CutBranch, DoublePoleKind,
                      FactoredRational, LocalData, classify_double_pole,
                      continue_sqrt, evaluate, local_data,
                      residue_at_infinity_sqrt)
from .detector import (HomotopySignature, ShortTrajectoryReport, closed_arc,
                       find_short_trajectory, gamma_set, homotopy_signature,
                       orthogonal_obstruction)
from .errors import *  # noqa: F401,F403
from .families import (JacobiParams, LaguerreParams, OverlayReport,
                       SweepResult, jacobi_polynomial_zeros, jacobi_qd,
                       jacobi_zeros, laguerre_polynomial_zeros, laguerre_qd,
                       laguerre_zeros, sweep, zero_measure_overlay)
from .geometry import hausdorff_distance, min_distance
from .periods import (OrientedArc, QuantizationResult, Side, circle,
                      condition_check, contour_integral_sqrt,
                      encircling_contour, integrate_sqrt,
                      jacobi_quantization, laguerre_quantization,
                      two_sided_identity)
from .polygon import (AngleMeasurement, PolygonData, measure_interior_angle,
                      teichmuller_residual)
from .svg import RenderSpec, render_graph
from .tracer import (CriticalGraph, CriticalPoint, TraceOptions, Trajectory,
                     asymptotic_directions, critical_graph,
                     emanation_directions, phi_length, trace)

__version__ = "0.1.0"

__all__ = [
    "INFINITY", "BranchState", "CutBranch", "DoublePoleKind", "FactoredRational", "LocalData",
    "classify_double_pole", "continue_sqrt", "evaluate", "local_data", "residue_at_infinity_sqrt",
    "HomotopySignature", "ShortTrajectoryReport", "closed_arc", "find_short_trajectory",
    "gamma_set", "homotopy_signature", "orthogonal_obstruction",
    "JacobiParams", "LaguerreParams", "OverlayReport", "SweepResult", "jacobi_polynomial_zeros",
    "jacobi_qd", "jacobi_zeros", "laguerre_polynomial_zeros", "laguerre_qd", "laguerre_zeros",
    "sweep", "zero_measure_overlay",
    "hausdorff_distance", "min_distance",
    "OrientedArc", "QuantizationResult", "Side", "circle", "condition_check",
    "contour_integral_sqrt", "encircling_contour", "integrate_sqrt", "jacobi_quantization",
    "laguerre_quantization", "two_sided_identity",
    "AngleMeasurement", "PolygonData", "measure_interior_angle", "teichmuller_residual",
    "RenderSpec", "render_graph",
    "CriticalGraph", "CriticalPoint", "TraceOptions", "Trajectory", "asymptotic_directions",
    "critical_graph", "emanation_directions", "phi_length", "trace",
]
