"""Exact Goldman Lie algebra and total Johnson homomorphism computations.

Everything is rational and truncated modulo a power ``F^N`` of the
augmentation filtration, so every identity is checked exactly.
"""

from .words import Alphabet, CyclicWord, GroupHom, Word, WordSyntaxError
from .magnus import TOP, TensorSeries, TruncationContext, L_element, cyclic_project, filtration_degree, magnus
from .surface import FatSurface, StdEmbedding, SurfaceError, standard_surface
from .goldman import (
    DegreeError,
    GoldmanElement,
    PathElement,
    PrecisionError,
    bch,
    bracket,
    exp_sigma,
    push_forward,
    sigma,
)
from .cylinder import (
    CertificateError,
    CylinderPresentation,
    InvariantError,
    TwistWord,
    action,
    compose,
    v_iteration,
    v_solve,
    zeta,
    zeta_tilde,
)
from .johnson import HomologyTensor, filtration_degree_of_cylinder, lambda_map, tau
from .uh import UhElement, exp_h, log_h, project, psi, uh_bracket, uh_mul

__version__ = "0.1.0"

__all__ = [
    "Alphabet", "CyclicWord", "GroupHom", "Word", "WordSyntaxError",
    "TOP", "TensorSeries", "TruncationContext", "L_element", "cyclic_project", "filtration_degree", "magnus",
    "FatSurface", "StdEmbedding", "SurfaceError", "standard_surface",
    "DegreeError", "GoldmanElement", "PathElement", "PrecisionError",
    "bch", "bracket", "exp_sigma", "push_forward", "sigma",
    "CertificateError", "CylinderPresentation", "InvariantError", "TwistWord",
    "action", "compose", "v_iteration", "v_solve", "zeta", "zeta_tilde",
    "HomologyTensor", "filtration_degree_of_cylinder", "lambda_map", "tau",
    "UhElement", "exp_h", "log_h", "project", "psi", "uh_bracket", "uh_mul",
]
