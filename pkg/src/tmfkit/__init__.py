"""tmfkit: twisted matrix factorizations over graded noncommutative algebras."""

from .catalog import build, run_suite, zhang_crosscheck
from .cover import functor_C, functor_H, make_cover, second_cover
from .ncalgebra import GradedAlgebra, GradedAutomorphism, parse_poly
from .scalars import Scalar, parse_scalar
from .tmf import NormalContext, TMF, T_functor, verify

__version__ = "0.1.0"

__all__ = [
    "GradedAlgebra",
    "GradedAutomorphism",
    "NormalContext",
    "Scalar",
    "TMF",
    "T_functor",
    "build",
    "functor_C",
    "functor_H",
    "make_cover",
    "parse_poly",
    "parse_scalar",
    "run_suite",
    "second_cover",
    "verify",
    "zhang_crosscheck",
]
