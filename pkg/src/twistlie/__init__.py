"""Twisted derivations, hom-Lie algebras, their enveloping algebras and zeta elements."""

__version__ = "0.1.0"

from .covers import CoverSpec  # noqa: E402
from .homlie import HomLieAlgebra, check_axioms  # noqa: E402
from .rings import parse  # noqa: E402

__all__ = ["CoverSpec", "HomLieAlgebra", "check_axioms", "parse", "__version__"]
