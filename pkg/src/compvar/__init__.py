"""compvar: exact-arithmetic geometry of varieties of bounded chain
complexes of modules over a finite-dimensional algebra.

Coefficients are Q or a prime field F_p and every computation is exact;
there is no floating point anywhere in the package.
"""

from .fields import Field, GF, QQ
from .linalg import Matrix, Subspace

__version__ = "0.1.0"

__all__ = ["Field", "GF", "QQ", "Matrix", "Subspace", "__version__"]
