"""Dimensions of restricted secant varieties of Grassmannians.

The oracle is the rank of the Terracini Jacobian at a random point, computed
exactly over Z/p or Q.  ``formulas`` holds the closed-form predictions the
oracle is checked against, and ``finite_codes`` the Grassmann code and
SL_6(F_2) orbit computations over finite fields.
"""

from .fields import FieldSpec, default_oracle_fields, prime_field, rationals
from .formulas import defect_report, fiber_predicted_dim, predict
from .terracini import SecantParams, dimension, jacobian, sample_point

__version__ = "0.1.0"

__all__ = [
    "FieldSpec",
    "SecantParams",
    "default_oracle_fields",
    "defect_report",
    "dimension",
    "fiber_predicted_dim",
    "jacobian",
    "predict",
    "prime_field",
    "rationals",
    "sample_point",
]
