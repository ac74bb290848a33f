"""Exact tensor-operator tools for polynomially deformed so(4), so(3,1), e(3).

The so(3) part stays undeformed; only the bracket of the vector (or
quadrupole) generator with itself picks up a polynomial in ``L^2``.

Modules
-------
exactnum     exact numbers ``sum q_r sqrt(r)``
angmom       Clebsch-Gordan and Racah coefficients
tensoralg    coupled products/commutators of ``L`` and one tensor ``T``
vectordef    the vector case: recursion table, associativity, Casimirs
quaddef      the quadrupole case and its first-order obstruction
repbuilder   matrix realizations of the deformed unirreps
cli          ``defangmom`` command line
"""

__version__ = "0.1.0"

from .exactnum import RadicalNumber, sqrt_of_rational  # noqa: E402
from .angmom import clebsch_gordan, racah_unitary, racah_w, wigner_6j  # noqa: E402
from .tensoralg import (  # noqa: E402
    Algebra,
    Core,
    OutsideCatalogError,
    TensorExpr,
    coupled_commutator,
    coupled_product,
    jacobi_conditions,
    leibniz_expand,
)
from .vectordef import (  # noqa: E402
    DeformationParams,
    InconsistentSystemError,
    casimir_linear_forms,
    check_associativity,
    check_c2_casimir,
    commutator_A_A2,
    commutator_A_L2k,
    solve_casimir,
    solve_recursion,
)
from .quaddef import QuadParams, first_order_obstruction, reduce_Q_brackets  # noqa: E402
from .repbuilder import (  # noqa: E402
    E3,
    NonUnitaryError,
    So4,
    So31,
    casimir_eigenvalues,
    realize,
    reduced_matrix_elements,
    verify_realization,
)

__all__ = [
    "RadicalNumber",
    "sqrt_of_rational",
    "clebsch_gordan",
    "racah_unitary",
    "racah_w",
    "wigner_6j",
    "Algebra",
    "Core",
    "OutsideCatalogError",
    "TensorExpr",
    "coupled_commutator",
    "coupled_product",
    "jacobi_conditions",
    "leibniz_expand",
    "DeformationParams",
    "InconsistentSystemError",
    "casimir_linear_forms",
    "check_associativity",
    "check_c2_casimir",
    "commutator_A_A2",
    "commutator_A_L2k",
    "solve_casimir",
    "solve_recursion",
    "QuadParams",
    "first_order_obstruction",
    "reduce_Q_brackets",
    "E3",
    "NonUnitaryError",
    "So4",
    "So31",
    "casimir_eigenvalues",
    "realize",
    "reduced_matrix_elements",
    "verify_realization",
]
