"""Certified computations for generalized OT manifolds T(M, D)."""
from .classify import FactoredCharPoly, char_poly, check_type_j, check_type_j0, irreducibility_witness
from .errors import CertificateError, DomainError, OTForgeError, SearchExhausted, UndeterminedError
from .polyring import IntPoly, RatPoly, companion, crt_lift, resultant, strongly_coprime
from .realroots import RealAlgebraic, count_real_roots, isolate_real_roots, sign_at
from .units import build_dirichlet_family, find_units, select_log_basis, verify_dirichlet

__version__ = "0.1.0"

__all__ = [
    "CertificateError",
    "DomainError",
    "FactoredCharPoly",
    "IntPoly",
    "OTForgeError",
    "RatPoly",
    "RealAlgebraic",
    "SearchExhausted",
    "UndeterminedError",
    "build_dirichlet_family",
    "char_poly",
    "check_type_j",
    "check_type_j0",
    "companion",
    "count_real_roots",
    "crt_lift",
    "find_units",
    "irreducibility_witness",
    "isolate_real_roots",
    "resultant",
    "select_log_basis",
    "sign_at",
    "strongly_coprime",
    "verify_dirichlet",
]
