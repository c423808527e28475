"""Direct summands of homological functors G(A, -) over bound quiver algebras.

The functor G is one of the backends ``ext1``, ``stablehom`` or ``tor1``.

A summand cut out by a stably idempotent endomorphism of ``A`` is realized
as the same functor on an explicit submodule ``B`` of ``A``, together with
a certificate that can be checked pointwise.
"""

from .algebra import AlgebraError, AlgebraTable, make_algebra, opposite_algebra
from .fitting import fitting_decomposition, fitting_index
from .hilton_rees import connecting_class, induced_ext_map, is_stably_idempotent, stable_power_idempotent
from .homological import ext1, factors_through_projective, projective, projective_cover, stable_hom
from .linalg import PrimeField
from .realization import (
    EXT1,
    STABLE_HOM,
    TOR1,
    FunctorBackend,
    PreconditionError,
    SummandCertificate,
    default_battery,
    realize_summand,
    verify_certificate,
)
from .reps import Rep, RepError, RepMap, direct_sum, hom_space, identity, image, kernel, pushout, simple
from .transpose import tensor, tor1, tor_iso_check, transpose

__all__ = [
    "AlgebraError", "AlgebraTable", "make_algebra", "opposite_algebra",
    "fitting_decomposition", "fitting_index",
    "connecting_class", "induced_ext_map", "is_stably_idempotent", "stable_power_idempotent",
    "ext1", "factors_through_projective", "projective", "projective_cover", "stable_hom",
    "PrimeField",
    "EXT1", "STABLE_HOM", "TOR1", "FunctorBackend", "PreconditionError", "SummandCertificate",
    "default_battery", "realize_summand", "verify_certificate",
    "Rep", "RepError", "RepMap", "direct_sum", "hom_space", "identity", "image", "kernel", "pushout", "simple",
    "tensor", "tor1", "tor_iso_check", "transpose",
]
