"""momentumlab: desk-scale convex geometry of momentum sets of unitary representations.

Subpackages
-----------
convex    support functions, domain cones, dual cones, membership
liealg    structure constants, adjoint/coadjoint actions, torus Poisson algebra
unirep    skew-Hermitian generator families, exponentials, spectral suprema
momentum  momentum maps, momentum-set estimates, boundedness classification
rkhs      invariant reproducing kernels and kernel momentum sets
abelian   discrete spectral measures and tube-semigroup extensions
cli       scenario runner and report emitter
"""

from . import abelian, convex, liealg, momentum, rkhs, unirep
from .errors import (
    CapabilityError,
    ComputationError,
    DomainError,
    InputError,
    MomentumLabError,
    PreconditionError,
)

__all__ = [
    "abelian",
    "convex",
    "liealg",
    "momentum",
    "rkhs",
    "unirep",
    "MomentumLabError",
    "InputError",
    "PreconditionError",
    "CapabilityError",
    "ComputationError",
    "DomainError",
]

__version__ = "0.1.0"
