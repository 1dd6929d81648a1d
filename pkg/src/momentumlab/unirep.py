"""Unitary representations at desk scale: skew-Hermitian generator families.

A representation assigns to each basis element of a Lie algebra a
skew-Hermitian N x N matrix A_i; the derived action of general algebra
elements is the linear combination sum x_i A_i, and group operators are
matrix exponentials of these generators.  In finite dimension every
vector is smooth, so no dense-subspace bookkeeping is needed.

Truncated families (Fock-space cutoffs of unbounded models) carry an
explicit ``truncated`` flag: their bracket-compatibility residual is
reported, never asserted.

Inner product convention: linear in the first argument, conjugate-linear
in the second, so that ``<u, w> = sum_i u_i conj(w_i)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapabilityError, InputError
from .liealg import (
    GroupElement,
    LieAlgebraDesc,
    abelian_algebra,
    heisenberg_algebra,
    oscillator_algebra,
    su2_algebra,
)

SKEW_TOL = 1e-10
BRACKET_TOL = 1e-9
MAX_HILBERT_DIM = 512


# ---------------------------------------------------------------------------
# Representation descriptor
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnitaryRep:
    """Generators A_i of a unitary representation on C^N.

    algebra    : the represented Lie algebra
    generators : (d, N, N) complex array of skew-Hermitian matrices
    truncated  : flag for cutoff models; disables the bracket assertion
    label      : identifying text for catalogs and reports

    For untruncated reps the residual ``max_ij |[A_i,A_j] - sum c A_k|``
    must not exceed 1e-9; for truncated reps it is stored as
    ``bracket_residual`` and reported by :func:`homomorphism_residual`.
    """

    algebra: LieAlgebraDesc
    generators: np.ndarray
    truncated: bool = False
    label: str = ""

    def __post_init__(self):
        A = np.asarray(self.generators, dtype=complex)
        if A.ndim != 3 or A.shape[0] != self.algebra.dim or A.shape[1] != A.shape[2]:
            raise InputError("generators must be a (d, N, N) array matching the algebra")
        if A.shape[1] > MAX_HILBERT_DIM:
            raise CapabilityError(f"Hilbert dimension {A.shape[1]} exceeds {MAX_HILBERT_DIM}")
        skew = np.max(np.abs(A + np.conj(np.swapaxes(A, 1, 2))))
        if skew > SKEW_TOL:
            raise InputError(f"generators are not skew-Hermitian: defect {skew:.2e}")
        residual = _bracket_residual(A, self.algebra.c)
        if not self.truncated and residual > BRACKET_TOL:
            raise InputError(
                f"bracket compatibility violated (residual {residual:.2e}); "
                "flag the representation as truncated if this is a cutoff model")
        A.setflags(write=False)
        object.__setattr__(self, "generators", A)
        object.__setattr__(self, "bracket_residual", float(residual))

    @property
    def hilbert_dim(self) -> int:
        return self.generators.shape[1]

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "truncated": self.truncated,
            "algebra": self.algebra.to_dict(),
            "generators": [
                [[[float(z.real), float(z.imag)] for z in row] for row in mat]
                for mat in self.generators
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "UnitaryRep":
        gens = np.array([
            [[complex(re, im) for re, im in row] for row in mat]
            for mat in data["generators"]
        ])
        return cls(algebra=LieAlgebraDesc.from_dict(data["algebra"]),
                   generators=gens,
                   truncated=bool(data.get("truncated", False)),
                   label=data.get("label", ""))


def _bracket_residual(A: np.ndarray, c: np.ndarray) -> float:
    d = A.shape[0]
    worst = 0.0
    for i in range(d):
        for j in range(i + 1, d):
            target = np.einsum("k,kab->ab", c[i, j], A)
            defect = A[i] @ A[j] - A[j] @ A[i] - target
            worst = max(worst, float(np.linalg.norm(defect, 2)))
    return worst


# ---------------------------------------------------------------------------
# Core operations
# ---------------------------------------------------------------------------

def d_pi(rep: UnitaryRep, x) -> np.ndarray:
    """Derived action sum_i x_i A_i; linear in x and skew-Hermitian."""
    x = np.asarray(x, dtype=float)
    if x.shape != (rep.algebra.dim,):
        raise InputError(f"coordinates must have shape ({rep.algebra.dim},)")
    if not np.all(np.isfinite(x)):
        raise InputError("coordinates contain non-finite entries")
    return np.einsum("i,iab->ab", x, rep.generators)


def pi_of_exp(rep: UnitaryRep, x) -> GroupElement:
    """Unitary exp(d_pi(x)) via eigendecomposition of the skew-Hermitian generator."""
    A = d_pi(rep, x)
    H = -1j * A  # Hermitian
    w, V = np.linalg.eigh((H + H.conj().T) / 2)
    U = (V * np.exp(1j * w)) @ V.conj().T
    return GroupElement(U, factors=(tuple(np.asarray(x, dtype=float)),))


def homomorphism_residual(rep: UnitaryRep) -> float:
    """max over basis pairs of || [A_i, A_j] - sum_k c_ij^k A_k || (spectral norm)."""
    return _bracket_residual(rep.generators, rep.algebra.c)


def hermitian_part(rep: UnitaryRep, x) -> np.ndarray:
    """The Hermitian matrix i * d_pi(x), symmetrized against roundoff."""
    M = 1j * d_pi(rep, x)
    return (M + M.conj().T) / 2


def spectral_sup(rep: UnitaryRep, x) -> float:
    """Largest eigenvalue of i * d_pi(x); sublinear and positively homogeneous in x."""
    return float(np.linalg.eigvalsh(hermitian_part(rep, x))[-1])


def spectral_top(rep: UnitaryRep, x) -> tuple[float, np.ndarray]:
    """(lambda_max, top eigenvector) of i * d_pi(x)."""
    w, V = np.linalg.eigh(hermitian_part(rep, x))
    return float(w[-1]), V[:, -1]


def generator_norm_bound(rep: UnitaryRep) -> float:
    """C = sum_i ||A_i||, an equicontinuity constant: ||d_pi(x)|| <= C max_i |x_i|."""
    return float(sum(np.linalg.norm(A, 2) for A in rep.generators))


def kernel_directions(rep: UnitaryRep, *, tol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of { x : d_pi(x) = 0 }, computed by SVD of the generator map."""
    d = rep.algebra.dim
    M = rep.generators.reshape(d, -1).T  # maps x to vec(d_pi(x))
    _, s, Vh = np.linalg.svd(M, full_matrices=True)
    scale = max(1.0, float(s[0]) if s.size else 0.0)
    rank = int(np.sum(s > tol * scale))
    return Vh[rank:].conj().real


# ---------------------------------------------------------------------------
# Shipped representations
# ---------------------------------------------------------------------------

def su2_spin_rep(j: float) -> UnitaryRep:
    """Spin-j representation of su(2) on C^{2j+1} built from ladder operators.

    Convention: the generator of e_k is -i J_k, so i * d_pi(e3) = J_z has
    spectrum {-j, ..., j} and the highest-weight basis vector maps to the
    momentum value (0, 0, -j).
    """
    twoj = round(2 * j)
    if twoj < 1 or abs(2 * j - twoj) > 1e-12:
        raise InputError("j must be a positive half-integer")
    j = twoj / 2
    dim = twoj + 1
    m = j - np.arange(dim)  # weights j, j-1, ..., -j
    Jz = np.diag(m).astype(complex)
    lowering = np.sqrt(j * (j + 1) - m[:-1] * (m[:-1] - 1))
    Jminus = np.diag(lowering, -1).astype(complex)
    Jplus = Jminus.conj().T
    Jx = (Jplus + Jminus) / 2
    Jy = (Jplus - Jminus) / 2j
    gens = np.array([-1j * Jx, -1j * Jy, -1j * Jz])
    return UnitaryRep(su2_algebra(), gens, label=f"su2-spin-{j:g}")


def diagonal_abelian_rep(alphas) -> UnitaryRep:
    """Commuting diagonal generators for R^d: A_j = i diag(<alpha_k, e_j>).

    ``alphas`` is an (N, d) array assigning a functional to each basis state;
    the momentum-map image is the set of convex combinations of the rows, so
    the momentum set is their convex hull.
    """
    alphas = np.atleast_2d(np.asarray(alphas, dtype=float))
    N, d = alphas.shape
    gens = np.array([1j * np.diag(alphas[:, jcol]) for jcol in range(d)])
    return UnitaryRep(abelian_algebra(d), gens, label=f"abelian-diag-{N}x{d}")


def fock_ladders(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Truncated annihilation, creation and number matrices on C^n."""
    if n < 2:
        raise InputError("Fock truncation needs dimension >= 2")
    a = np.diag(np.sqrt(np.arange(1, n)), 1).astype(complex)
    adag = a.conj().T
    nhat = np.diag(np.arange(n)).astype(complex)
    return a, adag, nhat


def fock_position_momentum(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Truncated q = (a + a*)/sqrt(2) and p = i(a* - a)/sqrt(2)."""
    a, adag, _ = fock_ladders(n)
    q = (a + adag) / np.sqrt(2)
    p = 1j * (adag - a) / np.sqrt(2)
    return q, p


def oscillator_fock_rep(n: int) -> UnitaryRep:
    """Cutoff oscillator-algebra representation on the first n Fock levels.

    Generators for the basis (h, p, q, z): -iN, ip, iq, i1.  The truncation
    breaks [p, q] = z at the top level, so the rep is flagged truncated and
    its bracket residual is reported, not asserted.
    """
    _, _, nhat = fock_ladders(n)
    q, p = fock_position_momentum(n)
    eye = np.eye(n, dtype=complex)
    gens = np.array([-1j * nhat, 1j * p, 1j * q, 1j * eye])
    return UnitaryRep(oscillator_algebra(), gens, truncated=True,
                      label=f"oscillator-fock-{n}")


def heisenberg_fock_rep(n: int) -> UnitaryRep:
    """Cutoff position/momentum pair on C^n for the Heisenberg algebra (p, q, z)."""
    q, p = fock_position_momentum(n)
    eye = np.eye(n, dtype=complex)
    gens = np.array([1j * p, 1j * q, 1j * eye])
    return UnitaryRep(heisenberg_algebra(), gens, truncated=True,
                      label=f"heisenberg-fock-{n}")


def zero_rep(algebra: LieAlgebraDesc, n: int) -> UnitaryRep:
    """The trivial representation: every generator is the zero matrix."""
    return UnitaryRep(algebra, np.zeros((algebra.dim, n, n), dtype=complex),
                      label=f"zero-{n}")


def direct_sum(rep_a: UnitaryRep, rep_b: UnitaryRep) -> UnitaryRep:
    """Block-diagonal sum of two representations of the same algebra."""
    if rep_a.algebra.dim != rep_b.algebra.dim or \
            np.max(np.abs(rep_a.algebra.c - rep_b.algebra.c)) > 0:
        raise InputError("direct_sum needs representations of the same algebra")
    d = rep_a.algebra.dim
    na, nb = rep_a.hilbert_dim, rep_b.hilbert_dim
    gens = np.zeros((d, na + nb, na + nb), dtype=complex)
    gens[:, :na, :na] = rep_a.generators
    gens[:, na:, na:] = rep_b.generators
    return UnitaryRep(rep_a.algebra, gens,
                      truncated=rep_a.truncated or rep_b.truncated,
                      label=f"({rep_a.label})+({rep_b.label})")
