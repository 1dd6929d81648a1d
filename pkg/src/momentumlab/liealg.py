"""Finite-dimensional real Lie algebras and the torus Poisson algebra.

An algebra is described by its structure constants ``c[i, j, k]`` with
``[x_i, x_j] = sum_k c[i,j,k] x_k`` and, optionally, a matrix realization
of the basis.  Group elements exist only as invertible matrices produced
by exponentials and products; adjoint and coadjoint actions are computed
from the structure constants (``exp(ad_y)``) or by matrix conjugation.

The Poisson algebra of trigonometric polynomials on the 2-torus is kept
with exact finite Fourier supports, so brackets and L2 pairings are free
of quadrature error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import ComputationError, InputError

JACOBI_TOL = 1e-10
BASIS_COMPAT_TOL = 1e-10
FOURIER_MAX_MODE = 128  # per-axis cap keeping coefficient convolutions exact


# ---------------------------------------------------------------------------
# Lie algebra descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LieAlgebraDesc:
    """Structure constants plus an optional matrix realization.

    dim           : number of basis elements d
    c             : (d, d, d) array, [x_i, x_j] = sum_k c[i,j,k] x_k
    matrix_basis  : optional (d, n, n) complex array X_i with
                    [X_i, X_j] = sum_k c[i,j,k] X_k
    basis_names   : optional labels, purely cosmetic
    """

    dim: int
    c: np.ndarray
    matrix_basis: np.ndarray | None = None
    basis_names: tuple[str, ...] | None = None

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.shape != (self.dim,) * 3:
            raise InputError(f"structure constants must have shape {(self.dim,)*3}")
        if np.max(np.abs(c + np.swapaxes(c, 0, 1))) > 1e-12:
            raise InputError("structure constants are not antisymmetric")
        jac = np.einsum("ijm,mkl->ijkl", c, c)
        jacobiator = jac + np.transpose(jac, (1, 2, 0, 3)) + np.transpose(jac, (2, 0, 1, 3))
        if np.max(np.abs(jacobiator)) > JACOBI_TOL:
            raise InputError(f"Jacobi identity violated: residual {np.max(np.abs(jacobiator)):.2e}")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)
        if self.matrix_basis is not None:
            B = np.asarray(self.matrix_basis, dtype=complex)
            if B.ndim != 3 or B.shape[0] != self.dim or B.shape[1] != B.shape[2]:
                raise InputError("matrix_basis must be a (d, n, n) array")
            comm = np.einsum("iab,jbc->ijac", B, B) - np.einsum("jab,ibc->ijac", B, B)
            res = comm - np.einsum("ijk,kab->ijab", c, B)
            if np.max(np.abs(res)) > BASIS_COMPAT_TOL:
                raise InputError("matrix_basis does not realize the structure constants")
            B.setflags(write=False)
            object.__setattr__(self, "matrix_basis", B)

    def to_dict(self) -> dict:
        out = {"dim": self.dim, "c": self.c.tolist()}
        if self.matrix_basis is not None:
            out["basis"] = [
                [[[float(z.real), float(z.imag)] for z in row] for row in mat]
                for mat in self.matrix_basis
            ]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "LieAlgebraDesc":
        basis = None
        if data.get("basis") is not None:
            basis = np.array([
                [[complex(re, im) for re, im in row] for row in mat]
                for mat in data["basis"]
            ])
        return cls(dim=int(data["dim"]), c=np.array(data["c"]), matrix_basis=basis)


@dataclass(frozen=True)
class GroupElement:
    """Invertible matrix recorded as a product of exponentials of algebra elements."""

    matrix: np.ndarray
    factors: tuple = field(default_factory=tuple)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputError("group element must be a square matrix")
        if abs(np.linalg.det(m)) < 1e-300:
            raise InputError("group element matrix is singular")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.matrix @ other.matrix, self.factors + other.factors)

    def inverse(self) -> "GroupElement":
        return GroupElement(np.linalg.inv(self.matrix),
                            tuple(tuple(-x for x in f) for f in reversed(self.factors)))

    def unitarity_defect(self) -> float:
        m = self.matrix
        return float(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0]), 2))


# ---------------------------------------------------------------------------
# Brackets and adjoint machinery
# ---------------------------------------------------------------------------

def _coords(x, dim: int) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.shape != (dim,):
        raise InputError(f"algebra coordinates must have shape ({dim},), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError("algebra coordinates contain non-finite entries")
    return arr


def bracket(a, b, L: LieAlgebraDesc) -> np.ndarray:
    """[a, b] in basis coordinates: sum_ij a_i b_j c[i,j,:]."""
    a = _coords(a, L.dim)
    b = _coords(b, L.dim)
    return np.einsum("i,j,ijk->k", a, b, L.c)


def ad_matrix(y, L: LieAlgebraDesc) -> np.ndarray:
    """Matrix of ad_y = [y, .] in basis coordinates."""
    y = _coords(y, L.dim)
    return np.einsum("i,ijk->kj", y, L.c)


def adjoint_of_exp(y, L: LieAlgebraDesc, *, method: str = "ad") -> np.ndarray:
    """Ad(exp y) as a d x d matrix in basis coordinates.

    method "ad"           : exp of the ad_y matrix (always available)
    method "conjugation"  : expand g X_i g^{-1} in the matrix basis, where
                            g = exp(sum y_i X_i); requires matrix_basis
    """
    y = _coords(y, L.dim)
    if method == "ad":
        return expm(ad_matrix(y, L))
    if method != "conjugation":
        raise InputError(f"unknown method {method!r}")
    if L.matrix_basis is None:
        raise InputError("conjugation method requires a matrix realization")
    B = L.matrix_basis
    g = expm(np.einsum("i,iab->ab", y, B))
    g_inv = np.linalg.inv(g)
    conj = np.einsum("ab,ibc,cd->iad", g, B, g_inv)
    # solve conj_i = sum_k Ad[k, i] X_k in the least-squares sense
    basis_flat = B.reshape(L.dim, -1).T           # (n^2, d)
    target = conj.reshape(L.dim, -1).T            # (n^2, d)
    sol, _, rank, _ = np.linalg.lstsq(basis_flat, target, rcond=None)
    if rank < L.dim:
        raise ComputationError("matrix basis is rank-deficient; cannot expand conjugation")
    residual = np.max(np.abs(basis_flat @ sol - target))
    if residual > 1e-8:
        raise ComputationError(f"conjugation does not expand in the basis: residual {residual:.2e}")
    if np.max(np.abs(sol.imag)) > 1e-8:
        raise ComputationError("conjugation expansion has a non-real component")
    return sol.real


def group_exp(y, L: LieAlgebraDesc) -> GroupElement:
    """exp of the matrix realization of y; requires matrix_basis."""
    y = _coords(y, L.dim)
    if L.matrix_basis is None:
        raise InputError("group_exp requires a matrix realization")
    return GroupElement(expm(np.einsum("i,iab->ab", y, L.matrix_basis)),
                        factors=(tuple(y),))


def coadjoint(ad_mat, alpha) -> np.ndarray:
    """Coadjoint action alpha -> alpha o Ad^{-1}, i.e. Ad^{-T} alpha.

    Defines a left action: coadjoint(AB, .) = coadjoint(A, coadjoint(B, .)).
    """
    A = np.asarray(ad_mat, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] != alpha.size:
        raise InputError("coadjoint needs a square Ad matrix matching alpha")
    if abs(np.linalg.det(A)) < 1e-300:
        raise InputError("Ad matrix is singular")
    return np.linalg.solve(A.T, alpha)


# ---------------------------------------------------------------------------
# Shipped algebras
# ---------------------------------------------------------------------------

def su2_algebra() -> LieAlgebraDesc:
    """su(2) with [e_i, e_j] = eps_ijk e_k, realized by -i/2 times the Pauli matrices."""
    c = np.zeros((3, 3, 3))
    for i, j, k in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
        c[i, j, k] = 1.0
        c[j, i, k] = -1.0
    s1 = np.array([[0, 1], [1, 0]], dtype=complex)
    s2 = np.array([[0, -1j], [1j, 0]])
    s3 = np.array([[1, 0], [0, -1]], dtype=complex)
    basis = np.array([-0.5j * s1, -0.5j * s2, -0.5j * s3])
    return LieAlgebraDesc(3, c, matrix_basis=basis, basis_names=("e1", "e2", "e3"))


def heisenberg_algebra() -> LieAlgebraDesc:
    """3-dimensional Heisenberg algebra, basis (p, q, z) with [p, q] = z central."""
    c = np.zeros((3, 3, 3))
    c[0, 1, 2] = 1.0
    c[1, 0, 2] = -1.0
    basis = np.zeros((3, 3, 3), dtype=complex)
    basis[0][0, 1] = 1.0  # p
    basis[1][1, 2] = 1.0  # q
    basis[2][0, 2] = 1.0  # z = [p, q]
    return LieAlgebraDesc(3, c, matrix_basis=basis, basis_names=("p", "q", "z"))


def oscillator_algebra() -> LieAlgebraDesc:
    """4-dimensional oscillator algebra, basis (h, p, q, z).

    [h, p] = q, [h, q] = -p, [p, q] = z, z central; h rotates the (p, q)
    plane.  The matrix realization acts on R^4 with coordinates (t, x, y, u).
    """
    c = np.zeros((4, 4, 4))
    pairs = [(0, 1, 2, 1.0), (0, 2, 1, -1.0), (1, 2, 3, 1.0)]
    for i, j, k, val in pairs:
        c[i, j, k] = val
        c[j, i, k] = -val
    H = np.zeros((4, 4), dtype=complex)
    H[2, 1] = 1.0   # x -> y
    H[1, 2] = -1.0  # y -> -x
    P = np.zeros((4, 4), dtype=complex)
    P[1, 0] = 1.0   # t -> x
    P[3, 2] = 0.5   # y -> u/2
    Q = np.zeros((4, 4), dtype=complex)
    Q[2, 0] = 1.0   # t -> y
    Q[3, 1] = -0.5  # x -> -u/2
    Z = np.zeros((4, 4), dtype=complex)
    Z[3, 0] = 1.0   # t -> u
    return LieAlgebraDesc(4, c, matrix_basis=np.array([H, P, Q, Z]),
                          basis_names=("h", "p", "q", "z"))


def abelian_algebra(dim: int) -> LieAlgebraDesc:
    """R^dim with all brackets zero."""
    if dim < 1:
        raise InputError("abelian algebra needs dim >= 1")
    return LieAlgebraDesc(dim, np.zeros((dim, dim, dim)))


# ---------------------------------------------------------------------------
# Trigonometric polynomials on the 2-torus
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrigPolynomial:
    """Finite Fourier sum f(x, y) = sum a_{m,n} exp(i(mx + ny)) on the 2-torus.

    Coefficients are held as a mapping (m, n) -> complex with per-axis
    support bounded by FOURIER_MAX_MODE; f is real-valued exactly when
    a_{-m,-n} = conj(a_{m,n}).
    """

    coeffs: tuple

    def __init__(self, coeffs):
        items = []
        for (m, n), a in dict(coeffs).items():
            m, n, a = int(m), int(n), complex(a)
            if abs(m) > FOURIER_MAX_MODE or abs(n) > FOURIER_MAX_MODE:
                raise InputError(f"Fourier mode ({m},{n}) exceeds the cap {FOURIER_MAX_MODE}")
            if a != 0:
                items.append(((m, n), a))
        items.sort()
        object.__setattr__(self, "coeffs", tuple(items))

    def as_dict(self) -> dict:
        return dict(self.coeffs)

    @classmethod
    def cos_x(cls, n: int = 1) -> "TrigPolynomial":
        return cls({(n, 0): 0.5, (-n, 0): 0.5})

    @classmethod
    def cos_y(cls, n: int = 1) -> "TrigPolynomial":
        return cls({(0, n): 0.5, (0, -n): 0.5})

    @classmethod
    def sin_x(cls, n: int = 1) -> "TrigPolynomial":
        return cls({(n, 0): -0.5j, (-n, 0): 0.5j})

    @classmethod
    def sin_y(cls, n: int = 1) -> "TrigPolynomial":
        return cls({(0, n): -0.5j, (0, -n): 0.5j})

    @classmethod
    def constant(cls, a: complex) -> "TrigPolynomial":
        return cls({(0, 0): a})

    @property
    def is_real(self) -> bool:
        d = self.as_dict()
        return all(abs(a - np.conj(d.get((-m, -n), 0.0))) <= 1e-12
                   for (m, n), a in d.items())

    def __add__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        d = self.as_dict()
        for k, a in other.coeffs:
            d[k] = d.get(k, 0.0) + a
        return TrigPolynomial(d)

    def __sub__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        return self + (-1.0) * other

    def __rmul__(self, scalar: complex) -> "TrigPolynomial":
        return TrigPolynomial({k: scalar * a for k, a in self.coeffs})

    def __mul__(self, other: "TrigPolynomial") -> "TrigPolynomial":
        d: dict = {}
        for (m1, n1), a1 in self.coeffs:
            for (m2, n2), a2 in other.coeffs:
                k = (m1 + m2, n1 + n2)
                d[k] = d.get(k, 0.0) + a1 * a2
        return TrigPolynomial(d)

    def partial_x(self) -> "TrigPolynomial":
        return TrigPolynomial({(m, n): 1j * m * a for (m, n), a in self.coeffs})

    def partial_y(self) -> "TrigPolynomial":
        return TrigPolynomial({(m, n): 1j * n * a for (m, n), a in self.coeffs})

    def translate(self, s: float, t: float) -> "TrigPolynomial":
        """f(x, y) -> f(x + s, y + t); coefficients pick up unimodular phases."""
        return TrigPolynomial({(m, n): a * np.exp(1j * (m * s + n * t))
                               for (m, n), a in self.coeffs})

    def eval(self, x: float, y: float) -> complex:
        return sum(a * np.exp(1j * (m * x + n * y)) for (m, n), a in self.coeffs)


def poisson_bracket_torus(f: TrigPolynomial, g: TrigPolynomial) -> TrigPolynomial:
    """{f, g} = f_x g_y - f_y g_x via exact coefficient convolution."""
    return f.partial_x() * g.partial_y() - f.partial_y() * g.partial_x()


def l2_inner_torus(f: TrigPolynomial, g: TrigPolynomial) -> float:
    """(f, g) = integral of f*g over the torus = (2 pi)^2 sum a_{mn} conj(b_{mn}).

    Defined for real-valued inputs; invariant under translations because the
    coefficient phases cancel exactly.
    """
    if not (f.is_real and g.is_real):
        raise InputError("l2_inner_torus expects real-valued trigonometric polynomials")
    gd = g.as_dict()
    acc = sum(a * np.conj(gd.get(k, 0.0)) for k, a in f.coeffs)
    return float((2 * np.pi) ** 2 * np.real(acc))


def l2_norm_torus(f: TrigPolynomial) -> float:
    return float(np.sqrt(max(l2_inner_torus(f, f), 0.0)))
