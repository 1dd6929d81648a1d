"""Invariant reproducing kernels and kernel momentum sets.

The ambient space M is an explicitly parameterized open subset of C^d; a
kernel is a callable K(z, w), holomorphic in z and antiholomorphic in w,
with Hermitian symmetry ``K(z, w) = conj(K(w, z))`` and positive
semidefinite Gram matrices.  Sections ``K_m = K(., m)`` span the working
finite models; in the Gram inner product ``<K_w, K_z> = K(z, w)``.

For a group acting on M on the right by holomorphic maps and leaving K
invariant, the momentum value of the projective vector [K_m] along an
algebra direction x is

    Phi([K_m])(x) = (1/i) d/dt|_0 K(m.exp(tx), m) / K(m, m),

evaluated here by high-order central differencing along the real flow.
On points with K(m, m) > 0 these values determine the whole momentum set
whenever the relevant one-parameter flows extend holomorphically to the
closed upper half plane; the extension also yields the contraction
semigroup ``T_b K_m = K_{m.(ib)}`` whose Gram operator norm is checked
against ``exp(b sup <Phi, -x>)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import eigh

from .convex import ConvexSetV
from .errors import ComputationError, DomainError, InputError, PreconditionError
from .liealg import abelian_algebra
from .unirep import UnitaryRep, fock_ladders

PSD_TOL = 1e-9          # smallest admissible Gram eigenvalue
GRAM_MIN_EIG = 1e-8     # nonsingularity floor for operator-norm computations
OMEGA_FLOOR = 1e-12     # K(m,m) must exceed this to count as an Omega point
FD_STEP = 1e-4          # default central-difference step along flows


# ---------------------------------------------------------------------------
# Kernels, actions, finite models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelSpec:
    """A kernel on an open subset of C^{domain_dim}."""

    domain_dim: int
    eval: Callable[[np.ndarray, np.ndarray], complex]
    label: str = ""

    def __call__(self, z, w) -> complex:
        z = _point(z, self.domain_dim)
        w = _point(w, self.domain_dim)
        val = complex(self.eval(z, w))
        if not np.isfinite(val.real) or not np.isfinite(val.imag):
            raise DomainError(f"kernel {self.label!r} is non-finite at ({z}, {w})")
        return val


@dataclass(frozen=True)
class GroupActionOnM:
    """Right action of an abelian parameter group on M by holomorphic maps.

    algebra_dim   : dimension of the acting Lie algebra (abelian here)
    flow          : (m, x, t) -> m.exp(tx) for real t and coordinates x
    complex_flow  : optional (m, x, s) extension for s in the closed upper
                    half plane, on the directions declared by extension_ok
    extension_ok  : optional predicate deciding which directions x carry
                    the declared half-plane extension
    act           : optional (m, g) with g a group coordinate vector;
                    defaults to flow(m, g, 1), the abelian parameterization
    """

    algebra_dim: int
    flow: Callable
    complex_flow: Callable | None = None
    extension_ok: Callable | None = None
    act: Callable | None = None

    def apply(self, m, g) -> np.ndarray:
        if self.act is not None:
            return np.asarray(self.act(m, g))
        return np.asarray(self.flow(m, np.asarray(g, dtype=float), 1.0))


@dataclass(frozen=True)
class FiniteModel:
    """Finitely many kernel sections: points z_i and their Gram matrix."""

    points: np.ndarray
    gram: np.ndarray

    def __len__(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class GramResult:
    matrix: np.ndarray
    is_psd: bool
    min_eigenvalue: float


def _point(m, dim: int) -> np.ndarray:
    arr = np.asarray(m, dtype=complex).reshape(-1)
    if arr.size != dim:
        raise InputError(f"point has dimension {arr.size}, expected {dim}")
    return arr


def gram_matrix(kernel: KernelSpec, points) -> GramResult:
    """Pairwise kernel matrix with a PSD verdict (min eigenvalue >= -1e-9).

    Hermitian symmetry of the kernel is verified on the computed entries;
    duplicate points (within 1e-12) are rejected.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    n = pts.shape[0]
    for i in range(n):
        for j in range(i + 1, n):
            if np.max(np.abs(pts[i] - pts[j])) <= 1e-12:
                raise InputError(f"duplicate model points at indices {i}, {j}")
    G = np.array([[kernel(pts[i], pts[j]) for j in range(n)] for i in range(n)])
    scale = max(1.0, float(np.max(np.abs(G))))
    if np.max(np.abs(G - G.conj().T)) > 1e-12 * scale:
        raise InputError("kernel is not Hermitian symmetric on these points")
    w = np.linalg.eigvalsh((G + G.conj().T) / 2)
    return GramResult(G, bool(w[0] >= -PSD_TOL), float(w[0]))


def build_finite_model(kernel: KernelSpec, points) -> FiniteModel:
    res = gram_matrix(kernel, points)
    if not res.is_psd:
        raise InputError(
            f"Gram matrix is not positive semidefinite (min eig {res.min_eigenvalue:.2e})")
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    return FiniteModel(pts, res.matrix)


def reproducing_check(kernel: KernelSpec, model: FiniteModel, coefficients, z) -> float:
    """| <f, K_z>_Gram - f(z) | for f = sum_i c_i K_{z_i} and z a model point.

    Both sides equal sum_i c_i K(z, z_i); the Gram side uses stored entries,
    the evaluation side calls the kernel afresh.
    """
    c = np.asarray(coefficients, dtype=complex).reshape(-1)
    if c.size != len(model):
        raise InputError("coefficient length does not match the model")
    z = _point(z, model.points.shape[1])
    matches = [j for j in range(len(model))
               if np.max(np.abs(model.points[j] - z)) <= 1e-12]
    if not matches:
        raise PreconditionError("z must be one of the model points")
    j = matches[0]
    gram_side = complex(model.gram[j] @ c)
    eval_side = complex(sum(ci * kernel(z, zi) for ci, zi in zip(c, model.points)))
    return float(abs(gram_side - eval_side))


def invariance_residual(kernel: KernelSpec, action: GroupActionOnM,
                        group_samples, point_samples) -> float:
    """max |K(z.g, w.g) - K(z, w)| over sampled group elements and point pairs."""
    pts = [_point(p, kernel.domain_dim) for p in point_samples]
    worst = 0.0
    for g in group_samples:
        moved = [action.apply(p, g) for p in pts]
        for i, z in enumerate(pts):
            for j, w in enumerate(pts):
                try:
                    diff = abs(kernel(moved[i], moved[j]) - kernel(z, w))
                except DomainError:
                    raise
                except Exception as exc:  # action left the kernel's domain
                    raise DomainError(
                        f"kernel undefined after moving sample {i} by {g}: {exc}") from exc
                worst = max(worst, float(diff))
    return worst


# ---------------------------------------------------------------------------
# Kernel momentum values
# ---------------------------------------------------------------------------

def _flow_derivative(kernel: KernelSpec, action: GroupActionOnM,
                     x: np.ndarray, m: np.ndarray, step: float) -> complex:
    def f(t: float) -> complex:
        return kernel(action.flow(m, x, t), m)

    def central(h: float) -> complex:
        return (-f(2 * h) + 8 * f(h) - 8 * f(-h) + f(-2 * h)) / (12 * h)

    d1 = central(step)
    d2 = central(step / 2)
    scale = max(1.0, abs(d2))
    if abs(d1 - d2) > 1e-6 * scale:
        raise ComputationError(
            f"flow derivative did not converge (delta {abs(d1 - d2):.2e}); "
            "the flow may be non-smooth at this point")
    return d2


def kernel_momentum_value(kernel: KernelSpec, action: GroupActionOnM,
                          x, m, *, step: float = FD_STEP) -> float:
    """Momentum value of [K_m] along x: (1/i) (d/dt K(m.t, m))|_0 / K(m, m).

    Requires K(m, m) > 0 (the point must define a nonzero section); the
    result is real up to 1e-8 relative, enforced.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != action.algebra_dim:
        raise InputError(f"direction has dimension {x.size}, expected {action.algebra_dim}")
    m = _point(m, kernel.domain_dim)
    kmm = kernel(m, m)
    if abs(kmm.imag) > 1e-10 * max(1.0, abs(kmm.real)):
        raise InputError("K(m, m) is not real; kernel violates Hermitian symmetry")
    if kmm.real <= OMEGA_FLOOR:
        raise PreconditionError(f"K(m,m) = {kmm.real:.2e} <= 0: point outside Omega")
    if np.all(x == 0.0):
        return 0.0
    deriv = _flow_derivative(kernel, action, x, m, step)
    val = deriv / (1j * kmm.real)
    if abs(val.imag) > 1e-8 * max(1.0, abs(val.real)):
        raise ComputationError(
            f"momentum value has imaginary residue {val.imag:.2e}; "
            "flow and kernel are inconsistent")
    return float(val.real)


@dataclass(frozen=True)
class KernelMomentumSet:
    """Sampled kernel momentum values bracketed by a matrix oracle when given.

    inner            : hull of momentum values over the Omega sample
    directions       : probe directions in the algebra
    inner_values     : support values of ``inner`` on the probes
    outer_values     : directional suprema of the matrix oracle (None without one)
    extension_mask   : probes carrying the declared half-plane extension;
                       only there does the inner hull determine the set
    gap              : max outer - inner over extension probes (None without oracle)
    skipped_points   : sample points outside Omega (K(m,m) <= 0), skipped
    """

    inner: ConvexSetV
    directions: np.ndarray
    inner_values: np.ndarray
    outer_values: np.ndarray | None
    extension_mask: np.ndarray
    gap: float | None
    skipped_points: int

    def to_dict(self) -> dict:
        return {
            "inner": self.inner.to_dict(),
            "support_table": [
                {"direction": list(map(float, x)),
                 "inner": float(si),
                 "outer": None if self.outer_values is None else float(so),
                 "extension": bool(e)}
                for x, si, so, e in zip(
                    self.directions, self.inner_values,
                    self.outer_values if self.outer_values is not None
                    else np.full(len(self.directions), np.nan),
                    self.extension_mask)
            ],
            "gap": None if self.gap is None else float(self.gap),
            "skipped_points": self.skipped_points,
        }


def kernel_momentum_set(
    kernel: KernelSpec,
    action: GroupActionOnM,
    directions,
    points=None,
    *,
    sampler: Callable | None = None,
    n_points: int = 0,
    seed: int = 0,
    matrix_oracle: UnitaryRep | None = None,
) -> KernelMomentumSet:
    """Inner momentum-set estimate from kernel sections over Omega.

    Points come from an explicit list, a seeded sampler (rng, n) -> points,
    or both; those with K(m, m) <= 0 are skipped and counted.  When a
    truncated matrix oracle is supplied, its directional suprema provide
    outer values, compared on the directions carrying the declared
    holomorphic extension.
    """
    from .unirep import spectral_sup  # local import keeps module load cheap

    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    pts: list[np.ndarray] = []
    if points is not None:
        pts.extend(_point(p, kernel.domain_dim) for p in np.atleast_2d(np.asarray(points, dtype=complex)))
    if sampler is not None and n_points > 0:
        rng = np.random.default_rng(seed)
        pts.extend(_point(p, kernel.domain_dim) for p in sampler(rng, n_points))
    if not pts:
        raise InputError("kernel_momentum_set needs at least one sample point")

    values = []
    skipped = 0
    for m in pts:
        if kernel(m, m).real <= OMEGA_FLOOR:
            skipped += 1
            continue
        values.append([
            kernel_momentum_value(kernel, action, e, m)
            for e in np.eye(action.algebra_dim)
        ])
    if not values:
        raise ComputationError("no sample point lies in Omega (all K(m,m) <= 0)")

    inner = ConvexSetV(np.array(values))
    from .convex import support_function
    inner_vals = np.array([support_function(inner, x).value for x in directions])
    ext_mask = np.array([
        bool(action.extension_ok(x)) if action.extension_ok is not None else False
        for x in directions
    ])
    outer_vals = None
    gap = None
    if matrix_oracle is not None:
        outer_vals = np.array([spectral_sup(matrix_oracle, x) for x in directions])
        if np.any(ext_mask):
            gap = float(np.max(outer_vals[ext_mask] - inner_vals[ext_mask]))
    return KernelMomentumSet(inner, directions, inner_vals, outer_vals,
                             ext_mask, gap, skipped)


# ---------------------------------------------------------------------------
# Half-plane contraction semigroup on the span of kernel sections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContractionResult:
    lhs_norm: float
    rhs_bound: float
    sup_pairing: float
    verdict: bool

    def to_dict(self) -> dict:
        return {"lhs_norm": self.lhs_norm, "rhs_bound": self.rhs_bound,
                "sup_pairing": self.sup_pairing, "verdict": self.verdict}


def _cross_gram(kernel: KernelSpec, A, B) -> np.ndarray:
    return np.array([[kernel(a, b) for b in B] for a in A])


def _require_extension(action: GroupActionOnM, x: np.ndarray):
    if action.complex_flow is None:
        raise PreconditionError("no holomorphic half-plane extension is declared "
                                "for this action (complex_flow missing)")
    if action.extension_ok is not None and not action.extension_ok(x):
        raise PreconditionError(f"direction {x} is not declared to extend to the "
                                "upper half plane")


def _verify_flow_contraction(action: GroupActionOnM, x: np.ndarray,
                             samples, *, b: float = 0.1, fd: float = 1e-6):
    """Spot check |d flow(., x, ib) / dm| <= 1 on samples (declared extensions only)."""
    for m in samples:
        m = np.asarray(m, dtype=complex).reshape(-1)
        d = m.size
        J = np.zeros((d, d), dtype=complex)
        for jcol in range(d):
            e = np.zeros(d, dtype=complex)
            e[jcol] = fd
            plus = np.asarray(action.complex_flow(m + e, x, 1j * b), dtype=complex)
            minus = np.asarray(action.complex_flow(m - e, x, 1j * b), dtype=complex)
            J[:, jcol] = (plus - minus) / (2 * fd)
        if np.linalg.norm(J, 2) > 1.0 + 1e-6:
            raise DomainError(
                f"flow Jacobian expands (norm {np.linalg.norm(J, 2):.6f}) at {m}; "
                "the declared half-plane extension is not a contraction")


def contraction_check(
    kernel: KernelSpec,
    action: GroupActionOnM,
    x,
    b: float,
    model: FiniteModel,
    *,
    sup_points=None,
    slack: float = 1e-6,
) -> ContractionResult:
    """Gram operator norm of T_b : K_m -> K_{m.(ib)} against exp(b sup <Phi, -x>).

    The norm is the restriction of the half-plane semigroup to the span of
    the model sections, measured in the true inner product; the bound uses
    the sampled supremum of <Phi([K_m]), -x> over ``sup_points`` (defaults
    to the model points), so it converges to the exact operator norm as the
    point sample is refined.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if b < 0:
        raise InputError("b must be >= 0")
    _require_extension(action, x)
    _verify_flow_contraction(action, x, model.points)

    w = np.linalg.eigvalsh((model.gram + model.gram.conj().T) / 2)
    if w[0] < GRAM_MIN_EIG:
        raise ComputationError(
            f"Gram matrix is numerically singular (min eig {w[0]:.2e}); "
            "use fewer or better-spread model points")

    # (ib)* = -conj(ib) = ib: the adjoint-parameter flow point
    moved = np.array([
        np.asarray(action.complex_flow(z, x, 1j * b), dtype=complex).reshape(-1)
        for z in model.points
    ])
    M = _cross_gram(kernel, moved, moved)
    vals = eigh((M + M.conj().T) / 2, (model.gram + model.gram.conj().T) / 2,
                eigvals_only=True)
    lhs = float(np.sqrt(max(float(vals[-1]), 0.0)))

    pts = model.points if sup_points is None else np.atleast_2d(np.asarray(sup_points, dtype=complex))
    sup_pair = -np.inf
    for m in pts:
        if kernel(m, m).real <= OMEGA_FLOOR:
            continue
        phi_x = sum(float(xi) * kernel_momentum_value(kernel, action, e, m)
                    for xi, e in zip(x, np.eye(action.algebra_dim)))
        sup_pair = max(sup_pair, -phi_x)
    if not np.isfinite(sup_pair):
        raise ComputationError("no Omega point available for the supremum bound")
    rhs = float(np.exp(b * sup_pair))
    return ContractionResult(lhs, rhs, float(sup_pair), bool(lhs <= rhs * (1 + slack)))


def _section_lipschitz(kernel: KernelSpec, a: np.ndarray, *, h: float = 1e-4) -> float:
    """Estimate of sup ||d/ds K_{gamma(s)}|| near a: max over coordinate steps of
    ||K_{a+h e} - K_a|| / h, computed from kernel values at a resolvable step."""
    d = a.size
    worst = 0.0
    for e in np.vstack([np.eye(d), 1j * np.eye(d)]):
        bpt = a + h * e
        sq = (kernel(a, a) - 2 * np.real(kernel(a, bpt)) + kernel(bpt, bpt)).real
        worst = max(worst, float(np.sqrt(max(sq, 0.0))) / h)
    return worst


def semigroup_residual(
    kernel: KernelSpec,
    action: GroupActionOnM,
    x,
    b1: float,
    b2: float,
    model: FiniteModel,
) -> float:
    """Upper bound on the Gram operator norm of T_{b1} T_{b2} - T_{b1+b2}.

    The difference maps K_{z_i} to K_{u_i} - K_{u'_i}, where u/u' are the
    direct and composed flow points.  Subtracting their Gram entries would
    cancel catastrophically (the true residual sits at roundoff scale), so
    the bound is assembled without cancellation: per-section norms
    ``|u - u'| * Lipschitz(K_.)`` combined through the smallest Gram
    eigenvalue.  For a genuine semigroup flow this reports ~1e-13; for a
    broken one it grows with the point-level disagreement.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    _require_extension(action, x)
    direct = np.array([
        np.asarray(action.complex_flow(z, x, 1j * (b1 + b2)), dtype=complex).reshape(-1)
        for z in model.points
    ])
    composed = np.array([
        np.asarray(action.complex_flow(
            np.asarray(action.complex_flow(z, x, 1j * b2), dtype=complex).reshape(-1),
            x, 1j * b1), dtype=complex).reshape(-1)
        for z in model.points
    ])
    w = np.linalg.eigvalsh((model.gram + model.gram.conj().T) / 2)
    if w[0] < GRAM_MIN_EIG:
        raise ComputationError(
            f"Gram matrix is numerically singular (min eig {w[0]:.2e})")
    section_sq = 0.0
    for u, up in zip(direct, composed):
        gap = float(np.linalg.norm(u - up))
        if gap == 0.0:
            continue
        lip = max(_section_lipschitz(kernel, u), _section_lipschitz(kernel, up))
        section_sq += (gap * lip) ** 2
    return float(np.sqrt(section_sq / w[0]))


# ---------------------------------------------------------------------------
# Shipped kernels and actions
# ---------------------------------------------------------------------------

def fock_kernel(dim: int = 1) -> KernelSpec:
    """K(z, w) = exp(z . conj(w)) on C^dim."""
    def ev(z, w):
        return np.exp(np.dot(z, np.conj(w)))
    return KernelSpec(dim, ev, label=f"fock-{dim}d")


def rotation_action(dim: int = 1) -> GroupActionOnM:
    """Coordinatewise rotations m_k -> exp(-i x_k t) m_k of C^dim.

    The one-parameter flow of x extends holomorphically to the upper half
    plane exactly when every component x_k <= 0 (then |exp(-i x_k s)| <= 1
    for Im s >= 0, so the extended maps stay contractions).
    """
    def flow(m, x, t):
        m = np.asarray(m, dtype=complex).reshape(-1)
        return m * np.exp(-1j * np.asarray(x, dtype=float) * t)

    def complex_flow(m, x, s):
        m = np.asarray(m, dtype=complex).reshape(-1)
        return m * np.exp(-1j * np.asarray(x, dtype=float) * complex(s))

    def extension_ok(x):
        return bool(np.all(np.asarray(x, dtype=float) <= 1e-15))

    return GroupActionOnM(dim, flow, complex_flow=complex_flow,
                          extension_ok=extension_ok)


def translation_action(dim: int = 1) -> GroupActionOnM:
    """m -> m + a; does not leave the Fock kernel invariant (used as a foil)."""
    def flow(m, x, t):
        m = np.asarray(m, dtype=complex).reshape(-1)
        return m + np.asarray(x, dtype=float) * t
    return GroupActionOnM(dim, flow)


def disk_sampler(radius: float, dim: int = 1) -> Callable:
    """Uniform sample of the closed polydisk of the given radius."""
    def sample(rng, n):
        r = radius * np.sqrt(rng.uniform(0, 1, size=(n, dim)))
        phase = rng.uniform(0, 2 * np.pi, size=(n, dim))
        return r * np.exp(1j * phase)
    return sample


def fock_coefficient_vector(m, n_trunc: int) -> np.ndarray:
    """Coefficients of K_m in the monomial orthonormal basis, truncated.

    K_m = sum_k conj(m)^k / sqrt(k!) e_k for the 1-variable kernel.
    """
    m = complex(np.asarray(m, dtype=complex).reshape(-1)[0])
    c = np.empty(n_trunc, dtype=complex)
    c[0] = 1.0
    for k in range(1, n_trunc):
        c[k] = c[k - 1] * np.conj(m) / np.sqrt(k)
    return c


def fock_number_rep(n_trunc: int) -> UnitaryRep:
    """Matrix oracle for the 1-variable rotation scenario: generator -iN."""
    _, _, nhat = fock_ladders(n_trunc)
    return UnitaryRep(abelian_algebra(1), np.array([-1j * nhat]), truncated=True,
                      label=f"fock-number-{n_trunc}")
