"""Convex analysis of polyhedral subsets of a finite-dimensional dual space.

A closed convex set X in the dual of R^d is kept in V-representation,
``conv(points) + cone(rays)``, so support functions, domain cones,
dual cones and membership questions all reduce to exact linear programs
or direct enumeration.  The pairing between a dual element ``alpha`` and
a direction ``v`` is the Euclidean one, ``<alpha, v> = sum_i alpha_i v_i``.

Conventions
-----------
* support function:  ``s_X(v) = -inf <X, v> = sup <X, -v>``
* domain cone:       ``B(X) = { v : inf <X, v> > -inf }``; X is
  semi-equicontinuous exactly when B(X) has interior points, which for a
  polyhedral X is the pointedness of its recession cone.
* ``+inf`` values of the support function are carried by an explicit
  :class:`ExtendedReal` tag, never by a float sentinel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import CapabilityError, ComputationError, InputError, PreconditionError

# Default tolerances (all overridable per call).
TOL_CONE = 1e-9   # ray-nonnegativity slack for domain-cone decisions
TOL_MEM = 1e-8    # membership margin for separation certificates
DEDUP_TOL = 1e-12  # duplicate-point collapse at construction

MAX_DUAL_DIM = 16
MAX_DUAL_RAYS = 10_000


# ---------------------------------------------------------------------------
# Extended reals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtendedReal:
    """A value in R union {+inf}; ``value is None`` encodes +inf.

    +inf is absorbing under addition; comparisons treat it as larger than
    every finite value.
    """

    value: float | None = None

    def __post_init__(self):
        if self.value is not None and not math.isfinite(self.value):
            raise InputError("finite ExtendedReal requires a finite float; "
                             "use ExtendedReal.infinity() for +inf")

    @classmethod
    def finite(cls, x: float) -> "ExtendedReal":
        return cls(float(x))

    @classmethod
    def infinity(cls) -> "ExtendedReal":
        return cls(None)

    @property
    def is_finite(self) -> bool:
        return self.value is not None

    def __add__(self, other):
        other = other if isinstance(other, ExtendedReal) else ExtendedReal.finite(other)
        if self.value is None or other.value is None:
            return ExtendedReal.infinity()
        return ExtendedReal.finite(self.value + other.value)

    __radd__ = __add__

    def __mul__(self, scalar: float):
        if scalar <= 0:
            raise InputError("ExtendedReal scaling is defined for positive scalars only")
        if self.value is None:
            return ExtendedReal.infinity()
        return ExtendedReal.finite(scalar * self.value)

    __rmul__ = __mul__

    def _key(self, other) -> tuple[float, float]:
        o = other.value if isinstance(other, ExtendedReal) else float(other)
        a = math.inf if self.value is None else self.value
        b = math.inf if o is None else o
        return a, b

    def __lt__(self, other):
        a, b = self._key(other)
        return a < b

    def __le__(self, other):
        a, b = self._key(other)
        return a <= b

    def __gt__(self, other):
        a, b = self._key(other)
        return a > b

    def __ge__(self, other):
        a, b = self._key(other)
        return a >= b

    def __repr__(self):
        return "ExtendedReal(+inf)" if self.value is None else f"ExtendedReal({self.value!r})"


# ---------------------------------------------------------------------------
# Input coercion
# ---------------------------------------------------------------------------

def as_direction(v, dim: int | None = None) -> np.ndarray:
    """Coerce ``v`` to a finite 1-d float array, optionally checking its length."""
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InputError(f"expected a 1-d coordinate vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError("coordinate vector has non-finite entries")
    if dim is not None and arr.size != dim:
        raise InputError(f"dimension mismatch: expected {dim}, got {arr.size}")
    return arr


def _dedupe_rows(rows: np.ndarray, tol: float) -> np.ndarray:
    if len(rows) <= 1:
        return rows
    order = np.lexsort(rows.T[::-1])
    rows = rows[order]
    keep = [0]
    for i in range(1, len(rows)):
        if np.max(np.abs(rows[i] - rows[keep[-1]])) > tol:
            keep.append(i)
    return rows[keep]


# ---------------------------------------------------------------------------
# V-represented convex sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvexSetV:
    """``conv(points) + cone(rays)`` in the dual of R^d.

    points : (n, d) array, n >= 1
    rays   : (m, d) array, every row nonzero (m may be 0)

    Duplicate points are collapsed at construction; zero rays are rejected.
    Instances are immutable and safe for concurrent read-only use.
    """

    points: np.ndarray
    rays: np.ndarray

    def __init__(self, points, rays=None):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise InputError("ConvexSetV needs at least one point")
        if not np.all(np.isfinite(pts)):
            raise InputError("points contain non-finite entries")
        d = pts.shape[1]
        if rays is None or np.asarray(rays).size == 0:
            rys = np.zeros((0, d))
        else:
            rys = np.atleast_2d(np.asarray(rays, dtype=float))
            if rys.shape[1] != d:
                raise InputError(f"ray dimension {rys.shape[1]} != point dimension {d}")
            if not np.all(np.isfinite(rys)):
                raise InputError("rays contain non-finite entries")
            norms = np.linalg.norm(rys, axis=1)
            if np.any(norms <= DEDUP_TOL):
                raise InputError("zero ray rejected: rays must have positive norm")
        pts = _dedupe_rows(pts, DEDUP_TOL)
        pts.setflags(write=False)
        rys.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "rays", rys)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def is_bounded(self) -> bool:
        """No recession rays; equivalently B(X) is the whole space."""
        return self.rays.shape[0] == 0

    def to_dict(self) -> dict:
        return {"points": self.points.tolist(), "rays": self.rays.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "ConvexSetV":
        return cls(data["points"], data.get("rays") or None)


@dataclass(frozen=True)
class SemiEquicontinuityCertificate:
    """Witness for (or against) boundedness of s_X on some open set.

    verdict true  -> ``interior_point`` lies in the interior of B(X) and
                     every ray of X pairs with it at margin >= the cone
                     tolerance used for the check.
    verdict false -> ``line_direction`` r satisfies +-r in cone(rays).
    """

    verdict: bool
    interior_point: np.ndarray | None = None
    line_direction: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "interior_point": None if self.interior_point is None else self.interior_point.tolist(),
            "line_direction": None if self.line_direction is None else self.line_direction.tolist(),
        }


# ---------------------------------------------------------------------------
# Support function and domain cone
# ---------------------------------------------------------------------------

def support_function(X: ConvexSetV, v, *, tol_cone: float = TOL_CONE) -> ExtendedReal:
    """s_X(v) = -inf <X, v>; +inf exactly when v lies outside B(X).

    Finite value: ``max_p -<p, v>`` over the points of X, valid because all
    rays pair nonnegatively with v (within ``tol_cone`` after normalization).
    The function is convex and positively homogeneous in v.
    """
    v = as_direction(v, X.dim)
    if not domain_membership(X, v, tol_cone=tol_cone):
        return ExtendedReal.infinity()
    return ExtendedReal.finite(float(np.max(-X.points @ v)))


def domain_membership(X: ConvexSetV, v, *, tol_cone: float = TOL_CONE) -> bool:
    """True iff v lies in B(X), i.e. every recession ray pairs >= 0 with v.

    The test is scale-invariant: pairings of unit-normalized rays with the
    unit-normalized v are compared against ``-tol_cone``.
    """
    v = as_direction(v, X.dim)
    if X.rays.shape[0] == 0:
        return True
    vn = np.linalg.norm(v)
    if vn == 0.0:
        return True
    unit_rays = X.rays / np.linalg.norm(X.rays, axis=1, keepdims=True)
    return bool(np.min(unit_rays @ (v / vn)) >= -tol_cone)


def _pointedness_lp(unit_rays: np.ndarray) -> tuple[float, np.ndarray]:
    """max t s.t. <r_i, v> >= t for all i, |v|_inf <= 1; returns (t*, v*)."""
    m, d = unit_rays.shape
    # variables (v, t); minimize -t
    c = np.zeros(d + 1)
    c[-1] = -1.0
    A_ub = np.hstack([-unit_rays, np.ones((m, 1))])
    b_ub = np.zeros(m)
    bounds = [(-1.0, 1.0)] * d + [(None, None)]
    res = linprog(c, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success:
        raise ComputationError(f"pointedness LP failed: {res.message}")
    return -res.fun, res.x[:d]


def _zero_combination_lp(unit_rays: np.ndarray) -> np.ndarray | None:
    """Convex weights lam >= 0, sum lam = 1, sum lam_i r_i = 0, if they exist."""
    m, d = unit_rays.shape
    A_eq = np.vstack([unit_rays.T, np.ones((1, m))])
    b_eq = np.zeros(d + 1)
    b_eq[-1] = 1.0
    res = linprog(np.zeros(m), A_eq=A_eq, b_eq=b_eq,
                  bounds=[(0, None)] * m, method="highs")
    return res.x if res.success else None


def semi_equicontinuity_certificate(
    X: ConvexSetV, *, tol_cone: float = TOL_CONE
) -> SemiEquicontinuityCertificate:
    """Decide whether s_X is bounded on some nonempty open set.

    For polyhedral X the criterion is exact: the recession cone must be
    pointed (contain no line), equivalently B(X) must be full-dimensional.
    The positive certificate is an interior direction of B(X), rescaled so
    every unit ray pairs with it at margin >= ``tol_cone``; the negative
    certificate is a generator r with -r also in the recession cone
    (lowest-index tie break).
    """
    if X.rays.shape[0] == 0:
        # bounded set: s_X is finite everywhere, in particular near 0
        return SemiEquicontinuityCertificate(True, interior_point=np.zeros(X.dim))
    unit_rays = X.rays / np.linalg.norm(X.rays, axis=1, keepdims=True)
    t_star, v_star = _pointedness_lp(unit_rays)
    if t_star > tol_cone:
        margin = float(np.min(unit_rays @ v_star))
        if margin < tol_cone:
            v_star = v_star * (tol_cone / margin)
        return SemiEquicontinuityCertificate(True, interior_point=v_star)
    lam = _zero_combination_lp(unit_rays)
    if lam is None:
        raise ComputationError(
            "cone is numerically degenerate: neither an interior direction "
            "nor a vanishing convex combination of rays was found")
    idx = int(np.argmax(lam > 1e-9))  # lowest index with positive weight
    return SemiEquicontinuityCertificate(False, line_direction=X.rays[idx].copy())


# ---------------------------------------------------------------------------
# Dual cones via double description
# ---------------------------------------------------------------------------

def _dd_reduce_lineality(a, idx, rays, zerosets, lineality, tol):
    """One lineality-reduction step of the double description method."""
    vals = [abs(float(a @ l)) for l in lineality]
    j = int(np.argmax(vals))
    l0 = lineality[j] / np.linalg.norm(lineality[j])
    if float(a @ l0) < 0:
        l0 = -l0
    al0 = float(a @ l0)
    new_lin = []
    for k, l in enumerate(lineality):
        if k == j:
            continue
        proj = l - (float(a @ l) / al0) * l0
        nrm = np.linalg.norm(proj)
        if nrm > tol:
            new_lin.append(proj / nrm)
    kept_rays, kept_zero = [], []
    for k in range(len(rays)):
        proj = rays[k] - (float(a @ rays[k]) / al0) * l0
        nrm = np.linalg.norm(proj)
        if nrm <= tol:
            continue  # ray was a multiple of l0; l0 (or the cut) covers it
        kept_rays.append(proj / nrm)
        kept_zero.append(zerosets[k] | {idx})
    rays[:] = kept_rays
    zerosets[:] = kept_zero
    rays.append(l0)
    zerosets.append(set(range(idx)))  # l0 annihilates all previous constraints
    return new_lin


def _dd_adjacent(zi: set, zj: set, others: list[set]) -> bool:
    common = zi & zj
    return not any(common <= z for z in others)


def dual_cone(w_rays, *, tol: float = 1e-10) -> ConvexSetV:
    """Generators of the dual cone { alpha : <alpha, w> >= 0 for w in cone(w_rays) }.

    Computed with the double description method; lines in the dual are
    returned as pairs of opposite rays.  The result satisfies
    ``<alpha, w> >= 0`` for every output generator alpha and every input w.
    """
    W = np.atleast_2d(np.asarray(w_rays, dtype=float))
    if W.ndim != 2 or W.size == 0:
        raise InputError("dual_cone needs a nonempty list of generators")
    d = W.shape[1]
    if d > MAX_DUAL_DIM:
        raise CapabilityError(f"dual_cone supports dimension <= {MAX_DUAL_DIM}, got {d}")
    if W.shape[0] > MAX_DUAL_RAYS:
        raise CapabilityError(f"dual_cone supports <= {MAX_DUAL_RAYS} generators")
    norms = np.linalg.norm(W, axis=1)
    if np.any(norms <= tol):
        raise InputError("zero generator in dual_cone input")
    W = _dedupe_rows(W / norms[:, None], 1e-12)

    rays: list[np.ndarray] = []
    zerosets: list[set] = []
    lineality: list[np.ndarray] = [np.eye(d)[i] for i in range(d)]

    for idx, a in enumerate(W):
        if lineality and max(abs(float(a @ l)) for l in lineality) > tol:
            lineality = _dd_reduce_lineality(a, idx, rays, zerosets, lineality, tol)
            continue
        vals = np.array([float(a @ r) for r in rays])
        plus = [k for k in range(len(rays)) if vals[k] > tol]
        zero = [k for k in range(len(rays)) if abs(vals[k]) <= tol]
        minus = [k for k in range(len(rays)) if vals[k] < -tol]
        if not minus:
            for k in zero:
                zerosets[k] = zerosets[k] | {idx}
            continue
        new_rays: list[np.ndarray] = []
        new_zero: list[set] = []
        min_common = d - len(lineality) - 2
        for p in plus:
            for q in minus:
                common = zerosets[p] & zerosets[q]
                if len(common) < max(min_common, 0):
                    continue
                others = [zerosets[k] for k in range(len(rays)) if k not in (p, q)]
                if not _dd_adjacent(zerosets[p], zerosets[q], others):
                    continue
                r = vals[p] * rays[q] - vals[q] * rays[p]
                nrm = np.linalg.norm(r)
                if nrm <= tol:
                    continue
                new_rays.append(r / nrm)
                new_zero.append(common | {idx})
        keep = plus + zero
        rays = [rays[k] for k in keep] + new_rays
        zerosets = [zerosets[k] | ({idx} if k in zero else set()) for k in keep] + new_zero

    out = rays + [l for l in lineality] + [-l for l in lineality]
    if not out:
        return ConvexSetV(np.zeros((1, d)))
    arr = np.array(out)
    arr = arr / np.linalg.norm(arr, axis=1, keepdims=True)
    arr = _dedupe_rows(arr, 1e-10)
    return ConvexSetV(np.zeros((1, d)), arr)


# ---------------------------------------------------------------------------
# Membership / reconstruction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MembershipResult:
    """Outcome of a Hahn-Banach style membership query.

    status is one of ``inside``, ``outside``, ``undetermined``; an
    ``outside`` result carries the separating direction v, for which
    ``<alpha, v> < -s_X(v)`` with margin beyond the membership tolerance.
    """

    status: str
    separating_direction: np.ndarray | None = None


def _vrep_membership_lp(alpha: np.ndarray, X: ConvexSetV) -> bool:
    n, m = X.points.shape[0], X.rays.shape[0]
    A_eq = np.vstack([
        np.hstack([X.points.T, X.rays.T]) if m else X.points.T,
        np.hstack([np.ones(n), np.zeros(m)])[None, :],
    ])
    b_eq = np.concatenate([alpha, [1.0]])
    res = linprog(np.zeros(n + m), A_eq=A_eq, b_eq=b_eq,
                  bounds=[(0, None)] * (n + m), method="highs")
    return bool(res.success)


def _separation_lp(alpha: np.ndarray, X: ConvexSetV) -> tuple[float, np.ndarray]:
    """max t s.t. <p - alpha, v> >= t for points p, <r, v> >= 0, |v|_inf <= 1."""
    d = X.dim
    rows = [np.concatenate([alpha - p, [1.0]]) for p in X.points]
    rows += [np.concatenate([-r, [0.0]]) for r in X.rays]
    A_ub = np.array(rows)
    c = np.zeros(d + 1)
    c[-1] = -1.0
    bounds = [(-1.0, 1.0)] * d + [(None, None)]
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(len(rows)), bounds=bounds, method="highs")
    if not res.success:
        raise ComputationError(f"separation LP failed: {res.message}")
    return -res.fun, res.x[:d]


def membership_reconstruct(
    alpha,
    s_oracle=None,
    directions=None,
    *,
    X: ConvexSetV | None = None,
    tol_mem: float = TOL_MEM,
    tol_cone: float = TOL_CONE,
) -> MembershipResult:
    """Decide whether alpha belongs to the closed convex set behind ``s_oracle``.

    Every sampled direction v with ``<alpha, v> < -s(v) - tol_mem`` is a
    separating certificate (status ``outside``).  When the set is explicit
    (``X`` given), membership is settled exactly by LP: feasibility of a
    convex-conic combination gives ``inside``, otherwise a separating
    direction is produced by LP.  With only an oracle and finitely many
    directions that all pass, the honest answer is ``undetermined``.
    """
    if X is not None and s_oracle is None:
        s_oracle = lambda v: support_function(X, v, tol_cone=tol_cone)  # noqa: E731
    if s_oracle is None:
        raise InputError("membership_reconstruct needs a support oracle or an explicit set")
    if directions is None or len(directions) == 0:
        raise InputError("membership_reconstruct needs a nonempty direction list")

    dirs = [as_direction(v, None if X is None else X.dim) for v in directions]
    alpha = as_direction(alpha, dirs[0].size)

    if X is not None and X.rays.shape[0]:
        unit_rays = X.rays / np.linalg.norm(X.rays, axis=1, keepdims=True)
        for v in dirs:
            vn = np.linalg.norm(v)
            if vn > 0 and np.min(unit_rays @ (v / vn)) <= 0.0:
                raise PreconditionError(
                    "direction outside the interior of B(X); the reconstruction "
                    "inequality only characterizes membership on B(X) interior")

    for v in dirs:
        s = s_oracle(v)
        if not isinstance(s, ExtendedReal):
            s = ExtendedReal.finite(float(s))
        if not s.is_finite:
            continue
        if float(alpha @ v) < -s.value - tol_mem:
            return MembershipResult("outside", separating_direction=v)

    if X is None:
        return MembershipResult("undetermined")

    if _vrep_membership_lp(alpha, X):
        return MembershipResult("inside")
    t_star, v_star = _separation_lp(alpha, X)
    if t_star > tol_mem:
        return MembershipResult("outside", separating_direction=v_star)
    return MembershipResult("undetermined")


def properness_check(
    X: ConvexSetV, v, c: float, *, tol_cone: float = TOL_CONE
) -> bool:
    """True iff the sublevel set { alpha in X : <alpha, v> <= c } is bounded.

    Decided by LP boundedness of every coordinate functional over the
    sublevel set.  For v in the interior of B(X) the answer is always true
    (the finite-dimensional shadow of properness of eta_v on X); boundary
    directions of B(X) may legitimately return false.
    """
    v = as_direction(v, X.dim)
    if not domain_membership(X, v, tol_cone=tol_cone):
        raise PreconditionError("v is not in B(X); eta_v is unbounded below on X")
    n, m = X.points.shape[0], X.rays.shape[0]
    gen = np.hstack([X.points.T, X.rays.T]) if m else X.points.T  # d x (n+m)
    A_eq = np.hstack([np.ones(n), np.zeros(m)])[None, :]
    A_ub = (v @ gen)[None, :]
    bounds = [(0, None)] * (n + m)
    for j in range(X.dim):
        for sign in (+1.0, -1.0):
            res = linprog(sign * gen[j], A_eq=A_eq, b_eq=[1.0],
                          A_ub=A_ub, b_ub=[c], bounds=bounds, method="highs")
            if res.status == 3:  # unbounded
                return False
            if res.status == 2:  # empty sublevel set: bounded trivially
                return True
            if not res.success:
                raise ComputationError(f"properness LP failed: {res.message}")
    return True


# ---------------------------------------------------------------------------
# Weighted delta families
# ---------------------------------------------------------------------------

def build_weighted_delta_family(labels, weights) -> ConvexSetV:
    """Point-evaluation functionals on a finite weighted function space.

    ``labels`` fixes an ordering of the finite point set Y; functions on Y
    are identified with R^{|Y|} via the indicator basis, and the returned
    set collects the evaluation functionals delta_y (the standard basis of
    the dual).  All weights must be positive: then every function in the
    open unit ball of radius 1 around ``weights`` (in the weight-relative
    sup norm) is nonnegative, so the delta family pairs nonnegatively with
    that ball and is semi-equicontinuous.
    """
    labels = list(labels)
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or len(labels) != w.size or w.size == 0:
        raise InputError("labels and weights must be nonempty and of equal length")
    if not np.all(np.isfinite(w)) or np.any(w <= 0):
        raise InputError("all weights must be positive and finite")
    return ConvexSetV(np.eye(len(labels)))


# ---------------------------------------------------------------------------
# Uniform domination on semi-equicontinuous sets
# ---------------------------------------------------------------------------

def eta_domination_certificate(
    X: ConvexSetV, v, w, *, tol_cone: float = TOL_CONE
) -> tuple[float, float]:
    """Constants (eps, d) with ``|<alpha, w>| <= (1/eps) (<alpha, v> + d)`` on X.

    Requires v in the interior of B(X).  eps is the largest step (capped at 1)
    with v +- eps*w still in B(X); d dominates the support values at v +- eps*w.
    The bound holds on all of X: on the points directly, and along every ray
    because <r, v +- eps*w> >= 0.
    """
    v = as_direction(v, X.dim)
    w = as_direction(w, X.dim)
    if X.rays.shape[0]:
        rv = X.rays @ v
        rw = X.rays @ w
        if np.any(rv <= tol_cone * np.linalg.norm(X.rays, axis=1) * np.linalg.norm(v)):
            raise PreconditionError("v must pair strictly positively with every ray of X")
        eps = 1.0
        mask = np.abs(rw) > 0
        if np.any(mask):
            eps = min(1.0, float(np.min(rv[mask] / np.abs(rw[mask]))))
    else:
        eps = 1.0
    s_plus = support_function(X, v + eps * w, tol_cone=tol_cone)
    s_minus = support_function(X, v - eps * w, tol_cone=tol_cone)
    if not (s_plus.is_finite and s_minus.is_finite):
        raise ComputationError("v +- eps*w escaped B(X); eps selection failed")
    d = max(s_plus.value, s_minus.value, 0.0)
    return eps, d
