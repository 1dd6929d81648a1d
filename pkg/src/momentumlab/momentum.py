"""Momentum maps, momentum-set estimates and boundedness classification.

The momentum map sends a projective vector [v] to the functional

    x  |->  <d_pi(x) v, v> / (i <v, v>),

real-valued because the generators are skew-Hermitian.  The momentum set
is the closed convex hull of its image; it is estimated from two sides:

* inner: the hull of momentum values at sampled projective vectors, plus
  the top eigenvectors of i d_pi(x) for every probe direction x (this
  injection makes the inner support attain the outer value exactly);
* outer: the directional suprema sup Spec(i d_pi(x)), which equal the
  support values of the true momentum set.

Boundedness classification follows the support-function picture: a fixed
finite-dimensional representation is always bounded; for a family of
truncations the growth of the directional suprema across cutoff levels
estimates the domain cone of the limiting support function.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .convex import (
    ConvexSetV,
    SemiEquicontinuityCertificate,
    dual_cone,
    semi_equicontinuity_certificate,
    support_function,
)
from .errors import InputError, TruncationWarning
from .liealg import adjoint_of_exp, coadjoint
from .unirep import UnitaryRep, d_pi, generator_norm_bound, pi_of_exp, spectral_sup, spectral_top

TOL_GROWTH = 1e-6       # max absolute increase for a "bounded" direction
SLOPE_BOUNDED = 0.1     # max log-log growth slope for a "bounded" direction


# ---------------------------------------------------------------------------
# Momentum map
# ---------------------------------------------------------------------------

def momentum_map(rep: UnitaryRep, v) -> np.ndarray:
    """Momentum value of the projective vector [v], as dual coordinates.

    Invariant under nonzero complex rescaling of v; the j-th coordinate is
    ``<A_j v, v> / (i |v|^2)``.
    """
    v = np.asarray(v, dtype=complex).reshape(-1)
    nrm2 = float(np.real(np.vdot(v, v)))
    if nrm2 <= 0.0:
        raise InputError("momentum_map needs a nonzero vector")
    if v.size != rep.hilbert_dim:
        raise InputError(f"vector length {v.size} != Hilbert dimension {rep.hilbert_dim}")
    vals = np.array([np.vdot(v, A @ v) for A in rep.generators]) / (1j * nrm2)
    return vals.real


def default_directions(dim: int, n: int = 64, *, seed: int = 0) -> np.ndarray:
    """Probe directions: +-basis vectors plus a reproducible unit-sphere sample.

    The sphere sample is a Fibonacci lattice for dim <= 3 and a seeded
    Gaussian-normalized sample for higher dimension.
    """
    if dim < 1:
        raise InputError("direction set needs dim >= 1")
    basis = np.vstack([np.eye(dim), -np.eye(dim)])
    if n <= 0:
        return basis
    if dim == 1:
        extra = np.zeros((0, 1))
    elif dim == 2:
        theta = 2 * np.pi * np.arange(n) / n
        extra = np.column_stack([np.cos(theta), np.sin(theta)])
    elif dim == 3:
        k = np.arange(n) + 0.5
        phi = np.arccos(1 - 2 * k / n)
        golden = np.pi * (1 + np.sqrt(5.0))
        theta = golden * k
        extra = np.column_stack([np.cos(theta) * np.sin(phi),
                                 np.sin(theta) * np.sin(phi),
                                 np.cos(phi)])
    else:
        rng = np.random.Generator(np.random.Philox(key=np.array([seed, 0xD1A], dtype=np.uint64)))
        extra = rng.normal(size=(n, dim))
        extra /= np.linalg.norm(extra, axis=1, keepdims=True)
    return np.vstack([basis, extra])


def _sample_vector(seed: int, index: int, dim: int) -> np.ndarray:
    # counter-based stream per sample: deterministic regardless of order
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, index], dtype=np.uint64)
    rng = np.random.Generator(np.random.Philox(key=key))
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


# ---------------------------------------------------------------------------
# Momentum-set estimates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentumSetEstimate:
    """Two-sided estimate of a momentum set.

    inner         : hull of sampled momentum values (a bounded ConvexSetV)
    directions    : (k, d) probe directions
    inner_values  : support values of ``inner`` on the probe directions
    outer_values  : directional suprema sup Spec(i d_pi(x)) on the same probes
    gap           : max over probes of outer - inner (>= -1e-8 by Rayleigh)
    """

    inner: ConvexSetV
    directions: np.ndarray
    inner_values: np.ndarray
    outer_values: np.ndarray
    gap: float

    def to_dict(self) -> dict:
        return {
            "inner": self.inner.to_dict(),
            "support_table": [
                {"direction": list(map(float, x)),
                 "inner": float(si), "outer": float(so), "gap": float(so - si)}
                for x, si, so in zip(self.directions, self.inner_values, self.outer_values)
            ],
            "gap": float(self.gap),
        }

    def support_table_csv(self) -> str:
        d = self.directions.shape[1]
        header = ",".join([f"dir_{i}" for i in range(d)] + ["inner", "outer", "gap"])
        lines = [header]
        for x, si, so in zip(self.directions, self.inner_values, self.outer_values):
            cells = [repr(float(c)) for c in x] + [repr(float(si)), repr(float(so)),
                                                   repr(float(so - si))]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


def momentum_set_estimate(
    rep: UnitaryRep,
    n_samples: int,
    directions,
    seed: int,
    *,
    inject_top_eigenvectors: bool = True,
) -> MomentumSetEstimate:
    """Sample the momentum map and bracket it by directional suprema.

    Projective samples are unit complex-Gaussian vectors drawn from
    counter-based per-sample streams, so the result is deterministic for a
    fixed seed independently of evaluation order.  With eigenvector
    injection (default) the inner support value attains the outer value on
    every probe direction up to eigensolver roundoff.
    """
    if n_samples < 1:
        raise InputError("n_samples must be >= 1")
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    if directions.size == 0:
        raise InputError("directions must be nonempty")
    if directions.shape[1] != rep.algebra.dim:
        raise InputError("direction dimension does not match the algebra")

    points = [momentum_map(rep, _sample_vector(seed, i, rep.hilbert_dim))
              for i in range(n_samples)]
    outer = np.empty(len(directions))
    for k, x in enumerate(directions):
        val, vec = spectral_top(rep, x)
        outer[k] = val
        if inject_top_eigenvectors:
            points.append(momentum_map(rep, vec))
    inner = ConvexSetV(np.array(points))
    inner_vals = np.array([support_function(inner, x).value for x in directions])
    gap = float(np.max(outer - inner_vals)) if len(directions) else 0.0
    return MomentumSetEstimate(inner, directions, inner_vals, outer, gap)


# ---------------------------------------------------------------------------
# Equivariance
# ---------------------------------------------------------------------------

def equivariance_residual(rep: UnitaryRep, y, v) -> float:
    """|| Phi([pi(exp y) v]) - Ad*(exp y) Phi([v]) ||.

    Vanishes (<= 1e-8) for untruncated representations; for truncated ones
    the residual reflects the truncation error and a TruncationWarning is
    attached.
    """
    if rep.truncated:
        warnings.warn(
            "equivariance residual on a truncated representation reflects "
            "truncation error", TruncationWarning, stacklevel=2)
    v = np.asarray(v, dtype=complex).reshape(-1)
    moved = pi_of_exp(rep, y).matrix @ v
    lhs = momentum_map(rep, moved)
    ad = adjoint_of_exp(np.asarray(y, dtype=float), rep.algebra)
    rhs = coadjoint(ad, momentum_map(rep, v))
    return float(np.linalg.norm(lhs - rhs))


# ---------------------------------------------------------------------------
# Boundedness classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundednessVerdict:
    """Classification of a representation or a truncation family.

    kind                  : "bounded" | "semibounded" | "unbounded-directionwise"
    equicontinuity_constant : sum of generator norms (bounded case)
    directions            : probe directions used (family case)
    bounded_mask          : per-probe flag "directional sup stays bounded"
    slopes                : per-probe log-log growth slope (nan when values
                            are nonpositive and growth is settled by the
                            absolute-increase test alone)
    growth_table          : per-probe directional sup at each cutoff level
    witness               : interior direction of the estimated domain cone
                            (semibounded), a bounded direction list otherwise
    certificate           : semi-equicontinuity certificate of the outer
                            estimate (family case)
    """

    kind: str
    equicontinuity_constant: float | None = None
    directions: np.ndarray | None = None
    bounded_mask: np.ndarray | None = None
    slopes: np.ndarray | None = None
    growth_table: np.ndarray | None = None
    levels: tuple[int, ...] | None = None
    witness: np.ndarray | None = None
    certificate: SemiEquicontinuityCertificate | None = None

    def bounded_directions(self) -> np.ndarray:
        if self.directions is None:
            return np.zeros((0, 0))
        return self.directions[self.bounded_mask]

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.equicontinuity_constant is not None:
            out["equicontinuity_constant"] = float(self.equicontinuity_constant)
        if self.directions is not None:
            out["growth"] = [
                {"direction": list(map(float, x)),
                 "values": list(map(float, row)),
                 "slope": None if np.isnan(s) else float(s),
                 "bounded": bool(b)}
                for x, row, s, b in zip(self.directions, self.growth_table,
                                        self.slopes, self.bounded_mask)
            ]
            out["levels"] = list(self.levels)
        if self.witness is not None:
            out["witness"] = list(map(float, self.witness))
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        return out


def _growth_fit(levels: np.ndarray, values: np.ndarray,
                tol_growth: float, slope_bounded: float) -> tuple[float, bool]:
    increase = float(values[-1] - values[0])
    if np.all(values > tol_growth):
        slope = float(np.polyfit(np.log(levels), np.log(values), 1)[0])
    else:
        # nonpositive suprema cannot grow without first crossing the
        # increase threshold; settle by the increase test alone
        slope = float("nan")
    bounded = increase < tol_growth and (np.isnan(slope) or slope < slope_bounded)
    return slope, bounded


def classify_boundedness(
    rep_or_family,
    directions=None,
    *,
    seed: int = 0,
    n_extra_directions: int = 64,
    tol_growth: float = TOL_GROWTH,
    slope_bounded: float = SLOPE_BOUNDED,
) -> BoundednessVerdict:
    """Classify a representation (always bounded) or a truncation family.

    A single finite-dimensional representation is bounded: every directional
    supremum is finite and ``sum_i ||A_i||`` is an explicit equicontinuity
    constant for the momentum set.

    A family of >= 3 truncation levels is probed on +-basis directions plus
    a direction sample; a probe is *bounded* when its directional sup
    increases by less than ``tol_growth`` across levels and its log-log
    growth slope stays below ``slope_bounded``.  The estimated domain cone
    is the cone spanned by the bounded probes; the verdict is semibounded
    exactly when the semi-equicontinuity certificate of the matching outer
    estimate holds (recession cone = dual of the bounded-probe cone), i.e.
    when that cone is full-dimensional.
    """
    if isinstance(rep_or_family, UnitaryRep):
        rep = rep_or_family
        return BoundednessVerdict(
            kind="bounded",
            equicontinuity_constant=generator_norm_bound(rep),
        )

    family = list(rep_or_family)
    if len(family) < 3:
        raise InputError("a truncation family needs at least 3 levels to fit growth")
    dims = [r.hilbert_dim for r in family]
    if any(b <= a for a, b in zip(dims, dims[1:])):
        raise InputError("truncation levels must be strictly increasing")
    d = family[0].algebra.dim
    if any(r.algebra.dim != d for r in family):
        raise InputError("family members must represent the same algebra")

    if directions is None:
        directions = default_directions(d, n_extra_directions, seed=seed)
    directions = np.atleast_2d(np.asarray(directions, dtype=float))

    levels = np.array(dims, dtype=float)
    table = np.array([[spectral_sup(r, x) for r in family] for x in directions])
    slopes = np.empty(len(directions))
    mask = np.zeros(len(directions), dtype=bool)
    for k in range(len(directions)):
        slopes[k], mask[k] = _growth_fit(levels, table[k], tol_growth, slope_bounded)

    if np.all(mask):
        return BoundednessVerdict(
            kind="bounded",
            equicontinuity_constant=generator_norm_bound(family[-1]),
            directions=directions, bounded_mask=mask, slopes=slopes,
            growth_table=table, levels=tuple(dims))

    bounded_dirs = directions[mask]
    if len(bounded_dirs) == 0:
        return BoundednessVerdict(
            kind="unbounded-directionwise",
            directions=directions, bounded_mask=mask, slopes=slopes,
            growth_table=table, levels=tuple(dims))

    # outer estimate: intersection of half-spaces over the bounded probes;
    # its recession cone is the dual cone of the bounded directions
    recession = dual_cone(bounded_dirs)
    anchor = np.zeros(d)
    outer = ConvexSetV([anchor], rays=recession.rays if recession.rays.size else None)
    cert = semi_equicontinuity_certificate(outer)
    kind = "semibounded" if cert.verdict else "unbounded-directionwise"
    witness = cert.interior_point if cert.verdict else None
    return BoundednessVerdict(
        kind=kind, directions=directions, bounded_mask=mask, slopes=slopes,
        growth_table=table, levels=tuple(dims), witness=witness, certificate=cert)
