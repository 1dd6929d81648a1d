"""Discrete spectral measures for the additive group of R^d.

A finitely supported spectral measure is a list of atoms (alpha_k, P_k):
pairwise-orthogonal Hermitian projections P_k summing to the identity,
labeled by distinct functionals alpha_k.  It generates the unitary
representation

    pi(v) = sum_k exp(i <alpha_k, v>) P_k,

which extends over the tube { x + iy : y in B(X) interior } to the
holomorphic contraction semigroup

    pi_hat(x + iy) = sum_k exp(i <alpha_k, x> - <alpha_k, y>) P_k,

with involution (x+iy)* = -x+iy and operator norm exactly
``exp(-min_k <alpha_k, y>)``.  Conversely, any commuting family of
skew-Hermitian generators is jointly diagonalized back into such a
measure, which closes the loop measure -> generators -> measure.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .convex import TOL_CONE, ConvexSetV, support_function
from .errors import ClusterWarning, InputError, PreconditionError
from .unirep import UnitaryRep  # noqa: F401  (wire-format consumers build reps from measures)

PROJ_TOL = 1e-10        # idempotence / orthogonality / completeness tolerance
COMMUTE_TOL = 1e-8      # admissible pairwise commutator norm for generators
CLUSTER_TOL = 1e-7      # eigenvalue clustering width in joint diagonalization


# ---------------------------------------------------------------------------
# Spectral measures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralMeasureDiscrete:
    """Atoms (alpha_k, P_k) with orthogonal projections summing to 1.

    alphas      : (K, d) array of pairwise-distinct functionals
    projections : (K, N, N) complex array of Hermitian idempotents with
                  P_k P_l = 0 for k != l and sum_k P_k = identity
    """

    alphas: np.ndarray
    projections: np.ndarray

    def __init__(self, atoms=None, *, alphas=None, projections=None):
        if atoms is not None:
            alphas = np.array([np.asarray(a, dtype=float).reshape(-1) for a, _ in atoms])
            projections = np.array([np.asarray(P, dtype=complex) for _, P in atoms])
        alphas = np.atleast_2d(np.asarray(alphas, dtype=float))
        projections = np.asarray(projections, dtype=complex)
        if projections.ndim != 3 or projections.shape[0] != alphas.shape[0]:
            raise InputError("need one projection per atom")
        K, N = projections.shape[0], projections.shape[1]
        if projections.shape[2] != N:
            raise InputError("projections must be square")
        for k in range(K):
            P = projections[k]
            if np.max(np.abs(P - P.conj().T)) > PROJ_TOL:
                raise InputError(f"projection {k} is not Hermitian")
            if np.max(np.abs(P @ P - P)) > PROJ_TOL:
                raise InputError(f"projection {k} is not idempotent")
        for k in range(K):
            for l in range(k + 1, K):
                if np.max(np.abs(projections[k] @ projections[l])) > PROJ_TOL:
                    raise InputError(f"projections {k} and {l} are not orthogonal")
                if np.max(np.abs(alphas[k] - alphas[l])) <= 0:
                    raise InputError(f"atoms {k} and {l} carry the same functional")
        total = projections.sum(axis=0)
        if np.max(np.abs(total - np.eye(N))) > PROJ_TOL:
            raise InputError("projections do not sum to the identity")
        alphas.setflags(write=False)
        projections.setflags(write=False)
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "projections", projections)

    @property
    def n_atoms(self) -> int:
        return self.alphas.shape[0]

    @property
    def hilbert_dim(self) -> int:
        return self.projections.shape[1]

    @property
    def dual_dim(self) -> int:
        return self.alphas.shape[1]

    def to_dict(self) -> dict:
        return {"atoms": [
            {"alpha": list(map(float, a)),
             "P": [[[float(z.real), float(z.imag)] for z in row] for row in P]}
            for a, P in zip(self.alphas, self.projections)
        ]}

    @classmethod
    def from_dict(cls, data: dict) -> "SpectralMeasureDiscrete":
        alphas, projs = [], []
        for atom in data["atoms"]:
            alphas.append(atom["alpha"])
            projs.append([[complex(re, im) for re, im in row] for row in atom["P"]])
        return cls(alphas=np.array(alphas), projections=np.array(projs))


@dataclass(frozen=True)
class TubeElement:
    """s = x + iy with y constrained to the interior of a declared domain cone."""

    x: np.ndarray
    y: np.ndarray

    def __init__(self, x, y):
        x = np.asarray(x, dtype=float).reshape(-1)
        y = np.asarray(y, dtype=float).reshape(-1)
        if x.size != y.size:
            raise InputError("real and imaginary parts must have equal dimension")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def conj_involution(self) -> "TubeElement":
        """(x + iy)* = -x + iy."""
        return TubeElement(-self.x, self.y)

    def __add__(self, other: "TubeElement") -> "TubeElement":
        return TubeElement(self.x + other.x, self.y + other.y)


@dataclass(frozen=True)
class NormReport:
    norm: float
    bound: float
    satisfied: bool

    def to_dict(self) -> dict:
        return {"norm": self.norm, "bound": self.bound, "satisfied": self.satisfied}


# ---------------------------------------------------------------------------
# Representation and tube extension
# ---------------------------------------------------------------------------

def rep_from_measure(P: SpectralMeasureDiscrete, v) -> np.ndarray:
    """pi(v) = sum_k exp(i <alpha_k, v>) P_k; unitary, additive in v."""
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.size != P.dual_dim:
        raise InputError(f"v has dimension {v.size}, expected {P.dual_dim}")
    phases = np.exp(1j * (P.alphas @ v))
    return np.einsum("k,kab->ab", phases, P.projections)


def _check_tube_point(P: SpectralMeasureDiscrete, s: TubeElement,
                      X: ConvexSetV | None, tol_cone: float):
    if s.x.size != P.dual_dim:
        raise InputError("tube element dimension does not match the measure")
    if X is None:
        return  # X := conv(atoms) is bounded, so B(X) is the whole space
    if X.rays.shape[0] == 0:
        return
    yn = np.linalg.norm(s.y)
    if yn == 0.0:
        raise PreconditionError("y = 0 is not interior to the domain cone")
    unit_rays = X.rays / np.linalg.norm(X.rays, axis=1, keepdims=True)
    if np.min(unit_rays @ (s.y / yn)) < tol_cone:
        raise PreconditionError(
            "y is not interior to B(X) at the required margin; the semigroup "
            "extension is only defined on the open tube")


def semigroup_extension(
    P: SpectralMeasureDiscrete,
    s: TubeElement,
    *,
    X: ConvexSetV | None = None,
    tol_cone: float = TOL_CONE,
) -> tuple[np.ndarray, NormReport]:
    """pi_hat(x + iy) = sum_k exp(i<alpha_k,x> - <alpha_k,y>) P_k with its norm law.

    The operator norm equals exp(-min_k <alpha_k, y>) exactly (orthogonal
    projections); the report compares it with the declared-domain bound
    exp(-inf <X, y>) = exp(s_X(y)) for X containing the atoms (X defaults
    to the convex hull of the atoms, where bound and norm coincide).
    Compatibility pi(v) pi_hat(s) = pi_hat(v + s) holds by construction.
    """
    _check_tube_point(P, s, X, tol_cone)
    exponents = P.alphas @ (1j * s.x - s.y)
    weights = np.exp(exponents)
    op = np.einsum("k,kab->ab", weights, P.projections)
    norm = float(np.exp(np.max(-(P.alphas @ s.y))))
    if X is None:
        bound = norm
    else:
        sX = support_function(X, s.y, tol_cone=tol_cone)
        if not sX.is_finite:
            raise PreconditionError("y lies outside B(X): the norm bound is infinite")
        bound = float(np.exp(sX.value))
    return op, NormReport(norm, bound, bool(norm <= bound * (1 + 1e-12) + 1e-300))


def momentum_set_of_measure(P: SpectralMeasureDiscrete, *, tol: float = 1e-12) -> ConvexSetV:
    """conv { alpha_k : P_k != 0 }: the momentum set of the generated representation.

    The momentum value of [u] is the convex combination of the alpha_k with
    weights |P_k u|^2 / |u|^2, and every weight profile is realized by some
    unit vector, so the image of the momentum map is exactly this hull.
    """
    keep = [k for k in range(P.n_atoms)
            if np.max(np.abs(P.projections[k])) > tol]
    if not keep:
        raise InputError("measure has no nonzero projection")
    return ConvexSetV(P.alphas[keep])


# ---------------------------------------------------------------------------
# Measure recovery by joint diagonalization
# ---------------------------------------------------------------------------

def _cluster_indices(values: np.ndarray, tol: float, events: list) -> list[np.ndarray]:
    order = np.argsort(values)
    groups: list[list[int]] = [[order[0]]]
    for idx in order[1:]:
        if values[idx] - values[groups[-1][-1]] <= tol:
            groups[-1].append(idx)
        else:
            groups.append([idx])
    for g in groups:
        width = float(values[g[-1]] - values[g[0]])
        # exact degeneracies spread only by eigensolver noise; a wider
        # cluster means genuinely distinct values were merged
        if width > tol / 100:
            events.append(width)
    return [np.array(g) for g in groups]


def _joint_eigensystem(mats: list[np.ndarray], basis: np.ndarray, tol: float,
                       events: list) -> list[tuple[tuple[float, ...], np.ndarray]]:
    """Recursively split the span of ``basis`` into joint eigenspaces."""
    if not mats:
        return [((), basis)]
    H = basis.conj().T @ mats[0] @ basis
    w, V = np.linalg.eigh((H + H.conj().T) / 2)
    out = []
    for idx in _cluster_indices(w, tol, events):
        sub = basis @ V[:, idx]
        val = float(np.mean(w[idx]))
        for tail, vecs in _joint_eigensystem(mats[1:], sub, tol, events):
            out.append(((val,) + tail, vecs))
    return out


def recover_measure(generators, *, tol_cluster: float = CLUSTER_TOL,
                    tol_commute: float = COMMUTE_TOL) -> SpectralMeasureDiscrete:
    """Joint diagonalization of commuting skew-Hermitian generators.

    The Hermitian family { (1/i) A_j } is diagonalized recursively inside
    eigenspace clusters (width ``tol_cluster``); atoms are the joint
    eigenvalue tuples, projections the joint eigenprojections, so that
    ``A_j = i sum_k <alpha_k, e_j> P_k`` holds for the result.  Atoms whose
    tuples collide within ``tol_cluster`` are merged with a ClusterWarning.
    Round trip: ``rep_from_measure(recover_measure(A), e_j) = exp(A_j)``.
    """
    gens = [np.asarray(A, dtype=complex) for A in generators]
    if not gens:
        raise InputError("recover_measure needs at least one generator")
    N = gens[0].shape[0]
    for j, A in enumerate(gens):
        if A.shape != (N, N):
            raise InputError("generators must be square matrices of equal size")
        if np.max(np.abs(A + A.conj().T)) > 1e-8:
            raise PreconditionError(f"generator {j} is not skew-Hermitian")
    for j in range(len(gens)):
        for l in range(j + 1, len(gens)):
            defect = float(np.linalg.norm(gens[j] @ gens[l] - gens[l] @ gens[j], 2))
            if defect > tol_commute:
                raise PreconditionError(
                    f"generators {j} and {l} do not commute (defect {defect:.2e})")

    herm = [-1j * A for A in gens]
    events: list = []
    leaves = _joint_eigensystem(herm, np.eye(N, dtype=complex), tol_cluster, events)

    atoms: list[np.ndarray] = []
    projs: list[np.ndarray] = []
    for tup, vecs in leaves:
        alpha = np.array(tup)
        proj = vecs @ vecs.conj().T
        hit = next((i for i, a in enumerate(atoms)
                    if np.max(np.abs(a - alpha)) <= tol_cluster), None)
        if hit is None:
            atoms.append(alpha)
            projs.append(proj)
        else:
            events.append(float(np.max(np.abs(atoms[hit] - alpha))))
            projs[hit] = projs[hit] + proj
    if events:
        warnings.warn(
            f"merged {len(events)} nearby spectral value(s) within the "
            f"clustering tolerance {tol_cluster:g} (widths {events})",
            ClusterWarning, stacklevel=2)
    return SpectralMeasureDiscrete(alphas=np.array(atoms), projections=np.array(projs))


def generators_from_measure(P: SpectralMeasureDiscrete) -> np.ndarray:
    """Commuting skew-Hermitian generators A_j = i sum_k <alpha_k, e_j> P_k."""
    return np.einsum("kj,kab->jab", 1j * P.alphas, P.projections)


def random_measure(rng, hilbert_dim: int, n_atoms: int, dual_dim: int,
                   *, alpha_scale: float = 1.0, min_gap: float = 1e-3) -> SpectralMeasureDiscrete:
    """A random measure with haar-ish orthogonal projections and separated atoms."""
    if n_atoms > hilbert_dim:
        raise InputError("cannot place more atoms than Hilbert dimensions")
    Z = rng.normal(size=(hilbert_dim, hilbert_dim)) + 1j * rng.normal(size=(hilbert_dim, hilbert_dim))
    Q, _ = np.linalg.qr(Z)
    cuts = np.sort(rng.choice(np.arange(1, hilbert_dim), size=n_atoms - 1, replace=False)) \
        if n_atoms > 1 else np.array([], dtype=int)
    blocks = np.split(np.arange(hilbert_dim), cuts)
    projs = np.array([Q[:, b] @ Q[:, b].conj().T for b in blocks])
    while True:
        alphas = alpha_scale * rng.normal(size=(n_atoms, dual_dim))
        gaps = [np.max(np.abs(alphas[i] - alphas[j]))
                for i in range(n_atoms) for j in range(i + 1, n_atoms)]
        if not gaps or min(gaps) > min_gap:
            break
    return SpectralMeasureDiscrete(alphas=alphas, projections=projs)
