"""Polyhedral Finsler geometry on the model flat V.

The norm with unit ball B is ||v|| = max_w <w l, v>, the distance is
d(x, y) = ||y - x||.  Weyl cones, diamonds and mixed Busemann functions are
computed from root inequalities; compactified chamber coordinates use
kappa(t) = 1 - 1/(t + 1) on each simple-root value.
"""
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import FinslerError, NonRegularError
from .rootsys import FinslerFunctional
from .weyl import FaceType, WeylGroup

DIST_TOL = 1e-9
WALL_TOL = 1e-9


@lru_cache(maxsize=32)
def weyl_group_of(rs):
    return WeylGroup(rs)


def as_flat_point(rs, x, tol=1e-9):
    """Float ambient coordinates of a point of V; rejects vectors off the subspace."""
    v = np.asarray(x, dtype=float)
    if v.shape != (rs.ambient_dim,):
        raise FinslerError(f"expected {rs.ambient_dim} ambient coordinates, got shape {v.shape}")
    basis = rs.basis_float
    if np.linalg.norm(v - basis.T @ (basis @ v)) > tol * max(1.0, np.linalg.norm(v)):
        raise FinslerError("point does not lie in the flat V")
    return v


class PolyhedralNorm:
    """The norm max_w <w l, v> together with its W-orbit of functionals."""

    def __init__(self, l, W=None):
        self.l = l
        self.rs = l.rs
        self.W = W or weyl_group_of(l.rs)
        self.elements = list(self.W.elements)
        lf = l.as_float
        self.functionals = np.array([w.matrix @ lf for w in self.elements])

    def __call__(self, v):
        return float(np.max(self.functionals @ np.asarray(v, dtype=float)))

    def witnesses(self, v, tol=DIST_TOL):
        vals = self.functionals @ np.asarray(v, dtype=float)
        top = vals.max()
        return tuple(w for w, t in zip(self.elements, vals) if t >= top - tol)

    def distance(self, x, y):
        return self(np.asarray(y, dtype=float) - np.asarray(x, dtype=float))


@lru_cache(maxsize=64)
def _norm_of(l):
    return PolyhedralNorm(l)


@dataclass(frozen=True)
class FlatDistance:
    value: float
    witnesses: tuple
    tol: float = DIST_TOL

    def as_dict(self):
        return {"value": self.value, "witnesses": [str(w) for w in self.witnesses],
                "tol": self.tol}


def finsler_distance_flat(l, x, y, tol=DIST_TOL):
    """d(x, y) = max_w l_w(y - x) and the elements w attaining it (to ``tol``)."""
    norm = _norm_of(l)
    v = as_flat_point(l.rs, y) - as_flat_point(l.rs, x)
    return FlatDistance(norm(v), norm.witnesses(v, tol), tol)


def opposite_functional(l, W=None):
    """The functional -w0 l, whose direction is the iota-image of l's direction."""
    W = W or weyl_group_of(l.rs)
    return FinslerFunctional(l.rs, tuple(-c for c in W.w0.act(l.vector)))


@dataclass(frozen=True)
class PositivityReport:
    metric: bool
    radius: float
    orbit_rank: int
    degenerate_basis: np.ndarray

    def as_dict(self):
        return {"verdict": "metric" if self.metric else "seminorm",
                "radius": self.radius, "radius_bound": math.pi / 2,
                "orbit_rank": self.orbit_rank,
                "degenerate_basis": self.degenerate_basis.tolist(), "tol": 1e-9}


def check_metric_positivity(rs, l, tol=1e-9):
    """Decide whether d is positive.

    The verdict compares the radius of the model chamber about the direction
    of l (the largest angle to a chamber vertex) with pi/2.  The degenerate
    subspace is the orthogonal complement of the W-orbit of l inside V; the
    two computations are checked against each other.
    """
    theta = l.direction
    radius = 0.0
    for w in rs.fundamental_coweights:
        wf = np.array([float(c) for c in w])
        cosang = float(theta @ wf) / np.linalg.norm(wf)
        radius = max(radius, math.acos(max(-1.0, min(1.0, cosang))))
    metric = radius < math.pi / 2 - tol
    norm = _norm_of(l)
    basis = rs.basis_float
    coeffs = norm.functionals @ basis.T
    _, s, vt = np.linalg.svd(coeffs)
    rank = int(np.sum(s > tol * max(1.0, s[0])))
    degenerate = vt[rank:] @ basis
    if metric != (rank == rs.rank):
        raise FinslerError("radius criterion and orbit rank disagree")
    return PositivityReport(metric, radius, rank, degenerate)


def right_coset_rep(W, w, face):
    """Minimal element of w W_J; the placement w tau_I depends only on this coset."""
    return min(W.mul(w, u) for u in W.parabolic(face.J))


@lru_cache(maxsize=128)
def _star_roots(rs, I):
    """Positive roots with a nonzero simple coefficient at some index of I."""
    rows = []
    for beta in rs.positive_roots:
        c = rs.simple_coefficients(beta)
        if any(c[i] != 0 for i in I):
            rows.append([float(t) for t in beta])
    return np.array(rows).reshape(-1, rs.ambient_dim)


def cone_membership(rs, base, placement, x, tol=WALL_TOL):
    """Is x in the Weyl cone V(base, st(w tau_I)) = base + w W_J Delta?

    ``placement`` is a pair (w, FaceType).
    """
    w, face = placement
    y = w.matrix.T @ (as_flat_point(rs, x) - as_flat_point(rs, base))
    roots = _star_roots(rs, face.I)
    return bool(np.all(roots @ y >= -tol))


def chamber_reduce(rs, v, W=None):
    """Return (w, v_Delta) with v = w v_Delta and v_Delta in the closed chamber."""
    W = W or weyl_group_of(rs)
    y = np.array(v, dtype=float)
    w = W.identity
    alphas = rs.simple_roots_float
    for _ in range(len(W) + 1):
        vals = alphas @ y
        neg = np.flatnonzero(vals < 0)
        if neg.size == 0:
            return w, y
        i = int(neg[0])
        y = rs.simple_reflection_matrices[i] @ y
        w = W.rmul_gen(w, i)
    raise FinslerError("chamber reduction did not terminate")


def segment_placement(rs, x, y, face, tol=WALL_TOL):
    """Placement (w, face) of tau_+ for the segment xy, which must be face-regular."""
    v = as_flat_point(rs, y) - as_flat_point(rs, x)
    W = weyl_group_of(rs)
    w, vd = chamber_reduce(rs, v, W)
    vals = rs.simple_roots_float @ vd
    bad = [i + 1 for i in sorted(face.I) if vals[i] <= tol]
    if bad:
        raise NonRegularError(f"segment is not regular for face type {face}: "
                              f"simple roots {bad} vanish on its chamber representative")
    return right_coset_rep(W, w, face), face


def diamond_membership(l, x, y, z, tol=WALL_TOL):
    """Is z in the diamond of x, y for the face type spanned by l's direction?

    The diamond is V(x, st(tau_+)) cap V(y, st(tau_-)), where tau_+ is the
    face of that type determined by y - x and tau_- is its opposite at y.
    """
    rs = l.rs
    face = FaceType(l.face_indices, rs.rank)
    placement = segment_placement(rs, x, y, face, tol)
    return (cone_membership(rs, x, placement, z, tol)
            and cone_membership(rs, z, placement, y, tol))


def triangle_defect(l, x, y, z):
    """d(x, z) + d(z, y) - d(x, y); nonnegative, zero exactly on the diamond."""
    n = _norm_of(l)
    return n.distance(x, z) + n.distance(z, y) - n.distance(x, y)


@dataclass(frozen=True, eq=False)
class HoroPointFlat:
    """Mixed Busemann point: a placed face w tau_I and a basepoint p modulo the
    span of the sector V(0, w tau_I)."""

    l: FinslerFunctional
    face: FaceType
    w: object
    p: np.ndarray

    def __post_init__(self):
        W = weyl_group_of(self.l.rs)
        object.__setattr__(self, "w", right_coset_rep(W, self.w, self.face))
        object.__setattr__(self, "p", as_flat_point(self.l.rs, self.p))

    @property
    def sector_span(self):
        """Orthonormal rows spanning span{w omega_i : i in I}."""
        rs = self.l.rs
        vecs = [self.w.matrix @ np.array([float(c) for c in rs.fundamental_coweights[i]])
                for i in sorted(self.face.I)]
        if not vecs:
            return np.zeros((0, rs.ambient_dim))
        q, _ = np.linalg.qr(np.array(vecs).T)
        return q.T

    def __eq__(self, other):
        if not isinstance(other, HoroPointFlat):
            return NotImplemented
        if (other.l is not self.l and other.l.vector != self.l.vector) or other.face != self.face \
                or other.w != self.w:
            return False
        d = self.p - other.p
        s = self.sector_span
        return bool(np.linalg.norm(d - s.T @ (s @ d)) <= 1e-9 * max(1.0, np.linalg.norm(d)))

    def __hash__(self):
        return hash((self.face, self.w))

    @property
    def functionals(self):
        """w u w0 l for u in W_J: one linear Busemann functional per chamber containing the face."""
        W = weyl_group_of(self.l.rs)
        lf = W.w0.matrix @ self.l.as_float
        return np.array([W.mul(self.w, u).matrix @ lf for u in W.parabolic(self.face.J)])

    def busemann(self, y):
        y = np.asarray(y, dtype=float)
        return float(np.max(self.functionals @ (y - self.p)))

    def direction(self):
        """Interior direction of the placed face: w sum_{i in I} omega_i."""
        from .rootsys import fundamental_vertices
        om = fundamental_vertices(self.l)
        v = sum(np.array([float(c) for c in om[i]]) for i in self.face.I)
        return self.w.matrix @ v


def horofunction_flat(h, y, o):
    """Normalized mixed Busemann function b_{tau,p}(y) - b_{tau,p}(o)."""
    rs = h.l.rs
    return h.busemann(as_flat_point(rs, y)) - h.busemann(as_flat_point(rs, o))


@dataclass(frozen=True)
class ConvergenceRun:
    ks: tuple
    discrepancies: tuple
    threshold: float

    def first_below(self):
        for k, d in zip(self.ks, self.discrepancies):
            if d < self.threshold:
                return k
        return None

    def monotone_from(self, k0, slack=1e-12):
        tail = [d for k, d in zip(self.ks, self.discrepancies) if k >= k0]
        return all(b <= a + slack for a, b in zip(tail, tail[1:]))

    def as_dict(self):
        return {"k": list(self.ks), "discrepancy": list(self.discrepancies),
                "threshold": self.threshold, "first_below": self.first_below(),
                "note": "sup over a finite sample of the ball"}


def ball_sample(rs, radius, count, rng):
    """Points of the euclidean ball of V: random interior points plus boundary points."""
    basis = rs.basis_float
    n = rs.rank
    g = rng.standard_normal((count, n))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    r = radius * rng.random(count) ** (1.0 / n)
    pts = np.vstack([g * r[:, None], g * radius])
    return pts @ basis


def horofunction_convergence(h, radius=5.0, kmax=40, samples=2000, seed=0, threshold=1e-6):
    """sup_y |d(x_k, y) - d(x_k, p) - b_{tau,p}(y)| over a ball about p, for x_k = p + k v.

    v is the interior direction of the placed face.  The supremum is taken
    over a finite sample of the ball.
    """
    rs = h.l.rs
    norm = _norm_of(h.l)
    rng = np.random.default_rng(seed)
    ys = h.p + ball_sample(rs, radius, samples, rng)
    v = h.direction()
    b = np.max((ys - h.p) @ h.functionals.T, axis=1)
    ks, out = [], []
    for k in range(1, kmax + 1):
        xk = h.p + k * v
        dy = np.max((ys - xk) @ norm.functionals.T, axis=1)
        do = np.max((h.p - xk) @ norm.functionals.T)
        out.append(float(np.max(np.abs(dy - do - b))))
        ks.append(k)
    return ConvergenceRun(tuple(ks), tuple(out), threshold)


def kappa(t):
    return 1.0 if math.isinf(t) else 1.0 - 1.0 / (t + 1.0)


@dataclass(frozen=True)
class CompactifiedCoords:
    """(alpha_1, ..., alpha_n) with entries in [0, inf]."""

    values: tuple

    @property
    def is_finite(self):
        return all(math.isfinite(v) for v in self.values)

    @property
    def kappa(self):
        return tuple(kappa(v) for v in self.values)

    def close_to(self, other, tol=1e-2):
        return all(abs(a - b) <= tol for a, b in zip(self.kappa, other.kappa))

    def as_list(self):
        return ["inf" if math.isinf(v) else v for v in self.values]


@dataclass(frozen=True)
class SequenceLimit:
    converges: bool
    limit: CompactifiedCoords
    oscillation: tuple
    tol: float

    def same_limit(self, other):
        return self.converges and other.converges and self.limit.close_to(other.limit, self.tol)

    def as_dict(self):
        return {"converges": self.converges, "limit": self.limit.as_list(),
                "kappa_oscillation": list(self.oscillation), "tol": self.tol,
                "note": "finite-sample verdict at kappa resolution tol"}


def compactified_coords(rs, x, tol=WALL_TOL):
    """alpha-coordinates of a point of the closed chamber (points outside are rejected)."""
    v = as_flat_point(rs, x)
    vals = rs.simple_roots_float @ v
    if np.any(vals < -tol):
        raise FinslerError("point lies outside the closed chamber; reduce it into the chamber first")
    return CompactifiedCoords(tuple(float(max(t, 0.0)) for t in vals))


def compactified_limit(rs, seq, tol=1e-2):
    """Convergence of a chamber sequence in the compactified chamber.

    Works in kappa-coordinates: a coordinate converges when its oscillation
    over the second half of the sequence is at most ``tol``; a limit within
    ``tol`` of kappa = 1 is reported as infinity.
    """
    coords = [compactified_coords(rs, x) for x in seq]
    if len(coords) < 3:
        raise FinslerError("sequence needs at least three terms")
    ks = np.array([c.kappa for c in coords])
    tail = ks[len(ks) // 2:]
    osc = tuple(float(t) for t in tail.max(axis=0) - tail.min(axis=0))
    last = coords[-1].values
    limit = tuple(math.inf if 1.0 - kappa(a) <= tol else a for a in last)
    return SequenceLimit(all(o <= tol for o in osc), CompactifiedCoords(limit), osc, tol)
