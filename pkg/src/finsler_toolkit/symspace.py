"""Numerics on X = SL(n, R)/SO(n).

Points are positive definite symmetric matrices of determinant 1, with
g acting by x -> g x g^T and basepoint the identity.  The Delta-valued
distance of x, y is half the log of the eigenvalues of x^{-1} y, sorted
decreasingly; for x = o and y = g o this is the log of the singular values
of g.  Flags are stored as an orthonormal basis of R^n whose leading columns
span the levels.  Relative positions of flags are permutations, recovered
from the table of intersection dimensions.
"""
import itertools
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import scipy.linalg

from .errors import (FinslerError, FlagConvergenceError, RankAmbiguityError,
                     SamplingWarning, SequenceNotRegularError, SingularMatrixError,
                     SymSpaceError)
from .rootsys import build_root_system
from .weyl import FaceType, WeylGroup

ZERO_TOL = 1e-8       # singular values below this count as zero
AMBIGUITY_TOL = 1e-6  # ... and between ZERO_TOL and this are ambiguous
MERGE_TOL = 1e-6
SQRT2 = math.sqrt(2.0)


@lru_cache(maxsize=8)
def type_a(n):
    """Root system A_{n-1} and its Weyl group (permutation matrices on R^n)."""
    rs = build_root_system("A", n - 1)
    return rs, WeylGroup(rs)


def as_matrix(data):
    """Square float matrix from an array or nested rows of numbers, decimal strings or Fractions."""
    if isinstance(data, np.ndarray):
        m = data.astype(float)
    else:
        m = np.array([[float(Fraction(x)) if isinstance(x, str) else float(x) for x in row]
                      for row in data])
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise SymSpaceError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise SymSpaceError("matrix has non-finite entries")
    return m


def normalize_det(g):
    """Scale g to |det| = 1; raises on singular input."""
    g = as_matrix(g)
    sign, logdet = np.linalg.slogdet(g)
    if sign == 0 or not np.isfinite(logdet):
        raise SingularMatrixError("matrix is singular")
    return g * math.exp(-logdet / g.shape[0])


@dataclass(frozen=True)
class DeltaVector:
    """Nonincreasing real vector with zero sum: a point of the model chamber of A_{n-1}."""

    values: tuple

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        scale = max(1.0, float(np.abs(v).max(initial=0.0)))
        if np.any(np.diff(v) > 1e-12 * scale):
            raise SymSpaceError("Delta vector must be sorted nonincreasingly")
        if abs(v.sum()) > 1e-9 * scale:
            raise SymSpaceError("Delta vector must have zero sum")
        object.__setattr__(self, "values", tuple(float(t) for t in v))

    @property
    def array(self):
        return np.array(self.values)

    @property
    def alpha(self):
        """Simple-root values delta_i - delta_{i+1}."""
        v = self.array
        return v[:-1] - v[1:]

    @property
    def norm(self):
        return float(np.linalg.norm(self.array))

    def flip(self):
        """The iota-image -reverse(delta)."""
        return DeltaVector(tuple(-t for t in reversed(self.values)))


@dataclass(frozen=True, eq=False)
class SymPoint:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        scale = max(1.0, float(np.abs(m).max()))
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise SymSpaceError("SymPoint needs a square matrix")
        if np.abs(m - m.T).max() > 1e-12 * scale:
            raise SymSpaceError("SymPoint matrix is not symmetric")
        m = (m + m.T) / 2
        ev = np.linalg.eigvalsh(m)
        if ev[0] <= 0:
            raise SymSpaceError("SymPoint matrix is not positive definite")
        if abs(np.sum(np.log(ev))) > 1e-9 * max(1.0, float(np.abs(np.log(ev)).max())):
            raise SymSpaceError("SymPoint matrix must have determinant 1")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n(self):
        return self.matrix.shape[0]

    @classmethod
    def origin(cls, n):
        return cls(np.eye(n))

    @classmethod
    def from_group(cls, g):
        """The point g o = g g^T."""
        g = normalize_det(g)
        return cls(g @ g.T)

    @classmethod
    def flat(cls, a):
        """Point of the diagonal flat for a zero-sum vector a: diag(exp(2a))."""
        a = np.asarray(a, dtype=float)
        return cls(np.diag(np.exp(2 * a)))

    def act(self, g):
        g = normalize_det(g)
        return SymPoint(g @ self.matrix @ g.T)


def _sorted_logs(sv):
    with np.errstate(divide="ignore"):
        return np.sort(np.log(sv))[::-1]


def _mp_logs(g, dps):
    import mpmath
    with mpmath.workdps(dps):
        m = mpmath.matrix(g.tolist()) if isinstance(g, np.ndarray) else mpmath.matrix(g)
        d = mpmath.det(m)
        if d == 0:
            raise SingularMatrixError("matrix is singular")
        m = m / abs(d) ** (mpmath.mpf(1) / m.rows)
        sv = mpmath.svd_r(m, compute_uv=False)
        return sorted((float(mpmath.log(s)) for s in sv), reverse=True)


def cartan_projection(g_or_x, y=None, *, inverse=None, dps=None):
    """Delta-valued distance.

    ``cartan_projection(g)`` is the sorted log singular values of g scaled to
    determinant 1; ``cartan_projection(x, y)`` for SymPoints is d_Delta(x, y).
    Supplying ``inverse`` (an accurate g^{-1}) makes the small singular
    values accurate for badly conditioned g; ``dps`` switches to mpmath with
    that many digits (g may then be given as rows of decimal strings).
    """
    if y is not None:
        return _pair_projection(g_or_x, y)
    if dps is not None:
        rows = [[x if isinstance(x, str) else repr(float(x)) for x in row] for row in g_or_x]
        return DeltaVector(tuple(_fix_sum(np.array(_mp_logs(rows, dps)))))
    g = as_matrix(g_or_x)
    n = g.shape[0]
    sv = np.linalg.svd(g, compute_uv=False)
    if inverse is None and (sv[-1] == 0.0 or np.linalg.slogdet(g)[0] == 0):
        raise SingularMatrixError("matrix is singular")
    top = _sorted_logs(sv)
    if inverse is not None and sv[0] / max(sv[-1], 1e-300) > 1e12:
        # Too ill-conditioned for a determinant; g is taken to have |det| = 1.
        gi = as_matrix(inverse)
        bottom = -_sorted_logs(np.linalg.svd(gi, compute_uv=False))[::-1]
        h = n // 2
        logs = np.concatenate([top[:h], np.zeros(n - 2 * h), bottom[n - h:]])
        if n % 2:
            logs[h] = -(logs[:h].sum() + logs[h + 1:].sum())
        return DeltaVector(tuple(_fix_sum(logs)))
    return DeltaVector(tuple(_fix_sum(top)))


def _fix_sum(logs):
    logs = np.asarray(logs, dtype=float)
    return np.sort(logs - logs.mean())[::-1]


def _pair_projection(x, y):
    if x.n != y.n:
        raise SymSpaceError("points of different dimension")
    ev = scipy.linalg.eigh(y.matrix, x.matrix, eigvals_only=True)
    if ev[0] <= 0:
        raise SingularMatrixError("relative position is not positive definite")
    return DeltaVector(tuple(_fix_sum(0.5 * np.log(ev)[::-1])))


def riemannian_distance(x, y):
    return cartan_projection(x, y).norm


def finsler_distance_sym(x, y, l, allow_irregular=False):
    """l(d_Delta(x, y)) for a functional l on the Cartan subspace of A_{n-1}."""
    rs = l.rs
    if rs.components != (("A", x.n - 1),):
        raise SymSpaceError(f"functional belongs to {rs.tag}, points need A{x.n - 1}")
    if not allow_irregular and not l.regular:
        raise FinslerError("functional is not regular; pass allow_irregular=True for a seminorm")
    return float(l.as_float @ cartan_projection(x, y).array)


# ---------------------------------------------------------------- flags

@dataclass(frozen=True, eq=False)
class Flag:
    """Nested subspaces of dimensions ``dims``; level d is spanned by basis[:, :d].

    ``basis`` is a full orthonormal basis of R^n, so a partial flag carries a
    canonical completion.
    """

    basis: np.ndarray
    dims: tuple

    def __post_init__(self):
        b = np.array(self.basis, dtype=float)
        n = b.shape[0]
        if b.shape != (n, n) or np.abs(b.T @ b - np.eye(n)).max() > 1e-12:
            raise SymSpaceError("flag basis must be an orthonormal n x n matrix")
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(not 0 < d < n for d in dims) or list(dims) != sorted(set(dims)):
            raise SymSpaceError(f"flag dimensions {dims} must increase strictly within 1..{n - 1}")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "dims", dims)

    @property
    def n(self):
        return self.basis.shape[0]

    @property
    def is_full(self):
        return len(self.dims) == self.n - 1

    @property
    def face(self):
        return FaceType(frozenset(d - 1 for d in self.dims), self.n - 1)

    def level(self, d):
        return self.basis[:, :d]

    @classmethod
    def from_vectors(cls, vectors, dims=None):
        """Flag whose level d is spanned by the first d columns of ``vectors``."""
        a = np.atleast_2d(np.asarray(vectors, dtype=float))
        n, k = a.shape
        if dims is None:
            dims = tuple(range(1, min(k, n - 1) + 1))
        q, r = np.linalg.qr(np.hstack([a, np.eye(n)]))
        if k and np.abs(np.diag(r)[:k]).min() <= 1e-12 * max(1.0, np.abs(r).max()):
            raise SymSpaceError("flag vectors are linearly dependent")
        return cls(_orthonormalize(q[:, :n]), dims)

    @classmethod
    def standard(cls, n, dims=None):
        return cls(np.eye(n), tuple(dims or range(1, n)))

    def truncate(self, dims):
        return Flag(self.basis, dims)

    def full(self):
        return Flag(self.basis, tuple(range(1, self.n)))

    def transform(self, g):
        """Image g F; the QR factorization keeps leading spans."""
        q, _ = np.linalg.qr(as_matrix(g) @ self.basis)
        return Flag(_orthonormalize(q), self.dims)

    def distance(self, other):
        """Sum over the common levels of the principal angles."""
        common = sorted(set(self.dims) & set(other.dims))
        if not common:
            raise SymSpaceError("flags have no level in common")
        return float(sum(scipy.linalg.subspace_angles(self.level(d), other.level(d)).sum()
                         for d in common))

    def as_dict(self, digits=12):
        return {"dims": list(self.dims),
                "basis": [[round(float(c), digits) + 0.0 for c in self.basis[:, k]]
                          for k in range(max(self.dims))]}

    def sort_key(self):
        """Deterministic ordering key built from the level projectors."""
        parts = []
        for d in self.dims:
            b = self.level(d)
            parts.extend(np.round(b @ b.T, 6).ravel().tolist())
        return tuple(parts)


def _orthonormalize(q):
    # One extra QR pass pushes orthonormality to working precision.
    q2, r = np.linalg.qr(q)
    return q2 * np.sign(np.diag(r))


def _intersection_dim(a, b_perp, where=None):
    """dim(span a cap span b) where b_perp spans the orthogonal complement of b."""
    k = a.shape[1]
    if k == 0:
        return 0
    if b_perp.shape[1] == 0:
        return k
    s = np.linalg.svd(b_perp.T @ a, compute_uv=False)
    amb = s[(s >= ZERO_TOL) & (s <= AMBIGUITY_TOL)]
    if amb.size:
        i, j = where or (None, None)
        raise RankAmbiguityError(
            f"rank decision ambiguous at level pair ({i}, {j}): singular value {amb[0]:.3g} "
            f"in band [{ZERO_TOL:g}, {AMBIGUITY_TOL:g}]", i, j, float(amb[0]))
    return k - int(np.sum(s > AMBIGUITY_TOL))


def dimension_table(sigma, sigma0):
    """d[i][j] = dim(sigma_i cap sigma0_j) for 0 <= i, j <= n (full flags via their bases)."""
    n = sigma.n
    if sigma0.n != n:
        raise SymSpaceError("flags live in different dimensions")
    d = np.zeros((n + 1, n + 1), dtype=int)
    for i in range(1, n + 1):
        for j in range(0, n + 1):
            d[i, j] = _intersection_dim(sigma.basis[:, :i], sigma0.basis[:, j:], (i, j))
    return d


def permutation_from_table(d):
    """pi with d[i][j] = #{k <= i : pi(k) <= j} (1-based), or an error if inconsistent."""
    n = d.shape[0] - 1
    pi = []
    for i in range(1, n + 1):
        step = d[i] - d[i - 1]
        js = [j for j in range(1, n + 1) if step[j] == 1]
        if not js:
            raise SymSpaceError("dimension table is not that of a pair of full flags")
        pi.append(js[0])
    if sorted(pi) != list(range(1, n + 1)):
        raise SymSpaceError("dimension table does not define a permutation")
    for i in range(n + 1):
        for j in range(n + 1):
            if d[i, j] != sum(1 for k in range(i) if pi[k] <= j):
                raise SymSpaceError("dimension table is inconsistent")
    return pi


def relative_position_flags(sigma, sigma0):
    """pos(sigma, sigma0) as a RelativePosition of the face type of sigma0.

    With an adapted basis b, sigma0_j = <b_1..b_j> and sigma_i = <b_pi(1)..b_pi(i)>;
    the Weyl element is the permutation matrix sending e_k to e_pi(k).  For a
    partial reference flag the result is the coset W_J w.
    """
    if not sigma.is_full:
        raise SymSpaceError("relative position needs a full flag as first argument")
    n = sigma.n
    _, W = type_a(n)
    pi = permutation_from_table(dimension_table(sigma, sigma0.full()))
    p = np.zeros((n, n), dtype=np.int64)
    for k, j in enumerate(pi):
        p[j - 1, k] = 1
    return W.position(sigma0.face, W.from_matrix(p))


def transverse(f, g):
    """General position: dim(F_a cap G_b) = max(0, a + b - n) for all levels."""
    n = f.n
    for a in f.dims:
        for b in g.dims:
            if _intersection_dim(f.level(a), g.basis[:, b:], (a, b)) != max(0, a + b - n):
                return False
    return True


# ---------------------------------------------------------------- sequences

def attracting_flag(g, dims, inverse=None):
    """Flag of type ``dims`` from the singular frame of g.

    With ``inverse`` supplied, the leading floor(n/2) frame vectors come from
    g, the trailing floor(n/2) from the leading singular vectors of g^{-T},
    and a middle vector (n odd) is their orthogonal complement.  This keeps
    the frame accurate when g is too ill-conditioned for its small singular
    directions to survive in floating point.
    """
    g = as_matrix(g)
    n = g.shape[0]
    u = np.linalg.svd(g)[0]
    if inverse is not None:
        h = n // 2
        ui = np.linalg.svd(as_matrix(inverse).T)[0]
        top, bottom = u[:, :h], ui[:, :h][:, ::-1]
        q = np.linalg.qr(np.hstack([top, bottom, np.eye(n)]))[0]
        u = np.hstack([top, q[:, 2 * h:n], bottom])
    return Flag(_orthonormalize(u), tuple(dims))


def _dims_of(face):
    return tuple(sorted(i + 1 for i in face.I))


def _slope(y):
    y = np.asarray(y, dtype=float)
    if len(y) < 2:
        return 0.0
    return float(np.polyfit(np.arange(len(y)), y, 1)[0])


@dataclass(frozen=True)
class RegularityReport:
    face: FaceType
    deltas: tuple
    wall_distances: tuple
    norms: tuple
    sector_distances: tuple
    regular: bool
    uniformly_regular: bool
    pure: bool
    rates: dict
    note: str = "verdicts describe this finite sample only"

    def as_dict(self):
        return {"face": str(self.face), "regular": self.regular,
                "uniformly_regular": self.uniformly_regular, "pure": self.pure,
                "rates": dict(self.rates),
                "wall_distances": [list(w) for w in self.wall_distances],
                "sector_distances": list(self.sector_distances), "note": self.note}


def regularity_stats(seq, face, inverses=None, rate_tol=1e-2, uniform_tol=1e-2,
                     pure_rel_tol=1e-2):
    """Finite-sample regularity verdicts for a sequence of matrices.

    Wall distances are alpha_i(delta_k)/|alpha_i| for i in the face; the
    sequence counts as regular when their minimum grows (least-squares slope
    above ``rate_tol`` per term), uniformly regular when additionally the
    ratio to |delta_k| stays above ``uniform_tol`` on the second half, and
    pure when the distance to the sector grows at most ``pure_rel_tol``
    times as fast as the wall distance.
    """
    seq = list(seq)
    if not seq:
        raise SymSpaceError("empty sequence")
    if len(seq) < 3:
        raise SymSpaceError("regularity statistics need at least three terms")
    invs = list(inverses) if inverses is not None else [None] * len(seq)
    deltas = [cartan_projection(g, inverse=gi) for g, gi in zip(seq, invs)]
    arr = np.array([d.values for d in deltas])
    n = arr.shape[1]
    if face.rank != n - 1:
        raise SymSpaceError(f"face type has rank {face.rank}, matrices need rank {n - 1}")
    alpha = arr[:, :-1] - arr[:, 1:]
    I = sorted(face.I)
    J = sorted(face.J)
    walls = alpha[:, I] / SQRT2
    m = walls.min(axis=1)
    norms = np.linalg.norm(arr, axis=1)
    if J:
        roots = np.zeros((len(J), n))
        for r, j in enumerate(J):
            roots[r, j], roots[r, j + 1] = 1.0, -1.0
        q, _ = np.linalg.qr(roots.T)
        sector = np.linalg.norm(arr @ q, axis=1)
    else:
        sector = np.zeros(len(arr))
    wall_slope = _slope(m)
    regular = bool(wall_slope > rate_tol and m[-1] > m[0])
    half = len(m) // 2
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.where(norms > 0, m / norms, 0.0)
    min_ratio = float(ratios[half:].min())
    sector_slope = _slope(sector)
    rates = {"wall_slope": wall_slope, "min_ratio_tail": min_ratio,
             "sector_slope": sector_slope, "max_sector_distance": float(sector.max())}
    return RegularityReport(
        face, tuple(deltas), tuple(tuple(float(t) for t in row) for row in walls),
        tuple(float(t) for t in norms), tuple(float(t) for t in sector),
        regular, bool(regular and min_ratio >= uniform_tol),
        bool(regular and sector_slope <= pure_rel_tol * wall_slope), rates)


def power_sequence(g, kmax):
    """(g^1..g^kmax, g^-1..g^-kmax), inverses computed from g^{-1} directly."""
    g = normalize_det(g)
    gi = np.linalg.inv(g)
    mats, invs = [], []
    p, pi = np.eye(g.shape[0]), np.eye(g.shape[0])
    for _ in range(kmax):
        p = p @ g
        pi = pi @ gi
        mats.append(p.copy())
        invs.append(pi.copy())
    return mats, invs


@dataclass(frozen=True)
class FlagLimit:
    forward: Flag
    backward: Flag
    steps: tuple
    regularity: RegularityReport
    tol: float

    def as_dict(self):
        return {"forward": self.forward.as_dict(), "backward": self.backward.as_dict(),
                "final_step": self.steps[-1], "tail_steps": list(self.steps[-5:]),
                "tol": self.tol,
                "note": "limit read off singular frames of the finite sequence"}


def flag_limit(seq, face, inverses=None, tol=1e-6):
    """Forward limit of type ``face`` and backward limit of the opposite type.

    Consecutive frame flags must settle: the last step is below ``tol`` and
    the steps over the final third shrink; otherwise FlagConvergenceError
    reports the step sizes.
    """
    seq = [as_matrix(g) for g in seq]
    invs = (list(inverses) if inverses is not None else [np.linalg.inv(g) for g in seq])
    rep = regularity_stats(seq, face, invs)
    if not rep.regular:
        raise SequenceNotRegularError(f"sequence is not {face}-regular on this sample")
    n = seq[0].shape[0]
    dims = _dims_of(face)
    back_dims = tuple(sorted(n - d for d in dims))
    fwd = [attracting_flag(g, dims, gi) for g, gi in zip(seq, invs)]
    bwd = [attracting_flag(gi, back_dims, g) for g, gi in zip(seq, invs)]
    steps = tuple(max(a.distance(b), c.distance(d))
                  for a, b, c, d in zip(fwd, fwd[1:], bwd, bwd[1:]))
    tail = steps[-max(2, len(steps) // 3):]
    if steps[-1] > tol or (max(tail) > tol and steps[-1] > 0.5 * max(tail)):
        raise FlagConvergenceError(
            f"frame flags do not settle: last steps {', '.join(f'{s:.3g}' for s in steps[-4:])}")
    return FlagLimit(fwd[-1], bwd[-1], steps, rep, tol)


def map_flag_iterated(g, basis, times):
    """Orthonormal basis of g^times applied to the flag(s) with the given basis.

    ``basis`` may be a stack of n x n matrices; one QR per step keeps the
    trailing levels accurate.
    """
    q = basis
    g = as_matrix(g)
    for _ in range(times):
        q, r = np.linalg.qr(g @ q)
    return q


def adapted_basis(plus, minus):
    """Vectors v_i in plus_i cap minus_{n-i+1} for a transverse pair of full flags."""
    n = plus.n
    cols = []
    for i in range(1, n + 1):
        a = plus.basis[:, :i]
        b_perp = minus.basis[:, n - i + 1:]
        if b_perp.shape[1] == 0:
            v = a[:, 0]
        else:
            v = a @ np.linalg.svd(b_perp.T @ a)[2][-1]
        cols.append(v / np.linalg.norm(v))
    return np.array(cols).T


@dataclass(frozen=True)
class ContractionReport:
    radius: float
    count: int
    power: int
    note: str = "finite mesh of test flags in the open cell opposite the repelling flag"

    def as_dict(self):
        return {"radius": self.radius, "count": self.count, "power": self.power,
                "note": self.note}


def contraction_mesh(g, power, forward, backward, grid=10, box=1.0, seed=0):
    """Map test flags M L E (L lower unitriangular) by g^power; report the largest
    flag distance of an image to ``forward``."""
    n = forward.n
    m = adapted_basis(forward.full(), backward.full())
    slots = [(i, j) for i in range(n) for j in range(i)]
    if len(slots) <= 3:
        vals = np.linspace(-box, box, grid)
        points = np.array(list(itertools.product(vals, repeat=len(slots))))
    else:
        points = np.random.default_rng(seed).uniform(-box, box, (grid ** 3, len(slots)))
    ls = np.repeat(np.eye(n)[None], len(points), axis=0)
    for k, (i, j) in enumerate(slots):
        ls[:, i, j] = points[:, k]
    bases = np.linalg.qr(m[None] @ ls)[0]
    images = map_flag_iterated(g, bases, power)
    radius = max(Flag(_orthonormalize(q), forward.dims).distance(forward) for q in images)
    return ContractionReport(float(radius), len(points), power)


# ---------------------------------------------------------------- limit sets

@dataclass(frozen=True)
class LimitSetSample:
    flags: tuple
    weights: tuple
    radius: int
    face: FaceType
    transversality: tuple
    ball_size: int
    sphere_size: int
    used: int
    merge_tol: float = MERGE_TOL

    def as_dict(self):
        return {"face": str(self.face), "radius": self.radius,
                "flags": [f.as_dict(9) for f in self.flags], "weights": list(self.weights),
                "transversality": [list(r) for r in self.transversality],
                "ball_size": self.ball_size, "sphere_size": self.sphere_size,
                "elements_used": self.used, "merge_tol": self.merge_tol}


def _matrix_key(m):
    s = np.abs(m).max()
    return (round(math.log(s), 8), np.round(m / s, 9).tobytes())


def word_ball(generators, radius):
    """Breadth-first word ball over generators and inverses.

    Returns (matrix, inverse, word length) triples, deduplicated by rounded
    matrix entries.
    """
    gens = [normalize_det(g) for g in generators]
    pairs = []
    for g in gens:
        gi = np.linalg.inv(g)
        pairs.extend([(g, gi), (gi, g)])
    n = gens[0].shape[0]
    ident = np.eye(n)
    seen = {_matrix_key(ident)}
    out = [(ident, ident, 0)]
    frontier = [(ident, ident)]
    for length in range(1, radius + 1):
        nxt = []
        for m, mi in frontier:
            for g, gi in pairs:
                h, hi = m @ g, gi @ mi
                key = _matrix_key(h)
                if key not in seen:
                    seen.add(key)
                    nxt.append((h, hi))
                    out.append((h, hi, length))
        frontier = nxt
    return out


def _merge(flags, tol):
    reps, weights = [], []
    for f in flags:
        for k, r in enumerate(reps):
            if f.distance(r) < tol:
                weights[k] += 1
                break
        else:
            reps.append(f)
            weights.append(1)
    order = sorted(range(len(reps)), key=lambda k: reps[k].sort_key())
    return tuple(reps[k] for k in order), tuple(weights[k] for k in order)


def limit_set_sample(generators, radius, face, gap=0.05, merge_tol=MERGE_TOL, threads=1):
    """Approximate flag limit set of type ``face`` from the word sphere of ``radius``.

    Sphere elements whose Cartan projection has relative gap
    alpha_i(delta)/|delta| >= ``gap`` for every i in the face contribute the
    attracting flag of their singular frame; flags closer than ``merge_tol``
    are merged.
    """
    if radius < 1:
        raise SymSpaceError("word radius must be at least 1")
    ball = word_ball(generators, radius)
    sphere = [(m, mi) for m, mi, k in ball if k == radius]
    dims = _dims_of(face)
    idx = sorted(face.I)

    def extract(pair):
        m, mi = pair
        d = cartan_projection(m, inverse=mi)
        if d.norm == 0 or np.min(d.alpha[idx]) < gap * d.norm:
            return None
        return attracting_flag(m, dims, mi)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            found = list(ex.map(extract, sphere))
    else:
        found = [extract(p) for p in sphere]
    flags = [f for f in found if f is not None]
    if not flags:
        warnings.warn(f"no element of the radius-{radius} word sphere passes the "
                      f"regularity gap {gap}; enlarge the radius", SamplingWarning, stacklevel=2)
    reps, weights = _merge(flags, merge_tol)
    trans = tuple(tuple(bool(transverse(a, b)) if a is not b else False for b in reps)
                  for a in reps)
    return LimitSetSample(reps, weights, radius, face, trans, len(ball), len(sphere),
                          len(flags), merge_tol)


# ---------------------------------------------------------------- the Z^2 example in SL(3)

PSL3_GENERATORS = (np.diag([2.0, 1.0, 0.5]), np.diag([1.0, 3.0, 1.0 / 3.0]))
POINT = FaceType(frozenset({0}), 2)
LINE = FaceType(frozenset({1}), 2)
CHAMBER = FaceType.chamber(2)


@dataclass(frozen=True)
class Psl3LimitData:
    points: LimitSetSample
    lines: LimitSetSample
    flags: LimitSetSample

    def by_type(self):
        return ((POINT, self.points), (LINE, self.lines), (CHAMBER, self.flags))


def psl3_limit_data(generators=PSL3_GENERATORS, radius=8, threads=1):
    return Psl3LimitData(limit_set_sample(generators, radius, POINT, threads=threads),
                         limit_set_sample(generators, radius, LINE, threads=threads),
                         limit_set_sample(generators, radius, CHAMBER, threads=threads))


@dataclass(frozen=True)
class Psl3Thickenings:
    """Per-type thickenings: the balanced one on chambers, the two chambers at a
    point, and its complement for lines."""

    chamber: object
    point: object
    line: object

    def for_face(self, face):
        return {CHAMBER: self.chamber, POINT: self.point, LINE: self.line}[face]


def psl3_thickenings():
    from .thickening import Thickening, complement, enumerate_balanced
    _, W = type_a(3)
    balanced = enumerate_balanced(W, CHAMBER)
    if len(balanced) != 1:
        raise SymSpaceError("expected a unique balanced thickening in A2")
    point = Thickening(W, W.coset(POINT, W.identity))
    return Psl3Thickenings(balanced[0], point, complement(point))


def psl3_flag(p, l_normal=None, second=None):
    """Full flag (p, l) in R^3 from a point p and either the line's normal or a second vector."""
    p = np.asarray(p, dtype=float)
    if second is None:
        if l_normal is None:
            raise SymSpaceError("need a line normal or a second vector")
        nrm = np.asarray(l_normal, dtype=float)
        if abs(nrm @ p) > 1e-12 * np.linalg.norm(nrm) * np.linalg.norm(p):
            raise SymSpaceError("point does not lie on the line")
        second = np.cross(nrm, p)
    return Flag.from_vectors(np.column_stack([p, second]), (1, 2))


def psl3_domain_membership(flag, data, th):
    """'removed' iff pos(flag, tau) lies in the type's thickening for some limit simplex tau."""
    for face, sample in data.by_type():
        t = th.for_face(face)
        for tau in sample.flags:
            if relative_position_flags(flag, tau).rep in t:
                return "removed"
    return "in-domain"


def psl3_incidence_membership(flag, data):
    """'removed' iff the point of the flag lies on one of the limit lines (to tolerance)."""
    p = flag.level(1)[:, 0]
    hit = False
    for line in data.lines.flags:
        s = abs(float(line.basis[:, 2] @ p))
        if ZERO_TOL <= s <= AMBIGUITY_TOL:
            raise RankAmbiguityError(f"point is within {s:.3g} of a limit line", 1, 2, s)
        hit = hit or s < ZERO_TOL
    return "removed" if hit else "in-domain"


def random_psl3_flags(count, rng, data):
    """Test flags: generic ones mixed with points on limit lines, limit points and limit lines."""
    pts = [f.level(1)[:, 0] for f in data.points.flags]
    lines = [f.basis[:, 2] for f in data.lines.flags]
    out = []
    for k in range(count):
        kind = k % 4
        if kind == 0:
            out.append(Flag.from_vectors(rng.standard_normal((3, 2)), (1, 2)))
            continue
        nrm = lines[rng.integers(3)]
        if kind == 1:
            v = rng.standard_normal(3)
            p = v - (v @ nrm) * nrm
            out.append(psl3_flag(p, second=rng.standard_normal(3)))
        elif kind == 2:
            out.append(psl3_flag(pts[rng.integers(3)], second=rng.standard_normal(3)))
        else:
            v = rng.standard_normal(3)
            p = v - (v @ nrm) * nrm
            out.append(psl3_flag(p, l_normal=nrm))
    return out
