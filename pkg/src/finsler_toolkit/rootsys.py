"""Root systems of the classical families in their standard epsilon-basis realization.

Vectors live in an ambient coordinate space R^m.  For type A_n the ambient
space is R^(n+1) and V is its sum-zero hyperplane; for B, C, D the ambient
space is V itself.  Products concatenate coordinate blocks.  Linear
functionals on V are identified with vectors of V through the standard inner
product, so every root, coroot and functional is a rational ambient vector.
"""
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import _exact as ex
from .errors import IrregularFunctionalError, RootSystemError

FAMILIES = ("A", "B", "C", "D")
_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3}


def _unit(m, i, c=1):
    v = [0] * m
    v[i] = c
    return v


def _simple_roots(family, n):
    """Integer simple roots of an irreducible system in its own coordinates."""
    if family == "A":
        m = n + 1
        return m, [[1 if k == i else -1 if k == i + 1 else 0 for k in range(m)]
                   for i in range(n)]
    m = n
    chain = [[1 if k == i else -1 if k == i + 1 else 0 for k in range(m)]
             for i in range(n - 1)]
    if family == "B":
        last = _unit(m, n - 1)
    elif family == "C":
        last = _unit(m, n - 1, 2)
    else:
        last = [0] * m
        last[n - 2] = 1
        last[n - 1] = 1
    return m, chain + [last]


def parse_type(tag):
    """Parse a tag such as ``"A2"``, ``"B3"`` or ``"A1xA1"`` into components."""
    parts = re.split(r"[x×*]", tag.strip())
    comps = []
    for p in parts:
        mt = re.fullmatch(r"\s*([A-Da-d])\s*(\d+)\s*", p)
        if not mt:
            raise RootSystemError(f"cannot parse root system tag {tag!r}")
        comps.append((mt.group(1).upper(), int(mt.group(2))))
    return tuple(comps)


@dataclass(frozen=True, eq=False)
class RootSystem:
    """A (possibly reducible) crystallographic root system.

    Attributes
    ----------
    components : tuple of (family, rank)
    simple_roots : tuple of rational ambient vectors alpha_1..alpha_n
    roots : all roots, sorted
    positive_roots : roots that are nonnegative combinations of simple roots
    """

    components: tuple
    ambient_dim: int
    simple_roots: tuple
    roots: tuple = field(repr=False)
    positive_roots: tuple = field(repr=False)

    @property
    def rank(self):
        return len(self.simple_roots)

    @property
    def tag(self):
        return "x".join(f"{f}{n}" for f, n in self.components)

    def __repr__(self):
        return f"RootSystem({self.tag})"

    @cached_property
    def coroots(self):
        """Simple coroots alpha_i^vee = 2 alpha_i / (alpha_i, alpha_i)."""
        return tuple(coroot(a) for a in self.simple_roots)

    @cached_property
    def gram(self):
        return tuple(tuple(ex.dot(a, b) for b in self.simple_roots)
                     for a in self.simple_roots)

    @cached_property
    def cartan_matrix(self):
        """Integer matrix with entry [i][j] = <alpha_j, alpha_i^vee>.

        Off-diagonal entries in row i are -2 or -3 when alpha_i is the long
        root of a multiple bond, e.g. B2 gives [[2, -1], [-2, 2]].
        """
        return tuple(tuple(int(ex.dot(aj, ci)) for aj in self.simple_roots)
                     for ci in self.coroots)

    @cached_property
    def fundamental_coweights(self):
        """Vectors varpi_i in V with alpha_j(varpi_i) = delta_ij (vertices of sigma_mod)."""
        ginv = ex.inverse(self.gram)
        out = []
        for i in range(self.rank):
            coeffs = [ginv[k][i] for k in range(self.rank)]
            v = tuple(Fraction(0) for _ in range(self.ambient_dim))
            for c, a in zip(coeffs, self.simple_roots):
                v = ex.add(v, ex.scale(c, a))
            out.append(v)
        return tuple(out)

    @cached_property
    def simple_reflection_matrices(self):
        """Integer matrices of s_1..s_n acting on ambient coordinates."""
        return tuple(reflection_matrix(a) for a in self.simple_roots)

    @cached_property
    def basis_float(self):
        """Orthonormal basis of V (rows) in ambient coordinates, float."""
        a = np.array([[float(x) for x in r] for r in self.simple_roots])
        q, _ = np.linalg.qr(a.T)
        return q.T

    def simple_coefficients(self, v):
        """Coefficients c with v = sum c_i alpha_i (v must lie in V)."""
        v = ex.frac_vec(v)
        rhs = [ex.dot(a, v) for a in self.simple_roots]
        c = ex.solve(self.gram, rhs)
        back = tuple(Fraction(0) for _ in range(self.ambient_dim))
        for ci, a in zip(c, self.simple_roots):
            back = ex.add(back, ex.scale(ci, a))
        if back != v:
            raise RootSystemError(f"vector {v} does not lie in V")
        return c

    def in_space(self, v):
        try:
            self.simple_coefficients(v)
        except RootSystemError:
            return False
        return True

    def alpha(self, x):
        """Simple-root values (alpha_1(x), ..., alpha_n(x)); exact or float."""
        if isinstance(x, np.ndarray):
            return self.simple_roots_float @ x
        return tuple(ex.dot(a, x) for a in self.simple_roots)

    @cached_property
    def simple_roots_float(self):
        return np.array([[float(c) for c in a] for a in self.simple_roots])

    @cached_property
    def positive_roots_float(self):
        return np.array([[float(c) for c in a] for a in self.positive_roots])

    def in_chamber(self, x, tol=0.0):
        return all(float(v) >= -tol for v in self.alpha(x))

    def longest_root_length_sq(self):
        return max(ex.dot(r, r) for r in self.roots)


def coroot(a):
    a = ex.frac_vec(a)
    return ex.scale(Fraction(2) / ex.dot(a, a), a)


def reflection_matrix(a):
    """Matrix of s_a(x) = x - <a, x> a^vee; integer for all classical roots."""
    a = ex.frac_vec(a)
    c = coroot(a)
    m = len(a)
    mat = [[Fraction(int(i == j)) - c[i] * a[j] for j in range(m)] for i in range(m)]
    if any(x.denominator != 1 for row in mat for x in row):
        raise RootSystemError("reflection matrix is not integral")
    out = np.array([[int(x) for x in row] for row in mat], dtype=np.int64)
    out.setflags(write=False)
    return out


def reflect(rs_or_root, x, i=None):
    """Reflect ``x`` in a root: ``reflect(rs, x, i)`` uses the simple root alpha_i
    (0-based); ``reflect(root, x)`` uses an explicit root vector.

    Works on exact tuples and on float arrays.
    """
    if isinstance(rs_or_root, RootSystem):
        if i is None:
            raise RootSystemError("simple root index required")
        a = rs_or_root.simple_roots[i]
    else:
        a = ex.frac_vec(rs_or_root)
    if len(x) != len(a):
        raise RootSystemError(f"dimension mismatch: vector of length {len(x)}, "
                              f"ambient dimension {len(a)}")
    c = coroot(a)
    if isinstance(x, np.ndarray):
        af = np.array([float(t) for t in a])
        cf = np.array([float(t) for t in c])
        return x - float(af @ x) * cf
    x = ex.frac_vec(x)
    return ex.sub(x, ex.scale(ex.dot(a, x), c))


def _orbit_roots(simple, mats):
    seen = {tuple(ex.frac_vec(a)) for a in simple}
    frontier = list(seen)
    while frontier:
        nxt = []
        for r in frontier:
            for m in mats:
                img = ex.matvec(m, r)
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return seen


def build_root_system(family, rank=None):
    """Build a root system from a family tag and rank, or from a full tag.

    ``build_root_system("A", 2)``, ``build_root_system("B3")`` and
    ``build_root_system("A1xA1")`` are all accepted.
    """
    if rank is None:
        comps = parse_type(family)
    else:
        comps = ((str(family).upper(), int(rank)),)
    blocks = []
    for fam, n in comps:
        if fam not in FAMILIES:
            raise RootSystemError(f"unknown family {fam!r}")
        if n < _MIN_RANK[fam]:
            raise RootSystemError(f"{fam}{n}: family {fam} requires rank >= {_MIN_RANK[fam]}")
        blocks.append(_simple_roots(fam, n))
    m_total = sum(m for m, _ in blocks)
    simple = []
    offset = 0
    for m, roots in blocks:
        for r in roots:
            v = [0] * m_total
            v[offset:offset + m] = r
            simple.append(tuple(Fraction(x) for x in v))
        offset += m
    mats = [reflection_matrix(a) for a in simple]
    roots = _orbit_roots(simple, mats)
    roots |= {ex.scale(Fraction(-1), r) for r in roots}
    rs = RootSystem(components=tuple(comps), ambient_dim=m_total,
                    simple_roots=tuple(simple), roots=(), positive_roots=())
    positive = []
    for r in roots:
        c = rs.simple_coefficients(r)
        if all(x >= 0 for x in c):
            positive.append(r)
        elif not all(x <= 0 for x in c):
            raise RootSystemError(f"root {r} has mixed-sign simple coefficients")
    object.__setattr__(rs, "roots", tuple(sorted(roots)))
    object.__setattr__(rs, "positive_roots", tuple(sorted(positive)))
    return rs


@dataclass(frozen=True, eq=False)
class FinslerFunctional:
    """A linear functional l on V, stored as the vector representing it."""

    rs: RootSystem
    vector: tuple

    def __post_init__(self):
        v = ex.frac_vec(self.vector)
        if len(v) != self.rs.ambient_dim:
            raise RootSystemError("functional has wrong ambient dimension")
        if not self.rs.in_space(v):
            raise RootSystemError("functional vector must lie in V")
        object.__setattr__(self, "vector", v)

    @classmethod
    def from_coweights(cls, rs, coeffs):
        """l = sum_i c_i varpi_i, so that (alpha_i, l) = c_i."""
        coeffs = ex.frac_vec(coeffs)
        if len(coeffs) != rs.rank:
            raise RootSystemError(f"need {rs.rank} coefficients, got {len(coeffs)}")
        v = tuple(Fraction(0) for _ in range(rs.ambient_dim))
        for c, w in zip(coeffs, rs.fundamental_coweights):
            v = ex.add(v, ex.scale(c, w))
        return cls(rs, v)

    @classmethod
    def default(cls, rs):
        return cls.from_coweights(rs, [1] * rs.rank)

    @property
    def root_values(self):
        """(alpha_i, l) for each simple root."""
        return self.rs.alpha(self.vector)

    @property
    def regular(self):
        return all(v > 0 for v in self.root_values)

    @property
    def face_indices(self):
        """Indices i (0-based) with (alpha_i, l) > 0: the face type spanned by theta-bar."""
        return frozenset(i for i, v in enumerate(self.root_values) if v > 0)

    @property
    def as_float(self):
        return np.array([float(x) for x in self.vector])

    @property
    def direction(self):
        """Unit vector theta-bar along l."""
        v = self.as_float
        return v / np.linalg.norm(v)

    def __call__(self, x):
        if isinstance(x, np.ndarray):
            return float(self.as_float @ x)
        return ex.dot(self.vector, x)

    def scaled(self, c):
        return FinslerFunctional(self.rs, ex.scale(Fraction(c), self.vector))


def fundamental_vertices(l):
    """Vertices omega_1..omega_n of Delta_B: alpha_j(omega_i) = 0 (j != i), l(omega_i) = 1."""
    if not l.regular:
        raise IrregularFunctionalError(
            "l is not regular; some vertices of Delta_B lie at infinity")
    out = []
    for w in l.rs.fundamental_coweights:
        out.append(ex.scale(1 / l(w), w))
    return tuple(out)
