"""Thickenings: Bruhat ideals of W, their classification, complements,
metric thickenings and exhaustive enumeration of balanced ones."""
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import GenericityWarning, ThickeningError
from .weyl import FaceType

ANGLE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Thickening:
    """A subset of an enumerated Weyl group together with its classification."""

    group: object
    members: frozenset
    near_boundary: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))

    def __eq__(self, other):
        return (isinstance(other, Thickening) and other.group is self.group
                and other.members == self.members)

    def __hash__(self):
        return hash(self.members)

    def __contains__(self, w):
        return w in self.members

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def words(self):
        return [str(w) for w in sorted(self.members)]

    def __str__(self):
        return "{" + ", ".join(self.words()) + "}"

    def __repr__(self):
        return f"Thickening({self})"

    @cached_property
    def w0_image(self):
        W = self.group
        return frozenset(W.mul(W.w0, w) for w in self.members)

    @cached_property
    def is_ideal(self):
        W = self.group
        for w in self.members:
            for u in W.elements:
                if u.length < w.length and u not in self.members and W.bruhat_leq(u, w):
                    return False
        return True

    @property
    def is_fat(self):
        return len(self.members | self.w0_image) == len(self.group)

    @property
    def is_slim(self):
        return not (self.members & self.w0_image)

    @property
    def is_balanced(self):
        return self.is_fat and self.is_slim

    def left_invariant(self, face):
        """W_tau-left-invariance, W_tau = <s_j : j not in the face>."""
        W = self.group
        gens = [W.generator(j) for j in face.J]
        return all(W.mul(g, w) in self.members for g in gens for w in self.members)

    def complement(self):
        return complement(self)


@dataclass(frozen=True)
class Classification:
    ideal: bool
    fat: bool
    slim: bool
    balanced: bool
    invariance: dict
    size: int

    def as_dict(self):
        return {"ideal": self.ideal, "fat": self.fat, "slim": self.slim,
                "balanced": self.balanced, "size": self.size,
                "left_invariant": dict(self.invariance)}


def thickening_from_words(W, words):
    """Build a Thickening from reduced-word strings like ``["e", "s1", "s2"]``."""
    return Thickening(W, frozenset(W.element(w) for w in words))


def validate_thickening(W, S, allow_degenerate=False):
    """Classify a subset S of W as ideal / fat / slim / balanced.

    Left-invariance is reported for every iota-invariant face type.  A
    non-ideal S is classified, not rejected.
    """
    th = S if isinstance(S, Thickening) else Thickening(W, frozenset(S))
    if not allow_degenerate and (not th.members or len(th) == len(W)):
        raise ThickeningError("degenerate subset (empty or all of W); "
                              "pass allow_degenerate=True to classify it")
    inv = {str(f): th.left_invariant(f) for f in W.face_types() if W.is_iota_invariant(f)}
    return Classification(ideal=th.is_ideal, fat=th.is_fat, slim=th.is_slim,
                          balanced=th.is_balanced, invariance=inv, size=len(th))


def complement(th):
    """Th^c := w0 (W - Th)."""
    if not th.is_ideal:
        raise ThickeningError("complement is defined for ideals only")
    W = th.group
    rest = [w for w in W.elements if w not in th.members]
    return Thickening(W, frozenset(W.mul(W.w0, w) for w in rest))


def spherical_distance(u, v):
    """Angle between two vectors, stable near 0 and pi."""
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    return 2.0 * math.atan2(np.linalg.norm(u - v), np.linalg.norm(u + v))


def face_direction(rs, face):
    """Unit vector in the interior of tau_I; iota-invariant when the face is."""
    v = np.zeros(rs.ambient_dim)
    for i in face.I:
        w = np.array([float(x) for x in rs.fundamental_coweights[i]])
        v += w / np.linalg.norm(w)
    return v / np.linalg.norm(v)


def random_chamber_direction(rs, rng):
    """Random unit vector in the interior of the chamber cone."""
    coeffs = rng.dirichlet(np.ones(rs.rank))
    v = np.zeros(rs.ambient_dim)
    for c, w in zip(coeffs, rs.fundamental_coweights):
        w = np.array([float(x) for x in w])
        v += c * w / np.linalg.norm(w)
    return v / np.linalg.norm(v)


def random_face_direction(W, face, rng):
    """Random iota-invariant unit vector in the interior of the face tau_I."""
    rs = W.rs
    coeffs = rng.dirichlet(np.ones(len(face.I)))
    v = np.zeros(rs.ambient_dim)
    for c, i in zip(coeffs, sorted(face.I)):
        w = np.array([float(x) for x in rs.fundamental_coweights[i]])
        v += c * w / np.linalg.norm(w)
    v = v - W.w0.matrix @ v
    return v / np.linalg.norm(v)


def metric_thickening(W, theta0, theta, r, tol=ANGLE_TOL):
    """Th = {w : d(w theta, theta0) <= r} for the spherical metric.

    Elements whose distance is within ``tol`` of ``r`` are recorded in
    ``near_boundary`` and trigger a GenericityWarning.
    """
    rs = W.rs
    theta0 = np.asarray(theta0, dtype=float)
    theta = np.asarray(theta, dtype=float)
    for name, v in (("theta0", theta0), ("theta", theta)):
        if abs(np.linalg.norm(v) - 1.0) > 1e-9:
            raise ThickeningError(f"{name} must be a unit vector")
        if not rs.in_chamber(v, tol=1e-12):
            raise ThickeningError(f"{name} must lie in the closed chamber")
    if not 0.0 <= r <= math.pi:
        raise ThickeningError("radius must lie in [0, pi]")
    members = []
    near = []
    for w in W.elements:
        d = spherical_distance(w.matrix @ theta, theta0)
        if abs(d - r) <= tol:
            near.append((str(w), d))
        if d <= r + tol:
            members.append(w)
    if near:
        warnings.warn(f"non-generic metric thickening: {len(near)} element(s) at "
                      f"distance within {tol:g} of r, e.g. {near[0][0]}",
                      GenericityWarning, stacklevel=2)
    return Thickening(W, frozenset(members), near_boundary=tuple(near))


def _coset_atoms(W, face):
    cosets = W.cosets(face)
    atoms = [c.members for c in cosets]
    atom_of = {}
    for k, a in enumerate(atoms):
        for w in a:
            atom_of[w] = k
    n = len(cosets)
    below = [set() for _ in range(n)]
    above = [set() for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if a != b and W.coset_folding_leq(cosets[b], cosets[a]):
                below[a].add(b)
                above[b].add(a)
    return cosets, atoms, atom_of, below, above


def _ideal_search(W, face, balanced):
    """Depth-first search over W_J-invariant ideals (unions of cosets)."""
    cosets, atoms, atom_of, below, above = _coset_atoms(W, face)
    n = len(atoms)
    pair = [atom_of[W.mul(W.w0, c.rep)] for c in cosets]
    if balanced and any(pair[k] == k for k in range(n)):
        return []
    results = []

    def assign(state, k, val):
        stack = [(k, val)]
        while stack:
            a, v = stack.pop()
            if state[a] is not None:
                if state[a] != v:
                    return False
                continue
            state[a] = v
            if v:
                stack.extend((b, True) for b in below[a])
            else:
                stack.extend((b, False) for b in above[a])
            if balanced:
                stack.append((pair[a], not v))
        return True

    def dfs(state):
        k = next((i for i in range(n) if state[i] is None), None)
        if k is None:
            results.append(frozenset(w for i in range(n) if state[i] for w in atoms[i]))
            return
        for val in (True, False):
            s = list(state)
            if assign(s, k, val):
                dfs(s)

    dfs([None] * n)
    out = [Thickening(W, m) for m in results]
    return sorted(out, key=lambda t: (len(t), t.words()))


def enumerate_ideals(W, face=None):
    """All W_tau-left-invariant ideals of (W, Bruhat), including the empty set and W."""
    face = face or FaceType.chamber(W.rank)
    return _ideal_search(W, face, balanced=False)


def enumerate_balanced(W, face=None, exhaustive_budget=48, samples=2000, seed=None):
    """All W_tau-left-invariant balanced thickenings.

    Exhaustive for |W| <= ``exhaustive_budget``.  Otherwise collects the
    distinct balanced metric thickenings found over ``samples`` random
    generic pairs (theta0 in the face, theta in the chamber); ``seed`` is
    required.  Sampling can miss balanced thickenings that are not metric.
    """
    face = face or FaceType.chamber(W.rank)
    if not W.is_iota_invariant(face):
        raise ThickeningError(f"face type {face} is not iota-invariant")
    if len(W) <= exhaustive_budget:
        return _ideal_search(W, face, balanced=True)
    if seed is None:
        raise ThickeningError("sampling mode requires an explicit seed")
    rng = np.random.default_rng(seed)
    found = set()
    for _ in range(samples):
        theta0 = random_face_direction(W, face, rng)
        theta = random_chamber_direction(W.rs, rng)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", GenericityWarning)
            th = metric_thickening(W, theta0, theta, math.pi / 2)
        if not th.near_boundary and th.is_balanced and th.left_invariant(face):
            found.add(th)
    return sorted(found, key=lambda t: (len(t), t.words()))
