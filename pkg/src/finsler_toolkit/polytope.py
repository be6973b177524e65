"""The W-invariant unit ball B, its dual B*, face lattices, and the cube
certificate for the truncated dual chamber Delta* cap B*.

All arithmetic is exact (``fractions.Fraction``).  Functionals on V are
identified with vectors of V through the inner product.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from . import _exact as ex
from .errors import PolytopeError
from .rootsys import fundamental_vertices
from .weyl import WeylGroup


@dataclass
class FaceLattice:
    """Faces as frozensets of vertex indices, graded by dimension.

    Includes the empty face (dimension -1) and the polytope itself.
    """

    faces: list
    dims: list
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        self._index = {f: k for k, f in enumerate(self.faces)}

    def index(self, face):
        return self._index[frozenset(face)]

    def f_vector(self):
        top = max(self.dims)
        return tuple(sum(1 for d in self.dims if d == k) for k in range(top + 1))

    def covers(self):
        """Pairs (a, b) of face indices with face a a facet of face b."""
        out = []
        for a, fa in enumerate(self.faces):
            for b, fb in enumerate(self.faces):
                if self.dims[b] == self.dims[a] + 1 and fa < fb:
                    out.append((a, b))
        return out

    def leq(self, a, b):
        return self.faces[a] <= self.faces[b]

    def euler_characteristic(self):
        return sum((-1) ** d for d in self.dims if d >= 0)


@dataclass
class Polytope:
    """H-representation {x in V : <a_k, x> <= b_k} with V-representation and incidences."""

    rs: object
    inequalities: list
    vertices: list
    incidence: list
    facet_labels: list = None

    def contains(self, x):
        return all(ex.dot(a, x) <= b for a, b in self.inequalities)

    def tight(self, x):
        return frozenset(k for k, (a, b) in enumerate(self.inequalities) if ex.dot(a, x) == b)

    @property
    def dimension(self):
        return ex.affine_rank(self.vertices)

    def face_lattice(self):
        """Closure of the facet vertex sets under intersection, plus the empty face and the polytope."""
        top = frozenset(range(len(self.vertices)))
        faces = {top}
        frontier = {frozenset(f) for f in self.incidence}
        faces |= frontier
        facets = [frozenset(f) for f in self.incidence]
        while frontier:
            nxt = set()
            for f in frontier:
                for g in facets:
                    h = f & g
                    if h and h not in faces:
                        nxt.add(h)
            faces |= nxt
            frontier = nxt
        faces = sorted(faces, key=lambda f: (len(f), sorted(f)))
        dims = [ex.affine_rank([self.vertices[i] for i in f]) for f in faces]
        order = sorted(range(len(faces)), key=lambda k: (dims[k], sorted(faces[k])))
        faces = [frozenset()] + [faces[k] for k in order]
        dims = [-1] + [dims[k] for k in order]
        return FaceLattice(faces, dims)

    def vertices_from_hrep(self):
        """Recompute vertices by intersecting n-subsets of the facet hyperplanes."""
        rs = self.rs
        n = rs.rank
        found = set()
        for sub in combinations(range(len(self.inequalities)), n):
            x = _solve_in_space(rs, [self.inequalities[k] for k in sub])
            if x is not None and self.contains(x):
                found.add(x)
        return found

    def to_dict(self):
        fmt = lambda v: [str(c) for c in v]  # noqa: E731
        return {"inequalities": [{"a": fmt(a), "b": str(b)} for a, b in self.inequalities],
                "vertices": [fmt(v) for v in self.vertices],
                "incidence": [sorted(f) for f in self.incidence],
                "facet_labels": self.facet_labels}


def _solve_in_space(rs, equations):
    """Solve <a_k, x> = b_k for x in V, expressed through the simple-root basis."""
    rows = [[ex.dot(a, alpha) for alpha in rs.simple_roots] for a, _ in equations]
    c = ex.solve(rows, [b for _, b in equations])
    if c is None:
        return None
    x = tuple(Fraction(0) for _ in range(rs.ambient_dim))
    for ci, alpha in zip(c, rs.simple_roots):
        x = ex.add(x, ex.scale(ci, alpha))
    return x


def build_unit_ball(rs, l, W=None):
    """B = intersection over w of {l_w <= 1}, with l_w = l o w^-1 (the vector w l).

    Vertices are the W-orbits of the fundamental vertices omega_i; the facet
    of w has vertex set {w omega_1, ..., w omega_n}.
    """
    omegas = fundamental_vertices(l)
    W = W or WeylGroup(rs)
    vert_index = {}
    vertices = []
    for w in W.elements:
        for om in omegas:
            v = w.act(om)
            if v not in vert_index:
                vert_index[v] = len(vertices)
                vertices.append(v)
    inequalities = []
    incidence = []
    labels = []
    for w in W.elements:
        lw = w.act(l.vector)
        inequalities.append((lw, Fraction(1)))
        incidence.append(frozenset(vert_index[w.act(om)] for om in omegas))
        labels.append(str(w))
    B = Polytope(rs, inequalities, vertices, incidence, labels)
    for k, (a, b) in enumerate(inequalities):
        tight = frozenset(i for i, v in enumerate(vertices) if ex.dot(a, v) == b)
        if tight != incidence[k] or any(ex.dot(a, v) > b for v in vertices):
            raise PolytopeError(f"facet {labels[k]} is inconsistent with the vertex set")
    return B


@dataclass
class DualBall:
    polytope: Polytope
    primal: Polytope
    primal_lattice: FaceLattice
    lattice: FaceLattice
    star: dict


def dual_ball(B):
    """B* = {lambda : lambda(x) <= 1 for x in B} with the duality map on faces."""
    rs = B.rs
    if B.dimension != rs.rank:
        raise PolytopeError("B is not full-dimensional")
    if any(b <= 0 for _, b in B.inequalities):
        raise PolytopeError("origin is not interior to B")
    verts = []
    seen = {}
    for a, b in B.inequalities:
        v = ex.scale(1 / b, a)
        if v in seen:
            raise PolytopeError("facet functionals are not distinct")
        seen[v] = len(verts)
        verts.append(v)
    ineq = [(v, Fraction(1)) for v in B.vertices]
    incidence = [frozenset(k for k, lam in enumerate(verts) if ex.dot(lam, v) == 1)
                 for v in B.vertices]
    D = Polytope(rs, ineq, verts, incidence, [f"v{i}" for i in range(len(B.vertices))])
    primal_lat = B.face_lattice()
    lat = D.face_lattice()
    star = {}
    for k, face in enumerate(primal_lat.faces):
        if face:
            dual = frozenset(m for m, lam in enumerate(verts)
                             if all(ex.dot(lam, B.vertices[i]) == 1 for i in face))
        else:
            dual = frozenset(range(len(verts)))
        star[k] = lat.index(dual)
    return DualBall(D, B, primal_lat, lat, star)


@dataclass
class CubeReport:
    rank: int
    f_vector: tuple
    expected_f_vector: tuple
    clauses: dict
    counterexamples: list
    labels: dict

    @property
    def passed(self):
        return all(self.clauses.values())

    def as_dict(self):
        return {"rank": self.rank, "f_vector": list(self.f_vector),
                "expected_f_vector": list(self.expected_f_vector),
                "clauses": dict(self.clauses), "passed": self.passed,
                "counterexamples": self.counterexamples}


def truncated_dual_chamber(rs, l):
    """Delta*_{B*}: (alpha_i, .) >= 0 (interior facets F_i) and <., omega_i> <= 1 (exterior E_i)."""
    omegas = fundamental_vertices(l)
    ineq = []
    labels = []
    for i, om in enumerate(omegas):
        ineq.append((om, Fraction(1)))
        labels.append(("E", i))
    for j, a in enumerate(rs.simple_roots):
        ineq.append((ex.scale(Fraction(-1), a), Fraction(0)))
        labels.append(("F", j))
    n = rs.rank
    verts = set()
    for sub in combinations(range(2 * n), n):
        x = _solve_in_space(rs, [ineq[k] for k in sub])
        if x is not None and all(ex.dot(a, x) <= b for a, b in ineq):
            verts.add(x)
    verts = sorted(verts)
    incidence = [frozenset(i for i, v in enumerate(verts) if ex.dot(a, v) == b)
                 for a, b in ineq]
    return Polytope(rs, ineq, verts, incidence, labels)


def verify_cube_structure(rs, l):
    """Certify that Delta*_{B*} is combinatorially an n-cube with E_I cap F_J labels.

    Clauses: (a) every face is some E_I cap F_J, (b) E_I cap F_J nonempty iff
    I and J are disjoint, (c) labels are unique, (d) the f-vector is the
    cube's, (e) E_I cap F_J -> {t_i = 1, i in I; t_j = 0, j in J} is a
    face-poset isomorphism onto the cube.
    """
    n = rs.rank
    P = truncated_dual_chamber(rs, l)
    E = [P.incidence[i] for i in range(n)]
    F = [P.incidence[n + j] for j in range(n)]
    allv = frozenset(range(len(P.vertices)))
    bad = []

    def face_of(I, J):
        s = allv
        for i in I:
            s &= E[i]
        for j in J:
            s &= F[j]
        return s

    subsets = [frozenset(c) for k in range(n + 1) for c in combinations(range(n), k)]
    lattice = P.face_lattice()
    faces = [f for f in lattice.faces if f]
    dims = {f: d for f, d in zip(lattice.faces, lattice.dims) if f}

    labels = {}
    clause_a = True
    for f in faces:
        I = frozenset(i for i in range(n) if f <= E[i])
        J = frozenset(j for j in range(n) if f <= F[j])
        labels[f] = (I, J)
        if face_of(I, J) != f:
            clause_a = False
            bad.append({"clause": "a", "face": sorted(f)})

    clause_b = True
    by_face = {}
    for I in subsets:
        for J in subsets:
            s = face_of(I, J)
            if bool(s) != (not (I & J)):
                clause_b = False
                bad.append({"clause": "b", "I": sorted(I), "J": sorted(J)})
            if s:
                by_face.setdefault(s, []).append((I, J))
    clause_c = all(len(v) == 1 for v in by_face.values())
    for s, v in by_face.items():
        if len(v) > 1:
            bad.append({"clause": "c", "labels": [[sorted(I), sorted(J)] for I, J in v]})

    f_vec = lattice.f_vector()
    expected = tuple(comb(n, k) * 2 ** (n - k) for k in range(n + 1))
    clause_d = f_vec == expected

    clause_e = True
    cube_faces = {(I, J) for I in subsets for J in subsets if not (I & J)}
    if set(labels.values()) != cube_faces or len(labels) != len(cube_faces):
        clause_e = False
        bad.append({"clause": "e", "reason": "label map is not a bijection onto cube faces"})
    for f in faces:
        I, J = labels[f]
        if dims[f] != n - len(I) - len(J):
            clause_e = False
            bad.append({"clause": "e", "face": sorted(f), "reason": "dimension"})
        for g in faces:
            I2, J2 = labels[g]
            if (f <= g) != (I >= I2 and J >= J2):
                clause_e = False
                bad.append({"clause": "e", "pair": [sorted(f), sorted(g)]})
    clauses = {"a_every_face_labelled": clause_a,
               "b_nonempty_iff_disjoint": clause_b,
               "c_label_uniqueness": clause_c,
               "d_f_vector": clause_d,
               "e_cube_isomorphism": clause_e}
    label_out = {f"E{_fmt(I)}F{_fmt(J)}": n - len(I) - len(J)
                 for I, J in sorted(labels.values(), key=lambda p: (sorted(p[0]), sorted(p[1])))}
    return CubeReport(n, f_vec, expected, clauses, bad[:20], label_out)


def _fmt(s):
    return "{" + ",".join(str(i + 1) for i in sorted(s)) + "}"
