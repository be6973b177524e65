"""Weyl group enumeration, Bruhat (folding) order and coset folding order.

Elements are identified by their integer action matrices on ambient
coordinates.  Generator indices are 0-based internally; serialized words use
``s1 s2 ...`` (1-based).
"""
import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _exact as ex
from .errors import BudgetExceededError, WeylError


@dataclass(frozen=True, eq=False)
class WeylElement:
    """An element of an enumerated Weyl group.

    ``word`` is the lexicographically minimal reduced word (0-based letters).
    """

    group: "WeylGroup"
    index: int
    word: tuple
    matrix: np.ndarray

    @property
    def length(self):
        return len(self.word)

    def __eq__(self, other):
        return (isinstance(other, WeylElement) and other.group is self.group
                and other.index == self.index)

    def __hash__(self):
        return hash((id(self.group), self.index))

    def __lt__(self, other):
        return (self.length, self.word) < (other.length, other.word)

    def __mul__(self, other):
        return self.group.mul(self, other)

    def inverse(self):
        return self.group.inverse(self)

    def __str__(self):
        return format_word(self.word)

    def __repr__(self):
        return f"WeylElement({format_word(self.word)})"

    def act(self, x):
        """Apply to an exact tuple or a float array of ambient coordinates."""
        if isinstance(x, np.ndarray):
            return self.matrix @ x
        return ex.matvec(self.matrix, x)


def format_word(word):
    return " ".join(f"s{i + 1}" for i in word) if word else "e"


def parse_word(text):
    """Parse ``"s1 s2 s1"``, ``"s1s2"``, ``"1 2 1"`` or ``"e"`` into 0-based letters."""
    text = text.strip()
    if text in ("", "e"):
        return ()
    toks = re.findall(r"s?(\d+)", text)
    if not toks:
        raise WeylError(f"cannot parse word {text!r}")
    return tuple(int(t) - 1 for t in toks)


@dataclass(frozen=True)
class FaceType:
    """Face tau_I of sigma_mod spanned by the vertices with (0-based) indices I."""

    I: frozenset
    rank: int

    def __post_init__(self):
        object.__setattr__(self, "I", frozenset(self.I))
        if not self.I <= frozenset(range(self.rank)):
            raise WeylError(f"face indices {sorted(self.I)} out of range for rank {self.rank}")

    @classmethod
    def chamber(cls, rank):
        return cls(frozenset(range(rank)), rank)

    @classmethod
    def parse(cls, text, rank):
        """Parse a 1-based index list such as ``"1,2"`` or ``"{1}"``; ``"all"`` is the chamber."""
        text = text.strip().strip("{}[]()")
        if text in ("all", "sigma", "chamber"):
            return cls.chamber(rank)
        if not text:
            return cls(frozenset(), rank)
        return cls(frozenset(int(t) - 1 for t in text.replace(" ", ",").split(",") if t), rank)

    @property
    def J(self):
        return frozenset(range(self.rank)) - self.I

    @property
    def is_chamber(self):
        return len(self.I) == self.rank

    def __str__(self):
        return "{" + ",".join(str(i + 1) for i in sorted(self.I)) + "}"


@dataclass(frozen=True)
class RelativePosition:
    """Coset W_J w (J the complement of the face type), stored via its minimal representative."""

    face: FaceType
    rep: WeylElement

    def __str__(self):
        return "[" + ",".join(str(j + 1) for j in sorted(self.face.J)) + "]:" + str(self.rep)

    @property
    def members(self):
        return self.rep.group.coset(self.face, self.rep)


class WeylGroup:
    """The Weyl group of a root system, fully enumerated.

    Parameters
    ----------
    rs : RootSystem
    budget : int
        Maximal number of elements to enumerate.
    """

    def __init__(self, rs, budget=10**5):
        self.rs = rs
        self.rank = rs.rank
        gens = rs.simple_reflection_matrices
        ident = np.eye(rs.ambient_dim, dtype=np.int64)
        ident.setflags(write=False)
        self.elements = []
        self._index = {}
        self._add((), ident)
        level = [0]
        # BFS by length; extending lex-sorted words by increasing letters
        # finds each element first through its lex-minimal reduced word.
        while level:
            nxt = []
            for idx in level:
                w = self.elements[idx]
                for i, g in enumerate(gens):
                    m = w.matrix @ g
                    key = m.tobytes()
                    if key not in self._index:
                        if len(self.elements) >= budget:
                            raise BudgetExceededError(
                                f"|W| exceeds enumeration budget {budget}")
                        m.setflags(write=False)
                        nxt.append(self._add(w.word + (i,), m))
            level = nxt
        n = len(self.elements)
        self._rmul = np.full((n, self.rank), -1, dtype=np.int64)
        self._lmul = np.full((n, self.rank), -1, dtype=np.int64)
        for w in self.elements:
            for i, g in enumerate(gens):
                self._rmul[w.index, i] = self._index[(w.matrix @ g).tobytes()]
                self._lmul[w.index, i] = self._index[(g @ w.matrix).tobytes()]
        self._bruhat_cache = {}

    def _add(self, word, matrix):
        idx = len(self.elements)
        self.elements.append(WeylElement(self, idx, word, matrix))
        self._index[matrix.tobytes()] = idx
        return idx

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __repr__(self):
        return f"WeylGroup({self.rs.tag}, order={len(self)})"

    @property
    def order(self):
        return len(self.elements)

    @property
    def identity(self):
        return self.elements[0]

    def from_matrix(self, m):
        m = np.asarray(np.rint(m), dtype=np.int64)
        try:
            return self.elements[self._index[m.tobytes()]]
        except KeyError:
            raise WeylError("matrix is not an element of this Weyl group") from None

    def element(self, word):
        """Element from a word (string or sequence of 0-based letters); need not be reduced."""
        if isinstance(word, str):
            word = parse_word(word)
        idx = 0
        for i in word:
            if not 0 <= i < self.rank:
                raise WeylError(f"generator s{i + 1} out of range")
            idx = int(self._rmul[idx, i])
        return self.elements[idx]

    def generator(self, i):
        return self.elements[int(self._rmul[0, i])]

    def mul(self, a, b):
        return self.elements[self._index[(a.matrix @ b.matrix).tobytes()]]

    def inverse(self, a):
        return self.elements[self._index[np.ascontiguousarray(a.matrix.T).tobytes()]]

    def rmul_gen(self, w, i):
        return self.elements[int(self._rmul[w.index, i])]

    def lmul_gen(self, i, w):
        return self.elements[int(self._lmul[w.index, i])]

    def inversion_count(self, w):
        """Number of positive roots sent to negative roots by w."""
        pos = set(self.rs.positive_roots)
        return sum(1 for r in pos if ex.matvec(w.matrix, r) not in pos)

    @cached_property
    def w0(self):
        return max(self.elements, key=lambda w: w.length)

    @cached_property
    def iota(self):
        """The opposition involution as a permutation of simple-root indices.

        ``iota[i] = k`` when w0 alpha_i = -alpha_k.
        """
        perm = []
        simple = list(self.rs.simple_roots)
        for a in simple:
            img = ex.scale(-1, ex.matvec(self.w0.matrix, a))
            perm.append(simple.index(img))
        return tuple(perm)

    def iota_face(self, face):
        return FaceType(frozenset(self.iota[i] for i in face.I), face.rank)

    def is_iota_invariant(self, face):
        return self.iota_face(face) == face

    def face_types(self, include_empty=False):
        from itertools import combinations
        out = []
        for k in range(0 if include_empty else 1, self.rank + 1):
            for I in combinations(range(self.rank), k):
                out.append(FaceType(frozenset(I), self.rank))
        return out

    def parabolic(self, J):
        """Elements of W_J = <s_j : j in J> (support of any reduced word lies in J)."""
        J = frozenset(J)
        return [w for w in self.elements if set(w.word) <= J]

    def coset(self, face, w):
        """The left coset W_J w as a frozenset of elements."""
        return frozenset(self.mul(u, w) for u in self.parabolic(face.J))

    def min_coset_rep(self, face, w):
        return min(self.coset(face, w))

    def position(self, face, w):
        return RelativePosition(face, self.min_coset_rep(face, w))

    def cosets(self, face):
        """All cosets W_J\\W as RelativePositions, sorted by representative."""
        reps = {self.min_coset_rep(face, w) for w in self.elements}
        return [RelativePosition(face, r) for r in sorted(reps)]

    def bruhat_leq(self, u, w):
        """Strong Bruhat order u <= w, decided by descent recursion.

        Uses the lifting property: if ws < w then u <= w iff
        min(u, us) <= ws.
        """
        if u.group is not self or w.group is not self:
            raise WeylError("elements belong to different groups")
        return self._bruhat(u.index, w.index)

    def _bruhat(self, ui, wi):
        key = (ui, wi)
        hit = self._bruhat_cache.get(key)
        if hit is not None:
            return hit
        u, w = self.elements[ui], self.elements[wi]
        if ui == wi:
            res = True
        elif u.length >= w.length:
            res = False
        else:
            s = w.word[-1]
            ws = int(self._rmul[wi, s])
            us = int(self._rmul[ui, s])
            if self.elements[us].length < u.length:
                res = self._bruhat(us, ws)
            else:
                res = self._bruhat(ui, ws)
        self._bruhat_cache[key] = res
        return res

    def coset_folding_leq(self, c1, c2):
        """W_J w1 <=_tau W_J w2: some representatives are Bruhat-comparable."""
        if c1.face != c2.face:
            raise WeylError("positions relative to different face types")
        m2 = sorted(c2.members)
        for a in sorted(c1.members):
            for b in m2:
                if self.bruhat_leq(a, b):
                    return True
        return False

    def complementary_position(self, c):
        """c-pos := w0 pos, a coset of W_{iota tau}."""
        face = self.iota_face(c.face)
        return self.position(face, self.mul(self.w0, c.rep))


def enumerate_weyl(rs, budget=10**5):
    return WeylGroup(rs, budget=budget)

