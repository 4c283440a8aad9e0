"""Coxeter systems with an exact word problem.

Group elements are plain tuples of generator indices, always stored as the
ShortLex-least reduced word.  Two engines provide multiplication:

* right-angled systems use a stack ("piling") shuffle normal form, fast
  enough for large balls;
* everything else walks roots in the reflection representation
  (:mod:`coxl2.reflection`), exactly over Q(sqrt2, sqrt3, sqrt5) when all
  finite labels lie in {2,...,6} and with interval arithmetic otherwise.

The infinity label is stored as 0 in the Coxeter matrix.
"""

from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass
from math import factorial

from .errors import ConfigError, NotSphericalError, ResourceLimitError
from .exactpoly import Poly
from .reflection import ReflectionEngine

Word = tuple  # ShortLex-least reduced word, e.g. (0, 2, 1)

DEFAULT_BALL_CAP = 2_000_000
# Parabolic growth polynomials come from honest enumeration up to this order;
# larger recognised types (F4, H4, E6..E8, big B/D) use the classical degree
# product formula instead, which enumeration cross-checks on everything small.
ENUMERATION_CAP = 400


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class SphericalSubset:
    """A subset of generators spanning a finite parabolic subgroup."""

    mask: int
    gens: tuple[int, ...]
    poly: Poly  # growth polynomial of the parabolic
    order: int

    @property
    def longest(self) -> int:
        """Length of the longest element (degree of the growth polynomial)."""
        return self.poly.degree


class _ShuffleEngine:
    """Piling normal form for right-angled systems.

    Per generator a deque of tokens: True for an occurrence of the generator
    itself, False for a blocker laid down by a non-commuting letter.  The
    lexicographically smallest linearization of the resulting heap is the
    ShortLex normal form.
    """

    def __init__(self, matrix):
        self.rank = len(matrix)
        self.noncomm = []  # per generator: others it does not commute with
        for i in range(self.rank):
            mask = 0
            for j in range(self.rank):
                if j != i and matrix[i][j] != 2:
                    mask |= 1 << j
            self.noncomm.append(mask)

    def normal_form(self, word) -> Word:
        piles = [deque() for _ in range(self.rank)]
        for s in word:
            if piles[s] and piles[s][-1]:
                piles[s].pop()
                for j in _bits(self.noncomm[s]):
                    piles[j].pop()
            else:
                piles[s].append(True)
                for j in _bits(self.noncomm[s]):
                    piles[j].append(False)
        out = []
        remaining = sum(len(p) for p in piles)
        while remaining:
            for i in range(self.rank):
                if piles[i] and piles[i][0]:
                    break
            else:  # pragma: no cover - heap invariant
                raise AssertionError("stuck piling")
            out.append(i)
            piles[i].popleft()
            remaining -= 1
            for j in _bits(self.noncomm[i]):
                piles[j].popleft()
                remaining -= 1
        return tuple(out)

    def mul_gen(self, word: Word, s: int) -> Word:
        return self.normal_form(word + (s,))

    def right_descents(self, word: Word) -> int:
        """s is a right descent iff some occurrence of s sees only commuting letters after it."""
        mask = 0
        seen = 0
        for p in range(len(word) - 1, -1, -1):
            x = word[p]
            if not (seen & (self.noncomm[x] | 1 << x)):
                mask |= 1 << x
            seen |= 1 << x
        return mask

    def left_descents(self, word: Word) -> int:
        return self.right_descents(tuple(reversed(word)))


class CoxeterSystem:
    """A Coxeter system (W, S): generator labels plus the Coxeter matrix.

    Immutable after construction.  ``matrix[i][j]`` is m_ij with 0 meaning
    infinity; the diagonal is 1.
    """

    def __init__(self, labels, matrix):
        labels = tuple(str(x) for x in labels)
        if not labels:
            raise ConfigError("at least one generator is required")
        if len(set(labels)) != len(labels):
            raise ConfigError("generator names must be distinct")
        n = len(labels)
        if len(matrix) != n or any(len(row) != n for row in matrix):
            raise ConfigError(f"matrix must be {n}x{n}")
        mat = []
        for row in matrix:
            r = []
            for v in row:
                if not isinstance(v, int) or isinstance(v, bool):
                    raise ConfigError(f"matrix entries must be integers (0 = infinity), got {v!r}")
                r.append(v)
            mat.append(tuple(r))
        for i in range(n):
            if mat[i][i] != 1:
                raise ConfigError("diagonal entries must be 1")
            for j in range(n):
                if mat[i][j] != mat[j][i]:
                    raise ConfigError("matrix must be symmetric")
                if i != j and mat[i][j] == 1 or mat[i][j] < 0:
                    raise ConfigError("off-diagonal entries must be 0 (infinity) or >= 2")
        self.labels = labels
        self.matrix = tuple(mat)
        self.rank = n
        self.right_angled = all(
            self.matrix[i][j] in (0, 2) for i in range(n) for j in range(n) if i != j
        )
        finite_labels = {self.matrix[i][j] for i in range(n) for j in range(n) if i != j} - {0}
        if self.right_angled:
            self.arithmetic = "shuffle"
            self._engine = _ShuffleEngine(self.matrix)
        elif finite_labels <= {2, 3, 4, 5, 6}:
            self.arithmetic = "radical"
            self._engine = ReflectionEngine(self.matrix, exact=True)
        else:
            self.arithmetic = "interval"
            self._engine = ReflectionEngine(self.matrix, exact=False)
        self._spherical = None
        self._parabolic_cache = {}

    @property
    def exact(self) -> bool:
        return self.arithmetic != "interval"

    def __repr__(self):
        return f"CoxeterSystem({list(self.labels)})"

    @property
    def system_hash(self) -> str:
        blob = json.dumps({"g": self.labels, "m": self.matrix}, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:12]

    def m(self, i: int, j: int) -> int:
        return self.matrix[i][j]

    def gen_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ConfigError(f"unknown generator {label!r}") from None

    # -- word problem ------------------------------------------------------

    def normal_form(self, word) -> Word:
        word = tuple(word)
        for s in word:
            if not 0 <= s < self.rank:
                raise ConfigError(f"generator index {s} out of range")
        return self._engine.normal_form(word)

    def mul_gen(self, word: Word, s: int) -> Word:
        """Normal form of w*s for w already in normal form."""
        out = self._engine.mul_gen(word, s)
        if self.arithmetic != "shuffle":
            out = self._engine.shortlex(out)
        return out

    def mul(self, a: Word, b: Word) -> Word:
        out = a
        for s in b:
            out = self.mul_gen(out, s)
        return out

    def inv(self, a: Word) -> Word:
        if self.arithmetic == "shuffle":
            return self._engine.normal_form(tuple(reversed(a)))
        return self._engine.shortlex(tuple(reversed(a)))

    def right_descents(self, word: Word) -> int:
        """Bitmask of generators s with d(ws) < d(w)."""
        return self._engine.right_descents(word)

    def left_descents(self, word: Word) -> int:
        return self._engine.left_descents(word)

    # -- balls -------------------------------------------------------------

    def ball_shells(self, radius: int, max_elements: int | None = DEFAULT_BALL_CAP):
        """Elements of length <= radius grouped by length, ShortLex order in each shell."""
        if radius < 0:
            raise ValueError("radius must be >= 0")
        shells = [[()]]
        total = 1
        for _ in range(radius):
            nxt = set()
            for w in shells[-1]:
                for s in range(self.rank):
                    u = self.mul_gen(w, s)
                    if len(u) > len(w):
                        nxt.add(u)
            if not nxt:
                break
            total += len(nxt)
            if max_elements is not None and total > max_elements:
                raise ResourceLimitError(
                    f"ball of radius {len(shells)} exceeds the cap of {max_elements} elements"
                )
            shells.append(sorted(nxt))
        return shells

    def ball(self, radius: int, max_elements: int | None = DEFAULT_BALL_CAP) -> list[Word]:
        return [w for shell in self.ball_shells(radius, max_elements) for w in shell]

    # -- spherical subsets ---------------------------------------------------

    def is_spherical(self, subset) -> bool:
        return _finite_type(self.matrix, _as_mask(subset)) is not None

    def spherical_subsets(self) -> list[SphericalSubset]:
        """All subsets spanning finite parabolics, with growth polynomials."""
        if self._spherical is None:
            found = {0: self._make_spherical(0)}
            stack = [(0, -1)]
            while stack:
                mask, top = stack.pop()
                for s in range(top + 1, self.rank):
                    m2 = mask | 1 << s
                    if _finite_type(self.matrix, m2) is not None:
                        found[m2] = self._make_spherical(m2)
                        stack.append((m2, s))
            self._spherical = sorted(
                found.values(), key=lambda sp: (len(sp.gens), sp.mask)
            )
        return self._spherical

    def spherical_masks(self) -> list[int]:
        return [sp.mask for sp in self.spherical_subsets()]

    def spherical(self, subset) -> SphericalSubset:
        mask = _as_mask(subset)
        for sp in self.spherical_subsets():
            if sp.mask == mask:
                return sp
        raise NotSphericalError(f"subset {self._subset_str(mask)} spans an infinite parabolic")

    def _subset_str(self, mask: int) -> str:
        return "{" + ",".join(self.labels[i] for i in _bits(mask)) + "}"

    def _make_spherical(self, mask: int) -> SphericalSubset:
        comps = _finite_type(self.matrix, mask)
        if comps is None:
            raise NotSphericalError(f"subset {self._subset_str(mask)} spans an infinite parabolic")
        order = 1
        for typ in comps:
            order *= _order_of_type(typ)
        if order <= ENUMERATION_CAP:
            shells = self._parabolic_shells(mask)
            assert sum(len(s) for s in shells) == order, "classification/enumeration mismatch"
            poly = Poly([len(s) for s in shells])
        else:
            poly = Poly.const(1)
            for typ in comps:
                for d in _degrees_of_type(typ):
                    poly = poly * Poly([1] * d)
        return SphericalSubset(mask, tuple(_bits(mask)), poly, order)

    def _parabolic_shells(self, mask: int, cap: int = 200_000):
        gens = list(_bits(mask))
        shells = [[()]]
        total = 1
        while True:
            nxt = set()
            for w in shells[-1]:
                for s in gens:
                    u = self.mul_gen(w, s)
                    if len(u) > len(w):
                        nxt.add(u)
            if not nxt:
                return shells
            total += len(nxt)
            if total > cap:  # pragma: no cover
                raise ResourceLimitError("parabolic enumeration exceeded its cap")
            shells.append(sorted(nxt))

    def parabolic_elements(self, subset) -> list[Word]:
        """All elements of the finite parabolic W_T, by length then ShortLex."""
        mask = _as_mask(subset)
        if mask not in self._parabolic_cache:
            if not self.is_spherical(mask):
                raise NotSphericalError(f"subset {self._subset_str(mask)} spans an infinite parabolic")
            self._parabolic_cache[mask] = [
                w for shell in self._parabolic_shells(mask) for w in shell
            ]
        return self._parabolic_cache[mask]

    def transversal(self, tmask: int, umask: int) -> list[Word]:
        """U-reduced representatives of W_U-cosets inside W_T (U subset of T)."""
        return [w for w in self.parabolic_elements(tmask) if not self.right_descents(w) & umask]

    # -- coset representatives ----------------------------------------------

    def min_coset_rep(self, w: Word, subset) -> Word:
        """The unique shortest element of w W_T (T-reduced representative)."""
        mask = _as_mask(subset)
        while True:
            ds = self.right_descents(w) & mask
            if not ds:
                return w
            s = (ds & -ds).bit_length() - 1
            w = self.mul_gen(w, s)


def _as_mask(subset) -> int:
    if isinstance(subset, SphericalSubset):
        return subset.mask
    if isinstance(subset, int):
        return subset
    mask = 0
    for s in subset:
        mask |= 1 << int(s)
    return mask


# ---------------------------------------------------------------------------
# classification of finite Coxeter diagrams


def _finite_type(matrix, mask: int):
    """Component types if the parabolic on ``mask`` is finite, else None.

    Components are taken along edges with label != 2; each is matched against
    the classification of finite diagrams (A, B, D, E, F, H, I2(m)).
    """
    verts = list(_bits(mask))
    if not verts:
        return []
    parent = {v: v for v in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in verts:
        for j in verts:
            if j > i and matrix[i][j] != 2:
                parent[find(i)] = find(j)
    comps = {}
    for v in verts:
        comps.setdefault(find(v), []).append(v)
    types = []
    for comp in comps.values():
        typ = _classify_component(matrix, comp)
        if typ is None:
            return None
        types.append(typ)
    return types


def _classify_component(matrix, comp):
    n = len(comp)
    if n == 1:
        return ("A", 1)
    edges = []
    for a in range(n):
        for b in range(a + 1, n):
            m = matrix[comp[a]][comp[b]]
            if m != 2:
                edges.append((comp[a], comp[b], m))
    if any(m == 0 for _, _, m in edges):
        return None
    if n == 2:
        return ("I", edges[0][2])
    if len(edges) != n - 1:
        return None  # not a tree
    degree = {v: 0 for v in comp}
    for a, b, _ in edges:
        degree[a] += 1
        degree[b] += 1
    if any(d > 3 for d in degree.values()):
        return None
    branch = [v for v in comp if degree[v] == 3]
    labels = sorted(m for _, _, m in edges)
    big = [e for e in edges if e[2] > 3]
    if len(branch) > 1 or (branch and big):
        return None
    if not branch:
        # path; order vertices from one end
        ends = [v for v in comp if degree[v] == 1]
        path = _path_order(edges, ends[0])
        ms = [_edge_label(edges, path[i], path[i + 1]) for i in range(n - 1)]
        if not big:
            return ("A", n)
        if len(big) > 1:
            return None
        m = big[0][2]
        if m == 4:
            if ms[0] == 4 or ms[-1] == 4:
                return ("B", n)
            if n == 4 and ms[1] == 4:
                return ("F", 4)
            return None
        if m == 5:
            if n in (3, 4) and (ms[0] == 5 or ms[-1] == 5):
                return ("H", n)
            return None
        return None  # one label >= 6 with n >= 3 is affine or worse
    # single branch vertex, all labels 3
    b = branch[0]
    arms = sorted(_arm_lengths(edges, b))
    if arms[0] != 1:
        return None
    if arms[1] == 1:
        return ("D", n)
    if arms[1] == 2 and arms[2] in (2, 3, 4):
        return ("E", n) if n in (6, 7, 8) else None
    return None


def _edge_label(edges, a, b):
    for x, y, m in edges:
        if {x, y} == {a, b}:
            return m
    raise KeyError  # pragma: no cover


def _path_order(edges, start):
    adj = {}
    for a, b, _ in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    order = [start]
    prev = None
    while len(order) < len(adj):
        nxt = [x for x in adj[order[-1]] if x != prev]
        prev = order[-1]
        order.append(nxt[0])
    return order

def _arm_lengths(edges, branch):
    adj = {}
    for a, b, _ in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    arms = []
    for nxt in adj[branch]:
        ln, prev, cur = 1, branch, nxt
        while True:
            further = [x for x in adj[cur] if x != prev]
            if not further:
                break
            prev, cur = cur, further[0]
            ln += 1
        arms.append(ln)
    return arms


_E_ORDERS = {6: 51840, 7: 2903040, 8: 696729600}
_E_DEGREES = {
    6: (2, 5, 6, 8, 9, 12),
    7: (2, 6, 8, 10, 12, 14, 18),
    8: (2, 8, 12, 14, 18, 20, 24, 30),
}


def _order_of_type(typ) -> int:
    fam, n = typ
    if fam == "A":
        return factorial(n + 1)
    if fam == "B":
        return 2**n * factorial(n)
    if fam == "D":
        return 2 ** (n - 1) * factorial(n)
    if fam == "E":
        return _E_ORDERS[n]
    if fam == "F":
        return 1152
    if fam == "H":
        return 120 if n == 3 else 14400
    if fam == "I":
        return 2 * n  # n is the label m here
    raise ValueError(typ)  # pragma: no cover


def _degrees_of_type(typ):
    fam, n = typ
    if fam == "A":
        return tuple(range(2, n + 2))
    if fam == "B":
        return tuple(range(2, 2 * n + 1, 2))
    if fam == "D":
        return tuple(range(2, 2 * n - 1, 2)) + (n,)
    if fam == "E":
        return _E_DEGREES[n]
    if fam == "F":
        return (2, 6, 8, 12)
    if fam == "H":
        return (2, 6, 10) if n == 3 else (2, 12, 20, 30)
    if fam == "I":
        return (2, n)
    raise ValueError(typ)  # pragma: no cover


# ---------------------------------------------------------------------------
# configuration parsing


def parse_system(text: str) -> CoxeterSystem:
    """Parse a JSON config: {"generators": [...], "matrix": [[...]]}.

    Infinity entries may be written as 0 or the string "inf".
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "generators" not in doc or "matrix" not in doc:
        raise ConfigError('config must be an object with "generators" and "matrix"')
    gens = doc["generators"]
    if not isinstance(gens, list) or not all(isinstance(g, str) for g in gens):
        raise ConfigError('"generators" must be a list of names')
    raw = doc["matrix"]
    if not isinstance(raw, list):
        raise ConfigError('"matrix" must be a list of rows')
    matrix = []
    for row in raw:
        if not isinstance(row, list):
            raise ConfigError('"matrix" must be a list of rows')
        out = []
        for v in row:
            if v == "inf":
                v = 0
            if isinstance(v, bool) or not isinstance(v, int):
                raise ConfigError(f'matrix entries must be integers or "inf", got {v!r}')
            out.append(v)
        matrix.append(out)
    return CoxeterSystem(gens, matrix)


def load_system(path) -> CoxeterSystem:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_system(fh.read())
