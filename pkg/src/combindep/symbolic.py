"""Two-sided subshifts over a finite alphabet, cylinder sets and exact feasibility.

Words are tuples of ints. Positions are integers on the two-sided line; the
point ``x`` shifted by ``s`` is the point ``y`` with ``y[i] = x[i + s]``, so a
point lies in ``s^{-1} A`` exactly when its shift by ``s`` lies in ``A``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import EmptyLanguage, UnsupportedSpec

Word = tuple


def as_word(w) -> Word:
    """Coerce a digit string or an int sequence into a word tuple."""
    if isinstance(w, str):
        if "," in w:
            return tuple(int(ch) for ch in w.split(","))
        return tuple(int(ch) for ch in w)
    return tuple(int(a) for a in w)


def word_str(w: Sequence[int]) -> str:
    if all(0 <= a < 10 for a in w):
        return "".join(str(a) for a in w)
    return ",".join(str(a) for a in w)


@dataclass(frozen=True)
class Alphabet:
    size: int

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("alphabet size must be >= 1")


@dataclass(frozen=True)
class SubshiftSpec:
    """A full shift, a shift of finite type, or a deterministic generator.

    Use the constructors :meth:`full_shift`, :meth:`sft` and :meth:`generator`
    rather than the raw fields.
    """

    k: int
    kind: str = "full"
    forbidden: tuple = ()
    name: str | None = None
    params: tuple = ()

    def __post_init__(self):
        Alphabet(self.k)
        if self.kind not in ("full", "sft", "generator"):
            raise ValueError(f"unknown subshift kind {self.kind!r}")
        for w in self.forbidden:
            if len(w) == 0:
                raise ValueError("forbidden words must be nonempty")
            if any(not 0 <= a < self.k for a in w):
                raise ValueError(f"forbidden word {w} leaves the alphabet")

    @classmethod
    def full_shift(cls, k: int) -> "SubshiftSpec":
        return cls(k, "full")

    @classmethod
    def sft(cls, k: int, forbidden: Iterable) -> "SubshiftSpec":
        words = tuple(sorted({as_word(w) for w in forbidden}))
        if not words:
            return cls(k, "full")
        return cls(k, "sft", words)

    @classmethod
    def generator(cls, name: str, k: int = 2, **params) -> "SubshiftSpec":
        return cls(k, "generator", (), name, tuple(sorted(params.items())))

    @property
    def is_generator(self) -> bool:
        return self.kind == "generator"

    def param(self, key, default=None):
        return dict(self.params).get(key, default)

    def locally_admissible(self, word: Sequence[int]) -> bool:
        """True if ``word`` contains no forbidden block."""
        if any(not 0 <= a < self.k for a in word):
            return False
        w = tuple(word)
        for f in self.forbidden:
            m = len(f)
            for i in range(len(w) - m + 1):
                if w[i:i + m] == f:
                    return False
        return True

    def in_language(self, word: Sequence[int]) -> bool:
        """True if ``word`` occurs in some bi-infinite point of the subshift."""
        if self.is_generator:
            raise UnsupportedSpec("language of a generator spec is not decidable here")
        w = tuple(word)
        if any(not 0 <= a < self.k for a in w):
            return False
        if self.kind == "full":
            return True
        g = transfer_graph(self)
        if not g.vertices:
            return False
        return g.accepts(w)


class TransferGraph:
    """Essential part of the higher-block graph of an SFT.

    Vertices are admissible blocks of length ``L = max(m - 1, 1)`` where ``m`` is
    the longest forbidden word; vertices with no bi-infinite path through them are
    trimmed, so every surviving path extends to a point of the shift.
    """

    def __init__(self, spec: SubshiftSpec):
        self.k = spec.k
        m = max((len(f) for f in spec.forbidden), default=1)
        self.L = L = max(m - 1, 1)
        verts = [w for w in itertools.product(range(spec.k), repeat=L)
                 if spec.locally_admissible(w)]
        succ = {v: [v[1:] + (a,) for a in range(spec.k)
                    if spec.locally_admissible(v + (a,))] for v in verts}
        alive = set(verts)
        changed = True
        while changed:
            changed = False
            indeg = dict.fromkeys(alive, 0)
            for v in alive:
                for u in succ[v]:
                    if u in alive:
                        indeg[u] += 1
            for v in list(alive):
                if indeg[v] == 0 or not any(u in alive for u in succ[v]):
                    alive.discard(v)
                    changed = True
        self.vertices = sorted(alive)
        self.index = {v: i for i, v in enumerate(self.vertices)}
        n = len(self.vertices)
        self.adj = np.zeros((n, n), dtype=bool)
        for v in self.vertices:
            for u in succ[v]:
                if u in alive:
                    self.adj[self.index[v], self.index[u]] = True
        self.last = np.array([v[-1] for v in self.vertices], dtype=int)
        self._powers = {1: self.adj}

    def power(self, g: int) -> np.ndarray:
        """Boolean reachability in exactly ``g`` steps."""
        if g in self._powers:
            return self._powers[g]
        if g == 0:
            return np.eye(len(self.vertices), dtype=bool)
        half = self.power(g // 2)
        sq = (half.astype(np.int64) @ half.astype(np.int64)) > 0
        if g % 2:
            sq = (sq.astype(np.int64) @ self.adj.astype(np.int64)) > 0
        self._powers[g] = sq
        return sq

    def accepts(self, w: Word) -> bool:
        L = self.L
        if len(w) < L:
            return any(v[:len(w)] == w for v in self.vertices)
        blocks = [w[i:i + L] for i in range(len(w) - L + 1)]
        if any(b not in self.index for b in blocks):
            return False
        return all(self.adj[self.index[a], self.index[b]]
                   for a, b in zip(blocks, blocks[1:]))


@lru_cache(maxsize=64)
def transfer_graph(spec: SubshiftSpec) -> TransferGraph:
    if spec.is_generator:
        raise UnsupportedSpec("generator specs have no transfer graph")
    return TransferGraph(spec)


@dataclass(frozen=True)
class CylinderSet:
    """``{x : x[anchor : anchor + len(word)] = word}``."""

    word: Word
    anchor: int = 0

    def __post_init__(self):
        object.__setattr__(self, "word", as_word(self.word))

    def shifted(self, s: int) -> "CylinderSet":
        return CylinderSet(self.word, self.anchor + s)

    def constraints(self, s: int = 0) -> dict:
        """Position -> symbol requirements for ``s^{-1}`` of this cylinder."""
        base = self.anchor + s
        return {base + i: a for i, a in enumerate(self.word)}

    @property
    def span(self) -> range:
        return range(self.anchor, self.anchor + len(self.word))


def cyl(word, anchor: int = 0) -> CylinderSet:
    return CylinderSet(as_word(word), anchor)


@dataclass(frozen=True)
class BorelLikeSet:
    """Finite union of cylinder sets. The empty union is the empty set."""

    cylinders: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "cylinders", tuple(self.cylinders))

    @classmethod
    def of(cls, *items) -> "BorelLikeSet":
        cyls = []
        for it in items:
            if isinstance(it, CylinderSet):
                cyls.append(it)
            elif isinstance(it, BorelLikeSet):
                cyls.extend(it.cylinders)
            else:
                cyls.append(cyl(it))
        return cls(tuple(cyls))

    @property
    def is_empty_union(self) -> bool:
        return not self.cylinders

    def coords(self) -> set:
        out = set()
        for c in self.cylinders:
            out.update(c.span)
        return out

    def contains(self, assignment: dict) -> bool:
        """Membership of a point known on (at least) the cylinders' coordinates."""
        return any(all(assignment[p] == a for p, a in c.constraints().items())
                   for c in self.cylinders)


def as_set(item) -> BorelLikeSet:
    if isinstance(item, BorelLikeSet):
        return item
    if isinstance(item, CylinderSet):
        return BorelLikeSet((item,))
    return BorelLikeSet.of(item)


@dataclass(frozen=True)
class SetTuple:
    components: tuple

    def __post_init__(self):
        comps = tuple(as_set(c) for c in self.components)
        if not comps:
            raise ValueError("a set tuple needs at least one component")
        object.__setattr__(self, "components", comps)

    @classmethod
    def of(cls, *components) -> "SetTuple":
        return cls(tuple(components))

    @property
    def k(self) -> int:
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __len__(self):
        return len(self.components)

    def syntactically_disjoint(self) -> bool:
        """Pairwise disjointness decided at the common refinement of all cylinders."""
        for A, B in itertools.combinations(self.components, 2):
            for c, d in itertools.product(A.cylinders, B.cylinders):
                ca, cb = c.constraints(), d.constraints()
                if all(ca[p] == cb[p] for p in ca.keys() & cb.keys()):
                    return False
        return True


def interval(a: int, b: int) -> tuple:
    """The window ``[a, b)`` as a tuple of integers."""
    return tuple(range(a, b))


@dataclass(frozen=True)
class Witness:
    """A finite segment ``x[start : start + len(word)]`` of a point of the subshift.

    In orbit-sample mode ``orbit_shift`` records which shift of the sampled
    orbit produced it.
    """

    start: int
    word: Word
    orbit_shift: int | None = None

    def at(self, p: int) -> int:
        return self.word[p - self.start]

    def covers(self, positions) -> bool:
        return all(self.start <= p < self.start + len(self.word) for p in positions)

    def satisfies(self, required: dict, excluded=()) -> bool:
        if not self.covers(required):
            return False
        if any(self.at(p) != a for p, a in required.items()):
            return False
        for anchor, w in excluded:
            span = range(anchor, anchor + len(w))
            # an uncovered cylinder is undecided, so the witness is not proof
            if not self.covers(span) or all(self.at(p) == a for p, a in zip(span, w)):
                return False
        return True


def _search(spec: SubshiftSpec, required: dict, excluded, lo: int, hi: int):
    """Exact DFS over positions ``lo..hi-1`` with memoised dead states."""
    graph = None if spec.kind == "full" else transfer_graph(spec)
    L = graph.L if graph is not None else 1
    if graph is not None and not graph.vertices:
        return None
    ends: dict = {}
    for anchor, w in excluded:
        ends.setdefault(anchor + len(w) - 1, []).append((anchor, tuple(w)))
    W = max([L + 1] + [len(w) for _, w in excluded])
    dead = set()
    buf = []

    def ok_at(p):
        i = p - lo
        if graph is not None and i + 1 >= L:
            if tuple(buf[i + 1 - L:i + 1]) not in graph.index:
                return False
            if i + 1 >= L + 1 and not spec.locally_admissible(buf[i - L:i + 1]):
                return False
        for anchor, w in ends.get(p, ()):
            if anchor >= lo and all(buf[anchor - lo + j] == a for j, a in enumerate(w)):
                return False
        return True

    def rec(p):
        if p == hi:
            return True
        key = (p, tuple(buf[max(0, p - lo - W + 1):]))
        if key in dead:
            return False
        choices = (required[p],) if p in required else range(spec.k)
        for a in choices:
            buf.append(a)
            if ok_at(p) and rec(p + 1):
                return True
            buf.pop()
        dead.add(key)
        return False

    import sys
    limit = sys.getrecursionlimit()
    if hi - lo + 50 > limit:
        sys.setrecursionlimit(hi - lo + 1000)
    try:
        if rec(lo):
            return Witness(lo, tuple(buf))
        return None
    finally:
        sys.setrecursionlimit(limit)


def solve_constraints(spec: SubshiftSpec, required: dict, excluded=(), extent=None):
    """Find a segment of a point meeting fixed symbols and avoiding cylinders.

    ``required`` maps positions to symbols, ``excluded`` is a list of
    ``(anchor, word)`` cylinders the point must avoid. Returns the
    lexicographically least witness over the hull of all positions involved,
    or ``None``. Exact for full shifts and SFTs.
    """
    if spec.is_generator:
        raise UnsupportedSpec("call feasibility on a generator spec through orbit sampling")
    if any(not 0 <= a < spec.k for a in required.values()):
        return None
    pts = list(required)
    for anchor, w in excluded:
        pts.extend((anchor, anchor + len(w) - 1))
    if extent is not None:
        pts.extend(extent)
    if not pts:
        pts = [0]
    lo, hi = min(pts), max(pts) + 1
    if spec.kind == "sft":
        L = transfer_graph(spec).L
        hi = max(hi, lo + L)
    return _search(spec, required, excluded, lo, hi)


def _expand(constraints):
    """Yield required-symbol dicts for every way of choosing one cylinder per clause."""
    clauses = []
    for pos, item in constraints:
        if isinstance(item, (int, np.integer)):
            clauses.append([{pos: int(item)}])
        else:
            s = as_set(item)
            clauses.append([c.constraints(pos) for c in s.cylinders])
    for combo in itertools.product(*clauses):
        merged: dict = {}
        ok = True
        for d in combo:
            for p, a in d.items():
                if merged.setdefault(p, a) != a:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            yield merged


def feasible_word(spec: SubshiftSpec, constraints, excluded=()):
    """Decide whether some point meets every constraint.

    ``constraints`` is a list of ``(position, item)`` where ``item`` is either a
    symbol (``x[position] = item``) or a set (the shift of ``x`` by ``position``
    lies in the set). Returns a :class:`Witness` or ``None`` (infeasible).
    """
    if spec.is_generator:
        raise UnsupportedSpec("feasible_word needs a full shift or SFT; "
                              "use orbit sampling for generator specs")
    for required in _expand(constraints):
        w = solve_constraints(spec, required, excluded)
        if w is not None:
            return w
    return None


def sample_feasible(segment: Witness, required: dict, excluded=()):
    """Orbit-sample analogue of :func:`solve_constraints`.

    The candidate points are the shifts of the sampled point; a shift ``t`` works
    when the segment is long enough to decide every constraint and all hold.
    """
    pts = list(required)
    for anchor, w in excluded:
        pts.extend((anchor, anchor + len(w) - 1))
    if not pts:
        pts = [0]
    lo, hi = min(pts), max(pts) + 1
    seg_lo, seg_hi = segment.start, segment.start + len(segment.word)
    word = segment.word
    for t in range(seg_lo - lo, seg_hi - hi + 1):
        if any(word[p + t - seg_lo] != a for p, a in required.items()):
            continue
        bad = False
        for anchor, w in excluded:
            if all(word[anchor + j + t - seg_lo] == a for j, a in enumerate(w)):
                bad = True
                break
        if not bad:
            return Witness(lo, tuple(word[lo + t - seg_lo:hi + t - seg_lo]), orbit_shift=t)
    return None


def generate_segment(spec: SubshiftSpec, a: int, b: int, seed: int = 0) -> Witness:
    """A deterministic segment ``x[a:b]`` of some point of the subshift."""
    if b <= a:
        raise ValueError("need b > a")
    n = b - a
    if spec.is_generator:
        from .systems import generator_segment
        return Witness(a, generator_segment(spec, a, b))
    rng = np.random.default_rng(seed)
    if spec.kind == "full":
        return Witness(a, tuple(int(v) for v in rng.integers(spec.k, size=n)))
    g = transfer_graph(spec)
    if not g.vertices:
        raise EmptyLanguage("the shift of finite type has no bi-infinite points")
    v = int(rng.integers(len(g.vertices)))
    out = list(g.vertices[v])
    while len(out) < n:
        nxt = np.flatnonzero(g.adj[v])
        v = int(nxt[rng.integers(len(nxt))])
        out.append(g.vertices[v][-1])
    return Witness(a, tuple(out[:n]))


def admissible_assignments(spec: SubshiftSpec, coords: Sequence[int]) -> Iterator[tuple]:
    """Lexicographic enumeration of symbol tuples on ``coords`` occurring in the shift."""
    coords = sorted(coords)
    if not coords:
        if spec.kind == "full" or transfer_graph(spec).vertices:
            yield ()
        return
    if spec.kind == "full":
        yield from itertools.product(range(spec.k), repeat=len(coords))
        return
    g = transfer_graph(spec)
    if not g.vertices:
        return
    n = len(coords)
    buf = [0] * n

    def rec(i, vec):
        for a in range(spec.k):
            if i == 0:
                nv = g.last == a
            else:
                step = g.power(coords[i] - coords[i - 1])
                nv = (vec.astype(np.int64) @ step.astype(np.int64) > 0) & (g.last == a)
            if nv.any():
                buf[i] = a
                if i == n - 1:
                    yield tuple(buf)
                else:
                    yield from rec(i + 1, nv)

    yield from rec(0, None)


def pattern_admissible(spec: SubshiftSpec, pattern: dict) -> bool:
    """True if some point takes the given values at the given positions."""
    if spec.kind == "full":
        return all(0 <= a < spec.k for a in pattern.values())
    g = transfer_graph(spec)
    if not g.vertices:
        return False
    vec = None
    prev = None
    for p in sorted(pattern):
        a = pattern[p]
        if vec is None:
            vec = g.last == a
        else:
            vec = (vec.astype(np.int64) @ g.power(p - prev).astype(np.int64) > 0) & (g.last == a)
        if not vec.any():
            return False
        prev = p
    return True


@dataclass
class Partition:
    """Finite partition measurable with respect to the coordinates ``coords``.

    ``labels`` maps every admissible symbol tuple on ``coords`` to its block
    label; an atom is the union of the cylinders sharing a label.
    """

    spec: SubshiftSpec
    coords: tuple
    labels: dict = field(repr=False)

    @classmethod
    def cylinders(cls, spec: SubshiftSpec, depth: int, anchor: int = 0, labeler=None) -> "Partition":
        """Depth-``depth`` cylinder partition anchored at ``anchor``.

        ``labeler`` maps a word to its block label; by default every word is
        its own atom.
        """
        if depth < 1:
            raise ValueError("depth must be >= 1")
        coords = tuple(range(anchor, anchor + depth))
        f = labeler or (lambda w: w)
        return cls(spec, coords, {w: f(w) for w in admissible_assignments(spec, coords)})

    @classmethod
    def trivial(cls, spec: SubshiftSpec) -> "Partition":
        return cls(spec, (), {(): 0})

    @property
    def depth(self) -> int:
        return (self.coords[-1] - self.coords[0] + 1) if self.coords else 0

    def atoms(self) -> dict:
        out: dict = {}
        for w, lab in self.labels.items():
            out.setdefault(lab, []).append(w)
        return out

    def __len__(self):
        return len(set(self.labels.values()))

    def shifted(self, s: int) -> "Partition":
        """The partition ``s^{-1} P``: the block of ``x`` is that of its shift by ``s``."""
        return Partition(self.spec, tuple(c + s for c in self.coords), self.labels)

    def label_of(self, assignment: dict):
        return self.labels[tuple(assignment[c] for c in self.coords)]


def symbol_partition(spec: SubshiftSpec) -> Partition:
    return Partition.cylinders(spec, 1, 0, labeler=lambda w: w[0])
