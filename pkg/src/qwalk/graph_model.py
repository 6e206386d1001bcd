"""Walk specifications: permutation sets compatible with a connected regular graph.

A walk on ``N`` vertices of degree ``d`` is defined by ``d`` permutations
``P_1 .. P_d`` of ``{0, ..., N-1}``.  Vertices are 0-based everywhere.  The
canonical permutation representation is one-line notation (index -> image);
cycle notation such as ``"(0 1 2)(3 4)"`` is accepted as input sugar.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import (
    CoinCollisionError,
    DisconnectedError,
    LengthMismatchError,
    MultiEdgeError,
    NotBijectionError,
    NotSymmetricError,
    ParityError,
    SelfLoopError,
    SpecValidationError,
)

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    """A bijection on ``{0, ..., n-1}`` stored in one-line notation.

    ``p.map[j]`` is the image of vertex ``j``; lookups are O(1).  Instances
    are immutable.
    """

    __slots__ = ("map",)

    def __init__(self, images):
        arr = np.array(images, dtype=np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise NotBijectionError("need a non-empty one-dimensional image array")
        n = arr.size
        if arr.min() < 0 or arr.max() >= n:
            raise NotBijectionError(f"images out of range 0..{n - 1}: {arr.tolist()}")
        seen = np.zeros(n, dtype=bool)
        seen[arr] = True
        if not seen.all():
            missing = int(np.flatnonzero(~seen)[0])
            raise NotBijectionError(f"vertex {missing} has no preimage; not a bijection")
        arr.setflags(write=False)
        self.map = arr

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(n))

    @classmethod
    def from_cycles(cls, text: str, n: int) -> "Permutation":
        """Parse cycle notation, e.g. ``"(0 1 2)(3 4)"``; separators are
        spaces or commas. Vertices not mentioned are fixed points."""
        stripped = text.replace(" ", "").replace(",", "")
        if stripped and _CYCLE_RE.sub("", text).strip():
            raise ValueError(f"unparsable cycle notation: {text!r}")
        images = np.arange(n)
        touched = set()
        for group in _CYCLE_RE.findall(text):
            elems = [int(tok) for tok in re.split(r"[,\s]+", group.strip()) if tok]
            if not elems:
                continue
            for v in elems:
                if v < 0 or v >= n:
                    raise NotBijectionError(f"vertex {v} out of range 0..{n - 1}")
                if v in touched:
                    raise NotBijectionError(f"vertex {v} appears in two cycles")
                touched.add(v)
            for a, b in zip(elems, elems[1:] + elems[:1]):
                images[a] = b
        return cls(images)

    @property
    def n(self) -> int:
        return int(self.map.size)

    def __call__(self, j: int) -> int:
        return int(self.map[j])

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and np.array_equal(self.map, other.map)

    def __hash__(self):
        return hash(self.map.tobytes())

    def __repr__(self) -> str:
        return f"Permutation({self.map.tolist()})"

    def compose(self, other: "Permutation") -> "Permutation":
        """Right-to-left composition: ``p.compose(q)`` applies ``q`` first,
        i.e. ``p.compose(q)(j) == p(q(j))``."""
        if self.n != other.n:
            raise LengthMismatchError(f"sizes differ: {self.n} vs {other.n}")
        return Permutation(self.map[other.map])

    __mul__ = compose

    def inverse(self) -> "Permutation":
        inv = np.empty(self.n, dtype=np.int64)
        inv[self.map] = np.arange(self.n)
        return Permutation(inv)

    def power(self, k: int) -> "Permutation":
        """k-th power; negative exponents allowed."""
        k %= self.order()
        result = np.arange(self.n)
        square = self.map
        while k:
            if k & 1:
                result = square[result]
            square = square[square]
            k >>= 1
        return Permutation(result)

    __pow__ = power

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles()))

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles covering every vertex, fixed points as singletons.

        Each cycle starts at its smallest element; cycles are sorted by that
        element.
        """
        seen = np.zeros(self.n, dtype=bool)
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            v = int(self.map[start])
            while v != start:
                cyc.append(v)
                seen[v] = True
                v = int(self.map[v])
            out.append(tuple(cyc))
        return out

    def cycle_notation(self) -> str:
        """Display form; fixed points omitted, identity prints ``()``."""
        parts = ["(" + " ".join(map(str, c)) + ")" for c in self.cycles() if len(c) > 1]
        return "".join(parts) or "()"

    def matrix(self) -> np.ndarray:
        """N x N 0/1 matrix with column j carrying a 1 in row map[j]."""
        m = np.zeros((self.n, self.n), dtype=np.int64)
        m[self.map, np.arange(self.n)] = 1
        return m


@dataclass(frozen=True, eq=False)
class WalkSpec:
    """A validated walk: vertex count, defining permutations, adjacency."""

    n: int
    perms: tuple[Permutation, ...]
    adjacency: np.ndarray

    @property
    def d(self) -> int:
        return len(self.perms)

    def neighbors(self, j: int) -> list[int]:
        return np.flatnonzero(self.adjacency[j]).tolist()

    def __repr__(self) -> str:
        return f"WalkSpec(n={self.n}, d={self.d})"


def _as_permutation(raw, n: int, index: int) -> Permutation:
    if isinstance(raw, Permutation):
        p = raw
    elif isinstance(raw, str):
        p = Permutation.from_cycles(raw, n)
    else:
        p = Permutation(raw)
    if p.n != n:
        raise LengthMismatchError(f"permutation {index} has length {p.n}, expected {n}")
    return p


def validate(n: int, perms) -> WalkSpec:
    """Check a raw permutation set and build the WalkSpec.

    Requirements, in the order they are checked: every entry is a bijection
    of the right length; no permutation fixes a vertex; no two permutations
    agree anywhere; the summed permutation matrices form a symmetric 0/1
    adjacency matrix; the graph is connected.  Errors name the offending
    vertex / permutation indices.
    """
    if n < 3:
        raise SpecValidationError(f"need at least 3 vertices, got {n}")
    ps = [_as_permutation(raw, n, i) for i, raw in enumerate(perms)]
    d = len(ps)
    if d < 2:
        raise SpecValidationError(f"need at least 2 permutations, got {d}")

    idx = np.arange(n)
    for i, p in enumerate(ps):
        fixed = np.flatnonzero(p.map == idx)
        if fixed.size:
            raise SelfLoopError(f"permutation {i} fixes vertex {int(fixed[0])}")

    for i in range(d):
        for k in range(i + 1, d):
            hit = np.flatnonzero(ps[i].map == ps[k].map)
            if hit.size:
                j = int(hit[0])
                raise CoinCollisionError(
                    f"permutations {i} and {k} both send vertex {j} to {ps[i](j)}"
                )

    adjacency = np.zeros((n, n), dtype=np.int64)
    for p in ps:
        adjacency[p.map, idx] += 1

    asym = np.argwhere(adjacency != adjacency.T)
    if asym.size:
        l, j = (int(v) for v in asym[0])
        raise NotSymmetricError(
            f"transition {j} -> {l} has no reverse transition {l} -> {j}"
        )
    big = np.argwhere(adjacency > 1)
    if big.size:  # unreachable after the collision check; kept as a guard
        l, j = (int(v) for v in big[0])
        raise MultiEdgeError(f"vertices {j} and {l} are joined by multiple edges")

    component = {0}
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for u in np.flatnonzero(adjacency[v]):
            u = int(u)
            if u not in component:
                component.add(u)
                frontier.append(u)
    if len(component) != n:
        raise DisconnectedError(
            f"graph is disconnected; vertices {sorted(component)} form a component"
        )

    adjacency.setflags(write=False)
    return WalkSpec(n=n, perms=tuple(ps), adjacency=adjacency)


def product_walk(a: WalkSpec, b: WalkSpec) -> WalkSpec:
    """Product of two walks on the cartesian product graph.

    Vertex ``(j, k)`` is flattened row-major to ``j * b.n + k``.  The first
    factor's permutations act on ``j``, then the second factor's act on
    ``k``; the result has degree ``a.d + b.d``.
    """
    n2 = b.n
    row = np.repeat(np.arange(a.n), n2)
    col = np.tile(np.arange(n2), a.n)
    lifted = [p.map[row] * n2 + col for p in a.perms]
    lifted += [row * n2 + q.map[col] for q in b.perms]
    return validate(a.n * n2, lifted)


def cycle_shift(n: int) -> WalkSpec:
    """Degree-2 walk on the n-cycle: one step clockwise, one counterclockwise."""
    idx = np.arange(n)
    return validate(n, [(idx + 1) % n, (idx - 1) % n])


def cycle_exchange(n: int) -> WalkSpec:
    """Degree-2 walk on the n-cycle built from two interleaved pairings.

    The first permutation swaps (0 1)(2 3)...; the second swaps
    (1 2)(3 4)...(n-1 0).  Only possible when n is even.
    """
    if n % 2:
        raise ParityError(f"cycle_exchange needs an even vertex count, got {n}")
    up = np.arange(n) ^ 1
    down = np.array([(j + 1) % n if j % 2 else (j - 1) % n for j in range(n)])
    return validate(n, [up, down])


def complete(n: int) -> WalkSpec:
    """Walk on the complete graph via the circulant decomposition j -> j+k."""
    idx = np.arange(n)
    return validate(n, [(idx + k) % n for k in range(1, n)])


def figure1() -> WalkSpec:
    """Six-vertex, degree-3 walk: the two cycle directions plus a cross pairing."""
    return validate(6, [[1, 2, 3, 4, 5, 0], [5, 0, 1, 2, 3, 4], [3, 5, 4, 0, 2, 1]])


def torus(n1: int, n2: int) -> WalkSpec:
    """Degree-4 walk on the n1 x n2 periodic lattice (product of two cycles)."""
    return product_walk(cycle_shift(n1), cycle_shift(n2))


_BUILTINS = {
    "cycle_shift": cycle_shift,
    "cycle_exchange": cycle_exchange,
    "complete": complete,
    "figure1": figure1,
    "torus": torus,
}


def builtin(name: str, *params) -> WalkSpec:
    """Look up a named example walk, e.g. ``builtin("cycle_shift", 5)``."""
    try:
        factory = _BUILTINS[name]
    except KeyError:
        raise ValueError(
            f"unknown builtin {name!r}; choose from {sorted(_BUILTINS)}"
        ) from None
    return factory(*(int(p) for p in params))


def degree2_kind(spec: WalkSpec) -> str:
    """Classify a degree-2 walk by cycle shape: ``"full_cycle"`` (one n-cycle
    and its inverse) or ``"exchange"`` (two pairings). No relabeling is
    computed."""
    if spec.d != 2:
        raise ValueError(f"degree2_kind needs d=2, got d={spec.d}")
    shapes = [{len(c) for c in p.cycles()} for p in spec.perms]
    if all(s == {spec.n} for s in shapes):
        return "full_cycle"
    if all(s == {2} for s in shapes):
        return "exchange"
    raise SpecValidationError("degree-2 walk matches neither known family")
