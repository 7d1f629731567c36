"""Non-monotone two-threshold bootstrap percolation with forced inputs.

Network states are numbered ``1 .. 2**n``: a node vector ``(x1, ..., xn)``
is read as a binary number with node 1 as the most significant bit, plus
one. So on four nodes ``(1, 0, 0, 0)`` is state 9.
"""

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import InvalidInputError


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on nodes ``1 .. n``.

    ``adjacency[i - 1]`` is the neighbour set of node ``i``.
    """

    n: int
    adjacency: tuple

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise InvalidInputError(f"node count must be a positive integer, got {self.n!r}")
        adj = tuple(frozenset(int(j) for j in nb) for nb in self.adjacency)
        if len(adj) != self.n:
            raise InvalidInputError(f"adjacency has {len(adj)} rows for n={self.n}")
        for i, nb in enumerate(adj, start=1):
            for j in nb:
                if not 1 <= j <= self.n:
                    raise InvalidInputError(f"node {i} has neighbour {j} outside 1..{self.n}")
                if j == i:
                    raise InvalidInputError(f"self-loop at node {i}")
                if i not in adj[j - 1]:
                    raise InvalidInputError(f"edge {i}-{j} is not symmetric")
        object.__setattr__(self, "adjacency", adj)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        adj = [set() for _ in range(n)]
        for e in edges:
            if len(e) != 2:
                raise InvalidInputError(f"edge {e!r} must have two endpoints")
            i, j = int(e[0]), int(e[1])
            if not (1 <= i <= n and 1 <= j <= n):
                raise InvalidInputError(f"edge {i}-{j} outside 1..{n}")
            if i == j:
                raise InvalidInputError(f"self-loop at node {i}")
            adj[i - 1].add(j)
            adj[j - 1].add(i)
        return cls(n, tuple(adj))

    @classmethod
    def from_code(cls, n: int, code: int) -> "Graph":
        """Graph whose edges are the set bits of ``code`` over ``all_pairs(n)``."""
        pairs = all_pairs(n)
        return cls.from_edges(n, [p for b, p in enumerate(pairs) if code >> b & 1])

    def edges(self) -> list:
        return [(i, j) for i in range(1, self.n + 1) for j in sorted(self.adjacency[i - 1]) if i < j]

    def code(self) -> int:
        index = {p: b for b, p in enumerate(all_pairs(self.n))}
        return sum(1 << index[e] for e in self.edges())

    def degree(self, i: int) -> int:
        return len(self.adjacency[i - 1])

    @property
    def max_degree(self) -> int:
        return max(len(nb) for nb in self.adjacency)

    def neighbor_matrix(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=np.int64)
        for i, nb in enumerate(self.adjacency):
            for j in nb:
                m[i, j - 1] = 1
        return m


def all_pairs(n: int) -> list:
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


@dataclass(frozen=True)
class PercParams:
    k1: int
    k2: int

    def __post_init__(self):
        for name in ("k1", "k2"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise InvalidInputError(f"{name} must be an integer >= 1, got {v!r}")


@dataclass(frozen=True)
class Scenario:
    """A graph, thresholds and the set of non-forceable states.

    With ``monotone=True`` the deactivation clause is switched off, which
    gives the classical single-threshold rule (``k2`` is then unused).
    """

    graph: Graph
    params: PercParams
    non_forceable: frozenset = field(default_factory=frozenset)
    monotone: bool = False

    def __post_init__(self):
        nf = frozenset(int(s) for s in self.non_forceable)
        for s in nf:
            if not 1 <= s <= self.n_states:
                raise InvalidInputError(f"non-forceable state {s} outside 1..{self.n_states}")
        object.__setattr__(self, "non_forceable", nf)

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def n_states(self) -> int:
        return 1 << self.graph.n

    def with_params(self, k1: int, k2: int) -> "Scenario":
        return Scenario(self.graph, PercParams(k1, k2), self.non_forceable, self.monotone)


@dataclass(frozen=True, eq=False)
class Transformation:
    """Total self-map of the states ``1 .. size``.

    ``table`` holds zero-based images (``table[x - 1] + 1`` is the image of
    state ``x``) and is read-only. Equality and hashing ignore ``label``.
    """

    table: np.ndarray
    label: str = ""

    def __post_init__(self):
        tab = np.array(self.table, dtype=np.int64).ravel()
        if tab.size == 0:
            raise InvalidInputError("transformation on an empty set")
        if tab.min() < 0 or tab.max() >= tab.size:
            raise InvalidInputError("transformation table has images outside its domain")
        tab.flags.writeable = False
        object.__setattr__(self, "table", tab)

    @classmethod
    def from_images(cls, images: Sequence[int], label: str = "") -> "Transformation":
        """Build from one-based images: ``images[x - 1]`` is where ``x`` goes."""
        return cls(np.asarray(images, dtype=np.int64) - 1, label)

    @classmethod
    def identity(cls, size: int, label: str = "id") -> "Transformation":
        return cls(np.arange(size), label)

    @classmethod
    def constant(cls, size: int, target: int, label: str = "") -> "Transformation":
        return cls(np.full(size, target - 1), label or f"c{target}")

    @property
    def size(self) -> int:
        return self.table.size

    def __call__(self, x: int) -> int:
        if not 1 <= x <= self.size:
            raise InvalidInputError(f"state {x} outside 1..{self.size}")
        return int(self.table[x - 1]) + 1

    __getitem__ = __call__

    def images(self) -> tuple:
        """One-based image list."""
        return tuple(int(v) + 1 for v in self.table)

    def image(self) -> tuple:
        return tuple(sorted({int(v) + 1 for v in self.table}))

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.table, np.arange(self.size)))

    def __eq__(self, other):
        if not isinstance(other, Transformation):
            return NotImplemented
        return np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def __repr__(self):
        return f"Transformation({list(self.images())}, label={self.label!r})"


def encode_state(bits: Sequence[int], n: int | None = None) -> int:
    """Node vector -> state id, node 1 most significant."""
    bits = list(bits)
    if n is not None and len(bits) != n:
        raise InvalidInputError(f"node vector has length {len(bits)}, expected {n}")
    if not bits:
        raise InvalidInputError("empty node vector")
    value = 0
    for b in bits:
        if b not in (0, 1, True, False):
            raise InvalidInputError(f"node state {b!r} is not boolean")
        value = (value << 1) | int(b)
    return value + 1


def decode_state(state: int, n: int) -> tuple:
    if not 1 <= state <= (1 << n):
        raise InvalidInputError(f"state {state} outside 1..{1 << n}")
    v = state - 1
    return tuple((v >> (n - 1 - i)) & 1 for i in range(n))


def step(state: int, scen: Scenario) -> int:
    """One synchronous tick of the local rule, straight from the definition."""
    g = scen.graph
    x = decode_state(state, g.n)
    k1, k2 = scen.params.k1, scen.params.k2
    nxt = []
    for i in range(g.n):
        active = sum(x[j - 1] for j in g.adjacency[i])
        if x[i] == 0:
            nxt.append(1 if active >= k1 else 0)
        elif not scen.monotone and active <= len(g.adjacency[i]) - k2:
            nxt.append(0)
        else:
            nxt.append(1)
    return encode_state(nxt)


def build_t(scen: Scenario) -> Transformation:
    g = scen.graph
    nbr = g.neighbor_matrix()
    deg = nbr.sum(axis=1).astype(np.int64)
    tab = kernels.step_table(nbr, deg, scen.params.k1, scen.params.k2, not scen.monotone)
    return Transformation(tab, "t")


def build_input_map(i: int, scen: Scenario, t: Transformation | None = None) -> Transformation:
    """The forced input ``s_i``: jump to state ``i`` unless the current state is non-forceable."""
    size = scen.n_states
    if not 1 <= i <= size:
        raise InvalidInputError(f"input index {i} outside 1..{size}")
    if t is None:
        t = build_t(scen)
    tab = np.full(size, i - 1, dtype=np.int64)
    if scen.non_forceable:
        locked = np.fromiter(scen.non_forceable, dtype=np.int64) - 1
        tab[locked] = t.table[locked]
    return Transformation(tab, f"s{i}")


def build_generators(scen: Scenario) -> list:
    """``[t] + [s_i for every target state i outside the non-forceable set]``."""
    t = build_t(scen)
    gens = [t]
    for i in range(1, scen.n_states + 1):
        if i not in scen.non_forceable:
            gens.append(build_input_map(i, scen, t))
    return gens
