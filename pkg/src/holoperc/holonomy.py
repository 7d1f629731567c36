"""Extended image set, subduction, heights, tiles and holonomy groups.

Everything is computed from the set-orbit graph of the full state set:
``I*`` is the orbit of ``A`` under the generators plus every singleton,
and since ``I*`` is closed under the generators, one successor table
``succ[element, generator]`` carries all of the later work.

Levels are numbered from the top, as in the usual holonomy listing: level
1 holds the class of the full state set and level ``h`` holds the classes
of height 1, just above the singletons.
"""

import graphlib
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import kernels
from .errors import ConsistencyError, InvalidInputError
from .groups import Perm, closure, name_group, perm_mul
from .netmodel import Scenario, Transformation, build_generators
from .tsg import canonical_set, format_word, mask_of, states_of


@dataclass(frozen=True)
class HolonomyGroup:
    base: tuple
    tiles: tuple
    perm_generators: tuple        # ((perm, word), ...), perm acts on tile positions
    order: int
    name: str
    elements: frozenset = field(repr=False, default=frozenset())

    @property
    def degree(self) -> int:
        return len(self.tiles)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1


@dataclass(frozen=True)
class LevelPart:
    degree: int
    group: str
    order: int
    representative: tuple
    height: int


@dataclass(frozen=True)
class LevelComponent:
    level: int
    height: int
    parts: tuple
    n_classes: int
    n_members: int

    @property
    def has_group(self) -> bool:
        return any(p.order > 1 for p in self.parts)

    def signature(self) -> str:
        """Compact listing: trivial parts merged into one point count, groups as ``(d,G)``."""
        points = sum(p.degree for p in self.parts if p.order == 1)
        items = [f"({p.degree},{p.group})" for p in self.parts if p.order > 1]
        if points:
            items.append(str(points))
        return " ".join(items)


# ---------------------------------------------------------------------------
# set-image helpers; uint64 kernels when the states fit in one word


def _images(masks: Sequence[int], tables: np.ndarray) -> list:
    """``out[a][b]`` = image mask of ``masks[a]`` under generator ``b``."""
    size = tables.shape[1]
    if size <= kernels.MAX_MASK_STATES:
        arr = np.fromiter(masks, dtype=np.uint64, count=len(masks))
        return kernels.mask_images(arr, tables).tolist()
    out = []
    rows = tables.tolist()
    for m in masks:
        imgs = [0] * len(rows)
        for x in states_of(m):
            for b, row in enumerate(rows):
                imgs[b] |= 1 << row[x - 1]
        out.append(imgs)
    return out


def _subduction(masks: list, reach: np.ndarray) -> np.ndarray:
    if len(masks) and max(masks).bit_length() <= kernels.MAX_MASK_STATES:
        arr = np.array(masks, dtype=np.uint64)
        return kernels.subduction_matrix(arr, reach)
    m = len(masks)
    leq = np.zeros((m, m), dtype=bool)
    for q in range(m):
        covers = [masks[r] for r in np.flatnonzero(reach[q])]
        for p in range(m):
            leq[q, p] = any(masks[p] & ~c == 0 for c in covers)
    return leq


def _set_key(mask: int) -> tuple:
    # canonical element order: larger sets first, then lexicographic member lists
    members = states_of(mask)
    return (-len(members), members)


class Skeleton:
    """The preordered extended image set of a transformation semigroup.

    ``leq[q, p]`` is true when element ``p`` is subducted by element ``q``
    (``P <= Q``); the identity is treated as a member of the semigroup, so
    ``P`` contained in ``Q`` already gives ``P <= Q``.
    """

    def __init__(self, gens: Sequence[Transformation]):
        if not gens:
            raise InvalidInputError("a skeleton needs at least one generator")
        self.gens = tuple(gens)
        self.labels = tuple(g.label or f"g{i}" for i, g in enumerate(gens))
        self.n_states = gens[0].size
        for g in gens:
            if g.size != self.n_states:
                raise InvalidInputError("generators act on different state sets")
        self.tables = np.stack([g.table for g in gens]).astype(np.int64)
        self._build_elements()
        self._build_order()

    # -- construction ------------------------------------------------------

    def _build_elements(self):
        full = (1 << self.n_states) - 1
        witness = {full: ()}
        frontier = [full]
        while frontier:
            imgs = _images(frontier, self.tables)
            nxt = []
            for src, row in zip(frontier, imgs):
                w = witness[src]
                for b, img in enumerate(row):
                    if img not in witness:
                        witness[img] = w + (b,)
                        nxt.append(img)
            frontier = nxt
        images = set(witness)
        for x in range(self.n_states):
            witness.setdefault(1 << x, None)
        masks = sorted(witness, key=_set_key)
        self.masks = masks
        self.index = {m: i for i, m in enumerate(masks)}
        self.witness = tuple(witness[m] for m in masks)
        self.is_image = tuple(m in images for m in masks)
        succ = np.empty((len(masks), len(self.gens)), dtype=np.int64)
        for i, row in enumerate(_images(masks, self.tables)):
            for b, img in enumerate(row):
                j = self.index.get(img)
                if j is None:
                    raise ConsistencyError("extended image set is not closed under the generators")
                succ[i, b] = j
        self.succ = succ
        self.sizes = np.array([bin(m).count("1") for m in masks], dtype=np.int64)
        fits = self.n_states <= kernels.MAX_MASK_STATES
        self._umasks = np.array(masks, dtype=np.uint64) if fits else None

    def _build_order(self):
        reach = kernels.reachability(self.succ)
        self.reach = reach
        leq = _subduction(self.masks, reach)
        self.leq = leq
        equiv = leq & leq.T
        m = len(self.masks)
        class_of = np.full(m, -1, dtype=np.int64)
        classes = []
        for i in range(m):
            if class_of[i] < 0:
                members = np.flatnonzero(equiv[i])
                class_of[members] = len(classes)
                classes.append(tuple(int(j) for j in members))
        self.class_of = class_of
        self.classes = tuple(classes)
        # members are listed in canonical element order; the representative is the
        # lexicographically least member list (all members share a cardinality)
        self.reps = tuple(min(c, key=lambda j: states_of(self.masks[j])) for c in classes)
        self._compute_heights()

    def _compute_heights(self):
        nc = len(self.classes)
        rep = np.array(self.reps)
        cleq = self.leq[np.ix_(rep, rep)]              # cleq[d, c]: class c <= class d
        strict = cleq & ~cleq.T
        below = {d: [int(c) for c in np.flatnonzero(strict[d])] for d in range(nc)}
        heights = [0] * nc
        try:
            order = list(graphlib.TopologicalSorter(below).static_order())
        except graphlib.CycleError as exc:
            raise ConsistencyError("strict subduction has a cycle") from exc
        for d in order:
            if self.sizes[self.reps[d]] == 1:
                heights[d] = 0
            else:
                heights[d] = 1 + max(heights[c] for c in below[d])
        self.class_heights = tuple(heights)
        self.height = heights[self.class_of[0]]

    # -- queries -----------------------------------------------------------

    @property
    def elements(self) -> list:
        return [states_of(m) for m in self.masks]

    def element_index(self, states) -> int:
        key = mask_of(states) if not isinstance(states, int) else states
        try:
            return self.index[key]
        except KeyError:
            raise InvalidInputError(f"{canonical_set(states_of(key))} is not in the extended image set") from None

    def height_of(self, states) -> int:
        return self.class_heights[self.class_of[self.element_index(states)]]

    def depth_of_height(self, height: int) -> int:
        return self.height - height + 1

    def leq_sets(self, p, q) -> bool:
        return bool(self.leq[self.element_index(q), self.element_index(p)])

    def _tile_indices(self, q: int) -> tuple:
        qm = self.masks[q]
        if self._umasks is not None:
            um = self._umasks
            uq = np.uint64(qm)
            cand = np.flatnonzero(((um & ~uq) == 0) & (um != uq))
            cm = um[cand]
            inside = ((cm[:, None] & ~cm[None, :]) == 0) & (cm[:, None] != cm[None, :])
            return tuple(int(i) for i in cand[~inside.any(axis=1)])
        cand = [i for i, m in enumerate(self.masks) if m != qm and m & ~qm == 0]
        tiles = []
        for i in cand:
            mi = self.masks[i]
            if not any(mi & ~self.masks[j] == 0 and self.masks[j] != mi for j in cand):
                tiles.append(i)
        return tuple(tiles)

    @cached_property
    def _tiles(self) -> dict:
        return {}

    def tile_indices(self, q: int) -> tuple:
        if self.sizes[q] == 1:
            raise InvalidInputError("a singleton has no tiles")
        cache = self._tiles
        if q not in cache:
            cache[q] = self._tile_indices(q)
        return cache[q]

    def tiles_of(self, states) -> list:
        return [states_of(self.masks[i]) for i in self.tile_indices(self.element_index(states))]

    def nonsingleton_classes(self) -> list:
        return [c for c in range(len(self.classes)) if self.sizes[self.reps[c]] > 1]

    # -- holonomy groups ---------------------------------------------------

    def _class_paths(self, q: int):
        """Shortest words inside q's class: from q to each member, and back."""
        members = set(self.classes[self.class_of[q]])
        g = self.succ.shape[1]
        to = {q: ()}
        queue = deque([q])
        while queue:
            p = queue.popleft()
            for b in range(g):
                r = int(self.succ[p, b])
                if r in members and r not in to:
                    to[r] = to[p] + (b,)
                    queue.append(r)
        back = {q: ()}
        pred = {p: [] for p in members}
        for p in sorted(members):
            for b in range(g):
                r = int(self.succ[p, b])
                if r in members:
                    pred[r].append((p, b))
        queue = deque([q])
        while queue:
            r = queue.popleft()
            for p, b in pred[r]:
                if p not in back:
                    back[p] = (b,) + back[r]
                    queue.append(p)
        if set(to) != members or set(back) != members:
            raise ConsistencyError("subduction class is not strongly connected")
        return sorted(members), to, back

    def word_on_tiles(self, q: int, word: Sequence[int]) -> Perm:
        tiles = self.tile_indices(q)
        cur = np.array(tiles, dtype=np.int64)
        for b in word:
            cur = self.succ[cur, b]
        pos = self._tile_pos(q)
        out = pos[cur]
        if (out < 0).any():
            raise ConsistencyError(f"word {word} does not stabilise the tiles of element {q}")
        if np.unique(out).size != out.size:
            raise ConsistencyError(f"word {word} acts non-bijectively on tiles")
        return tuple(out.tolist())

    def _tile_pos(self, q: int) -> np.ndarray:
        cache = self.__dict__.setdefault("_tile_pos_cache", {})
        if q not in cache:
            pos = np.full(len(self.masks), -1, dtype=np.int64)
            pos[list(self.tile_indices(q))] = np.arange(len(self.tile_indices(q)))
            cache[q] = pos
        return cache[q]

    def _apply(self, word: Sequence[int], elems: np.ndarray) -> np.ndarray:
        for b in word:
            elems = self.succ[elems, b]
        return elems

    def holonomy_group(self, q: int) -> HolonomyGroup:
        """Tile permutations of ``q`` from Schreier-style stabiliser words.

        For class members ``P`` with paths ``u_P`` (from ``q``) and ``v_P``
        (back to ``q``), the words ``u_P v_P`` and ``u_P g v_P'`` for every
        generator edge ``P -g-> P'`` inside the class stabilise ``q`` and
        generate the whole stabiliser action on the tiles.
        """
        if self.sizes[q] == 1:
            raise InvalidInputError("holonomy groups are defined for non-singleton sets")
        members, to, back = self._class_paths(q)
        tiles = np.array(self.tile_indices(q), dtype=np.int64)
        degree = tiles.size
        pos = self._tile_pos(q)
        ident = np.arange(degree)
        pushed = {p: self._apply(to[p], tiles) for p in members}     # tiles of q carried to p
        back_map = {}
        for p in members:
            bm = np.full(len(self.masks), -1, dtype=np.int64)
            bm[pushed[p]] = pos[self._apply(back[p], pushed[p])]
            back_map[p] = bm
        rows, words = [], []
        member_set = set(members)
        for p in members:
            rows.append(back_map[p][pushed[p]])
            words.append(to[p] + back[p])
            for b in range(self.succ.shape[1]):
                r = int(self.succ[p, b])
                if r in member_set:
                    rows.append(back_map[r][self.succ[pushed[p], b]])
                    words.append(to[p] + (b,) + back[r])
        mat = np.stack(rows)
        if (mat < 0).any() or not (np.sort(mat, axis=1) == ident).all():
            raise ConsistencyError(f"a stabilising word of element {q} is not a bijection on its tiles")
        moving = np.flatnonzero((mat != ident).any(axis=1))
        best = {}
        for i in moving:
            perm = tuple(mat[i].tolist())
            w = words[i]
            if perm not in best or (len(w), w) < (len(best[perm]), best[perm]):
                best[perm] = w
        candidates = sorted(best.items(), key=lambda kv: (len(kv[1]), kv[1], kv[0]))
        kept = []
        elems = {tuple(range(degree))}
        for perm, w in candidates:
            if perm in elems:
                continue
            kept.append((perm, w))
            elems = closure([p for p, _ in kept], degree)
        return HolonomyGroup(
            base=states_of(self.masks[q]),
            tiles=tuple(states_of(self.masks[t]) for t in tiles),
            perm_generators=tuple(kept),
            order=len(elems),
            name=name_group(elems, [p for p, _ in kept]),
            elements=frozenset(elems),
        )

    @cached_property
    def groups(self) -> dict:
        """Holonomy group of every non-singleton class representative, keyed by class."""
        return {c: self.holonomy_group(self.reps[c]) for c in self.nonsingleton_classes()}

    def levels(self) -> list:
        out = []
        groups = self.groups
        for level in range(1, self.height + 1):
            height = self.height - level + 1
            cls = [c for c in self.nonsingleton_classes() if self.class_heights[c] == height]
            cls.sort(key=lambda c: states_of(self.masks[self.reps[c]]))
            parts = tuple(
                LevelPart(
                    degree=groups[c].degree,
                    group=groups[c].name,
                    order=groups[c].order,
                    representative=groups[c].base,
                    height=height,
                )
                for c in cls
            )
            out.append(LevelComponent(level, height, parts, len(cls), sum(len(self.classes[c]) for c in cls)))
        return out

    # -- export ------------------------------------------------------------

    def covering_edges(self) -> list:
        """Hasse diagram of strict subduction on classes, as ``(upper, lower)`` class pairs."""
        rep = np.array(self.reps)
        cleq = self.leq[np.ix_(rep, rep)]
        strict = cleq & ~cleq.T
        edges = []
        nc = len(self.classes)
        for d in range(nc):
            lows = np.flatnonzero(strict[d])
            for c in lows:
                # c is covered by d unless some e sits strictly between them
                if not np.any(strict[d] & strict[:, c]):
                    edges.append((d, int(c)))
        return edges

    def word_label(self, word) -> str:
        return format_word(word, self.labels)

    def summary(self) -> dict:
        m = len(self.masks)
        return {
            "n_states": self.n_states,
            "generators": list(self.labels),
            "elements": [
                {
                    "set": list(states_of(self.masks[i])),
                    "class": int(self.class_of[i]),
                    "height": self.class_heights[self.class_of[i]],
                    "witness": None if self.witness[i] is None else self.word_label(self.witness[i]),
                }
                for i in range(m)
            ],
            "classes": [
                {
                    "representative": list(states_of(self.masks[self.reps[c]])),
                    "size": len(self.classes[c]),
                    "height": self.class_heights[c],
                    "tiles": [list(t) for t in self.tiles_of(self.masks[self.reps[c]])]
                    if self.sizes[self.reps[c]] > 1 else [],
                }
                for c in range(len(self.classes))
            ],
            "height": self.height,
            "levels": [
                {
                    "level": lc.level,
                    "height": lc.height,
                    "n_classes": lc.n_classes,
                    "n_members": lc.n_members,
                    "signature": lc.signature(),
                    "parts": [
                        {"degree": p.degree, "group": p.group, "order": p.order,
                         "representative": list(p.representative)}
                        for p in lc.parts
                    ],
                }
                for lc in self.levels()
            ],
        }


# ---------------------------------------------------------------------------
# scenario-level entry points


def build_skeleton(scen_or_gens) -> Skeleton:
    if isinstance(scen_or_gens, Scenario):
        return Skeleton(build_generators(scen_or_gens))
    return Skeleton(list(scen_or_gens))


def extended_image_set(scen_or_gens) -> list:
    return build_skeleton(scen_or_gens).elements


def subduction_leq(p, q, scen_or_gens) -> bool:
    skel = scen_or_gens if isinstance(scen_or_gens, Skeleton) else build_skeleton(scen_or_gens)
    return skel.leq_sets(p, q)


def compute_heights(skel: Skeleton) -> dict:
    """Element (as a state tuple) -> height."""
    return {states_of(m): skel.class_heights[skel.class_of[i]] for i, m in enumerate(skel.masks)}


def tiles_of(q, skel: Skeleton) -> list:
    return skel.tiles_of(q)


def holonomy_group_of(q, skel: Skeleton) -> HolonomyGroup:
    return skel.holonomy_group(skel.element_index(q))


def decompose(scen_or_gens) -> list:
    skel = scen_or_gens if isinstance(scen_or_gens, Skeleton) else build_skeleton(scen_or_gens)
    return skel.levels()


def skeleton_to_dot(skel: Skeleton, name: str = "skeleton") -> str:
    """Graphviz text for the skeleton.

    One node per non-singleton class (its representative) and one per
    singleton state. Edges between class nodes are covers of strict
    subduction; a class node points at the singletons that are its tiles.
    """
    lines = [f"digraph {name} {{", "  rankdir=TB;", '  node [shape=box, fontname="monospace"];']
    big = skel.nonsingleton_classes()
    for c in big:
        members = states_of(skel.masks[skel.reps[c]])
        shown = ",".join(map(str, members)) if len(members) <= 8 else f"{members[0]},...,{members[-1]}"
        label = f"{{{shown}}}\\nh={skel.class_heights[c]} |Q|={len(members)} x{len(skel.classes[c])}"
        lines.append(f'  c{c} [label="{label}"];')
    for x in range(1, skel.n_states + 1):
        lines.append(f'  s{x} [label="{x}", shape=ellipse];')
    bigset = set(big)
    for d, c in skel.covering_edges():
        if d in bigset and c in bigset:
            lines.append(f"  c{d} -> c{c};")
    for c in big:
        for t in skel.tile_indices(skel.reps[c]):
            if skel.sizes[t] == 1:
                lines.append(f"  c{c} -> s{states_of(skel.masks[t])[0]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
