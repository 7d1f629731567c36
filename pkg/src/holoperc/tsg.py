"""Finite transformation semigroups acting on the right.

``x . f`` is written ``f(x)`` here, and ``compose(f, g)`` is "first f,
then g", so a word ``(i, j, k)`` acts as ``gens[i]`` then ``gens[j]`` then
``gens[k]``. State sets are canonical sorted tuples of one-based state ids.
"""

from collections import deque
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, InvalidInputError
from .netmodel import Transformation


def canonical_set(states: Iterable[int]) -> tuple:
    return tuple(sorted({int(s) for s in states}))


def mask_of(states: Iterable[int]) -> int:
    m = 0
    for s in states:
        m |= 1 << (int(s) - 1)
    return m


def states_of(mask: int) -> tuple:
    out = []
    x = 1
    while mask:
        if mask & 1:
            out.append(x)
        mask >>= 1
        x += 1
    return tuple(out)


def compose(f: Transformation, g: Transformation) -> Transformation:
    """``f`` then ``g``."""
    if f.size != g.size:
        raise InvalidInputError(f"cannot compose maps on {f.size} and {g.size} states")
    label = f"{f.label}{g.label}" if f.label and g.label else ""
    return Transformation(g.table[f.table], label)


def apply_word(word: Sequence[int], gens: Sequence[Transformation], size: int | None = None) -> Transformation:
    if size is None:
        size = gens[0].size
    tab = np.arange(size)
    for i in word:
        tab = gens[i].table[tab]
    return Transformation(tab)


def act_on_set(states: Iterable[int], f: Transformation) -> tuple:
    return canonical_set(f(x) for x in states)


def format_word(word: Sequence[int], labels: Sequence[str]) -> str:
    """Render a word with run-length powers, e.g. ``t^2 s9``; empty word is ``e``."""
    if not word:
        return "e"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        run = j - i
        parts.append(labels[word[i]] if run == 1 else f"{labels[word[i]]}^{run}")
        i = j
    return " ".join(parts)


def orbit_closure(seed: Iterable[int], gens: Sequence[Transformation]) -> dict:
    """All sets ``seed . w`` with a shortest witness word for each.

    Breadth-first in generator order, so each witness is the
    lexicographically least among the shortest words. The seed itself is
    included with the empty word.
    """
    if not gens:
        raise InvalidInputError("orbit closure needs at least one generator")
    start = canonical_set(seed)
    found = {start: ()}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        w = found[cur]
        for gi, g in enumerate(gens):
            img = act_on_set(cur, g)
            if img not in found:
                found[img] = w + (gi,)
                queue.append(img)
    return found


def enumerate_semigroup(gens: Sequence[Transformation], cap: int = 100_000) -> set:
    """Every product of one or more generators, by right-multiplication closure."""
    if not gens:
        return set()
    size = gens[0].size
    for g in gens:
        if g.size != size:
            raise InvalidInputError("generators act on different state sets")
    seen = {}
    queue = deque()
    for g in gens:
        key = g.table.tobytes()
        if key not in seen:
            seen[key] = g.table
            queue.append(g.table)
    while queue:
        cur = queue.popleft()
        for g in gens:
            nxt = g.table[cur]
            key = nxt.tobytes()
            if key not in seen:
                if len(seen) >= cap:
                    raise CapacityError(f"semigroup has more than cap={cap} elements")
                seen[key] = nxt
                queue.append(nxt)
    return {Transformation(tab) for tab in seen.values()}
