"""Permutation groups given by generators, small enough to list."""

from collections import deque
from math import gcd
from typing import Iterable, Sequence

from .errors import InvalidInputError

Perm = tuple


def identity_perm(degree: int) -> Perm:
    return tuple(range(degree))


def perm_mul(p: Perm, q: Perm) -> Perm:
    """``p`` then ``q``."""
    return tuple(q[i] for i in p)


def perm_inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def perm_order(p: Perm) -> int:
    seen = [False] * len(p)
    order = 1
    for i in range(len(p)):
        if not seen[i]:
            length = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            order = order * length // gcd(order, length)
    return order


def perm_cycles(p: Perm) -> list:
    """Non-trivial cycles, each starting at its smallest point."""
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if seen[i]:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j)
            j = p[j]
        if len(cyc) > 1:
            out.append(tuple(cyc))
    return out


def check_perm(p: Sequence[int], degree: int | None = None) -> Perm:
    p = tuple(int(v) for v in p)
    if degree is not None and len(p) != degree:
        raise InvalidInputError(f"permutation of length {len(p)} on {degree} points")
    if sorted(p) != list(range(len(p))):
        raise InvalidInputError(f"{p} is not a bijection on 0..{len(p) - 1}")
    return p


def closure(gens: Iterable[Perm], degree: int, cap: int = 1_000_000) -> set:
    """All elements of the group generated by ``gens`` (identity included)."""
    gens = list(gens)
    e = identity_perm(degree)
    elems = {e}
    queue = deque([e])
    while queue:
        cur = queue.popleft()
        for g in gens:
            nxt = perm_mul(cur, g)
            if nxt not in elems:
                elems.add(nxt)
                if len(elems) > cap:
                    raise InvalidInputError(f"group larger than cap={cap}")
                queue.append(nxt)
    return elems


def _is_abelian(gens: Sequence[Perm]) -> bool:
    return all(perm_mul(a, b) == perm_mul(b, a) for a in gens for b in gens)


def name_group(elements: set, gens: Sequence[Perm]) -> str:
    """Structure label for a listed group: exact up to order 12, else ``Ck``/``order-k``."""
    order = len(elements)
    if order == 1:
        return "1"
    orders = [perm_order(g) for g in elements]
    if max(orders) == order:
        return f"C{order}"
    if order > 12:
        return f"order-{order}"
    abelian = _is_abelian(list(gens))
    involutions = orders.count(2)
    if order == 4:
        return "V4"
    if order == 6:
        return "S3"
    if order == 8:
        if abelian:
            return "C4 x C2" if 4 in orders else "C2 x C2 x C2"
        return "D8" if involutions == 5 else "Q8"
    if order == 9:
        return "C3 x C3"
    if order == 10:
        return "D10"
    if order == 12:
        if abelian:
            return "C6 x C2"
        if 6 not in orders and 4 not in orders:
            return "A4"
        return "D12" if involutions == 7 else "C3 : C4"
    raise AssertionError(f"unhandled group of order {order}")  # pragma: no cover


def identify_group(perms: Iterable[Sequence[int]]) -> str:
    """Name of the group generated by ``perms``; the empty list gives ``"1"``."""
    perms = [check_perm(p) for p in perms]
    if not perms:
        return "1"
    degree = len(perms[0])
    for p in perms:
        if len(p) != degree:
            raise InvalidInputError("generators act on different point sets")
    return name_group(closure(perms, degree), perms)
