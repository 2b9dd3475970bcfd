"""Small permutation helpers used by boards and random sampling."""

from __future__ import annotations

from typing import Sequence

from .errors import NotAPermutation

Perm = tuple[int, ...]


def check_permutation(values: Sequence[int], n: int | None = None) -> Perm:
    """Return ``values`` as a tuple after verifying it permutes 0..n-1."""
    perm = tuple(int(v) for v in values)
    if n is not None and len(perm) != n:
        raise NotAPermutation(f"expected {n} entries, got {len(perm)}")
    if sorted(perm) != list(range(len(perm))):
        raise NotAPermutation(f"{list(perm)} is not a permutation of 0..{len(perm) - 1}")
    return perm


def inverse(perm: Sequence[int]) -> Perm:
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return tuple(inv)


def cycles(perm: Sequence[int]) -> list[Perm]:
    """Cycle decomposition, including fixed points.

    Cycles are listed by smallest member and rotated to start at it, so the
    decomposition of a given permutation is always identical.
    """
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        j = perm[start]
        while j != start:
            cyc.append(j)
            seen[j] = True
            j = perm[j]
        out.append(tuple(cyc))
    return out


class UnionFind:
    """Array-based union-find with path halving."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.count = n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:  # keep the smallest element as representative
                ra, rb = rb, ra
            self.parent[rb] = ra
            self.count -= 1


def orbits(n: int, *perms: Sequence[int]) -> list[tuple[int, ...]]:
    """Orbits of the group generated by ``perms`` acting on 0..n-1.

    Forward closure suffices: iterating a permutation from any point walks
    its whole cycle, so inverses add nothing.
    """
    uf = UnionFind(n)
    for p in perms:
        for i, j in enumerate(p):
            uf.union(i, j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(uf.find(i), []).append(i)
    return [tuple(groups[root]) for root in sorted(groups)]


def is_transitive(right: Sequence[int], up: Sequence[int]) -> bool:
    """True when the two permutations act transitively on 0..n-1."""
    n = len(right)
    seen = bytearray(n)
    seen[0] = 1
    stack = [0]
    reached = 1
    while stack:
        i = stack.pop()
        for j in (right[i], up[i]):
            if not seen[j]:
                seen[j] = 1
                reached += 1
                stack.append(j)
    return reached == n
