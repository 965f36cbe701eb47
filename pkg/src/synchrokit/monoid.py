"""Transition-monoid machinery: group order, closure, and structural tests.

The deciding criterion used by :func:`has_full_transition_monoid` is that the
permutation letters generate the full symmetric group and some letter has
rank ``n - 1``.  Group orders come from a stabilizer chain; a brute-force
closure (:func:`monoid_closure_size`) provides an independent route for small
``n`` and doubles as the test oracle.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .core import Dfa, Transformation

_Perm = tuple[int, ...]


def _mul(p: _Perm, q: _Perm) -> _Perm:
    """Apply ``p`` first, then ``q``."""
    return tuple(q[x] for x in p)


def _inv(p: _Perm) -> _Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


class PermutationGroup:
    """Permutation group on ``{0..n-1}`` with a stabilizer chain.

    The chain is built with deterministic base-point and orbit ordering, so
    repeated constructions from the same generators behave identically.
    """

    def __init__(self, n: int, generators: Iterable[Transformation | Sequence[int]]):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self._identity = tuple(range(n))
        gens: list[_Perm] = []
        for g in generators:
            images = tuple(g.images) if isinstance(g, Transformation) else tuple(g)
            if len(images) != n or sorted(images) != list(range(n)):
                raise ValueError(f"generator {images!r} is not a permutation of 0..{n - 1}")
            if images != self._identity and images not in gens:
                gens.append(images)
        # Per level: base point, generators fixing all earlier base points,
        # and the transversal orbit -> coset representative.
        self._base: list[int] = []
        self._gens: list[list[_Perm]] = []
        self._orbits: list[dict[int, _Perm]] = []
        if gens:
            self._base.append(min(x for g in gens for x in range(n) if g[x] != x))
            self._gens.append(list(gens))
            self._orbits.append({})
            self._build()

    def _recompute_orbit(self, level: int) -> None:
        b = self._base[level]
        orbit = {b: self._identity}
        queue = [b]
        while queue:
            p = queue.pop(0)
            up = orbit[p]
            for s in self._gens[level]:
                q = s[p]
                if q not in orbit:
                    orbit[q] = _mul(up, s)
                    queue.append(q)
        self._orbits[level] = orbit

    def _strip(self, g: _Perm, start: int) -> tuple[_Perm, int]:
        """Sift ``g`` through levels ``start..``; return (residue, stuck level)."""
        h = g
        for j in range(start, len(self._base)):
            p = h[self._base[j]]
            rep = self._orbits[j].get(p)
            if rep is None:
                return h, j
            h = _mul(h, _inv(rep))
            if h == self._identity:
                return h, j
        return h, len(self._base)

    def _build(self) -> None:
        self._recompute_orbit(0)
        i = len(self._base) - 1
        while i >= 0:
            restart = False
            orbit_points = sorted(self._orbits[i])
            reps = self._orbits[i]
            for p in orbit_points:
                up = reps[p]
                for s in self._gens[i]:
                    target = reps[s[p]]
                    schreier = _mul(_mul(up, s), _inv(target))
                    if schreier == self._identity:
                        continue
                    residue, j = self._strip(schreier, i + 1)
                    if residue == self._identity:
                        continue
                    # The residue fixes base[0..j-1]; register it on every
                    # level from i+1 through j and resume verification at j.
                    if j == len(self._base):
                        self._base.append(min(x for x in range(self.n) if residue[x] != x))
                        self._gens.append([])
                        self._orbits.append({})
                    for level in range(i + 1, j + 1):
                        self._gens[level].append(residue)
                        self._recompute_orbit(level)
                    i = j
                    restart = True
                    break
                if restart:
                    break
            if not restart:
                i -= 1

    def order(self) -> int:
        result = 1
        for orbit in self._orbits:
            result *= len(orbit)
        return result

    def contains(self, p: Transformation | Sequence[int]) -> bool:
        images = tuple(p.images) if isinstance(p, Transformation) else tuple(p)
        if len(images) != self.n or sorted(images) != list(range(self.n)):
            raise ValueError("membership is defined for permutations only")
        residue, _ = self._strip(images, 0)
        return residue == self._identity


def generates_symmetric_group(perms: Sequence[Transformation], n: int) -> bool:
    """Do the given permutations generate the full symmetric group?"""
    for t in perms:
        if t.n != n:
            raise ValueError("permutation size mismatch")
        if not t.is_permutation():
            raise ValueError(f"{t.images!r} is not a permutation")
    if n == 1:
        return True
    return PermutationGroup(n, perms).order() == math.factorial(n)


def is_two_transitive(perms: Sequence[Transformation], n: int) -> bool:
    """Is the generated group transitive on ordered pairs of distinct states?"""
    if n < 2:
        raise ValueError("2-transitivity needs at least two states")
    images = []
    for t in perms:
        if t.n != n:
            raise ValueError("permutation size mismatch")
        if not t.is_permutation():
            raise ValueError(f"{t.images!r} is not a permutation")
        images.append(t.images)
    start = (0, 1)
    seen = {start}
    queue = [start]
    while queue:
        u, v = queue.pop(0)
        for g in images:
            nxt = (g[u], g[v])
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return len(seen) == n * (n - 1)


def has_full_transition_monoid(d: Dfa) -> bool:
    """True iff the letters generate every transformation of the state set.

    Criterion: the permutation letters generate the symmetric group and some
    letter has rank ``n - 1``.  The single-state automaton is trivially full.
    """
    n = d.n
    if n == 1:
        return True
    if not any(t.rank() == n - 1 for _, t in d.letters):
        return False
    perms = [t for _, t in d.letters if t.is_permutation()]
    return generates_symmetric_group(perms, n)


def monoid_closure_size(transformations: Sequence[Transformation], limit: int | None = None) -> int:
    """Size of the transformation monoid generated by the given maps.

    Plain breadth-first closure under composition (including the identity).
    Exponential in general; intended for ``n <= 8``.  ``limit`` aborts the
    enumeration early once the closure is known to exceed it.
    """
    if not transformations:
        raise ValueError("closure of an empty generating set is undefined here")
    n = transformations[0].n
    gens = []
    for t in transformations:
        if t.n != n:
            raise ValueError("transformation size mismatch")
        gens.append(t.images)
    identity = tuple(range(n))
    seen = {identity}
    queue = [identity]
    while queue:
        cur = queue.pop()
        for g in gens:
            nxt = tuple(g[x] for x in cur)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
                if limit is not None and len(seen) > limit:
                    return len(seen)
    return len(seen)
