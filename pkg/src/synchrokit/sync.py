"""Reset thresholds and reset-word synthesis.

Four synthesizers are provided: exact subset BFS (optimal, exponential),
pair chasing (greedy merging guided by a BFS on state pairs), subset
extension through the excluded/duplicate stratification (quadratic bound
for automata whose transition monoid is all transformations), and the
merging/pairing round simulation for the three-letter cyclic family.
Every synthesizer machine-checks its output and reports the check in the
``verified`` flag of the returned :class:`ResetResult`.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

import numpy as np

from .core import Dfa, StateSet, Transformation, Word, word_transformation
from .families import cb
from .monoid import is_two_transitive
from .pairgraph import scc_count

EXACT_CAP = 25
POTENTIAL_CAP = 20


class _NotSynchronizing:
    """Sentinel outcome of the exact search on non-synchronizing input."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "NOT_SYNCHRONIZING"

    def __bool__(self) -> bool:
        return False


NOT_SYNCHRONIZING = _NotSynchronizing()


class Method(Enum):
    """How a reset word was produced."""

    EXACT_BFS = "exact_bfs"
    PAIRCHASE = "pairchase"
    EXTENSION = "extension"
    CB_ROUNDS = "cb_rounds"


@dataclass(frozen=True)
class ResetResult:
    """A synthesized reset word, the method that built it, and its check."""

    word: Word
    length: int
    method: Method
    verified: bool


def _mask_image(mask: int, images: Sequence[int]) -> int:
    out = 0
    m = mask
    while m:
        low = m & -m
        out |= 1 << images[low.bit_length() - 1]
        m ^= low
    return out


def _resets(d: Dfa, w: Word) -> bool:
    """Whether ``w`` maps the full state set to a single state."""
    images = [t.images for t in d.transformations()]
    mask = (1 << d.n) - 1
    for letter in w:
        mask = _mask_image(mask, images[letter])
    return mask & (mask - 1) == 0


def _byte_tables(t: Transformation) -> list[list[int]]:
    """Per-byte lookup tables: ``tables[b][v]`` ORs the images of byte b's bits."""
    bits = [1 << img for img in t.images]
    tables = []
    for b in range(0, t.n, 8):
        width = min(8, t.n - b)
        table = [0] * (1 << width)
        for v in range(1, 1 << width):
            low = (v & -v).bit_length() - 1
            table[v] = table[v & (v - 1)] | bits[b + low]
        tables.append(table)
    return tables


def reset_threshold_exact(
    d: Dfa, cap: int = EXACT_CAP
) -> tuple[int, Word] | _NotSynchronizing:
    """Exact reset threshold by BFS over subsets reachable from the full set.

    Returns ``(rt, word)`` where ``word`` is the lexicographically least
    shortest reset word under the letter order, or ``NOT_SYNCHRONIZING``
    when no singleton subset is reachable.

    Raises:
        ValueError: if ``d.n`` exceeds ``cap``; use pairchase_reset_word or
            extension_reset_word on larger inputs.
    """
    if d.n > cap:
        raise ValueError(
            f"exact subset search over {d.n} states exceeds the cap of {cap}; "
            "use pairchase_reset_word or extension_reset_word instead"
        )
    if d.n == 1:
        return 0, Word(())
    tables = [_byte_tables(t) for t in d.transformations()]
    shift = [8 * b for b in range(len(tables[0]))]
    full = (1 << d.n) - 1
    # BFS with letters tried in index order discovers every subset along the
    # lexicographically least of its shortest paths, so the first singleton
    # discovered yields the canonical witness.
    parent: dict[int, tuple[int, int] | None] = {full: None}
    queue = deque([full])
    while queue:
        mask = queue.popleft()
        for letter, tabs in enumerate(tables):
            image = 0
            for b, table in enumerate(tabs):
                image |= table[(mask >> shift[b]) & 0xFF]
            if image in parent:
                continue
            parent[image] = (mask, letter)
            if image & (image - 1) == 0:
                letters: list[int] = []
                cur = image
                while True:
                    step = parent[cur]
                    if step is None:
                        break
                    cur, letter_idx = step
                    letters.append(letter_idx)
                letters.reverse()
                return len(letters), Word(tuple(letters))
            queue.append(image)
    return NOT_SYNCHRONIZING


def _merge_distances(
    d: Dfa,
) -> tuple[dict[tuple[int, int], int], dict[tuple[int, int], int]]:
    """Distance from each unordered state pair to a directly mergeable pair.

    Returns ``(dist, merge_letter)`` keyed by pairs ``(i, j)``, ``i < j``.
    ``merge_letter`` holds the least letter collapsing the pair and is
    populated exactly for pairs at distance zero; pairs absent from ``dist``
    cannot be merged by any word.
    """
    n = d.n
    images = [t.images for t in d.transformations()]
    rev: dict[tuple[int, int], list[tuple[int, int]]] = {}
    dist: dict[tuple[int, int], int] = {}
    merge_letter: dict[tuple[int, int], int] = {}
    for i in range(n):
        for j in range(i + 1, n):
            src = (i, j)
            for letter, img in enumerate(images):
                a, b = img[i], img[j]
                if a == b:
                    if src not in merge_letter:
                        merge_letter[src] = letter
                        dist[src] = 0
                else:
                    key = (a, b) if a < b else (b, a)
                    rev.setdefault(key, []).append(src)
    frontier = deque(sorted(merge_letter))
    while frontier:
        p = frontier.popleft()
        for q in rev.get(p, ()):
            if q not in dist:
                dist[q] = dist[p] + 1
                frontier.append(q)
    return dist, merge_letter


def is_synchronizing(d: Dfa) -> bool:
    """Whether some word maps the whole state set to a single state.

    Decided on pairs of states: the automaton is synchronizing iff every
    pair of distinct states can be mapped to a single state by some word.
    """
    if d.n == 1:
        return True
    dist, _ = _merge_distances(d)
    return len(dist) == d.n * (d.n - 1) // 2


def _chase_word(
    d: Dfa,
    pair: tuple[int, int],
    dist: Mapping[tuple[int, int], int],
    merge_letter: Mapping[tuple[int, int], int],
) -> list[int]:
    """Lexicographically least shortest word merging ``pair``, greedily."""
    images = [t.images for t in d.transformations()]
    i, j = pair
    remaining = dist[pair]
    letters: list[int] = []
    while remaining > 0:
        for letter, img in enumerate(images):
            a, b = img[i], img[j]
            if a == b:
                continue
            key = (a, b) if a < b else (b, a)
            if dist.get(key) == remaining - 1:
                letters.append(letter)
                i, j = key
                remaining -= 1
                break
        else:  # pragma: no cover - contradicts the BFS distances
            raise AssertionError("no letter decreases the merge distance")
    letters.append(merge_letter[(i, j)])
    return letters


def pairchase_reset_word(d: Dfa) -> ResetResult:
    """Reset word by repeatedly driving one image pair onto a mergeable pair.

    Each round picks, among the pairs of the current image, one with the
    shortest distance (over the whole alphabet, by BFS on state pairs) to a
    pair collapsed by some letter, applies that shortest word, and applies
    the collapsing letter.  The image shrinks every round, so there are at
    most n - 1 rounds.

    Raises:
        ValueError: if the automaton is not synchronizing.
    """
    n = d.n
    if n == 1:
        return ResetResult(Word(()), 0, Method.PAIRCHASE, True)
    dist, merge_letter = _merge_distances(d)
    if len(dist) < n * (n - 1) // 2:
        raise ValueError("automaton is not synchronizing")
    images = [t.images for t in d.transformations()]
    mask = (1 << n) - 1
    letters: list[int] = []
    while mask & (mask - 1):
        states = [q for q in range(n) if mask >> q & 1]
        best = min(
            ((dist[(i, j)], i, j) for x, i in enumerate(states) for j in states[x + 1 :]),
        )
        step = _chase_word(d, (best[1], best[2]), dist, merge_letter)
        for letter in step:
            mask = _mask_image(mask, images[letter])
        letters.extend(step)
    w = Word(tuple(letters))
    return ResetResult(w, len(w), Method.PAIRCHASE, _resets(d, w))


@dataclass(frozen=True)
class ExtensionStratification:
    """Levelled reachability of (excluded, duplicate) pairs under permutations.

    Level 0 holds the seed edge of every rank n-1 letter; level i adds the
    images of earlier edges under one more permutation letter.  ``witnesses``
    maps each reached ordered pair to its seed letter and the shortest
    permutation word carrying the seed onto it.
    """

    n: int
    max_level: int
    new_edges_by_level: tuple[tuple[tuple[int, int], ...], ...]
    witnesses: Mapping[tuple[int, int], tuple[int, Word]]

    def edges_at(self, level: int) -> frozenset[tuple[int, int]]:
        """All edges witnessed by permutation words of length at most ``level``."""
        out: set[tuple[int, int]] = set()
        for edges in self.new_edges_by_level[: level + 1]:
            out.update(edges)
        return frozenset(out)

    def scc_count_at(self, level: int) -> int:
        """Number of strongly connected components, singletons included."""
        return scc_count(self.n, self.edges_at(level))


def build_extension_stratification(d: Dfa) -> ExtensionStratification:
    """BFS closure of the (excluded, duplicate) pairs under permutation letters.

    Levels stop at 2n - 3: by that depth the edge digraph is strongly
    connected whenever the permutation letters form a 2-transitive group.

    Raises:
        ValueError: if there is no rank n-1 letter or no permutation letter.
    """
    n = d.n
    seeds = d.rank_n_minus_one_letters()
    if not seeds:
        raise ValueError("no letter of rank n-1 to seed the stratification")
    perms = [(i, d.transformation(i)) for i in d.permutation_letters()]
    if not perms:
        raise ValueError("no permutation letters to grow the stratification")
    max_level = 2 * n - 3
    witnesses: dict[tuple[int, int], tuple[int, Word]] = {}
    first: list[tuple[int, int]] = []
    for letter in seeds:
        t = d.transformation(letter)
        edge = (t.excluded_state(), t.duplicate_state())
        if edge not in witnesses:
            witnesses[edge] = (letter, Word(()))
            first.append(edge)
    levels = [tuple(first)]
    frontier = first
    for _ in range(max_level):
        fresh: list[tuple[int, int]] = []
        for q, p in frontier:
            seed, w = witnesses[(q, p)]
            for letter, t in perms:
                img = (t.images[q], t.images[p])
                if img not in witnesses:
                    witnesses[img] = (seed, w + Word((letter,)))
                    fresh.append(img)
        levels.append(tuple(fresh))
        frontier = fresh
        if not fresh:
            break
    while len(levels) <= max_level:
        levels.append(())
    return ExtensionStratification(n, max_level, tuple(levels), witnesses)


def _extension_letters(d: Dfa, strat: ExtensionStratification, x: int) -> list[int]:
    """Extension chain ending in the rank n-1 letter ``x``, back to front."""
    n = d.n
    t = d.transformation(x)
    h = t.duplicate_state()
    r = frozenset(q for q in range(n) if t.images[q] == h)
    word = [x]
    steps = 0
    while len(r) < n:
        best: tuple[int, int, int] | None = None
        best_edge: tuple[int, int] | None = None
        for (q, p), (_, w) in strat.witnesses.items():
            if p in r and q not in r:
                key = (len(w), q, p)
                if best is None or key < best:
                    best = key
                    best_edge = (q, p)
        if best_edge is None:
            raise ValueError(
                "no crossing edge in the stratification; "
                "the permutation letters do not act 2-transitively"
            )
        seed, w = strat.witnesses[best_edge]
        u = [seed, *w]
        back = word_transformation(d, Word(tuple(u)))
        r = frozenset(q for q in range(n) if back.images[q] in r)
        word = u + word
        steps += 1
        if steps > n - 2:  # pragma: no cover - each step grows r strictly
            raise AssertionError("extension exceeded the guaranteed step count")
    return word


def extension_reset_word(d: Dfa) -> ResetResult:
    """Reset word by chained subset extensions through the stratification.

    The word is assembled back to front: each step prepends x w, where the
    pair (excluded(x) w, duplicate(x) w) crosses from outside the growing
    set R into it, so the preimage of R under x w is strictly larger.  At
    most n - 2 extensions of length at most 2n - 2 follow the initial rank
    n-1 letter, for a total of at most 2n^2 - 6n + 5 letters.  When several
    rank n-1 letters exist, each is tried as the initial letter and the
    shortest outcome is kept.

    Raises:
        ValueError: if no letter has rank n-1, or the permutation letters
            neither generate the full monoid with it nor act 2-transitively.
    """
    n = d.n
    if n == 1:
        return ResetResult(Word(()), 0, Method.EXTENSION, True)
    if not d.rank_n_minus_one_letters():
        raise ValueError("extension requires a letter of rank n-1")
    # A full transition monoid implies 2-transitive permutation letters, so
    # the orbit test below is the whole precondition (and far cheaper than
    # computing the group order).
    perms = [d.transformation(i) for i in d.permutation_letters()]
    if not perms or not is_two_transitive(perms, n):
        raise ValueError(
            "extension requires permutation letters generating the "
            "symmetric group or at least acting 2-transitively"
        )
    strat = build_extension_stratification(d)
    best: list[int] | None = None
    for x in d.rank_n_minus_one_letters():
        letters = _extension_letters(d, strat, x)
        if best is None or len(letters) < len(best):
            best = letters
    assert best is not None
    w = Word(tuple(best))
    return ResetResult(w, len(w), Method.EXTENSION, _resets(d, w))


@dataclass(frozen=True)
class CbRound:
    """One merging or pairing round of the token simulation."""

    kind: str
    start: int
    end: int
    size_before: int
    size_after: int
    members_after: tuple[int, ...]


class _TokenRing:
    """Token set on the rotation cycle with O(1) isolation bookkeeping.

    Token positions are stored relative to a rotating offset, making the
    cyclic letter a constant-time operation; a token is isolated when both
    stored neighbours are free, a property rotation preserves.
    """

    def __init__(self, n: int):
        self.n = n
        self.base = set(range(n))
        self.offset = 0
        self.isolated = 0

    @property
    def size(self) -> int:
        return len(self.base)

    def members(self) -> tuple[int, ...]:
        return tuple(sorted((p + self.offset) % self.n for p in self.base))

    def holds(self, state: int) -> bool:
        return (state - self.offset) % self.n in self.base

    def rotate(self) -> None:
        self.offset = (self.offset + 1) % self.n

    def _count_isolated(self, positions: set[int]) -> int:
        count = 0
        for p in positions:
            if p in self.base:
                if (p - 1) % self.n not in self.base and (p + 1) % self.n not in self.base:
                    count += 1
        return count

    def _mutate(self, remove: int, add: int) -> None:
        """Discard one position, insert another, and patch the isolated count."""
        touched = set()
        for p in (remove, add):
            touched.update({(p - 1) % self.n, p, (p + 1) % self.n})
        before = self._count_isolated(touched)
        self.base.discard(remove)
        self.base.add(add)
        self.isolated += self._count_isolated(touched) - before

    def move(self, src_state: int, dst_state: int) -> None:
        """Send the token on ``src_state`` to ``dst_state`` (merging if held)."""
        src = (src_state - self.offset) % self.n
        dst = (dst_state - self.offset) % self.n
        if src not in self.base:
            return
        self._mutate(src, dst)

    def swap(self, state_u: int, state_v: int) -> None:
        u = (state_u - self.offset) % self.n
        v = (state_v - self.offset) % self.n
        if (u in self.base) == (v in self.base):
            return
        if u in self.base:
            self._mutate(u, v)
        else:
            self._mutate(v, u)


def _simulate_cb(n: int, k: int) -> tuple[list[int], list[CbRound]]:
    """Run alternating merging/pairing rounds on the three-letter family."""
    ring = _TokenRing(n)
    letters: list[int] = []
    rounds: list[CbRound] = []
    limit = 4 * n * math.ceil(math.log2(n))
    a, b, c = 0, 1, 2
    swap_lo, swap_hi = k - 1, k % n
    probe = (k + 1) % n
    while ring.size > 1:
        size_before = ring.size
        start = len(letters)
        if ring.isolated == ring.size:
            # pairing: tokens drift until one reaches the swapped slot alone,
            # then shuffles backwards, welding couples one by one
            while ring.isolated > 1:
                if (
                    ring.holds(swap_hi)
                    and not ring.holds(swap_lo)
                    and not ring.holds(probe)
                ):
                    letters.append(c)
                    ring.swap(swap_lo, swap_hi)
                else:
                    letters.append(a)
                    ring.rotate()
                if len(letters) > limit:  # pragma: no cover - bound is proven
                    raise AssertionError("pairing rounds exceeded the length bound")
            kind = "pairing"
        else:
            # merging: couples rotate onto the merge edge and collapse; a
            # merging round only ever begins with at most one isolated token
            assert ring.isolated <= 1
            while ring.isolated < ring.size:
                if ring.holds(0) and ring.holds(1):
                    letters.append(b)
                    ring.move(0, 1)
                else:
                    letters.append(a)
                    ring.rotate()
                if len(letters) > limit:  # pragma: no cover - bound is proven
                    raise AssertionError("merging rounds exceeded the length bound")
            kind = "merging"
        rounds.append(
            CbRound(kind, start, len(letters), size_before, ring.size, ring.members())
        )
    return letters, rounds


def cb_reset_word(n: int, k: int) -> ResetResult:
    """Reset word for the cyclic family with merge and adjacent-swap letters.

    For k = 1 the closed form b(cab)^{n-2} of length 3n - 5 is returned;
    otherwise alternating merging and pairing rounds are simulated under
    rules (M) and (P): merge when both merge-edge states carry tokens, swap
    when the swapped slot carries the only token in its neighbourhood.  The
    result is always shorter than 4 n ceil(log2 n).

    Raises:
        ValueError: if n < 3 or k is out of range.
    """
    d = cb(n, k)
    if k == 1:
        letters = [1] + [2, 0, 1] * (n - 2)
    else:
        letters, _ = _simulate_cb(n, k)
    w = Word(tuple(letters))
    return ResetResult(w, len(w), Method.CB_ROUNDS, _resets(d, w))


def cb_round_trace(n: int, k: int) -> tuple[CbRound, ...]:
    """Round-by-round trace of the simulation; empty for the closed form k = 1."""
    cb(n, k)
    if k == 1:
        return ()
    _, rounds = _simulate_cb(n, k)
    return tuple(rounds)


@dataclass(frozen=True)
class PotentialBound:
    """Outcome of the subset-potential verification."""

    valid: bool
    bound: int | None
    counterexample: tuple[StateSet, int] | None


def potential_lower_bound(
    d: Dfa,
    weights: Sequence[int],
    target: StateSet,
    cap: int = POTENTIAL_CAP,
) -> PotentialBound:
    """Certified lower bound on the length of words sending Q into ``target``.

    Verifies over every non-empty subset S and letter a that the total
    weight of S a is at least the total weight of S minus one.  When that
    holds, any word w with Q w contained in ``target`` satisfies
    len(w) >= weight(Q) - weight(target), and this difference is returned;
    otherwise the least violating (subset, letter) pair is reported.

    Raises:
        ValueError: on negative weights, dimension mismatch, or n over ``cap``.
    """
    n = d.n
    if n > cap:
        raise ValueError(f"potential verification over {n} states exceeds the cap of {cap}")
    if target.n != n:
        raise ValueError("target does not match the automaton's state count")
    if len(weights) != n:
        raise ValueError("need exactly one weight per state")
    if any(w < 0 for w in weights):
        raise ValueError("weights must be non-negative")
    size = 1 << n
    # value(m) = value(m without its lowest bit) + contribution of that bit;
    # stripping the lowest bit raises it, so fill from the highest bit down
    total = np.zeros(size, dtype=np.int64)
    for bit in reversed(range(n)):
        idx = (np.arange(1 << (n - bit - 1), dtype=np.int64) << (bit + 1)) + (1 << bit)
        total[idx] = total[idx - (1 << bit)] + weights[bit]
    for letter, t in enumerate(d.transformations()):
        image = np.zeros(size, dtype=np.int64)
        for bit in reversed(range(n)):
            idx = (np.arange(1 << (n - bit - 1), dtype=np.int64) << (bit + 1)) + (1 << bit)
            image[idx] = image[idx - (1 << bit)] | np.int64(1 << t.images[bit])
        bad = total[image] < total - 1
        if bad.any():
            mask = int(np.nonzero(bad)[0][0])
            return PotentialBound(False, None, (StateSet(n, mask), letter))
    bound = int(total[size - 1] - total[target.mask])
    return PotentialBound(True, bound, None)
