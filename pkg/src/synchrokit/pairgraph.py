"""Digraph of unordered state pairs under the permutation letters.

The pair digraph has one vertex per unordered pair of distinct states and,
for each permutation letter, an edge from a pair to its image.  Its diameter
lower-bounds how fast any word can bring two states together, and a "descent
certificate" (a value per pair that drops by at most one along every edge)
turns a claimed distance into a machine-checkable proof.

Certificates are available for the two-letter family ``f``: the 7-state
values are a fixed table, and for ``n % 4 == 3, n >= 11`` they come from a
closed-form dispatch.  :func:`extremal_pair_word` builds an explicit word
realizing the certified distance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Dfa, Word


def pair_index(n: int, i: int, j: int) -> int:
    """Canonical index of the unordered pair {i, j} with i < j."""
    if not 0 <= i < j < n:
        raise ValueError(f"need 0 <= i < j < n, got ({i}, {j}) with n={n}")
    return i * n + j - (i + 1) * (i + 2) // 2


def index_pair(n: int, idx: int) -> tuple[int, int]:
    """Inverse of :func:`pair_index`."""
    i = 0
    row = n - 1
    while idx >= row:
        idx -= row
        row -= 1
        i += 1
    return i, i + 1 + idx


@dataclass(frozen=True)
class PairDigraph:
    n: int
    letter_names: tuple[str, ...]
    letter_indices: tuple[int, ...]  # positions of the used letters in the source Dfa
    succ: tuple[tuple[int, ...], ...]  # succ[v][slot] -> vertex

    @property
    def num_vertices(self) -> int:
        return len(self.succ)


def build_pair_digraph(d: Dfa) -> PairDigraph:
    """Pair digraph over the permutation letters of ``d``."""
    perm = d.permutation_letters()
    if not perm:
        raise ValueError("pair digraph needs at least one permutation letter")
    n = d.n
    if n < 2:
        raise ValueError("pair digraph needs at least two states")
    succ = []
    for i in range(n):
        for j in range(i + 1, n):
            row = []
            for li in perm:
                t = d.transformation(li)
                u, v = t.images[i], t.images[j]
                if u > v:
                    u, v = v, u
                row.append(pair_index(n, u, v))
            succ.append(tuple(row))
    return PairDigraph(
        n=n,
        letter_names=tuple(d.letters[li][0] for li in perm),
        letter_indices=tuple(perm),
        succ=tuple(succ),
    )


def _bfs(p: PairDigraph, source: int) -> tuple[list[int], list[tuple[int, int] | None]]:
    """Distances and (parent vertex, letter slot) pointers from one vertex."""
    dist = [-1] * p.num_vertices
    parent: list[tuple[int, int] | None] = [None] * p.num_vertices
    dist[source] = 0
    queue = [source]
    head = 0
    while head < len(queue):
        v = queue[head]
        head += 1
        for slot, w in enumerate(p.succ[v]):
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                parent[w] = (v, slot)
                queue.append(w)
    return dist, parent


def _path_word(p: PairDigraph, parent, target: int) -> Word:
    slots = []
    v = target
    while parent[v] is not None:
        u, slot = parent[v]
        slots.append(slot)
        v = u
    slots.reverse()
    return Word(tuple(p.letter_indices[s] for s in slots))


def pair_distance(
    p: PairDigraph, source: tuple[int, int], target: tuple[int, int]
) -> tuple[int, Word] | None:
    """Shortest word (over the digraph's letters) from one pair to another.

    Returns ``None`` when the target pair is unreachable.  The witness is the
    lexicographically least shortest word under the letter order.
    """
    s = pair_index(p.n, min(source), max(source))
    t = pair_index(p.n, min(target), max(target))
    dist, parent = _bfs(p, s)
    if dist[t] < 0:
        return None
    return dist[t], _path_word(p, parent, t)


@dataclass(frozen=True)
class DiameterResult:
    strongly_connected: bool
    value: int | None
    source: tuple[int, int] | None
    target: tuple[int, int] | None
    word: Word | None
    argmax: tuple[tuple[tuple[int, int], tuple[int, int]], ...] = ()


def diameter(p: PairDigraph) -> DiameterResult:
    """All-sources BFS diameter with a deterministic witness.

    When some pair cannot reach another, the result carries the first such
    ordered pair of pairs (smallest source index, then smallest target) and
    no diameter value.  Otherwise the witness is the argmax with the smallest
    source index, then smallest target index; all argmax pairs are reported.
    """
    nv = p.num_vertices
    best = -1
    argmax: list[tuple[tuple[int, int], tuple[int, int]]] = []
    best_source = -1
    best_target = -1
    for s in range(nv):
        dist, _ = _bfs(p, s)
        for t in range(nv):
            if dist[t] < 0:
                return DiameterResult(
                    strongly_connected=False,
                    value=None,
                    source=index_pair(p.n, s),
                    target=index_pair(p.n, t),
                    word=None,
                )
            if dist[t] > best:
                best = dist[t]
                argmax = [(index_pair(p.n, s), index_pair(p.n, t))]
                best_source, best_target = s, t
            elif dist[t] == best:
                argmax.append((index_pair(p.n, s), index_pair(p.n, t)))
    dist, parent = _bfs(p, best_source)
    word = _path_word(p, parent, best_target)
    return DiameterResult(
        strongly_connected=True,
        value=best,
        source=index_pair(p.n, best_source),
        target=index_pair(p.n, best_target),
        word=word,
        argmax=tuple(argmax),
    )


def scc_count(num_vertices: int, edges) -> int:
    """Number of strongly connected components (iterative Kosaraju)."""
    adj: list[list[int]] = [[] for _ in range(num_vertices)]
    radj: list[list[int]] = [[] for _ in range(num_vertices)]
    for u, v in edges:
        adj[u].append(v)
        radj[v].append(u)
    order = []
    seen = [False] * num_vertices
    for start in range(num_vertices):
        if seen[start]:
            continue
        stack = [(start, 0)]
        seen[start] = True
        while stack:
            v, i = stack.pop()
            if i < len(adj[v]):
                stack.append((v, i + 1))
                w = adj[v][i]
                if not seen[w]:
                    seen[w] = True
                    stack.append((w, 0))
            else:
                order.append(v)
    count = 0
    seen = [False] * num_vertices
    for start in reversed(order):
        if seen[start]:
            continue
        count += 1
        stack = [start]
        seen[start] = True
        while stack:
            v = stack.pop()
            for w in radj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
    return count


def is_strongly_connected(p: PairDigraph) -> bool:
    edges = ((v, w) for v in range(p.num_vertices) for w in p.succ[v])
    return scc_count(p.num_vertices, edges) == 1


# ---------------------------------------------------------------------------
# Descent certificates for the `f` family.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairCertificate:
    """Per-pair values that drop by at most 1 along every pair-digraph edge.

    ``values[pair_index(n, i, j)]`` holds the value of the pair {i, j}.
    The certified statement: any word mapping ``start`` to ``target`` has
    length at least ``values[start] - values[target]``.
    """

    n: int
    values: tuple[int, ...]
    start: tuple[int, int]
    target: tuple[int, int]

    def value_of(self, i: int, j: int) -> int:
        return self.values[pair_index(self.n, min(i, j), max(i, j))]

    def bound(self) -> int:
        return self.value_of(*self.start) - self.value_of(*self.target)


# Values for the 7-state automaton, keyed by 1-based state pairs.
_CERT7 = {
    (1, 2): 6, (1, 3): 14, (1, 4): 7, (1, 5): 3, (1, 6): 6, (1, 7): 11,
    (2, 3): 9, (2, 4): 15, (2, 5): 10, (2, 6): 5, (2, 7): 2,
    (3, 4): 8, (3, 5): 1, (3, 6): 4, (3, 7): 10,
    (4, 5): 9, (4, 6): 7, (4, 7): 0,
    (5, 6): 13, (5, 7): 11, (6, 7): 12,
}


def _chain_decompose(state: int) -> tuple[int, int]:
    """Write a 1-based chain state (5 <= state <= 2k+3) as 4m+r, r in 1..4."""
    r = state % 4
    if r == 0:
        r = 4
    return (state - r) // 4, r


def _half(x: int) -> int:
    if x % 2 != 0:
        raise AssertionError(f"certificate formula produced a half-integer from {x}")
    return x // 2


def _certificate_value(n: int, i: int, j: int) -> int:
    """Value of the 1-based pair (i, j), i < j, for n % 4 == 3, n >= 11.

    One dispatch, mirroring the two published value lists: first the pairs
    touching a central state (1..4) or an extreme state (2k+4, 2k+5), then
    the pairs of two chain states.  Within a clause, special cases come
    before the general case.
    """
    k = (n - 5) // 2
    n1 = _half(k + 3)
    n2 = (k + 4) * (k - 1)
    hi1, hi2 = 2 * k + 4, 2 * k + 5

    # Pairs of two central states.
    if j <= 4:
        return {
            (1, 2): n1 + n2 + 2 * k + 1,
            (1, 3): n1 + n2 + 4 * k + 7,
            (1, 4): n1 + n2 + 2 * k + 2,
            (2, 3): n1 + n2 + 2 * k + 4,
            (2, 4): n1 + n2 + 4 * k + 8,
            (3, 4): n1 + n2 + 2 * k + 3,
        }[(i, j)]

    # A central state with a chain or extreme state.
    if i <= 4:
        if i == 1:
            if j == hi1:
                return n1 + k + 2
            if j == hi2:
                return n1 + 2 * k + 8
            m, r = _chain_decompose(j)
            if r == 1:
                if m == n1 - 1:
                    return _half(k + 3)
                return n1 + (k + 4) * (k - 2 * m - 1) + 2 * k + 3
            if r == 2:
                return n1 + (k + 4) * (k - 2 * m - 1) + 2 * k - 2 * m + 2
            if r == 3:
                if m == 1:
                    return n1 + n2 + 2 * k + 6
                return n1 + (k + 4) * (k - 2 * m + 1) + 2 * k + 8
            return n1 + (k + 4) * (k - 2 * m + 1) + 2 * k - 2 * m + 3
        if i == 2:
            if j == hi1:
                return n1 + k + 1
            if j == hi2:
                return n1 - 1
            m, r = _chain_decompose(j)
            if r == 1:
                if m == 1:
                    return n1 + n2 + 2 * k + 5
                return n1 + (k + 4) * (k - 2 * m + 1) + 2 * k + 7
            if r == 2:
                return n1 + (k + 4) * (k - 2 * m + 1) + 2 * k - 2 * m + 2
            if r == 3:
                return n1 + (k + 4) * (k - 2 * m - 1) + 2 * k + 6
            return n1 + (k + 4) * (k - 2 * m - 1) + 2 * k - 2 * m + 1
        if i == 3:
            if j == hi1:
                return n1 + k
            if j == hi2:
                return n1 + 2 * k + 6
            m, r = _chain_decompose(j)
            if r == 1:
                if m == n1 - 1:
                    return _half(k - 1)
                return n1 + (k + 4) * (k - 2 * m - 1) + 2 * k + 5
            if r == 2:
                return n1 + (k + 4) * (k - 2 * m - 1) + 2 * k - 2 * m + 4
            if r == 3:
                if m == 1:
                    return n1 + n2 + 2 * k + 5
                return n1 + (k + 4) * (k - 2 * m + 1) + 2 * k + 6
            return n1 + (k + 4) * (k - 2 * m + 1) + 2 * k - 2 * m + 1
        # i == 4
        if j == hi1:
            return n1 + k + 3
        if j == hi2:
            return n1 + 1
        m, r = _chain_decompose(j)
        if r == 1:
            if m == 1:
                return n1 + n2 + 2 * k + 4
            return n1 + (k + 4) * (k - 2 * m + 1) + 2 * k + 5
        if r == 2:
            return n1 + (k + 4) * (k - 2 * m + 1) + 2 * k - 2 * m + 4
        if r == 3:
            return n1 + (k + 4) * (k - 2 * m - 1) + 2 * k + 4
        return n1 + (k + 4) * (k - 2 * m - 1) + 2 * k - 2 * m + 3

    # The two extreme states together.
    if i == hi1 and j == hi2:
        return n1 + n2 + 3 * k + 6

    # A chain state with an extreme state.
    if j in (hi1, hi2):
        mp, rp = _chain_decompose(i)
        if rp == 1:
            if j == hi1:
                if 2 * mp == k + 1:
                    return n1 + n2 + 3 * k + 7
                return n1 + (k + 4) * (2 * mp) + k + 1
            if mp == n1 - 1:
                return n1 + (k + 4) * (2 * mp - 2) + 2 * k + 4 + 2 * mp
            return n1 + (k + 4) * (2 * mp - 2) + 2 * k + 5 + 2 * mp
        if rp == 2:
            if j == hi1:
                return n1 + (k + 4) * 2 * mp + k + 1 + 4 * mp
            if mp == 1:
                return n1 + 2 * k + 9
            if 2 * mp == k + 1:
                return n1 + n2 + 2 * k + mp + 8
            return n1 + (k + 4) * (2 * mp - 2) + 2 * k + 2 * mp + 7
        if rp == 3:
            if j == hi1:
                return n1 + (k + 4) * (2 * mp) + k
            if 2 * mp == k - 1:
                return n1 + (k + 4) * (2 * mp) + 2 * k + 2 * mp + 5
            return n1 + (k + 4) * (2 * mp) + 2 * k + 2 * mp + 6
        # rp == 4
        if j == hi1:
            return n1 + (k + 4) * 2 * mp + k + 2 + 4 * mp
        if 2 * mp == k - 1:
            return n1 + n2 + 3 * k + 5
        return n1 + (k + 4) * (2 * mp) + 2 * k + 2 * mp + 8

    # Two chain states.
    mp, rp = _chain_decompose(i)
    m, r = _chain_decompose(j)
    big_m = m + mp
    big_mp = m - mp
    if rp == 1:
        if r == 1:
            if m == mp + 1:
                return n1 + (k + 4) * (k - 2 * big_mp + 1) + 2 * k + 2 * mp + 4
            return n1 + (k + 4) * (k - 2 * big_mp + 1) + 2 * k + 2 * mp + 5
        if r == 2:
            if mp == m:
                return n1 + n2 + 4 * k + 8 - 2 * m
            return n1 + (k + 4) * (k - 2 * big_mp + 1) + 2 * k - 2 * m + 2
        if r == 3:
            if 2 * big_m < k + 1:
                return n1 + (k + 4) * (k - 2 * big_m - 1) + 2 * k + 2 * mp + 4
            if 2 * big_m == k + 1:
                return _half(4 * m - k - 1)
            return n1 + (k + 4) * (2 * big_m - k - 3) + 2 * k + 2 * mp + 5
        if 2 * big_m < k + 1:
            return n1 + (k + 4) * (k - 2 * big_m - 1) + 2 * k - 2 * m + 3
        if 2 * big_m == k + 1:
            return n1 + 2 * m
        return n1 + (k + 4) * (2 * big_m - k - 3) + 2 * k + 2 * m + 8
    if rp == 2:
        if r == 1:
            if mp == m - 1:
                return n1 + n2 + 2 * k + 2 * mp + 5
            return n1 + (k + 4) * (k - 2 * big_mp + 1) + 2 * k + 2 * mp + 7
        if r == 2:
            return n1 + (k + 4) * (k - 2 * big_mp + 1) + 2 * k - 2 * m + 4 * mp + 2
        if r == 3:
            if 2 * big_m < k + 1:
                return n1 + (k + 4) * (k - 2 * big_m - 1) + 2 * k - 2 * mp + 4
            if 2 * big_m == k + 1:
                return n1 + 2 * mp - 1
            return n1 + (k + 4) * (2 * big_m - k - 3) + 2 * k + 2 * mp + 7
        if 2 * big_m < k + 1:
            return n1 + (k + 4) * (k - 2 * big_m - 1) + 2 * k - 2 * m + 1
        if 2 * big_m == k + 1:
            return n1 + k + 2 * mp + 1
        return n1 + (k + 4) * (2 * big_m - k - 1) + 4 * mp + 2 * m
    if rp == 3:
        if r == 1:
            if 2 * big_m < k + 1:
                return n1 + (k + 4) * (k - 2 * big_m - 1) + 2 * k + 2 * mp + 5
            if 2 * big_m == k + 1:
                return _half(4 * m - k - 3)
            return n1 + (k + 4) * (2 * big_m - k - 3) + 2 * k + 2 * mp + 6
        if r == 2:
            if 2 * big_m < k + 1:
                return n1 + (k + 4) * (k - 2 * big_m - 1) + 2 * k - 2 * m + 4
            if 2 * big_m == k + 1:
                return n1 + 2 * m - 1
            return n1 + (k + 4) * (2 * big_m - k - 3) + 2 * k + 2 * m + 7
        if r == 3:
            if m == mp + 1:
                return n1 + (k + 4) * (k - 2 * big_mp + 1) + 2 * k + 2 * m + 3
            return n1 + (k + 4) * (k - 2 * big_mp + 1) + 2 * k + 2 * mp + 6
        if mp == m:
            return n1 + n2 + 4 * k + 7 - 2 * m
        return n1 + (k + 4) * (k - 2 * big_mp + 1) + 2 * k - 2 * m + 1
    # rp == 4
    if r == 1:
        if 2 * big_m < k + 1:
            return n1 + (k + 4) * (k - 2 * big_m - 1) + 2 * k - 2 * mp + 3
        if 2 * big_m == k + 1:
            return n1 + 2 * mp
        return n1 + (k + 4) * (2 * big_m - k - 3) + 2 * k + 2 * mp + 8
    if r == 2:
        if 2 * big_m < k + 1:
            return n1 + (k + 4) * (k - 2 * big_m - 1) + 2 * k - 2 * m + 2
        if 2 * big_m == k + 1:
            return n1 + k + 2 * mp + 2
        return n1 + (k + 4) * (2 * big_m - k - 1) + 4 * mp + 2 * m + 1
    if r == 3:
        if m == mp + 1:
            return n1 + n2 + 2 * k + 2 * mp + 6
        return n1 + (k + 4) * (k - 2 * big_mp + 1) + 2 * k + 2 * mp + 8
    return n1 + (k + 4) * (k - 2 * big_mp + 1) + 2 * k - 2 * m + 4 * mp + 3


def pair_certificate(n: int) -> PairCertificate:
    """Descent certificate for the pair digraph of the ``f`` automaton.

    Defined for ``n == 7`` (fixed table) and ``n % 4 == 3, n >= 11``
    (closed form).  Construction asserts completeness: every pair receives
    exactly one non-negative value.
    """
    if n == 7:
        table = {(i - 1, j - 1): v for (i, j), v in _CERT7.items()}
        start, target = (1, 3), (3, 6)
    elif n % 4 == 3 and n >= 11:
        k = (n - 5) // 2
        table = {}
        for i in range(1, n):
            for j in range(i + 1, n + 1):
                table[(i - 1, j - 1)] = _certificate_value(n, i, j)
        start, target = (1, 3), (k + 1, k + 3)
    else:
        raise ValueError("certificate is defined for n = 7 and n % 4 == 3, n >= 11")
    count = n * (n - 1) // 2
    if len(table) != count:
        raise AssertionError("certificate table does not cover every pair exactly once")
    values = [0] * count
    for (i, j), val in table.items():
        if not isinstance(val, int) or val < 0:
            raise AssertionError(f"certificate value for pair ({i}, {j}) is {val!r}")
        values[pair_index(n, i, j)] = val
    return PairCertificate(n=n, values=tuple(values), start=start, target=target)


@dataclass(frozen=True)
class CertificateCheck:
    valid: bool
    # (pair, letter name, image pair) of the first failing edge, if any.
    counterexample: tuple[tuple[int, int], str, tuple[int, int]] | None = None


def verify_certificate(p: PairDigraph, cert: PairCertificate) -> CertificateCheck:
    """Check the descent property on every edge of the pair digraph."""
    if cert.n != p.n:
        raise ValueError("certificate and digraph disagree on the state count")
    for v in range(p.num_vertices):
        for slot, w in enumerate(p.succ[v]):
            if cert.values[w] < cert.values[v] - 1:
                return CertificateCheck(
                    valid=False,
                    counterexample=(
                        index_pair(p.n, v),
                        p.letter_names[slot],
                        index_pair(p.n, w),
                    ),
                )
    return CertificateCheck(valid=True)


def apply_word_to_pair(d: Dfa, pair: tuple[int, int], w: Word) -> tuple[int, int]:
    """Image of an unordered pair under a word (sorted; may degenerate)."""
    u, v = pair
    for li in w:
        t = d.transformation(li)
        u, v = t.images[u], t.images[v]
    return (u, v) if u <= v else (v, u)


def _alternating_ba(count: int) -> list[int]:
    """Letter indices of (ba)^count b over the two-letter alphabet a=0, b=1."""
    return [1, 0] * count + [1]


def extremal_pair_word(n: int) -> Word:
    """Word over the ``f`` alphabet mapping the certified start pair to the
    zero-value pair, with length exactly the certified bound.

    Defined for ``n % 4 == 3, n >= 11``.  At ``n == 11`` the inner group
    degenerates to its boundary rows: the single group is simultaneously the
    first and the last one.  The closing factor is the alternating word
    starting with ``b`` of length ``(k - 1) / 2`` (when that length is odd it
    reads (ba)^((k-3)/4) b; even lengths end with ``a``).
    """
    if n % 4 != 3 or n < 11:
        raise ValueError("extremal word is defined for n % 4 == 3, n >= 11")
    k = (n - 5) // 2
    a3ba = [0, 0, 0, 1, 0]
    w: list[int] = [0]
    w += _alternating_ba(k)
    w += [0, 1, 0, 0, 0, 1, 0]
    w += _alternating_ba(k - 1)
    for j in range(1, (k - 1) // 2 + 1):
        w += a3ba
        w += _alternating_ba(j - 1)
        w += a3ba
        w += _alternating_ba(k - 1 - j)
    w += [0, 0]
    closing_len = (k - 1) // 2
    w += [1 if i % 2 == 0 else 0 for i in range(closing_len)]
    return Word(tuple(w))


def pair_digraph_dot(p: PairDigraph, values: PairCertificate | None = None) -> str:
    """DOT rendering of the pair digraph, optionally labeled with values."""
    lines = ["digraph pairs {"]
    for v in range(p.num_vertices):
        i, j = index_pair(p.n, v)
        label = f"q{i + 1}q{j + 1}"
        if values is not None:
            label += f"\\n{values.values[v]}"
        lines.append(f'  {v} [label="{label}"];')
    for v in range(p.num_vertices):
        grouped: dict[int, list[str]] = {}
        for slot, w in enumerate(p.succ[v]):
            grouped.setdefault(w, []).append(p.letter_names[slot])
        for w, names in sorted(grouped.items()):
            lines.append(f'  {v} -> {w} [label="{",".join(names)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
