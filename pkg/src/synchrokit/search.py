"""Census and sampling experiments over automata with full transition monoid.

Two kinds of experiment live here.  The exhaustive census enumerates every
automaton made of two permutation letters generating the symmetric group plus
one letter of rank ``n - 1``, reduced up to isomorphism, and reports the
largest exact reset threshold.  The randomized experiments sample permutation
pairs with a seeded Fisher-Yates shuffle and measure reset thresholds or
pair-digraph diameters, with bit-for-bit reproducible output files.

Isomorphism reduction works in two stages.  The rank-``(n-1)`` letter is
first normalized so that its excluded state is 1 and its duplicated state is
0; the leftover symmetry is then the pointwise stabilizer of ``{0, 1}``
combined with swapping the two permutation letters, and only candidates that
are minimal in their orbit under that residual group are evaluated.  The
minimal representative over the *full* relabeling group is available
separately as :func:`canonical_form`.
"""

from __future__ import annotations

import itertools
import json
import math
import multiprocessing
import random
import warnings
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .core import (
    Dfa,
    StateSet,
    Transformation,
    Word,
    apply_word,
    dfa_from_json_dict,
    dfa_to_json_dict,
)
from .monoid import PermutationGroup, is_two_transitive
from .pairgraph import build_pair_digraph, diameter
from .sync import (
    EXACT_CAP,
    NOT_SYNCHRONIZING,
    is_synchronizing,
    pairchase_reset_word,
    reset_threshold_exact,
)

FORMAT_VERSION = 1

#: Default state-count cap for the exhaustive reset-threshold census.
EXHAUSTIVE_STATE_CAP = 7

#: Hard state-count cap for the exhaustive pair-diameter experiment.
PAIR_DIAMETER_CAP = 9

_Perm = tuple[int, ...]


class SearchMode(Enum):
    EXHAUSTIVE = "exhaustive"
    RANDOM = "random"


@dataclass(frozen=True)
class SearchConfig:
    """Parameters shared by the census and the sampling experiments.

    ``trials`` and ``seed`` only matter in :data:`SearchMode.RANDOM`.
    Exhaustive runs above :data:`EXHAUSTIVE_STATE_CAP` states must opt in
    with ``allow_large`` and get a runtime warning in return.
    """

    n: int
    mode: SearchMode
    trials: int = 0
    seed: int = 0
    workers: int = 1
    output_path: str | Path | None = None
    allow_large: bool = False

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError("experiments need at least two states")
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.workers < 1:
            raise ValueError("workers must be positive")
        if self.mode is SearchMode.EXHAUSTIVE and self.n > EXHAUSTIVE_STATE_CAP:
            if not self.allow_large:
                raise ValueError(
                    f"exhaustive mode is capped at n = {EXHAUSTIVE_STATE_CAP};"
                    " pass allow_large=True to override"
                )
            warnings.warn(
                f"exhaustive run with n = {self.n} may take a very long time",
                RuntimeWarning,
                stacklevel=2,
            )


@dataclass(frozen=True)
class SearchRecord:
    """One census result: an automaton with its exact reset threshold.

    ``dfa`` is stored in canonical form and ``witness`` is the
    lexicographically least shortest reset word of that canonical automaton,
    so records compare equal across runs regardless of worker count.
    ``timestamp`` is kept out of seeded runs (it breaks byte-identical
    reruns) and is ``None`` unless a caller fills it in.
    """

    dfa: Dfa
    rt: int
    witness: Word
    timestamp: str | None = None
    config: Mapping[str, object] | None = None

    def verify(self) -> None:
        image = apply_word(StateSet.full(self.dfa.n), self.dfa, self.witness)
        if image.cardinality() != 1 or len(self.witness) != self.rt:
            raise ValueError("record witness does not reset in rt steps")


def record_to_json_dict(record: SearchRecord) -> dict:
    return {
        "type": "record",
        "dfa": dfa_to_json_dict(record.dfa),
        "rt": record.rt,
        "witness": list(record.witness.names(record.dfa)),
        "timestamp": record.timestamp,
        "config": dict(record.config) if record.config is not None else None,
    }


def record_from_json_dict(obj: Mapping[str, object]) -> SearchRecord:
    """Rebuild a record from its JSON form and re-verify the witness."""
    d = dfa_from_json_dict(obj["dfa"])
    letters = [d.letter_index(name) for name in obj["witness"]]
    record = SearchRecord(
        dfa=d,
        rt=int(obj["rt"]),
        witness=Word(tuple(letters)),
        timestamp=obj.get("timestamp"),
        config=obj.get("config"),
    )
    record.verify()
    return record


def _json_line(obj: Mapping[str, object]) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------


def canonical_form(d: Dfa) -> Dfa:
    """Minimum representative of ``d`` up to relabeling states and
    reordering letters of equal rank.

    Every bijection of the state set is applied; for each, letters are
    redistributed among the positions their rank class occupies so that the
    per-position sequence of image rows is smallest.  Letter names stay with
    their positions, so two relabelings of the same automaton (with the same
    name sequence) collapse to one representative.  Reset thresholds are
    invariant under both moves.
    """
    n = d.n
    rows = [t.images for t in d.transformations()]
    by_rank: dict[int, list[int]] = {}
    for pos, t in enumerate(d.transformations()):
        by_rank.setdefault(t.rank(), []).append(pos)
    best: tuple[_Perm, ...] | None = None
    for g in itertools.permutations(range(n)):
        relabeled = []
        for img in rows:
            out = [0] * n
            for q in range(n):
                out[g[q]] = g[img[q]]
            relabeled.append(tuple(out))
        placed: list[_Perm] = list(relabeled)
        for positions in by_rank.values():
            for pos, img in zip(positions, sorted(relabeled[p] for p in positions)):
                placed[pos] = img
        key = tuple(placed)
        if best is None or key < best:
            best = key
    assert best is not None
    return Dfa(
        n,
        tuple(
            (name, Transformation(images))
            for name, images in zip(d.letter_names(), best)
        ),
    )


# ---------------------------------------------------------------------------
# exhaustive reset-threshold census
# ---------------------------------------------------------------------------


def _normalized_rank_letters(n: int) -> tuple[_Perm, ...]:
    """All rank-``(n-1)`` image rows with excluded state 1 and duplicate 0.

    Two states land on 0 and the rest hit ``2..n-1`` bijectively, so every
    conjugacy class of rank-``(n-1)`` letters appears and none misses 1.
    """
    out = []
    for i, j in itertools.combinations(range(n), 2):
        rest = [q for q in range(n) if q != i and q != j]
        for values in itertools.permutations(range(2, n)):
            img = [0] * n
            for q, v in zip(rest, values):
                img[q] = v
            out.append(tuple(img))
    out.sort()
    return tuple(out)


def _residual_group(n: int) -> tuple[tuple[_Perm, _Perm], ...]:
    """Pairs ``(g, g^{-1})`` for every state bijection fixing 0 and 1."""
    out = []
    for tail in itertools.permutations(range(2, n)):
        g = (0, 1) + tail
        ginv = [0] * n
        for i, v in enumerate(g):
            ginv[v] = i
        out.append((g, tuple(ginv)))
    return tuple(out)


def _conjugate(p: _Perm, g: _Perm, ginv: _Perm) -> _Perm:
    """Image rows of ``p`` after relabeling every state ``q`` as ``g[q]``."""
    return tuple(g[p[q]] for q in ginv)


def _mask_table(images: _Perm, n: int) -> list[int]:
    """Bitmask-to-bitmask image table of one letter over all state subsets."""
    bits = [1 << images[q] for q in range(n)]
    table = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        table[mask] = table[mask ^ low] | bits[low.bit_length() - 1]
    return table


def _exact_rt(tables: Sequence[list[int]], n: int) -> int | None:
    """Shortest reset-word length by subset BFS, or ``None`` if there is none.

    Distances are stored off by one so 0 can mean "unvisited".
    """
    full = (1 << n) - 1
    if full & (full - 1) == 0:
        return 0
    dist = bytearray(1 << n)
    dist[full] = 1
    queue = [full]
    head = 0
    while head < len(queue):
        mask = queue[head]
        head += 1
        step = dist[mask]
        for table in tables:
            image = table[mask]
            if dist[image] == 0:
                if image & (image - 1) == 0:
                    return step
                dist[image] = step + 1
                queue.append(image)
    return None


def _joint_orbit_covers(p1: _Perm, p2: _Perm, n: int) -> bool:
    seen = 1
    count = 1
    stack = [0]
    while stack:
        q = stack.pop()
        for p in (p1, p2):
            r = p[q]
            bit = 1 << r
            if not seen & bit:
                seen |= bit
                count += 1
                stack.append(r)
    return count == n


def _generates_symmetric(p1: _Perm, p2: _Perm, n: int) -> bool:
    if not _joint_orbit_covers(p1, p2, n):
        return False
    if n <= 12:
        return PermutationGroup(n, [p1, p2]).order() == math.factorial(n)
    return _generates_symmetric_large(p1, p2, n)


def _cycle_lengths(p: _Perm) -> list[int]:
    seen = [False] * len(p)
    lengths = []
    for start in range(len(p)):
        if seen[start]:
            continue
        size = 0
        q = start
        while not seen[q]:
            seen[q] = True
            q = p[q]
            size += 1
        lengths.append(size)
    return lengths


def _is_odd(p: _Perm) -> bool:
    return (len(p) - len(_cycle_lengths(p))) % 2 == 1


def _primes_up_to(limit: int) -> list[int]:
    sieve = bytearray(b"\x01") * (limit + 1)
    out = []
    for p in range(2, limit + 1):
        if sieve[p]:
            out.append(p)
            for q in range(p * p, limit + 1, p):
                sieve[q] = 0
    return out


def _generates_symmetric_large(p1: _Perm, p2: _Perm, n: int) -> bool:
    """Exact symmetric-group test that avoids a full stabilizer chain.

    A transitive group below the alternating group (both generators even)
    or failing 2-transitivity is rejected outright.  Otherwise a
    deterministic walk over generator products looks for an element with
    exactly one cycle of length divisible by some prime ``p <= n - 3``,
    that cycle having length exactly ``p``: a suitable power of it is then
    a ``p``-cycle, which inside a 2-transitive group forces the whole
    alternating group, hence the symmetric group once a generator is odd.
    Groups that exhaust the walk fall back to the stabilizer-chain order.
    """
    if not (_is_odd(p1) or _is_odd(p2)):
        return False
    if not is_two_transitive([Transformation(p1), Transformation(p2)], n):
        return False
    primes = _primes_up_to(n - 3)
    steps = random.Random(0x5EED + n)
    x = p1
    for _ in range(2048):
        lengths = _cycle_lengths(x)
        for p in primes:
            divisible = [size for size in lengths if size % p == 0]
            if divisible == [p]:
                return True
        step = p1 if steps.random() < 0.5 else p2
        x = tuple(step[q] for q in x)
    return PermutationGroup(n, [p1, p2]).order() == math.factorial(n)


@lru_cache(maxsize=4)
def _census_context(
    n: int,
) -> tuple[tuple[_Perm, ...], tuple[tuple[_Perm, _Perm], ...], tuple[_Perm, ...]]:
    perms = tuple(sorted(itertools.permutations(range(n))))
    return perms, _residual_group(n), _normalized_rank_letters(n)


def _pair_symmetry(
    p1: _Perm,
    p2: _Perm,
    residual: Sequence[tuple[_Perm, _Perm]],
) -> tuple[bool, list[tuple[_Perm, _Perm]]]:
    """Classify the residual symmetries of a permutation pair.

    Returns ``(dead, sensitive)``: ``dead`` means some symmetry maps every
    triple ``(p1, p2, t)`` to a strictly smaller one regardless of ``t``;
    ``sensitive`` lists the symmetries that fix ``(p1, p2)`` (directly or
    with a swap) and therefore must be checked against each ``t``.
    """
    identity = residual[0][0]
    sensitive: list[tuple[_Perm, _Perm]] = []
    for g, ginv in residual:
        c1 = _conjugate(p1, g, ginv)
        c2 = _conjugate(p2, g, ginv)
        if c1 == p1 and c2 < p2:
            return True, []
        if c2 < p1 or (c2 == p1 and c1 < p2):
            return True, []
        if g != identity and ((c1 == p1 and c2 == p2) or (c2 == p1 and c1 == p2)):
            sensitive.append((g, ginv))
    return False, sensitive


def _census_block(args: tuple[int, _Perm]) -> tuple[_Perm, int, int, _Perm | None, _Perm | None]:
    """Process every candidate whose first permutation letter is ``p1``.

    Returns ``(p1, candidates_examined, block_max_rt, p2, t)`` where the
    last three describe the first enumeration-order candidate attaining the
    block maximum (``-1`` and ``None`` when the block is empty).
    """
    n, p1 = args
    perms, residual, rank_letters = _census_context(n)
    for g, ginv in residual[1:]:
        if _conjugate(p1, g, ginv) < p1:
            return p1, 0, -1, None, None
    table1 = _mask_table(p1, n)
    rank_tables = [(t, _mask_table(t, n)) for t in rank_letters]
    examined = 0
    best_rt = -1
    best_p2: _Perm | None = None
    best_t: _Perm | None = None
    for p2 in perms:
        if p2 < p1:
            continue
        dead, sensitive = _pair_symmetry(p1, p2, residual)
        if dead:
            continue
        if not _generates_symmetric(p1, p2, n):
            continue
        table2 = _mask_table(p2, n)
        for t, table3 in rank_tables:
            if sensitive and any(
                _conjugate(t, g, ginv) < t for g, ginv in sensitive
            ):
                continue
            examined += 1
            rt = _exact_rt((table1, table2, table3), n)
            assert rt is not None  # full transition monoid always resets
            if rt > best_rt:
                best_rt = rt
                best_p2 = p2
                best_t = t
    return p1, examined, best_rt, best_p2, best_t


def _census_dfa(n: int, p1: _Perm, p2: _Perm, t: _Perm) -> Dfa:
    return Dfa(
        n,
        (
            ("a", Transformation(p1)),
            ("b", Transformation(p2)),
            ("c", Transformation(t)),
        ),
    )


def _census_record(n: int, p1: _Perm, p2: _Perm, t: _Perm, expected_rt: int) -> SearchRecord:
    canon = canonical_form(_census_dfa(n, p1, p2, t))
    result = reset_threshold_exact(canon)
    assert result is not NOT_SYNCHRONIZING
    rt, witness = result
    assert rt == expected_rt
    return SearchRecord(
        dfa=canon,
        rt=rt,
        witness=witness,
        config={"n": n, "mode": SearchMode.EXHAUSTIVE.value},
    )


def _read_census_journal(path: Path, n: int) -> tuple[set[_Perm], int, SearchRecord | None, bool]:
    """Replay an interrupted census journal.

    Returns the set of completed first-letter blocks, the running maximum,
    the best record so far, and whether a final result line is present.
    """
    done: set[_Perm] = set()
    best_rt = -1
    best: SearchRecord | None = None
    finished = False
    with path.open("r", encoding="ascii") as fh:
        for line_no, line in enumerate(fh):
            obj = json.loads(line)
            kind = obj.get("type")
            if line_no == 0:
                if kind != "header" or obj.get("format") != FORMAT_VERSION:
                    raise ValueError(f"{path} is not a census journal")
                if obj.get("config", {}).get("n") != n:
                    raise ValueError(f"{path} was produced for a different n")
                continue
            if kind == "block":
                done.add(tuple(obj["p1"]))
            elif kind == "record":
                record = record_from_json_dict(obj)
                best = record
                best_rt = record.rt
            elif kind == "result":
                finished = True
    return done, best_rt, best, finished


def max_reset_threshold_exhaustive(
    n: int,
    *,
    workers: int = 1,
    output_path: str | Path | None = None,
    resume: bool = True,
    allow_large: bool = False,
) -> tuple[int, SearchRecord]:
    """Largest exact reset threshold over all automata with two permutation
    letters generating the symmetric group and one letter of rank ``n - 1``.

    Work is split into blocks by the first permutation letter and blocks are
    reduced in sorted order, so the stream of new-maximum records (and the
    returned record) does not depend on ``workers``.  With ``output_path``
    the run appends a JSON-lines journal — header, one line per finished
    block, one record per new maximum, and a final result line — and
    ``resume`` replays completed blocks from an existing journal instead of
    recomputing them.
    """
    cfg = SearchConfig(
        n=n, mode=SearchMode.EXHAUSTIVE, workers=workers,
        output_path=output_path, allow_large=allow_large,
    )
    perms, _, _ = _census_context(n)
    done: set[_Perm] = set()
    best_rt = -1
    best: SearchRecord | None = None
    finished = False
    sink = None
    path = Path(output_path) if output_path is not None else None
    if path is not None and resume and path.exists():
        done, best_rt, best, finished = _read_census_journal(path, n)
        sink = path.open("a", encoding="ascii")
    elif path is not None:
        sink = path.open("w", encoding="ascii")
        sink.write(
            _json_line(
                {
                    "type": "header",
                    "format": FORMAT_VERSION,
                    "kind": "max-rt-census",
                    "config": {"n": n, "mode": cfg.mode.value},
                }
            )
        )
        sink.flush()
    try:
        if not finished:
            pending = [(n, p1) for p1 in perms if p1 not in done]
            if workers > 1 and len(pending) > 1:
                with multiprocessing.Pool(workers) as pool:
                    outcomes: Iterable = pool.imap(_census_block, pending, chunksize=1)
                    best_rt, best = _reduce_census(
                        n, outcomes, best_rt, best, sink
                    )
            else:
                best_rt, best = _reduce_census(
                    n, map(_census_block, pending), best_rt, best, sink
                )
            if best is None:
                raise RuntimeError("census found no candidate automata")
            if sink is not None:
                sink.write(_json_line({"type": "result", "max_rt": best_rt}))
                sink.flush()
        if best is None:
            raise RuntimeError("census journal is finished but holds no record")
    finally:
        if sink is not None:
            sink.close()
    return best_rt, best


def _reduce_census(
    n: int,
    outcomes: Iterable[tuple[_Perm, int, int, _Perm | None, _Perm | None]],
    best_rt: int,
    best: SearchRecord | None,
    sink,
) -> tuple[int, SearchRecord | None]:
    for p1, _, block_rt, p2, t in outcomes:
        if block_rt > best_rt:
            assert p2 is not None and t is not None
            best_rt = block_rt
            best = _census_record(n, p1, p2, t, block_rt)
            if sink is not None:
                sink.write(_json_line(record_to_json_dict(best)))
        if sink is not None:
            sink.write(_json_line({"type": "block", "p1": list(p1)}))
            sink.flush()
    return best_rt, best


# ---------------------------------------------------------------------------
# randomized reset-threshold experiment
# ---------------------------------------------------------------------------


def _sampled_permutation(rng: random.Random, n: int) -> _Perm:
    images = list(range(n))
    rng.shuffle(images)
    return tuple(images)


def _default_merge_letter(n: int) -> _Perm:
    """Rank-``(n-1)`` letter sending state 1 to 0 and fixing the rest."""
    return (0, 0) + tuple(range(2, n))


def _sampled_rank_letter(rng: random.Random, n: int) -> _Perm:
    """Uniformly random rank-``(n-1)`` letter."""
    i, j = sorted(rng.sample(range(n), 2))
    values = list(range(n))
    rng.shuffle(values)
    img = [0] * n
    img[i] = img[j] = values[0]
    rest = (q for q in range(n) if q != i and q != j)
    for q, v in zip(rest, values[1:]):
        img[q] = v
    return tuple(img)


def _percentile_99(sorted_values: Sequence[int]) -> int:
    rank = math.ceil(0.99 * len(sorted_values))
    return sorted_values[max(0, rank - 1)]


def random_rt_experiment(
    cfg: SearchConfig,
    *,
    sample_nonperm: bool = False,
    require_symmetric: bool = True,
    exact_cap: int = EXACT_CAP,
) -> dict:
    """Reset thresholds of automata built from random permutation pairs.

    Each trial draws two permutations by seeded Fisher-Yates shuffle and
    attaches a rank-``(n-1)`` letter — by default the fixed merge of states
    0 and 1, or a sampled one with ``sample_nonperm``.  By default a draw
    is rejected and repeated until the two permutations generate the
    symmetric group, which keeps every sampled automaton inside the
    full-transition-monoid domain and therefore synchronizing; pass
    ``require_symmetric=False`` to keep unconditioned draws, of which
    roughly a ``1/n`` fraction fail to synchronize.  Up to ``exact_cap``
    states the reset threshold is exact (subset BFS); beyond that the
    recorded value is the pair-chase word length, an upper bound.  The
    summary reports max/mean/99th-percentile and the fraction of
    synchronizing samples at or below ``C * n * log2(n)`` for C in 1, 2, 4.
    With ``output_path`` the trials and summary are written as JSON lines
    with no timestamps, so identical configs produce identical bytes.
    """
    if cfg.mode is not SearchMode.RANDOM:
        raise ValueError("random_rt_experiment needs a RANDOM-mode config")
    n = cfg.n
    rng = random.Random(cfg.seed)
    samples: list[tuple[_Perm, _Perm, _Perm]] = []
    resampled = 0
    for _ in range(cfg.trials):
        p1 = _sampled_permutation(rng, n)
        p2 = _sampled_permutation(rng, n)
        while require_symmetric and not _generates_symmetric(p1, p2, n):
            resampled += 1
            p1 = _sampled_permutation(rng, n)
            p2 = _sampled_permutation(rng, n)
        t = _sampled_rank_letter(rng, n) if sample_nonperm else _default_merge_letter(n)
        samples.append((p1, p2, t))
    method = "exact_bfs" if n <= exact_cap else "pairchase"
    trials_out: list[dict] = []
    lengths: list[int] = []
    for index, (p1, p2, t) in enumerate(samples):
        d = _census_dfa(n, p1, p2, t)
        length: int | None = None
        if n <= exact_cap:
            result = reset_threshold_exact(d, cap=n)
            if result is not NOT_SYNCHRONIZING:
                length = result[0]
        elif is_synchronizing(d):
            length = pairchase_reset_word(d).length
        if length is not None:
            lengths.append(length)
        trials_out.append(
            {
                "type": "trial",
                "trial": index,
                "synchronizing": length is not None,
                "rt": length,
                "method": method,
            }
        )
    summary = _rt_summary(cfg, method, lengths, resampled)
    if cfg.output_path is not None:
        _write_experiment_file(cfg, "random-rt", trials_out, summary)
    return summary


def _rt_summary(cfg: SearchConfig, method: str, lengths: list[int], resampled: int) -> dict:
    ordered = sorted(lengths)
    summary: dict = {
        "n": cfg.n,
        "mode": cfg.mode.value,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "method": method,
        "resampled": resampled,
        "synchronizing": len(ordered),
        "not_synchronizing": cfg.trials - len(ordered),
        "max": None,
        "mean": None,
        "p99": None,
        "fraction_le_c_n_log2_n": None,
    }
    if ordered:
        budget = cfg.n * math.log2(cfg.n)
        summary["max"] = ordered[-1]
        summary["mean"] = sum(ordered) / len(ordered)
        summary["p99"] = _percentile_99(ordered)
        summary["fraction_le_c_n_log2_n"] = {
            str(c): sum(1 for v in ordered if v <= c * budget) / len(ordered)
            for c in (1, 2, 4)
        }
    return summary


def _write_experiment_file(
    cfg: SearchConfig, kind: str, lines: list[dict], summary: dict
) -> None:
    path = Path(cfg.output_path)
    with path.open("w", encoding="ascii") as fh:
        fh.write(
            _json_line(
                {
                    "type": "header",
                    "format": FORMAT_VERSION,
                    "kind": kind,
                    "config": {
                        "n": cfg.n,
                        "mode": cfg.mode.value,
                        "trials": cfg.trials,
                        "seed": cfg.seed,
                    },
                }
            )
        )
        for line in lines:
            fh.write(_json_line(line))
        fh.write(_json_line({"type": "summary", **summary}))


# ---------------------------------------------------------------------------
# pair-digraph diameter experiments
# ---------------------------------------------------------------------------


def _pair_dfa(n: int, p1: _Perm, p2: _Perm) -> Dfa:
    return Dfa(n, (("a", Transformation(p1)), ("b", Transformation(p2))))


def _cycle_type(p: _Perm) -> tuple[int, ...]:
    seen = [False] * len(p)
    lengths = []
    for start in range(len(p)):
        if seen[start]:
            continue
        size = 0
        q = start
        while not seen[q]:
            seen[q] = True
            q = p[q]
            size += 1
        lengths.append(size)
    return tuple(sorted(lengths, reverse=True))


def _conjugacy_classes(n: int) -> list[tuple[_Perm, list[_Perm], list[tuple[_Perm, _Perm]]]]:
    """Conjugacy classes of all ``n``-state permutations.

    Returns ``(representative, members, centralizer)`` per class, with the
    representative being the least member and the centralizer carried as
    ``(g, g^{-1})`` pairs.
    """
    members: dict[tuple[int, ...], list[_Perm]] = {}
    for p in itertools.permutations(range(n)):
        members.setdefault(_cycle_type(p), []).append(p)
    out = []
    for group in members.values():
        group.sort()
        rep = group[0]
        centralizer = []
        for g in itertools.permutations(range(n)):
            if all(g[rep[q]] == rep[g[q]] for q in range(n)):
                ginv = [0] * n
                for i, v in enumerate(g):
                    ginv[v] = i
                centralizer.append((g, tuple(ginv)))
        out.append((rep, group, centralizer))
    out.sort(key=lambda item: item[0])
    return out


def _exhaustive_pair_classes(n: int) -> Iterator[tuple[_Perm, _Perm]]:
    """Two-element permutation sets, one representative per conjugacy orbit.

    Every orbit is anchored at the least member of the class with the
    smaller centralizer; the partner then ranges over minimal elements of
    residual-centralizer orbits.  For same-class pairs the anchoring can
    emit an orbit twice (once per anchor choice), which only costs a
    repeated measurement, never a missed one.
    """
    classes = _conjugacy_classes(n)
    for i, (rep_i, members_i, cent_i) in enumerate(classes):
        for j in range(i, len(classes)):
            rep_j, members_j, cent_j = classes[j]
            if len(cent_i) <= len(cent_j):
                anchor, centralizer, partners = rep_i, cent_i, members_j
            else:
                anchor, centralizer, partners = rep_j, cent_j, members_i
            for partner in partners:
                if partner == anchor:
                    continue
                if any(
                    _conjugate(partner, g, ginv) < partner
                    for g, ginv in centralizer
                ):
                    continue
                yield anchor, partner


def random_pair_diameter_experiment(cfg: SearchConfig) -> dict:
    """Diameter statistics of pair digraphs on two permutation letters.

    Random mode samples ``trials`` permutation pairs with the seeded
    shuffle; exhaustive mode (capped at ``n <= 9``) measures one
    representative of every conjugacy orbit of two-element permutation sets
    and returns the true maximum.  Pairs whose digraph is not strongly
    connected have no diameter and are tallied separately.
    """
    n = cfg.n
    if cfg.mode is SearchMode.EXHAUSTIVE:
        if n > PAIR_DIAMETER_CAP:
            raise ValueError(
                f"exhaustive pair-diameter runs are capped at n = {PAIR_DIAMETER_CAP}"
            )
        pairs: Iterable[tuple[_Perm, _Perm]] = _exhaustive_pair_classes(n)
    else:
        rng = random.Random(cfg.seed)
        pairs = [
            (_sampled_permutation(rng, n), _sampled_permutation(rng, n))
            for _ in range(cfg.trials)
        ]
    trials_out: list[dict] = []
    diameters: list[int] = []
    connected = 0
    examined = 0
    best = -1
    best_pair: tuple[_Perm, _Perm] | None = None
    for index, (p1, p2) in enumerate(pairs):
        examined += 1
        result = diameter(build_pair_digraph(_pair_dfa(n, p1, p2)))
        if result.strongly_connected:
            connected += 1
            diameters.append(result.value)
            if result.value > best:
                best = result.value
                best_pair = (p1, p2)
        trials_out.append(
            {
                "type": "trial",
                "trial": index,
                "strongly_connected": result.strongly_connected,
                "diameter": result.value,
            }
        )
    ordered = sorted(diameters)
    summary: dict = {
        "n": n,
        "mode": cfg.mode.value,
        "trials": examined,
        "seed": cfg.seed if cfg.mode is SearchMode.RANDOM else None,
        "strongly_connected": connected,
        "not_strongly_connected": examined - connected,
        "max": ordered[-1] if ordered else None,
        "mean": sum(ordered) / len(ordered) if ordered else None,
        "p99": _percentile_99(ordered) if ordered else None,
        "max_pair": (
            {"a": list(best_pair[0]), "b": list(best_pair[1])}
            if best_pair is not None
            else None
        ),
    }
    if cfg.output_path is not None:
        _write_experiment_file(cfg, "pair-diameter", trials_out, summary)
    return summary


# ---------------------------------------------------------------------------
# journal inspection
# ---------------------------------------------------------------------------


def load_records(path: str | Path) -> list[SearchRecord]:
    """All census records in a journal, each re-verified while loading."""
    records = []
    with Path(path).open("r", encoding="ascii") as fh:
        for line in fh:
            obj = json.loads(line)
            if obj.get("type") == "record":
                records.append(record_from_json_dict(obj))
    return records


def summarize_results(path: str | Path) -> dict:
    """Digest of a results file: kind, config, best values, completeness."""
    header = None
    best_rt = None
    blocks = 0
    records = 0
    summary_line = None
    finished = False
    with Path(path).open("r", encoding="ascii") as fh:
        for line in fh:
            obj = json.loads(line)
            kind = obj.get("type")
            if kind == "header":
                header = obj
            elif kind == "block":
                blocks += 1
            elif kind == "record":
                records += 1
                best_rt = obj["rt"]
            elif kind == "result":
                best_rt = obj["max_rt"]
                finished = True
            elif kind == "summary":
                summary_line = {k: v for k, v in obj.items() if k != "type"}
                finished = True
    if header is None:
        raise ValueError(f"{path} has no header line")
    out = {
        "kind": header.get("kind"),
        "config": header.get("config"),
        "complete": finished,
    }
    if summary_line is not None:
        out["summary"] = summary_line
    else:
        out["max_rt"] = best_rt
        out["blocks_done"] = blocks
        out["records"] = records
    return out


__all__ = [
    "EXHAUSTIVE_STATE_CAP",
    "FORMAT_VERSION",
    "PAIR_DIAMETER_CAP",
    "SearchConfig",
    "SearchMode",
    "SearchRecord",
    "canonical_form",
    "load_records",
    "max_reset_threshold_exhaustive",
    "random_pair_diameter_experiment",
    "random_rt_experiment",
    "record_from_json_dict",
    "record_to_json_dict",
    "summarize_results",
]
