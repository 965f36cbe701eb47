import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from synchrokit.core import Dfa, Transformation
from synchrokit.families import cerny
from synchrokit.monoid import PermutationGroup
from synchrokit.search import (
    EXHAUSTIVE_STATE_CAP,
    PAIR_DIAMETER_CAP,
    SearchConfig,
    SearchMode,
    SearchRecord,
    canonical_form,
    load_records,
    max_reset_threshold_exhaustive,
    random_pair_diameter_experiment,
    random_rt_experiment,
    record_from_json_dict,
    record_to_json_dict,
    summarize_results,
)
from synchrokit.search import _generates_symmetric
from synchrokit.sync import NOT_SYNCHRONIZING, reset_threshold_exact

from conftest import random_dfa, random_permutation


def relabel_states(d: Dfa, perm: list[int]) -> Dfa:
    """Conjugate every letter by a state relabeling (an automaton isomorphism)."""
    inv = [0] * d.n
    for i, x in enumerate(perm):
        inv[x] = i
    return Dfa(
        d.n,
        tuple(
            (name, Transformation(tuple(perm[t.images[inv[q]]] for q in range(d.n))))
            for name, t in d.letters
        ),
    )


class TestSearchConfig:
    def test_defaults(self):
        cfg = SearchConfig(n=5, mode=SearchMode.RANDOM, trials=10)
        assert cfg.seed == 0 and cfg.workers == 1 and cfg.output_path is None

    def test_validation(self):
        with pytest.raises(ValueError):
            SearchConfig(n=1, mode=SearchMode.RANDOM)
        with pytest.raises(ValueError):
            SearchConfig(n=5, mode=SearchMode.RANDOM, trials=-1)
        with pytest.raises(ValueError):
            SearchConfig(n=5, mode=SearchMode.RANDOM, seed=-3)
        with pytest.raises(ValueError):
            SearchConfig(n=5, mode=SearchMode.RANDOM, seed=2**64)
        with pytest.raises(ValueError):
            SearchConfig(n=5, mode=SearchMode.RANDOM, workers=0)

    def test_exhaustive_cap(self):
        with pytest.raises(ValueError):
            SearchConfig(n=EXHAUSTIVE_STATE_CAP + 1, mode=SearchMode.EXHAUSTIVE)
        with pytest.warns(RuntimeWarning):
            SearchConfig(n=EXHAUSTIVE_STATE_CAP + 1, mode=SearchMode.EXHAUSTIVE, allow_large=True)


class TestCanonicalForm:
    def test_fixed_point_of_itself(self, rng):
        for _ in range(30):
            d = random_dfa(rng, rng.randint(2, 5), rng.randint(1, 3))
            canon = canonical_form(d)
            assert canonical_form(canon) == canon

    def test_invariant_under_state_relabeling(self, rng):
        for _ in range(30):
            n = rng.randint(2, 5)
            d = random_dfa(rng, n, rng.randint(1, 3))
            perm = list(range(n))
            rng.shuffle(perm)
            assert canonical_form(relabel_states(d, perm)) == canonical_form(d)

    def test_invariant_under_reordering_equal_rank_letters(self):
        a = Transformation((1, 2, 3, 0))
        b = Transformation((1, 0, 2, 3))
        t = Transformation((0, 0, 2, 3))
        d1 = Dfa(4, (("a", a), ("b", b), ("c", t)))
        d2 = Dfa(4, (("a", b), ("b", a), ("c", t)))
        assert canonical_form(d1) == canonical_form(d2)

    def test_preserves_reset_threshold(self, rng):
        for _ in range(25):
            d = random_dfa(rng, rng.randint(2, 5), 2)
            before = reset_threshold_exact(d)
            after = reset_threshold_exact(canonical_form(d))
            if before is NOT_SYNCHRONIZING:
                assert after is NOT_SYNCHRONIZING
            else:
                assert after[0] == before[0]

    def test_names_stay_positional(self):
        d = cerny(4)
        canon = canonical_form(d)
        assert canon.letter_names() == ("a", "b")


class TestSearchRecord:
    def _record(self) -> SearchRecord:
        d = cerny(4)
        rt, word = reset_threshold_exact(d)
        return SearchRecord(dfa=d, rt=rt, witness=word)

    def test_verify(self):
        self._record().verify()

    def test_verify_rejects_wrong_threshold(self):
        rec = self._record()
        with pytest.raises(ValueError):
            SearchRecord(dfa=rec.dfa, rt=rec.rt + 1, witness=rec.witness).verify()

    def test_json_round_trip(self):
        rec = self._record()
        obj = record_to_json_dict(rec)
        assert obj["type"] == "record"
        back = record_from_json_dict(obj)
        assert back.dfa == rec.dfa and back.rt == rec.rt and back.witness == rec.witness

    def test_load_re_verifies(self):
        obj = record_to_json_dict(self._record())
        obj["rt"] -= 1
        with pytest.raises(ValueError):
            record_from_json_dict(obj)
        obj2 = record_to_json_dict(self._record())
        obj2["witness"] = list(obj2["witness"][:-1])
        with pytest.raises(ValueError):
            record_from_json_dict(obj2)


class TestExhaustiveCensus:
    # largest reset threshold over two symmetric-group-generating permutation
    # letters plus one rank n-1 letter, verified against an unreduced
    # enumeration when this module was first built
    @pytest.mark.parametrize("n,expected", [(2, 1), (3, 4), (4, 8)])
    def test_small_sizes(self, n, expected):
        max_rt, record = max_reset_threshold_exhaustive(n)
        assert max_rt == expected
        assert record.rt == expected
        record.verify()
        assert canonical_form(record.dfa) == record.dfa

    def test_five_states(self):
        max_rt, record = max_reset_threshold_exhaustive(5)
        assert max_rt == 14
        assert record.rt == 14
        record.verify()

    def test_journal_and_resume(self, tmp_path):
        path = tmp_path / "census.jsonl"
        first = max_reset_threshold_exhaustive(4, output_path=path)
        summary = summarize_results(path)
        assert summary["kind"] == "max-rt-census"
        assert summary["complete"] and summary["max_rt"] == 8
        assert summary["blocks_done"] == 24

        # a finished journal replays without recomputing anything
        again = max_reset_threshold_exhaustive(4, output_path=path, resume=True)
        assert again[0] == first[0] and again[1] == first[1]

        # truncating the tail forces a partial recomputation
        lines = path.read_text().splitlines(keepends=True)
        path.write_text("".join(lines[:10]))
        resumed = max_reset_threshold_exhaustive(4, output_path=path, resume=True)
        assert resumed[0] == first[0] and resumed[1] == first[1]
        assert summarize_results(path)["complete"]

    def test_no_resume_overwrites(self, tmp_path):
        path = tmp_path / "census.jsonl"
        path.write_text('{"type":"header","format":1,"kind":"max-rt-census","config":{"n":3}}\n')
        max_rt, _ = max_reset_threshold_exhaustive(3, output_path=path, resume=False)
        assert max_rt == 4
        assert summarize_results(path)["complete"]

    def test_records_load_and_verify(self, tmp_path):
        path = tmp_path / "census.jsonl"
        max_reset_threshold_exhaustive(4, output_path=path)
        records = load_records(path)
        assert records, "census journal should hold at least one record"
        assert max(rec.rt for rec in records) == 8

    def test_cap(self):
        with pytest.raises(ValueError):
            max_reset_threshold_exhaustive(EXHAUSTIVE_STATE_CAP + 1)


class TestRandomExperiment:
    def test_frozen_summary(self):
        cfg = SearchConfig(n=8, mode=SearchMode.RANDOM, trials=50, seed=42)
        summary = random_rt_experiment(cfg)
        assert summary == {
            "n": 8,
            "mode": "random",
            "trials": 50,
            "seed": 42,
            "method": "exact_bfs",
            "resampled": 23,
            "synchronizing": 50,
            "not_synchronizing": 0,
            "max": 25,
            "mean": 16.76,
            "p99": 25,
            "fraction_le_c_n_log2_n": {"1": 0.98, "2": 1.0, "4": 1.0},
        }

    def test_byte_identical_reruns(self, tmp_path):
        out1, out2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        for out in (out1, out2):
            cfg = SearchConfig(n=7, mode=SearchMode.RANDOM, trials=25, seed=9, output_path=out)
            random_rt_experiment(cfg)
        assert out1.read_bytes() == out2.read_bytes()

    def test_conditioning_keeps_every_trial_synchronizing(self):
        cfg = SearchConfig(n=9, mode=SearchMode.RANDOM, trials=40, seed=3)
        summary = random_rt_experiment(cfg)
        assert summary["synchronizing"] == 40
        assert summary["not_synchronizing"] == 0

    def test_unconditioned_sampling_admits_failures(self):
        cfg = SearchConfig(n=8, mode=SearchMode.RANDOM, trials=40, seed=7)
        conditioned = random_rt_experiment(cfg)
        unconditioned = random_rt_experiment(cfg, require_symmetric=False)
        assert conditioned["resampled"] > 0
        assert unconditioned["resampled"] == 0
        assert unconditioned["synchronizing"] == 36
        assert unconditioned["not_synchronizing"] == 4
        assert unconditioned["max"] == 22

    def test_zero_trials(self):
        cfg = SearchConfig(n=6, mode=SearchMode.RANDOM, trials=0, seed=9)
        summary = random_rt_experiment(cfg)
        assert summary["trials"] == 0
        assert summary["max"] is None and summary["mean"] is None and summary["p99"] is None

    def test_pairchase_above_the_exact_cap(self):
        cfg = SearchConfig(n=30, mode=SearchMode.RANDOM, trials=4, seed=11)
        summary = random_rt_experiment(cfg)
        assert summary["method"] == "pairchase"
        assert summary["synchronizing"] == 4
        assert summary["max"] < 4 * 30 * math.ceil(math.log2(30))

    def test_summarize_matches_run(self, tmp_path):
        out = tmp_path / "run.jsonl"
        cfg = SearchConfig(n=8, mode=SearchMode.RANDOM, trials=15, seed=2, output_path=out)
        summary = random_rt_experiment(cfg)
        digest = summarize_results(out)
        assert digest["kind"] == "random-rt"
        assert digest["complete"]
        assert digest["summary"] == summary
        # one line per trial plus header and summary
        assert len(out.read_text().splitlines()) == 17


class TestPairDiameterExperiment:
    def test_exhaustive_five_states(self):
        summary = random_pair_diameter_experiment(SearchConfig(n=5, mode=SearchMode.EXHAUSTIVE))
        assert summary["max"] == 7

    def test_exhaustive_mode_is_hard_capped(self):
        with pytest.warns(RuntimeWarning):
            cfg = SearchConfig(
                n=PAIR_DIAMETER_CAP + 1, mode=SearchMode.EXHAUSTIVE, allow_large=True
            )
        with pytest.raises(ValueError):
            random_pair_diameter_experiment(cfg)

    def test_random_mode_is_reproducible(self):
        cfg = SearchConfig(n=12, mode=SearchMode.RANDOM, trials=20, seed=5)
        assert random_pair_diameter_experiment(cfg) == random_pair_diameter_experiment(cfg)

    def test_random_summary_shape(self, tmp_path):
        out = tmp_path / "pairs.jsonl"
        cfg = SearchConfig(n=10, mode=SearchMode.RANDOM, trials=12, seed=4, output_path=out)
        summary = random_pair_diameter_experiment(cfg)
        assert summary["trials"] == 12
        assert summary["strongly_connected"] + summary["not_strongly_connected"] == 12
        assert set(summary["max_pair"]) == {"a", "b"}
        assert summarize_results(out)["complete"]


@settings(max_examples=25)
@given(st.data())
def test_symmetric_group_recognizer_agrees_with_the_chain(data):
    seed = data.draw(st.integers(0, 2**32 - 1))
    r = random.Random(seed)
    n = r.randint(8, 13)
    p1 = tuple(random_permutation(r, n).images)
    p2 = tuple(random_permutation(r, n).images)
    expected = PermutationGroup(n, [p1, p2]).order() == math.factorial(n)
    assert _generates_symmetric(p1, p2, n) == expected


@settings(max_examples=20)
@given(st.data())
def test_canonical_form_is_an_isomorphism_invariant(data):
    seed = data.draw(st.integers(0, 2**32 - 1))
    r = random.Random(seed)
    n = r.randint(2, 5)
    d = random_dfa(r, n, r.randint(1, 2))
    perm = list(range(n))
    r.shuffle(perm)
    assert canonical_form(relabel_states(d, perm)) == canonical_form(d)
