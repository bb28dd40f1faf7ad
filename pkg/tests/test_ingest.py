"""Sequence parsing, reverse-complement matching, and matrix building."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import golden
from balancedcover import (
    AmbiguityPolicy,
    InputError,
    SequenceRecord,
    build_instance,
    matches,
    parse_fasta,
    parse_sequences,
    reverse_complement,
)
from balancedcover.ingest import _AhoCorasick, _matches_normalized, normalize_bases

dna = st.text(alphabet="ACGT", min_size=1, max_size=40)


class TestNormalize:
    def test_uppercases(self):
        assert normalize_bases("acgt") == "ACGT"

    def test_reject_position_is_one_based(self):
        with pytest.raises(InputError, match="position 3"):
            normalize_bases("ACNGT", policy=AmbiguityPolicy.REJECT, label="clone c9")

    def test_reject_names_offending_sequence(self):
        with pytest.raises(InputError, match="clone c9"):
            normalize_bases("ACNGT", policy=AmbiguityPolicy.REJECT, label="clone c9")

    def test_whitespace_is_not_a_base(self):
        with pytest.raises(InputError, match="position 5"):
            normalize_bases("ACGT GT")

    def test_never_match_replaces_with_n(self):
        assert normalize_bases("ACXGT", policy=AmbiguityPolicy.NEVER_MATCH) == "ACNGT"


class TestReverseComplement:
    @pytest.mark.parametrize(
        "seq,expect",
        [("A", "T"), ("ACGT", "ACGT"), ("GCCTA", "TAGGC"), ("AAAC", "GTTT")],
    )
    def test_examples(self, seq, expect):
        assert reverse_complement(seq) == expect

    @settings(max_examples=200, deadline=None)
    @given(seq=dna)
    def test_involution(self, seq):
        assert reverse_complement(reverse_complement(seq)) == seq

    def test_rejects_ambiguous(self):
        with pytest.raises(InputError):
            reverse_complement("ACN")


class TestMatches:
    def test_direct_substring(self):
        clones = dict(golden.CLONE_SEQUENCES)
        assert matches(clones["c1"], "CTGGC")

    def test_reverse_complement_match(self):
        # c2 contains GCCAG (= reverse complement of CTGGC) but not
        # CTGGC itself; the edge still exists.
        c2 = dict(golden.CLONE_SEQUENCES)["c2"]
        assert "CTGGC" not in c2
        assert "GCCAG" in c2
        assert matches(c2, "CTGGC")

    def test_reverse_complement_match_second_example(self):
        c6 = dict(golden.CLONE_SEQUENCES)["c6"]
        assert "GCCTA" not in c6
        assert "TAGGC" in c6
        assert matches(c6, "GCCTA")

    def test_no_match(self):
        c4 = dict(golden.CLONE_SEQUENCES)["c4"]
        assert not matches(c4, "CTGGC")
        assert not matches("AAAA", "CG")

    def test_probe_longer_than_clone(self):
        assert not matches("AC", "ACGT")

    def test_invalid_alphabet_rejected(self):
        with pytest.raises(InputError):
            matches("ANA", "AA")
        with pytest.raises(InputError):
            matches("AAA", "N")

    def test_normalized_n_semantics(self):
        # Under NEVER_MATCH, 'N' in a clone blocks only the windows that
        # cross it, and a probe containing 'N' matches nothing.
        assert not _matches_normalized("ANA", "AA")
        assert _matches_normalized("ANAA", "AA")
        assert not _matches_normalized("ANA", "N")
        assert not _matches_normalized("NNNN", "N")

    @settings(max_examples=200, deadline=None)
    @given(clone=dna, probe=st.text(alphabet="ACGT", min_size=1, max_size=6))
    def test_matches_definition(self, clone, probe):
        expect = probe in clone or reverse_complement(probe) in clone
        assert matches(clone, probe) == expect


class TestBuildInstance:
    def test_golden_matrix_reproduced(self, golden_clones, golden_probes):
        inst = build_instance(golden_clones, golden_probes)
        assert np.array_equal(inst.adjacency, golden.MATRIX)
        assert inst.clone_names == tuple(name for name, _ in golden.CLONE_SEQUENCES)
        assert inst.probe_names == tuple(name for name, _ in golden.PROBE_SEQUENCES)
        assert int(inst.adjacency.sum()) == golden.EDGE_COUNT

    def test_matcher_equivalence_on_golden(self, golden_clones, golden_probes):
        naive = build_instance(golden_clones, golden_probes, matcher="naive")
        auto = build_instance(golden_clones, golden_probes, matcher="automaton")
        assert np.array_equal(naive.adjacency, auto.adjacency)

    def test_matcher_equivalence_random(self):
        rng = np.random.default_rng(97)
        bases = np.array(list("ACGT"))
        for _ in range(25):
            clones = [
                SequenceRecord(f"c{i + 1}", "".join(rng.choice(bases, size=rng.integers(5, 40))))
                for i in range(rng.integers(1, 8))
            ]
            probes = [
                SequenceRecord(f"p{j + 1}", "".join(rng.choice(bases, size=rng.integers(1, 5))))
                for j in range(rng.integers(1, 8))
            ]
            naive = build_instance(clones, probes, matcher="naive")
            auto = build_instance(clones, probes, matcher="automaton")
            assert np.array_equal(naive.adjacency, auto.adjacency)

    def test_unknown_matcher(self, golden_clones, golden_probes):
        with pytest.raises(InputError):
            build_instance(golden_clones, golden_probes, matcher="suffix-tree")

    def test_reject_policy_raises(self, golden_probes):
        clones = [SequenceRecord("c1", "ACNGT")]
        with pytest.raises(InputError, match="position 3"):
            build_instance(clones, golden_probes)

    def test_never_match_policy(self):
        clones = [SequenceRecord("c1", "AXAA")]
        probes = [SequenceRecord("p1", "AA"), SequenceRecord("p2", "XA")]
        inst = build_instance(clones, probes, ambiguity=AmbiguityPolicy.NEVER_MATCH)
        # The X blocks its windows in the clone; a probe containing X
        # matches nothing at all.
        assert inst.adjacency.tolist() == [[1, 0]]

    def test_never_match_policy_automaton_agrees(self):
        clones = [SequenceRecord("c1", "AXAA")]
        probes = [SequenceRecord("p1", "AA"), SequenceRecord("p2", "XA")]
        inst = build_instance(
            clones, probes, ambiguity=AmbiguityPolicy.NEVER_MATCH, matcher="automaton"
        )
        assert inst.adjacency.tolist() == [[1, 0]]

    def test_duplicate_clone_names_rejected(self, golden_probes):
        clones = [SequenceRecord("c1", "ACGT"), SequenceRecord("c1", "TTTT")]
        with pytest.raises(InputError):
            build_instance(clones, golden_probes)

    def test_empty_lists_rejected(self, golden_clones, golden_probes):
        with pytest.raises(InputError):
            build_instance([], golden_probes)
        with pytest.raises(InputError):
            build_instance(golden_clones, [])


class TestAhoCorasick:
    @settings(max_examples=100, deadline=None)
    @given(
        text=st.text(alphabet="ACGT", min_size=0, max_size=40),
        patterns=st.lists(st.text(alphabet="ACGT", min_size=1, max_size=5), min_size=1, max_size=8),
    )
    def test_scan_agrees_with_substring_search(self, text, patterns):
        automaton = _AhoCorasick((p, i) for i, p in enumerate(patterns))
        found = automaton.scan(text)
        expect = {i for i, p in enumerate(patterns) if p in text}
        assert found == expect


class TestParsers:
    def test_fasta_multiline_records(self):
        text = ">c1\nACGT\nACGT\n\n>c2\nTT\n"
        records = parse_fasta(text)
        assert records == [SequenceRecord("c1", "ACGTACGT"), SequenceRecord("c2", "TT")]

    def test_fasta_missing_header(self):
        with pytest.raises(InputError):
            parse_fasta("ACGT\n")

    def test_fasta_empty_record(self):
        with pytest.raises(InputError):
            parse_fasta(">c1\n>c2\nACGT\n")

    def test_fasta_duplicate_names(self):
        with pytest.raises(InputError):
            parse_fasta(">c1\nAC\n>c1\nGT\n")

    def test_plain_lines_autonamed(self):
        records = parse_sequences("ACGT\n\nTTAA\n", "p")
        assert records == [SequenceRecord("p1", "ACGT"), SequenceRecord("p2", "TTAA")]

    def test_plain_lines_stripped(self):
        records = parse_sequences("  ACGT  \n", "p")
        assert records == [SequenceRecord("p1", "ACGT")]

    def test_fasta_detected_automatically(self):
        records = parse_sequences(">x\nACGT\n", "p")
        assert records == [SequenceRecord("x", "ACGT")]

    def test_empty_input(self):
        with pytest.raises(InputError):
            parse_sequences("\n\n", "p")
