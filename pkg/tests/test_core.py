import random
from fractions import Fraction

import numpy as np
import pytest

from trifference.core import (
    Code,
    Codeword,
    NotTrifferentError,
    TriffParseError,
    add_codewords,
    count_A_r,
    format_triff,
    is_trifferent_triple,
    naive_trifferent_triple,
    parse_triff,
    project,
    best_project,
    prune,
    read_triff,
    shift,
    shift_density_sample,
    support_multiplicities,
    verify_trifferent,
    write_triff,
)
from trifference.constructions import one_bounded, triple_construction


def cw(s: str) -> Codeword:
    return Codeword.from_string(s)


def code_of(*strings: str) -> Code:
    return Code(len(strings[0]), tuple(cw(s) for s in strings))


class TestCodeword:
    def test_round_trip(self):
        for s in ("0", "2", "012", "2101", "0" * 64, "210" * 21):
            assert cw(s).string == s

    def test_symbols_and_two_locations(self):
        w = cw("0212")
        assert [w.symbol(i) for i in range(4)] == [0, 2, 1, 2]
        assert w.count_twos == 2
        assert w.two_locations() == (1, 3)

    def test_rejects_foreign_characters(self):
        with pytest.raises(ValueError):
            cw("01x")
        with pytest.raises(ValueError):
            cw("")

    def test_mask_partition_enforced(self):
        # masks must partition the n coordinates
        with pytest.raises(ValueError):
            Codeword(2, mask0=0b11, mask1=0b01, mask2=0)
        with pytest.raises(ValueError):
            Codeword(2, mask0=0b01, mask1=0, mask2=0)


class TestCode:
    def test_sorted_canonically(self):
        c = code_of("21", "02", "20", "12")
        assert [w.string for w in c] == ["02", "12", "20", "21"]

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError):
            code_of("01", "01")

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            Code(2, (cw("01"), cw("012")))

    def test_r_bound_derived(self):
        assert code_of("20", "02").r_bound == 1
        assert code_of("20", "22").r_bound is None
        assert Code(3, ()).r_bound is None


class TestTripleCheck:
    def test_single_coordinate(self):
        assert is_trifferent_triple(cw("0"), cw("1"), cw("2"))

    def test_missing_symbol(self):
        assert not is_trifferent_triple(cw("00"), cw("11"), cw("01"))

    def test_diagonal(self):
        assert is_trifferent_triple(cw("00"), cw("11"), cw("22"))

    def test_argument_validation(self):
        with pytest.raises(ValueError):
            is_trifferent_triple(cw("0"), cw("0"), cw("1"))
        with pytest.raises(ValueError):
            is_trifferent_triple(cw("00"), cw("11"), cw("2"))

    def test_agrees_with_symbol_scan(self):
        # same verdicts from the bitplane test and the per-coordinate scan
        rng = random.Random(411)
        for n in (1, 2, 3, 5, 8, 13, 21, 34, 64):
            space = 3**n
            for _ in range(300):
                if space < 30:
                    a, b, c = rng.sample(range(space), 3)
                    trip = [np.base_repr(x, 3).zfill(n) for x in (a, b, c)]
                else:
                    trip = ["".join(rng.choices("012", k=n)) for _ in range(3)]
                    if len(set(trip)) < 3:
                        continue
                x, y, z = (cw(s) for s in trip)
                assert is_trifferent_triple(x, y, z) == naive_trifferent_triple(x, y, z)

    def test_agreement_sweep_all_lengths(self):
        # 10^4 triples at every length up to 64; digits drawn in bulk
        trials = 10**4
        gen = np.random.default_rng(2214)
        for n in range(1, 65):
            if 3**n <= 27:
                rng = random.Random(n)
                words = [np.base_repr(x, 3).zfill(n) for x in range(3**n)]
                triples = [tuple(rng.sample(words, 3)) for _ in range(trials)]
            else:
                digits = gen.integers(0, 3, size=(trials, 3, n), dtype=np.uint8)
                flat = (digits + ord("0")).tobytes().decode("ascii")
                triples = []
                for t in range(trials):
                    base = 3 * n * t
                    s = (
                        flat[base : base + n],
                        flat[base + n : base + 2 * n],
                        flat[base + 2 * n : base + 3 * n],
                    )
                    if len(set(s)) == 3:
                        triples.append(s)
            assert len(triples) >= trials // 2
            for sa, sb, sc in triples:
                x, y, z = cw(sa), cw(sb), cw(sc)
                assert is_trifferent_triple(x, y, z) == naive_trifferent_triple(x, y, z)


class TestVerify:
    def test_small_codes_vacuous(self):
        assert verify_trifferent(Code(4, ())).ok
        assert verify_trifferent(code_of("012", "210")).ok

    def test_one_bounded_family(self):
        assert verify_trifferent(one_bounded(3)).ok

    def test_full_square_fails_with_lex_smallest_witness(self):
        words = [f"{a}{b}" for a in "012" for b in "012"]
        res = verify_trifferent(code_of(*words))
        assert not res.ok
        assert res.witness == (0, 1, 3)  # 00, 01, 10

    def test_witness_stable_across_workers(self):
        words = [f"{a}{b}" for a in "012" for b in "012"]
        c = code_of(*words)
        assert verify_trifferent(c, workers=3).witness == verify_trifferent(c).witness
        big = one_bounded(20)
        assert verify_trifferent(big, workers=2).ok


class TestShift:
    def test_zero_shift_is_identity(self):
        c = one_bounded(4)
        assert shift(c, cw("0000")).codewords == c.codewords

    def test_shift_preserves_size_and_property(self):
        c = one_bounded(2)
        s = shift(c, cw("11"))
        assert len(s) == len(c)
        assert verify_trifferent(s).ok

    def test_random_shifts_preserve_status(self):
        rng = random.Random(7)
        bad = code_of("00", "01", "10")
        for c in (one_bounded(3), bad):
            for _ in range(20):
                v = cw("".join(rng.choices("012", k=c.n)))
                assert verify_trifferent(shift(c, v)).ok == verify_trifferent(c).ok

    def test_addition_is_coordinatewise_mod_3(self):
        assert add_codewords(cw("012"), cw("111")).string == "120"
        assert add_codewords(cw("222"), cw("222")).string == "111"


class TestLayerCounts:
    def test_values(self):
        assert count_A_r(3, 0) == 8
        assert count_A_r(3, 1) == 12
        assert count_A_r(4, 2) == 24

    def test_enumeration_agrees(self):
        n = 4
        by_twos = [0] * (n + 1)
        for x in range(3**n):
            s = np.base_repr(x, 3).zfill(n)
            by_twos[s.count("2")] += 1
        for r in range(n + 1):
            assert count_A_r(n, r) == by_twos[r]


class TestShiftDensity:
    def test_single_codeword(self):
        c = code_of("120")
        st = shift_density_sample(c, r=1, exhaustive=True)
        assert st.expectation == Fraction(count_A_r(3, 1), 27)
        assert st.mean_fraction == st.expectation
        assert st.max_count <= 1

    def test_exhaustive_equals_expectation(self):
        st = shift_density_sample(one_bounded(4), r=1, exhaustive=True)
        assert st.mean_fraction == st.expectation == Fraction(32 * 8, 81)

    def test_sampling_needs_seed(self):
        with pytest.raises(ValueError):
            shift_density_sample(one_bounded(3), r=1, trials=10)

    def test_sampling_reproducible(self):
        a = shift_density_sample(one_bounded(3), r=1, trials=500, seed=3)
        b = shift_density_sample(one_bounded(3), r=1, trials=500, seed=3)
        assert a == b

    def test_rejects_non_trifferent_input(self):
        with pytest.raises(NotTrifferentError):
            shift_density_sample(code_of("00", "01", "10"), r=1, exhaustive=True)


class TestPrune:
    def test_alphabet_code(self):
        chain = prune(code_of("0", "1", "2"))
        assert [len(c) for c in chain] == [3, 2]
        # ties in the count pick the smallest symbol, removing the 0 word
        assert [w.string for w in chain[-1]] == ["1", "2"]

    def test_singleton_never_shrinks(self):
        chain = prune(code_of("2101"))
        assert [len(c) for c in chain] == [1] * 5

    def test_family_ends_at_two(self):
        chain = prune(one_bounded(3))
        assert len(chain) == 4
        assert len(chain[-1]) <= 2

    def test_retention_per_step(self):
        for base in (one_bounded(5), triple_construction(2, one_bounded(3))):
            chain = prune(base)
            for before, after in zip(chain, chain[1:]):
                assert len(after) >= len(before) - len(before) // 3


class TestProject:
    def test_two_codeword_example(self):
        p = project(code_of("220", "202"), 0)
        assert [w.string for w in p] == ["02", "20"]
        assert p.r_bound == 1
        assert verify_trifferent(p).ok

    def test_requires_a_two_layer(self):
        with pytest.raises(ValueError):
            project(code_of("000", "111"), 0)
        with pytest.raises(ValueError):
            project(code_of("20", "02"), 5)

    def test_restricted_sizes_sum_to_two_incidences(self):
        c = triple_construction(2, one_bounded(3))
        total = sum(
            sum(1 for w in c if w.symbol(i) == 2) for i in range(c.n)
        )
        assert total == c.r_bound * len(c)

    def test_best_coordinate_meets_average(self):
        c = triple_construction(2, one_bounded(3))
        i = best_project(c)
        p = project(c, i)
        assert len(p) * c.n >= c.r_bound * len(c)  # best >= average
        assert p.r_bound == c.r_bound - 1
        assert verify_trifferent(p).ok


class TestSupportMultiplicity:
    def test_at_most_two_per_support(self):
        for c in (one_bounded(6), triple_construction(2, one_bounded(3))):
            assert max(support_multiplicities(c).values()) <= 2

    def test_counts(self):
        mults = support_multiplicities(code_of("220", "202", "221"))
        assert mults[(0, 1)] == 2
        assert mults[(0, 2)] == 1


class TestTriffFormat:
    def test_golden_output(self):
        c = Code(2, (cw("20"), cw("02")), comments=("# sample",))
        assert format_triff(c) == "n=2\nr=1\n# sample\n02\n20\n"

    def test_round_trip(self, tmp_path):
        c = triple_construction(2, one_bounded(3))
        path = tmp_path / "t.triff"
        write_triff(c, path)
        back = read_triff(path)
        assert back.codewords == c.codewords
        assert back.comments == c.comments
        assert back.r_bound == c.r_bound

    def test_parse_errors_carry_line_numbers(self):
        cases = [
            ("", 1),
            ("n=2\n01\n0", 3),  # missing trailing newline
            ("m=2\n", 1),
            ("n=2\n012\n", 2),
            ("n=2\n0x\n", 2),
            ("n=2\n01\n01\n", 3),
            ("n=2\n01\n\n10\n", 3),
            ("n=2\n01\nr=1\n", 3),
            ("n=2\nr=1\n01\n", 3),  # declared r contradicts the codeword
        ]
        for text, lineno in cases:
            with pytest.raises(TriffParseError) as err:
                parse_triff(text)
            assert err.value.lineno == lineno

    def test_comments_survive(self):
        c = parse_triff("n=2\n# a\n02\n# b\n20\n")
        assert c.comments == ("# a", "# b")
