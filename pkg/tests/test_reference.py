import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qstrmatch.reference import (
    DVector,
    InputPair,
    MatchVector,
    Problem,
    ProblemSpec,
    brute_force_oracle,
    check_factor_lemma,
    extend_lambda,
    from_bitstring,
    fsm_classical,
    init_dminus1,
    lambda0,
    lambda_levels,
    pad_inputs,
    power_decomposition,
)
from qstrmatch.instances import random_instance

from conftest import WORKED_X, WORKED_Y

WORKED = InputPair(WORKED_X, WORKED_Y)
SMALL = InputPair("cgaactta", "ctacctta")


def naive_lambda(pair, i):
    span = 1 << i
    return "".join(
        "1" if j + span <= pair.n and pair.x[j:j + span] == pair.y[j:j + span] else "0"
        for j in range(pair.n)
    )


class TestPadding:
    def test_worked_example(self):
        pair = pad_inputs("abaacbcbbca", "abaacbcbbca")
        assert pair.n == 16
        assert pair.x == "abaacbcbbca$$$$$"
        assert pair.y == "abaacbcbbca%%%%%"
        assert pair.is_terminated

    @pytest.mark.parametrize("length,n", [(1, 2), (3, 4), (4, 8), (15, 16), (16, 32), (17, 32)])
    def test_power_of_two(self, length, n):
        # oracle: smallest 2^p with 2^p >= length + 1
        expected = next(1 << p for p in range(1, 10) if (1 << p) >= length + 1)
        assert expected == n
        pair = pad_inputs("a" * length, "b" * length)
        assert pair.n == n
        assert pair.x.endswith("$") and pair.y.endswith("%")

    def test_errors(self):
        with pytest.raises(ValueError):
            pad_inputs("", "")
        with pytest.raises(ValueError):
            pad_inputs("a$", "ab")
        with pytest.raises(ValueError):
            pad_inputs("abc", "ab")

    def test_direct_pair_validation(self):
        with pytest.raises(ValueError):
            InputPair("abc", "abc")
        with pytest.raises(ValueError):
            InputPair("ab", "abcd")
        assert InputPair("0101", "0011").sigma == 2


class TestLambda:
    def test_small_example(self):
        lams = lambda_levels(SMALL, 3)
        assert [str(l) for l in lams] == ["10101111", "00001110", "00001000", "00000000"]

    def test_worked_rows(self):
        lams = lambda_levels(WORKED, 2)
        assert str(lams[0]) == "0110110111110111"
        # printed rows are 15 and 13 wide; zero-padded to n
        assert str(lams[1]) == "010010011110011" + "0"
        assert str(lams[2]) == "0000000110000" + "000"

    def test_identical(self):
        assert str(lambda0(InputPair("abcd", "abcd"))) == "1111"

    def test_extend_steps(self):
        l0 = MatchVector(0, from_bitstring("10101111"), 8)
        l1 = extend_lambda(l0)
        assert str(l1) == "00001110" and l1.level == 1
        assert str(extend_lambda(l1)) == "00001000"
        assert str(extend_lambda(extend_lambda(l1))) == "00000000"

    def test_against_naive_random(self, rng):
        for _ in range(300):
            n = rng.choice([2, 4, 8, 16, 32, 64])
            alpha = rng.choice(["ab", "abcd", "abcdefghijklmnopqrst"])
            x = "".join(rng.choice(alpha) for _ in range(n))
            y = "".join(c if rng.random() < 0.7 else rng.choice(alpha) for c in x)
            pair = InputPair(x, y)
            top = n.bit_length() - 1
            for i, lam in enumerate(lambda_levels(pair, top)):
                assert str(lam) == naive_lambda(pair, i)

    def test_monotone(self, rng):
        for _ in range(100):
            x = "".join(rng.choice("ab") for _ in range(32))
            y = "".join(rng.choice("ab") for _ in range(32))
            lams = lambda_levels(InputPair(x, y), 5)
            for lo, hi in zip(lams, lams[1:]):
                assert hi.bits & ~lo.bits == 0


class TestDecomposition:
    @pytest.mark.parametrize("d,S", [(5, (0, 2)), (11, (0, 1, 3)), (8, (3,)), (1, (0,))])
    def test_examples(self, d, S):
        assert power_decomposition(d).S == S

    def test_partial_sums(self):
        dec = power_decomposition(11)
        assert dec.dbar == (1, 1, 0, 1)
        assert dec.partial == (1, 3, 3, 11)
        assert dec.partial_sum(-1) == 0

    def test_zero(self):
        with pytest.raises(ValueError):
            power_decomposition(0)

    def test_round_trip_all(self):
        for d in range(1, (1 << 16) + 1):
            dec = power_decomposition(d)
            assert sum(1 << i for i in dec.S) == d
            assert dec.partial[-1] == d

    @given(st.integers(1, 1 << 40))
    def test_round_trip_property(self, d):
        dec = power_decomposition(d)
        assert sum(1 << i for i in dec.S) == d
        assert all(dec.partial_sum(m) == d % (1 << (m + 1)) for m in range(len(dec.dbar)))


class TestFactorLemma:
    def test_worked_example(self):
        lams = lambda_levels(WORKED, 2)
        assert lams[0][7] & lams[2][8] == 1
        assert check_factor_lemma(WORKED, 7, 5, lams)

    def test_d1(self):
        lams = lambda_levels(WORKED, 0)
        for j in range(16):
            assert check_factor_lemma(WORKED, j, 1, lams) == bool(lams[0][j])

    def test_exhaustive_binary(self):
        for n in (2, 4, 8):
            strings = ["".join(p) for p in itertools.product("01", repeat=n)]
            for x in strings:
                for y in strings:
                    pair = InputPair(x, y, ("0", "1"))
                    lams = lambda_levels(pair, n.bit_length() - 1)
                    for d in range(1, n + 1):
                        for j in range(n - d + 1):
                            assert check_factor_lemma(pair, j, d, lams) == (x[j:j + d] == y[j:j + d])

    def test_random_n16(self, rng):
        for _ in range(200):
            x = "".join(rng.choice("01") for _ in range(16))
            y = "".join(c if rng.random() < 0.8 else rng.choice("01") for c in x)
            pair = InputPair(x, y)
            lams = lambda_levels(pair, 4)
            for d in range(1, 17):
                for j in range(17 - d):
                    assert check_factor_lemma(pair, j, d, lams) == (x[j:j + d] == y[j:j + d])

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            check_factor_lemma(WORKED, 12, 5, lambda_levels(WORKED, 2))


class TestInit:
    def test_fpm(self):
        assert str(init_dminus1(ProblemSpec("fpm", 3), 8)) == "100000000"

    def test_ffm(self):
        assert str(init_dminus1(ProblemSpec("ffm", 3, 3), 8)) == "000100000"

    def test_sfsc(self):
        v = init_dminus1(ProblemSpec("sfsc", 5), 16)
        assert str(v) == "1" * 17 and isinstance(v, DVector) and v.level == -1

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            ProblemSpec("ffm", 2)
        with pytest.raises(ValueError):
            ProblemSpec("fpm", 2, 1)
        with pytest.raises(ValueError):
            ProblemSpec("sfsc", 0)
        with pytest.raises(ValueError):
            ProblemSpec("ffm", 4, 5).check(8)
        ProblemSpec("ffm", 4, 4).check(8)


class TestFsm:
    def test_worked_trace(self):
        res = fsm_classical(WORKED, ProblemSpec("sfsc", 5))
        assert res.answer
        assert str(res.d(-1)) == "1" * 17
        assert str(res.d(0)) == "00110110111110111"
        assert res.d(1) == DVector(1, res.d(0).bits, 17)
        assert res.d(2).set_positions() == [12]

    def test_identical_strings(self):
        pair = InputPair("abcabcab", "abcabcab")
        for d in range(1, 9):
            assert fsm_classical(pair, ProblemSpec("sfsc", d)).answer
            assert fsm_classical(pair, ProblemSpec("fpm", d)).answer

    def test_small_example_d4(self):
        assert fsm_classical(SMALL, ProblemSpec("sfsc", 4)).answer
        assert not fsm_classical(SMALL, ProblemSpec("sfsc", 5)).answer
        assert fsm_classical(SMALL, ProblemSpec("ffm", 4, 4)).answer
        assert not fsm_classical(SMALL, ProblemSpec("ffm", 4, 3)).answer

    def test_oracle_examples(self):
        assert brute_force_oracle(WORKED, ProblemSpec("ffm", 5, 7))
        assert not brute_force_oracle(WORKED, ProblemSpec("fpm", 1))
        assert brute_force_oracle(SMALL, ProblemSpec("fpm", 1))

    # n = 8 runs in the acceptance suite alongside the circuit
    @pytest.mark.parametrize("n", [2, 4])
    def test_exhaustive_padded_binary(self, n):
        strings = ["".join(p) for p in itertools.product("01", repeat=n - 1)]
        specs = []
        for d in range(1, n + 1):
            specs += [ProblemSpec("fpm", d), ProblemSpec("sfsc", d)]
            specs += [ProblemSpec("ffm", d, j) for j in range(n - d + 1)]
        for x in strings:
            for y in strings:
                pair = pad_inputs(x, y, "01")
                assert pair.n == n
                for spec in specs:
                    assert fsm_classical(pair, spec).answer == brute_force_oracle(pair, spec)

    def test_random_10000(self):
        rng = random.Random(99)
        count = 0
        for n in (16, 32, 64):
            for sigma in (2, 4, 20):
                for _ in range(1112):
                    inst = random_instance(rng, n, sigma)
                    assert fsm_classical(inst.pair, inst.spec).answer == brute_force_oracle(inst.pair, inst.spec)
                    count += 1
        assert count >= 10000

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_logical_shift_never_loses_bits(self, data):
        # a set bit may only come from a block fully inside the string, so the
        # logical shift never drops a bit past index n
        n = data.draw(st.sampled_from([4, 8, 16]))
        x = data.draw(st.text("ab", min_size=n, max_size=n))
        y = data.draw(st.text("ab", min_size=n, max_size=n))
        d = data.draw(st.integers(1, n))
        pair = InputPair(x, y, ("a", "b"))
        res = fsm_classical(pair, ProblemSpec(Problem.SFSC, d))
        dec = power_decomposition(d)
        for i, lam in enumerate(res.lambdas):
            if dec.dbar[i]:
                anded = res.d(i - 1).bits & lam.bits
                assert anded >> (n + 1 - (1 << i)) == 0
