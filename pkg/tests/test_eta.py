from __future__ import annotations

import cmath
import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from brieskorn_eta.cyclotomic import CyclotomicNumber
from brieskorn_eta.eta import (CharacterTable, EtaTrace, FixedPointSet, NonvanishingIndexError, RotationData,
                               brieskorn_relative_eta, covering_eta, dolbeault_local_contribution,
                               equivariant_eta_from_fixed_points, plumbing_relative_eta, relative_eta_from_covering,
                               relative_eta_z2)
from brieskorn_eta.exact import EtaValue

fractions = st.builds(Fraction, st.integers(-10 ** 6, 10 ** 6), st.integers(1, 2 ** 16))


def brute_local(angles) -> complex:
    out = 1 + 0j
    for a in angles:
        out *= 1 / (1 - cmath.exp(-2j * math.pi * float(a)))
    return out


def test_local_contribution_involution():
    assert dolbeault_local_contribution(RotationData(["1/2"] * 3)) == Fraction(1, 8)
    assert dolbeault_local_contribution(RotationData(["1/2"])) == Fraction(1, 2)


def test_local_contribution_thirds_matches_oracle():
    # double-precision oracle, frozen: 1/(1 - e^{-2 pi i/3})^2 = (1 - i sqrt 3)/6
    value = dolbeault_local_contribution(RotationData(["1/3", "1/3"]))
    assert not value.is_rational()
    assert abs(value.to_complex() - complex(1 / 6, -math.sqrt(3) / 6)) < 1e-12
    assert abs(value.to_complex() - brute_local([Fraction(1, 3)] * 2)) < 1e-12


def test_local_contribution_errors():
    with pytest.raises(ValueError):
        RotationData([0])
    with pytest.raises(ValueError):
        RotationData(["3/2"])
    with pytest.raises(ValueError):
        dolbeault_local_contribution(RotationData(["1/67"]))
    assert dolbeault_local_contribution(RotationData(["1/67"]), denominator_bound=67).m == 67


def test_symmetric_angles_give_real_values():
    # closed under theta -> 1 - theta: the product is 1/|1 - zeta|^2, always real
    for N in range(3, 13):
        value = dolbeault_local_contribution(RotationData([Fraction(1, N), Fraction(N - 1, N)]))
        assert value.imaginary_part_is_zero()
        # |1 - zeta_N|^2 = 2 - 2 cos(2 pi / N) is rational only for N = 3, 4, 6
        assert value.is_rational() == (N in (3, 4, 6))
    assert dolbeault_local_contribution(RotationData(["1/3", "2/3"])) == Fraction(1, 3)


def test_equivariant_eta_examples():
    pts = lambda d, n: FixedPointSet([(f"p{i}", RotationData.involution(n)) for i in range(d)])
    assert equivariant_eta_from_fixed_points(pts(3, 3)) == Fraction(3, 4)
    assert equivariant_eta_from_fixed_points(pts(5, 3)) == Fraction(5, 4)
    assert equivariant_eta_from_fixed_points(FixedPointSet([])) == 0


def test_general_formula_is_rejected():
    fps = FixedPointSet([("p", RotationData.involution(3))], assert_psc_vanishing=False)
    with pytest.raises(NonvanishingIndexError):
        equivariant_eta_from_fixed_points(fps)


def test_duplicate_ids_rejected():
    with pytest.raises(ValueError):
        FixedPointSet([("p", RotationData.involution(1)), ("p", RotationData.involution(1))])


def test_covering_examples():
    assert covering_eta([EtaValue("2/7")], CharacterTable.trivial(1)) == Fraction(2, 7)
    assert covering_eta({0: 1, 1: "1/2"}, CharacterTable.z2_sign()) == Fraction(1, 4)
    assert covering_eta([1, "1/2"], CharacterTable.trivial(2)) == Fraction(3, 4)
    with pytest.raises(ValueError):
        covering_eta([1, 2, 3], CharacterTable.z2_sign())


def test_covering_with_cyclotomic_character():
    # Z_3 with a nontrivial character and etas chosen so the sum is real
    w = CyclotomicNumber.root_of_unity(Fraction(1, 3))
    chi = CharacterTable([1, w, w * w])
    assert covering_eta([EtaValue(3), EtaValue(0), EtaValue(0)], chi) == 1
    with pytest.raises(ValueError):
        covering_eta([EtaValue(0), EtaValue(3), EtaValue(0)], chi)


def test_character_rank_must_be_positive_integer():
    with pytest.raises(ValueError):
        CharacterTable(["1/2", 1])


def test_relative_eta_z2_examples():
    assert relative_eta_z2(EtaValue("3/4")) == Fraction(-3, 4)
    assert relative_eta_z2(EtaValue(0)) == 0
    assert relative_eta_z2(EtaValue("5/4")) == Fraction(-5, 4)


@pytest.mark.parametrize("n, d, expected", [(3, 5, "-5/4"), (3, 1, "-1/4"), (5, 7, "-7/16")])
def test_brieskorn_relative_eta(n, d, expected):
    value = brieskorn_relative_eta(n, d)
    assert value == EtaValue(expected)
    assert value.has_dyadic_denominator()


@pytest.mark.parametrize("k, d, expected", [(1, 3, "-3/4"), (2, 1, "-1/16"), (1, 7, "-7/4")])
def test_plumbing_relative_eta(k, d, expected):
    assert plumbing_relative_eta(k, d) == EtaValue(expected)


def test_pipeline_parameter_errors():
    for bad in [(4, 3), (3, 2), (1, 3)]:
        with pytest.raises(ValueError):
            brieskorn_relative_eta(*bad)
    with pytest.raises(ValueError):
        plumbing_relative_eta(0, 3)
    with pytest.raises(ValueError):
        plumbing_relative_eta(1, 4)


def test_trace_records_each_stage():
    trace = EtaTrace()
    brieskorn_relative_eta(3, 5, trace=trace)
    assert [s["step"] for s in trace.steps] == ["fixed points", "rotation data", "local contributions",
                                                "equivariant eta", "covering", "relative eta"]
    assert trace.steps[-1]["value"] == "-5/4"


def test_epsilon_does_not_change_value():
    assert brieskorn_relative_eta(3, 7, epsilon="1/8") == brieskorn_relative_eta(3, 7, epsilon="9/10")


def test_all_halves_is_dyadic():
    for m in range(1, 13):
        assert dolbeault_local_contribution(RotationData.involution(m)) == Fraction(1, 2 ** m)


def test_cyclotomic_matches_float_on_small_multisets():
    for N in (5, 7, 12):
        angles = [Fraction(j, N) for j in range(1, N)]
        for combo in itertools.combinations_with_replacement(angles, 3):
            exact = dolbeault_local_contribution(RotationData(combo)).to_complex()
            assert abs(exact - brute_local(combo)) < 1e-10


@pytest.mark.parametrize("k", [1, 2, 3])
def test_link_and_plumbing_agree(k):
    for d in range(1, 20, 2):
        assert brieskorn_relative_eta(2 * k + 1, d) == plumbing_relative_eta(k, d)


@settings(max_examples=300, deadline=None)
@given(fractions, fractions, fractions, fractions)
def test_covering_linear_and_complementary(a, b, c, e):
    sign, triv = CharacterTable.z2_sign(), CharacterTable.trivial(2)
    lhs = covering_eta([a + c, b + e], sign)
    assert lhs == covering_eta([a, b], sign) + covering_eta([c, e], sign)
    assert covering_eta([a, b], triv) + covering_eta([a, b], sign) == a
    # reconstruction of the equivariant value
    assert covering_eta([a, b], triv) - covering_eta([a, b], sign) == b
    assert relative_eta_from_covering(a, b) == relative_eta_z2(EtaValue(b))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 5, 7]), st.integers(0, 20), st.integers(0, 20))
def test_distinct_d_give_distinct_values(n, i, j):
    d, dp = 2 * i + 1, 2 * j + 1
    gap = abs(brieskorn_relative_eta(n, d) - brieskorn_relative_eta(n, dp))
    assert gap == Fraction(abs(d - dp), 2 ** (n - 1))


def test_mixed_denominators_with_raised_bound():
    rng = np.random.default_rng(5)
    angles = sorted({Fraction(j, m) for m in range(2, 13) for j in range(1, m)})
    for _ in range(30):
        combo = [angles[i] for i in rng.integers(0, len(angles), size=rng.integers(2, 5))]
        value = dolbeault_local_contribution(RotationData(combo), denominator_bound=27720)
        assert abs(value.to_complex() - brute_local(combo)) < 1e-10
