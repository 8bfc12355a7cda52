import random
from fractions import Fraction

import pytest

from conftest import (
    random_banded_rule,
    random_dense_sc,
    random_spec,
    rational,
    tabulated_rule,
)
from quadmps.errors import (
    InvalidSequenceError,
    MathDomainError,
    ParseError,
    RangeError,
    RegularityError,
)
from quadmps.polynomials import ONE, X, Poly
from quadmps.sequences import (
    BandedRule,
    PerturbationSpec,
    StructureCoefficients,
    derivative_sequence,
    extract_sc,
    generate_mps,
    perturb,
)

F = Fraction


def hermite_rule() -> BandedRule:
    # monic Hermite: W_{n+2} = x W_{n+1} - ((n+1)/2) W_n
    return BandedRule.three_term(beta=lambda n: F(0), gamma=lambda n: F(n, 2))


class TestStructureCoefficients:
    def test_nmax_and_access(self):
        sc = StructureCoefficients([1, 2, 3], [[4], [5, 6]])
        assert sc.nmax == 2
        assert sc.beta_at(1) == 2
        assert sc.chi_at(1, 0) == 5
        with pytest.raises(RangeError):
            sc.beta_at(3)
        with pytest.raises(RangeError):
            sc.chi_at(2, 0)

    def test_validation(self):
        with pytest.raises(InvalidSequenceError):
            StructureCoefficients([1, 2], [[1], [1, 1]])
        with pytest.raises(InvalidSequenceError):
            StructureCoefficients([1, 2, 3], [[1], [1]])

    def test_restrict(self):
        sc = StructureCoefficients([1, 2, 3], [[4], [5, 6]])
        small = sc.restrict(1)
        assert small.nmax == 1
        assert small.beta == (F(1), F(2))
        assert small.chi == ((F(4),),)
        with pytest.raises(RangeError):
            sc.restrict(5)

    def test_json_round_trip(self, rng):
        sc = random_dense_sc(rng, 6)
        assert StructureCoefficients.from_json(sc.to_json()) == sc

    def test_json_rejects_inconsistency(self, rng):
        payload = random_dense_sc(rng, 4).to_json()
        payload["nmax"] = 3
        with pytest.raises(ParseError):
            StructureCoefficients.from_json(payload)
        with pytest.raises(ParseError):
            StructureCoefficients.from_json({"beta": ["1"]})


class TestGenerate:
    def test_hermite_low_terms(self):
        polys = generate_mps(hermite_rule(), 3)
        assert polys[0] == ONE
        assert polys[1] == X
        assert polys[2] == X * X - Poly.constant(F(1, 2))
        assert polys[3] == X * X * X - F(3, 2) * X

    def test_table_and_rule_paths_agree(self, rng):
        rule = random_banded_rule(rng, 2)
        assert generate_mps(rule, 9) == generate_mps(rule.table(8), 9)

    def test_shallow_table_rejected(self, rng):
        sc = random_dense_sc(rng, 4)
        with pytest.raises(RangeError):
            generate_mps(sc, 7)

    def test_monic_of_correct_degree(self, rng):
        for kind in range(4):
            polys = generate_mps(random_spec(rng, kind, depth=12), 10)
            for n, w in enumerate(polys):
                assert w.degree == n and w.is_monic


class TestExtract:
    def test_round_trip_all_spec_shapes(self, rng):
        for kind in range(8):
            spec = random_spec(rng, kind, depth=14)
            polys = generate_mps(spec, 12)
            sc = extract_sc(polys)
            assert sc.nmax == 11
            table = spec if isinstance(spec, StructureCoefficients) else spec.table(13)
            assert sc == table.restrict(11)
            assert generate_mps(sc, 12) == polys

    def test_rejects_non_mps(self):
        with pytest.raises(InvalidSequenceError):
            extract_sc([ONE, X * X])  # degree gap
        with pytest.raises(InvalidSequenceError):
            extract_sc([ONE, 2 * X])  # not monic
        with pytest.raises(InvalidSequenceError):
            extract_sc([ONE])  # too short to carry any coefficient


class TestDerivative:
    def test_matches_direct_differentiation(self, rng):
        for kind in range(6):
            spec = random_spec(rng, kind, depth=14)
            polys = generate_mps(spec, 12)
            derived = derivative_sequence(polys, extract_sc(polys))
            direct = [
                polys[n + 1].derivative() * F(1, n + 1) for n in range(len(polys) - 1)
            ]
            assert derived == direct

    def test_hermite_derivative_is_hermite(self):
        polys = generate_mps(hermite_rule(), 9)
        derived = derivative_sequence(polys, extract_sc(polys))
        assert derived == polys[:-1]


class TestPerturb:
    def test_corecursive_shifts_beta0_only(self, rng):
        base = random_banded_rule(rng, 2)
        shifted = perturb(base, PerturbationSpec(mu=(F(3, 2),)))
        assert shifted.beta(0) == base.beta(0) + F(3, 2)
        for n in range(1, 8):
            assert shifted.beta(n) == base.beta(n)
        for n in range(8):
            for nu in range(max(0, n - 1), n + 1):
                assert shifted.chi_at(n, nu) == base.chi_at(n, nu)

    def test_band_scales_land_on_named_entries(self, rng):
        base = random_banded_rule(rng, 2)
        pert = PerturbationSpec(mu=(0, 0), lam=(F(5),), eta=(F(7),))
        scaled = perturb(base, pert)
        # gamma_1 sits at chi_{1,0}, alpha_1 at chi_{0,0}; nothing else moves
        assert scaled.chi_at(1, 0) == 5 * base.chi_at(1, 0)
        assert scaled.chi_at(0, 0) == 7 * base.chi_at(0, 0)
        assert scaled.chi_at(2, 1) == base.chi_at(2, 1)
        assert scaled.chi_at(1, 1) == base.chi_at(1, 1)

    def test_d1_band_scale(self, rng):
        base = random_banded_rule(rng, 1)
        scaled = perturb(base, PerturbationSpec(mu=(0, 0), lam=(F(2),)))
        # for d = 1 the regularity band carries gamma_m at row m - 1
        assert scaled.chi_at(0, 0) == 2 * base.chi_at(0, 0)
        assert scaled.chi_at(1, 1) == base.chi_at(1, 1)

    def test_validation(self, rng):
        base2 = random_banded_rule(rng, 2)
        with pytest.raises(RegularityError):
            PerturbationSpec(mu=(0, 1), lam=(F(0),))
        with pytest.raises(MathDomainError):
            PerturbationSpec(mu=(0, 0), lam=(F(1),), eta=(F(1),))  # changes nothing
        with pytest.raises(MathDomainError):
            PerturbationSpec(mu=(1, 2), lam=())  # lambda length mismatch
        with pytest.raises(MathDomainError):
            perturb(base2.table(6), PerturbationSpec(mu=(1,)))
        with pytest.raises(MathDomainError):
            perturb(random_banded_rule(rng, 1), PerturbationSpec(mu=(0, 1), lam=(1,), eta=(2,)))
        with pytest.raises(MathDomainError):
            perturb(random_banded_rule(rng, 3), PerturbationSpec(mu=(1,)))

    def test_order_zero_needs_no_scales(self):
        pert = PerturbationSpec(mu=(F(1),))
        assert pert.order == 0

    def test_generated_sequences_differ_only_low_down(self, rng):
        base = random_banded_rule(rng, 2)
        shifted = perturb(base, PerturbationSpec(mu=(F(1),)))
        w_base = generate_mps(base, 6)
        w_shifted = generate_mps(shifted, 6)
        assert w_base[0] == w_shifted[0]
        assert w_base[1] != w_shifted[1]


def test_tabulated_rule_is_banded(rng):
    rule = random_banded_rule(rng, 2, depth=10)
    table = rule.table(6)
    for n in range(6):
        for nu in range(n + 1):
            if n - nu >= 2:
                assert table.chi_at(n, nu) == 0
