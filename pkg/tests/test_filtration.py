import pytest

from conftest import M2, M3, brute_colength
from reesvec.filtration import (
    Family,
    IdealCache,
    NoStabilizationError,
    StabilizationCertificate,
    check_filtration_axioms,
    closures,
    evaluate,
    explicit_product,
    spec_from_dict,
    spec_to_dict,
    stabilization_bounds,
    user_table,
)
from reesvec.monomial import ArityError, ideal_power, integral_closure, parse_ideal, unit_ideal

J2 = parse_ideal("X^2 + Y^2")


class TestEvaluate:
    def test_example1_setup(self, example1):
        assert example1((1, 1)) == ideal_power(M3, 3)

    def test_negative_parts_give_unit(self, example1, example2):
        assert example1((-3, -3)) == unit_ideal(3)
        assert example2((-1, 2)) == example2((0, 2))

    def test_closure_family(self):
        spec = closures(J2)
        assert spec((1,)) == parse_ideal("X^2 + X*Y + Y^2")
        assert spec((1,)) == integral_closure(J2)

    def test_powers_match_explicit_products(self, example2):
        for n in [(0, 3), (2, 1), (3, 3)]:
            assert evaluate(example2, n) == explicit_product(example2, n)

    def test_table_missing_entry(self):
        spec = user_table([M2], {(1,): M2})
        assert spec((0,)) == unit_ideal(2)
        with pytest.raises(KeyError):
            spec((2,))

    def test_arity(self, example2):
        with pytest.raises(ArityError):
            example2((1,))

    def test_cache_bound(self):
        cache = IdealCache(maxsize=2)
        for k in range(5):
            cache.put((k,), M2)
        assert len(cache) <= 2


class TestStabilization:
    def test_powers_stabilize_immediately(self, example1):
        assert stabilization_bounds(example1, (3, 3)).bounds == (0, 0)

    def test_closure_of_pure_squares(self):
        spec = closures(J2)
        # direct equality scan: I F(n) = F(n+1) fails only at n = 0,
        # where I R = (X^2, Y^2) but F(1) = m^2
        scan = [spec((n + 1,)) == ideal_power(J2, 1) * spec((n,)) for n in range(7)]
        assert scan == [False] + [True] * 6
        for n in range(6):
            assert spec((n,)) == integral_closure(ideal_power(J2, n)) == ideal_power(M2, 2 * n)
        assert stabilization_bounds(spec, (6,)).bounds == (1,)

    def test_closure_of_maximal_powers(self):
        spec = closures(M3, ideal_power(M3, 2))
        assert stabilization_bounds(spec, (5, 5)).bounds == (0, 0)

    def test_late_stabilization(self):
        # F(n) = m^2 for n = 1, 2, then I F(n-1); stabilizes from n = 2
        m2 = ideal_power(M2, 2)
        table = {(1,): m2, (2,): m2}
        for n in range(3, 7):
            table[(n,)] = ideal_power(M2, n)
        cert = stabilization_bounds(user_table([M2], table), (5,))
        assert cert.bounds == (2,)
        assert StabilizationCertificate.from_dict(cert.to_dict()) == cert

    def test_no_stabilization_in_box(self):
        table = {(n,): ideal_power(M2, 2 * n) for n in range(1, 5)}
        with pytest.raises(NoStabilizationError):
            stabilization_bounds(user_table([M2], table), (3,))

    def test_box_too_small(self, example2):
        with pytest.raises(ValueError):
            stabilization_bounds(example2, (1, 3))


class TestAxioms:
    def test_builtin_families(self, example2):
        assert check_filtration_axioms(example2, (3, 3)) == []
        assert check_filtration_axioms(closures(J2, M2), (2, 2)) == []

    def test_non_decreasing_table(self):
        spec = user_table([M2], {(1,): ideal_power(M2, 2), (2,): M2})
        kinds = {v.condition for v in check_filtration_axioms(spec, (2,))}
        assert "decreasing" in kinds
        assert "contains_power" in kinds


def test_colengths_along_filtration(example2):
    # H(n, 0) = C(2n+1, 2) and H(0, n) = 4 C(n+1, 2), counted point by point
    for n in range(4):
        assert brute_colength(example2((n, 0)).gens, 2, 2 * n + 2) == (2 * n + 1) * n
        assert brute_colength(example2((0, n)).gens, 2, 2 * n + 2) == 2 * n * (n + 1)


def test_serialization_round_trip(example1):
    spec = user_table([M2], {(1,): M2, (2,): ideal_power(M2, 2)})
    for original in (example1, closures(J2), spec):
        back = spec_from_dict(spec_to_dict(original))
        assert back.family is original.family
        assert back.ideals == original.ideals
        assert back.table == original.table
    assert Family("closure") is Family.CLOSURE
