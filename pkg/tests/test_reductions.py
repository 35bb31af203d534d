import pytest

from conftest import M2, M3
from reesvec.filtration import powers, stabilization_bounds, user_table
from reesvec.monomial import equals, ideal_power, ideal_product, minimalize, parse_ideal
from reesvec.reductions import (
    candidate_from_dict,
    candidate_to_dict,
    check_complete_reduction_at,
    check_joint_reduction_at,
    complete_reduction,
    joint_reduction,
    nakayama_descent_check,
    propagation_failures,
    pure_power_candidate,
    reduction_number,
    reduction_vector_set,
    search_complete_reductions,
)

J2 = parse_ideal("X^2 + Y^2")


class TestCompleteReduction:
    def test_y_products(self, example1_candidate, example2_candidate):
        assert example1_candidate.y == ((3, 0, 0), (0, 3, 0), (0, 0, 3))
        assert example2_candidate.y == ((4, 0), (0, 4))

    def test_example1_at_22(self, example1, example1_candidate):
        assert check_complete_reduction_at(example1, example1_candidate, (2, 2))

    def test_example2_at_11(self, example2, example2_candidate):
        assert check_complete_reduction_at(example2, example2_candidate, (1, 1))

    def test_example2_fails_at_origin(self, example2, example2_candidate):
        # (X^4, Y^4) != IJ = m^4, since X Y^3 is missing
        assert not equals(minimalize([(4, 0), (0, 4)], 2), ideal_power(M2, 4))
        assert not check_complete_reduction_at(example2, example2_candidate, (0, 0))

    def test_negative_vector_rejected(self, example2, example2_candidate):
        with pytest.raises(ValueError):
            check_complete_reduction_at(example2, example2_candidate, (-1, 0))

    def test_entry_outside_ideal(self, example2):
        with pytest.raises(ValueError):
            complete_reduction(example2, [[(1, 0), (0, 2)], [(2, 0), (0, 2)]])

    def test_round_trip(self, example1_candidate):
        assert candidate_from_dict(candidate_to_dict(example1_candidate)) == example1_candidate


class TestJointReduction:
    def test_squares_reduce_maximal_square(self):
        spec = powers(ideal_power(M2, 2))
        cand = joint_reduction(spec, [[(2, 0), (0, 2)]])
        assert cand.q == (2,)
        assert check_joint_reduction_at(spec, cand, (2,))

    def test_generators_of_maximal(self):
        spec = powers(M2)
        assert check_joint_reduction_at(spec, joint_reduction(spec, [[(1, 0), (0, 1)]]), (1,))

    def test_example1_type_30(self, example1):
        cand = joint_reduction(example1, [[(1, 0, 0), (0, 1, 0), (0, 0, 1)], []])
        assert cand.q == (3, 0)
        assert check_joint_reduction_at(example1, cand, (1, 0))

    def test_wrong_total(self, example1):
        with pytest.raises(ValueError):
            joint_reduction(example1, [[(1, 0, 0)], []])


class TestReductionSets:
    def test_example2(self, example2, example2_candidate):
        red = reduction_vector_set(example2, example2_candidate, (8, 8))
        assert red.minimal_elements == ((1, 1), (2, 0))
        assert (1, 1) in red and (0, 0) not in red

    def test_example1(self, example1, example1_candidate):
        red = reduction_vector_set(example1, example1_candidate, (6, 6))
        assert (2, 2) in red
        assert any(m[0] <= 2 and m[1] <= 2 for m in red.minimal_elements)

    def test_propagation_sound(self, example2, example2_candidate):
        cert = stabilization_bounds(example2, (6, 6))
        assert propagation_failures(example2, example2_candidate, (6, 6), cert) == []

    def test_reduction_number_is_minimal_member(self):
        # r_J = min{m : J F(n) = F(n+1) for all n >= m}, the minimal reduction vector itself
        spec = powers(ideal_power(M2, 2))
        cand = complete_reduction(spec, [[(2, 0), (0, 2)]])
        red = reduction_vector_set(spec, cand, (8,))
        assert red.minimal_elements == ((reduction_number(spec, cand.y, 8),),) == ((1,),)

    def test_reduction_number(self):
        spec = powers(M2)
        assert reduction_number(spec, [(1, 0), (0, 1)], 8) == 0
        # (X^2, Y^2) is a reduction of m^2 with reduction number 1
        assert reduction_number(powers(ideal_power(M2, 2)), [(2, 0), (0, 2)], 8) == 1


class TestDescent:
    def test_example2(self, example2, example2_candidate):
        report = nakayama_descent_check(example2, example2_candidate.y, (5, 5))
        assert report.lower == (1, 1)
        assert report.checked == 25 and report.ok

    def test_boundary_uses_plus_part(self, example2, example2_candidate):
        report = nakayama_descent_check(example2, example2_candidate.y, (3, 3), lower=(0, 0))
        assert report.ok

    def test_constructed_counterexample(self):
        # I = (X); F(1..3) = (X), F(4) = (X^5). With y = X^2 and n in {1, 2},
        # F(n) = (y)F(n-1) + F(n+1) holds because F(n+1) = F(n), yet (y)F(n-1) is smaller.
        X = parse_ideal("X")
        table = {(1,): X, (2,): X, (3,): X, (4,): parse_ideal("X^5")}
        report = nakayama_descent_check(user_table([X], table), [(2,)], (3,))
        assert report.violations == [(1,), (2,)]

    def test_y_outside_product(self, example2):
        with pytest.raises(ValueError):
            nakayama_descent_check(example2, [(1, 0), (0, 1)], (3, 3))


class TestSearch:
    def test_example1(self, example1, example1_candidate):
        assert example1_candidate in search_complete_reductions(example1)

    def test_example2(self, example2, example2_candidate):
        found = search_complete_reductions(example2)
        assert example2_candidate in found

    def test_single_maximal(self):
        found = search_complete_reductions(powers(M2))
        assert ((1, 0), (0, 1)) in [c.y for c in found]

    def test_results_reduce(self, example2):
        for cand in search_complete_reductions(example2):
            assert not reduction_vector_set(example2, cand, (5, 5)).is_empty

    def test_pure_power_candidate(self):
        spec = powers(M3, ideal_power(M3, 2))
        assert pure_power_candidate(spec).y == ((3, 0, 0), (0, 3, 0), (0, 0, 3))
        assert ideal_product(M3, M3) == ideal_power(M3, 2)
