import pytest
from hypothesis import given
from hypothesis import strategies as st

from diagcut.diagram import make_columns
from diagcut.errors import NotProjectivePlaneSystem
from diagcut.interp import LinearSystem, generic_dimension, parse_mults
from diagcut.negcurve import (
    DivisorClass,
    cremona_reduce,
    find_witness,
    is_minus_one_class,
    pairing,
    predicted_dimension,
    quadratic_move,
    system_class,
)

classes = st.builds(
    DivisorClass,
    st.integers(-3, 12),
    st.lists(st.integers(-2, 6), max_size=8),
)
triples = st.lists(st.integers(0, 7), min_size=3, max_size=3, unique=True).map(tuple)

MINUS_ONE = [(0, (-1,)), (1, (1, 1)), (2, (1,) * 5), (3, (2,) + (1,) * 6), (4, (2, 2, 2) + (1,) * 5), (5, (2,) * 6 + (1, 1)), (6, (3,) + (2,) * 7)]


class TestPairing:
    def test_double_line(self):
        assert pairing(DivisorClass(2, (2, 2)), DivisorClass(1, (1, 1))) == -2

    def test_line_squared(self):
        assert DivisorClass(1, (1, 1)).self_intersection() == -1

    @given(classes, st.integers(0, 7))
    def test_exceptional_reads_multiplicity(self, c, i):
        assert pairing(c, DivisorClass.exceptional(i)) == c.padded(i + 1)[i]

    @given(classes, classes, st.integers(-4, 4))
    def test_symmetric_and_scaling(self, a, b, k):
        assert pairing(a, b) == pairing(b, a)
        scaled = DivisorClass(k * a.d, [k * v for v in a.mults])
        assert pairing(scaled, b) == k * pairing(a, b)

    def test_trailing_zeros_normalized(self):
        assert DivisorClass(3, (1, 0, 0)) == DivisorClass(3, (1,))
        assert DivisorClass.from_json(DivisorClass(3, (2, 1)).to_json()) == DivisorClass(3, (2, 1))


class TestCremona:
    def test_double_line_exposes_exceptional(self):
        end, log = cremona_reduce(DivisorClass(2, (2, 2, 0)))
        assert end == DivisorClass(0, (0, 0, -2))
        assert log == [(0, 1, 2)]

    def test_line(self):
        end, _ = cremona_reduce(DivisorClass(1, (1, 1)))
        assert end == DivisorClass(0, (0, 0, -1))

    def test_standard_class_is_fixed(self):
        c = DivisorClass(3, (1,) * 8)
        assert cremona_reduce(c) == (c, [])

    def test_stable_tie_break(self):
        _, log = cremona_reduce(DivisorClass(5, (2, 2, 2, 2)))
        assert log[0] == (0, 1, 2)

    @given(classes, classes, triples)
    def test_move_preserves_pairing(self, a, b, t):
        assert pairing(quadratic_move(a, t), quadratic_move(b, t)) == pairing(a, b)

    @given(classes, triples)
    def test_move_is_involution(self, a, t):
        assert quadratic_move(quadratic_move(a, t), t) == a

    @given(classes, triples)
    def test_move_preserves_anticanonical_degree(self, a, t):
        assert quadratic_move(a, t).anticanonical_degree() == a.anticanonical_degree()


class TestMinusOneClasses:
    @pytest.mark.parametrize("d, mults", MINUS_ONE)
    def test_known(self, d, mults):
        assert is_minus_one_class(DivisorClass(d, mults))

    @pytest.mark.parametrize("d, mults", [(1, (1,)), (2, (1,) * 4), (3, (1,) * 8), (0, (-2,)), (3, (1,) * 10)])
    def test_not_minus_one(self, d, mults):
        assert not is_minus_one_class(DivisorClass(d, mults))

    @given(st.sampled_from(MINUS_ONE), st.randoms(use_true_random=False), triples)
    def test_invariant_under_permutation_and_moves(self, case, rng, t):
        d, mults = case
        m = list(mults) + [0] * (8 - len(mults))
        rng.shuffle(m)
        c = DivisorClass(d, m)
        assert is_minus_one_class(c)
        assert is_minus_one_class(quadratic_move(c, t))


class TestWitness:
    def test_two_double_points(self):
        assert find_witness(LinearSystem.plane(2, (2, 2))) == (DivisorClass(1, (1, 1)), -2)

    def test_five_double_points(self):
        assert find_witness(LinearSystem.plane(4, (2,) * 5)) == (DivisorClass(2, (1,) * 5), -2)

    def test_section_six_has_none(self):
        assert find_witness(LinearSystem.plane(21, parse_mults("7x6,6x4,1"))) is None

    def test_needs_full_triangle(self):
        with pytest.raises(NotProjectivePlaneSystem):
            find_witness(LinearSystem(make_columns([(2, 3), (1, 0)]), (1,)))
        with pytest.raises(NotProjectivePlaneSystem):
            system_class(LinearSystem(make_columns([(3, 0), (2, 0), (2, 0)]), (1,)))

    def test_witness_orders_by_heaviest_points(self):
        w, value = find_witness(LinearSystem.plane(5, (1, 4, 3)))
        assert w == DivisorClass(1, (0, 1, 1)) and value == -2

    @pytest.mark.parametrize(
        "d, mults",
        [(2, (2, 2)), (4, (2,) * 5), (6, (3,) * 5), (6, (4, 4, 4)), (5, (3, 3, 3)), (7, (3,) * 6), (6, (4, 4, 1)), (9, (5, 5, 2, 2))],
    )
    def test_predicted_dimension_matches_rank(self, d, mults):
        s = LinearSystem.plane(d, mults)
        assert predicted_dimension(system_class(s)) == generic_dimension(s).value
