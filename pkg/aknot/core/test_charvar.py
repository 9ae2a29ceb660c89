"""Tests for core charvar module."""

import dataclasses

import numpy as np
import pytest

from aknot.core.charvar import (
    LaurentMatrix,
    build_rep_system,
    choose_seeds,
    dump_system,
    equal_up_to_unit,
    involution_image,
    is_involution_symmetric,
    meridian_matrix,
    reduce_rep_system,
    reducible_locus_check,
    strip_boundary_monomials,
    word_matrix,
)
from aknot.core.errors import MeridianNotGenerator
from aknot.core.knotio import PeripheralSystem, parse_dt, wirtinger
from aknot.core.mpoly import SparsePoly

FIGURE_EIGHT = "-M^4 + L*(1 - M^2 - 2*M^4 - M^6 + M^8) - L^2*M^4"


def P(text, names=("M", "L")):
    return SparsePoly.parse(text, names)


def system(code):
    return build_rep_system(*wirtinger(parse_dt(code)))


class TestLaurentMatrix:
    """Test suite for matrices over Z[M, 1/M]."""

    def test_meridian_inverse(self):
        """The adjugate of the meridian matrix is its inverse."""
        names = ("M", "L")
        mu = meridian_matrix(names)
        product = mu @ mu.adjugate()
        identity = LaurentMatrix.identity(names)
        assert product.shift == 0
        assert product.entries == identity.entries

    def test_evaluate(self):
        """Evaluation divides by the recorded power of M."""
        mu = meridian_matrix(("M", "L"))
        value = mu.evaluate({"M": 2.0, "L": 1.0})
        assert np.allclose(value, [[2.0, 1.0], [0.0, 0.5]])

    def test_word_matrix(self):
        """A word and its inverse multiply to the identity."""
        names = ("M", "L")
        mats = {1: meridian_matrix(names)}
        product = word_matrix((1, 1, -1, -1), mats, names)
        assert product.entries == LaurentMatrix.identity(names).entries

    def test_strip_boundary_monomials(self):
        """Only the requested boundary variables are divided out."""
        assert strip_boundary_monomials(P("M^2*L + M^3")) == P("L + M")
        assert strip_boundary_monomials(P("M*L^2 + M*L"), ("M", "L")) == P("L + 1")


class TestBuildRepSystem:
    """Test suite for the generic representation system."""

    def test_unknot(self):
        """The unknot gives the single equation L - 1."""
        sys = system("")
        assert sys.unknowns == ("M", "L")
        assert sys.equations == (P("L - 1"),)
        assert sys.distinguished == ("M", "L")

    def test_trefoil_counts(self):
        """Two generic generators; det, relator and longitude equations."""
        sys = system("4 6 2")
        assert len(sys.unknowns) == 10
        assert sys.unknowns[-2:] == ("M", "L")
        assert sum(label.startswith("det") for label in sys.labels) == 2
        assert sum(label.startswith("relator") for label in sys.labels) == 12
        assert sum(label.startswith("longitude") for label in sys.labels) == 2
        assert len(sys.equations) == len(sys.cleared_denominators) == 16

    def test_no_negative_powers(self):
        """Every equation is a polynomial in the ring variables."""
        sys = system("4 6 8 2")
        for eq in sys.equations:
            assert all(e >= 0 for monom, _ in eq.terms() for e in monom)
            assert not eq.is_zero()

    def test_meridian_not_generator(self):
        """A meridian word of length 2 is rejected."""
        pres, periph = wirtinger(parse_dt("4 6 2"))
        bad = PeripheralSystem((1, 2), periph.longitude, periph.writhe_correction)
        with pytest.raises(MeridianNotGenerator):
            build_rep_system(pres, bad)

    def test_dump_system(self):
        """The dump lists unknowns and labelled JSON equations in order."""
        sys = system("4 6 2")
        dump = dump_system(sys)
        assert dump["unknowns"] == list(sys.unknowns)
        assert dump["distinguished"] == ["M", "L"]
        assert len(dump["equations"]) == len(sys.equations)
        assert dump["equations"][0]["label"] == sys.labels[0]
        assert dump["equations"][0]["poly"] == sys.equations[0].to_json()


class TestReducibleLocus:
    """Test suite for the abelian representation check."""

    @pytest.mark.parametrize("code", ["", "4 6 2", "4 6 8 2", "6 8 10 2 4"])
    def test_present(self, code):
        """Every knot system contains the abelian representations."""
        assert reducible_locus_check(system(code))

    def test_corrupted(self):
        """Adding 1 to a relator equation breaks the reducible locus."""
        sys = system("4 6 2")
        index = next(i for i, label in enumerate(sys.labels) if label.startswith("relator"))
        equations = list(sys.equations)
        equations[index] = equations[index] + 1
        broken = dataclasses.replace(sys, equations=tuple(equations))
        assert not reducible_locus_check(broken)


class TestInvolution:
    """Test suite for the (M, L) -> (1/M, 1/L) symmetry."""

    @pytest.mark.parametrize(
        "text, expected",
        [("L - 1", "L - 1"), ("L*M^6 + 1", "L*M^6 + 1"), ("M^2*L", "1"), ("L + M", "L + M")],
    )
    def test_image(self, text, expected):
        """Images are cleared and content normalized."""
        assert involution_image(P(text)) == P(expected)

    def test_not_symmetric(self):
        """L + M^2 + 1 maps to L*M^2 + L + M^2."""
        assert not is_involution_symmetric(P("L + M^2 + 1"))

    def test_figure_eight(self):
        """The figure-8 nontrivial factor is symmetric."""
        assert is_involution_symmetric(P(FIGURE_EIGHT))

    def test_equal_up_to_unit(self):
        """Monomials and scalars are ignored."""
        assert equal_up_to_unit(P("-3*M^2*(L*M^6 + 1)"), P("L*M^6 + 1"))
        assert not equal_up_to_unit(P("L + M^6"), P("L*M^6 + 1"))
        assert equal_up_to_unit(SparsePoly.zero(("M", "L")), SparsePoly.zero(("M", "L")))


class TestReduceRepSystem:
    """Test suite for seeded branch reduction."""

    def test_unknot_single_branch(self):
        """With nothing to seed there is one meridian branch."""
        (branch,) = reduce_rep_system(system(""))
        assert branch.label == "meridian"
        assert branch.unknowns == ()
        assert branch.equations == (P("L - 1"),)

    def test_trefoil_branches(self):
        """One seed generator, pinned to 1 and to 0."""
        sys = system("4 6 2")
        seeds, steps = choose_seeds(sys.presentation, sys.meridian_generator)
        assert len(seeds) == 1
        assert len(steps) == 1
        ones, zeros = reduce_rep_system(sys)
        assert (ones.label, zeros.label) == ("c21=1", "c21=0")
        assert ones.unknowns == ("p1",)
        assert zeros.unknowns == ("p1", "q1")
        assert set(ones.matrices) == {1, 2, 3}
        assert ones.names == ("p1", "M", "L")

    def test_derived_generators_have_meridian_trace(self):
        """Conjugates of the meridian keep trace M + 1/M."""
        (branch, _) = reduce_rep_system(system("4 6 2"))
        point = {name: 0.3 + 0.7j for name in branch.unknowns}
        point.update({"M": 1.3 - 0.4j, "L": 2.0})
        for matrix in branch.matrices.values():
            value = matrix.evaluate(point)
            assert np.isclose(np.trace(value), point["M"] + 1 / point["M"])
