"""Tests for core knotio module."""

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from aknot.core.errors import (
    InconsistentArcs,
    LinkNotKnot,
    MalformedCode,
    NonCoprime,
    Unrealizable,
)
from aknot.core.knotio import (
    FillingSpec,
    GroupPresentation,
    abelian_invariants,
    canonical_code,
    exponent_sum,
    filled_presentation,
    fox_colorings,
    free_reduce,
    load_knot_table,
    parse_braid,
    parse_knot_table,
    parse_code,
    parse_dt,
    parse_pd,
    to_pd,
    wirtinger,
    word_power,
    writhe,
)

TREFOIL_PD = "X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]"


class TestParseDT:
    """Test suite for Dowker-Thistlethwaite parsing."""

    def test_trefoil(self):
        """4 6 2 is a three crossing diagram, all positive."""
        d = parse_dt("4 6 2")
        assert d.size == 3
        assert d.arcs == 6
        assert writhe(d) == 3

    def test_figure_eight(self):
        """4 6 8 2 has writhe 0."""
        d = parse_dt("4, 6, 8, 2")
        assert d.size == 4
        assert writhe(d) == 0

    def test_empty_is_unknot(self):
        """The empty code is the 0-crossing unknot."""
        assert parse_dt("").size == 0
        assert parse_dt("   ").size == 0

    @pytest.mark.parametrize("code", ["2", "junk", "4 4 2", "3 6 2", "4 6 0", "4 8 2"])
    def test_malformed(self, code):
        """Invalid DT sequences are rejected."""
        with pytest.raises(MalformedCode):
            parse_dt(code)

    def test_unrealizable(self):
        """A Gauss word failing the planarity parity condition is rejected."""
        with pytest.raises(Unrealizable):
            parse_dt("4 6 8 10 2")

    def test_crossing_one_positive(self):
        """The crossing carrying label 1 is positive."""
        for code in ("4 6 2", "4 6 8 2", "4 8 10 2 6"):
            d = parse_dt(code)
            index, _ = d.visit(1)
            assert d.crossings[index].sign == 1

    def test_five_crossing_torus_knot(self):
        """6 8 10 2 4 is alternating with all crossings of one sign."""
        assert abs(writhe(parse_dt("6 8 10 2 4"))) == 5

    def test_every_edge_appears_twice(self):
        """Each edge label is incident to exactly two crossing slots."""
        d = parse_dt("4 8 10 2 6")
        labels = [
            x
            for c in d.crossings
            for x in (c.under_in, c.under_out, c.over_in, c.over_out)
        ]
        assert sorted(labels) == sorted(list(range(1, 11)) * 2)


class TestParsePD:
    """Test suite for planar diagram parsing."""

    def test_trefoil(self):
        """The standard positive trefoil PD."""
        d = parse_pd(TREFOIL_PD)
        assert d.size == 3
        assert writhe(d) == 3

    def test_wrapped_form(self):
        """A PD[...] wrapper is accepted."""
        assert parse_pd("PD[" + TREFOIL_PD + "]").size == 3

    def test_negative_trefoil(self):
        """The KnotTheory left-handed trefoil has writhe -3."""
        d = parse_pd("X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]")
        assert writhe(d) == -3

    def test_empty(self):
        """No tuples is the unknot."""
        assert parse_pd("").size == 0

    def test_label_three_times(self):
        """A label appearing three times is inconsistent."""
        with pytest.raises(InconsistentArcs):
            parse_pd("X[1,1,1,2]")

    def test_hopf_link(self):
        """Two components are rejected."""
        with pytest.raises(LinkNotKnot):
            parse_pd("X[4,1,3,2], X[2,3,1,4]")

    def test_garbage(self):
        """Text outside the tuples is malformed."""
        with pytest.raises(MalformedCode):
            parse_pd("Y[1,2,3,4]")

    def test_matches_dt(self):
        """The PD and DT trefoils have the same invariants."""
        pd_pres, _ = wirtinger(parse_pd(TREFOIL_PD))
        dt_pres, _ = wirtinger(parse_dt("4 6 2"))
        assert fox_colorings(pd_pres, 3) == fox_colorings(dt_pres, 3) == 9

    def test_to_pd_reparses(self):
        """Rendering a diagram as PD and parsing it back keeps the invariants."""
        d = parse_dt("4 6 8 2")
        again = parse_pd(to_pd(d))
        assert writhe(again) == writhe(d)
        assert fox_colorings(wirtinger(again)[0], 5) == 25


class TestParseBraid:
    """Test suite for braid closures."""

    def test_trefoil(self):
        """1 1 1 closes to the positive trefoil."""
        d = parse_braid("1 1 1")
        assert writhe(d) == 3
        assert fox_colorings(wirtinger(d)[0], 3) == 9

    def test_figure_eight(self):
        """1 -2 1 -2 closes to the figure-8."""
        d = parse_braid("1 -2 1 -2")
        assert writhe(d) == 0
        assert fox_colorings(wirtinger(d)[0], 3) == 3
        assert fox_colorings(wirtinger(d)[0], 5) == 25

    def test_single_crossing(self):
        """1 closes to an unknot with a trivial longitude."""
        pres, periph = wirtinger(parse_braid("1"))
        assert pres.generator_count == 1
        assert periph.longitude == ()

    @pytest.mark.parametrize("word", ["1 1", "2", "1 -1"])
    def test_links_rejected(self, word):
        """Closures with several components are rejected."""
        with pytest.raises(LinkNotKnot):
            parse_braid(word)

    def test_malformed(self):
        """Generator 0 does not exist."""
        with pytest.raises(MalformedCode):
            parse_braid("1 0")

    def test_dispatch(self):
        """parse_code routes by format tag."""
        assert parse_code("braid", "1 1 1").size == 3
        assert parse_code("pd", TREFOIL_PD).size == 3
        with pytest.raises(MalformedCode):
            parse_code("gauss", "1 2")


class TestCanonicalCode:
    """Test suite for separator-insensitive code text."""

    def test_dt_and_braid(self):
        """Commas, signs and spacing collapse to single spaces."""
        assert canonical_code("dt", " 4,6,  2 ") == "4 6 2"
        assert canonical_code("braid", "1, -2,+1") == "1 -2 1"
        assert canonical_code("dt", "") == ""

    def test_pd(self):
        """Tuples are rewritten without inner spaces, PD[...] wrapper dropped."""
        expected = "X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]"
        assert canonical_code("pd", "PD[X[1, 5, 2, 4],X[3,1,4,6] X[5,3,6,2]]") == expected

    def test_unparseable_text_only_collapses_whitespace(self):
        """Junk stays distinguishable from valid codes."""
        assert canonical_code("dt", "4  junk") == "4 junk"


class TestWirtinger:
    """Test suite for presentations and peripheral systems."""

    def test_unknot(self):
        """<a | >, mu = a, lambda empty."""
        pres, periph = wirtinger(parse_dt(""))
        assert pres == GroupPresentation(1, ())
        assert periph.meridian == (1,)
        assert periph.longitude == ()

    def test_trefoil(self):
        """Three generators, three length-4 relators, null-homologous longitude."""
        pres, periph = wirtinger(parse_dt("4 6 2"))
        assert pres.generator_count == 3
        assert len(pres.relators) == 3
        assert all(len(r) == 4 for r in pres.relators)
        assert periph.meridian == (1,)
        assert exponent_sum(periph.longitude) == 0
        assert periph.writhe_correction == -3
        assert abelian_invariants(pres) == [0]

    def test_figure_eight(self):
        """Four generators, writhe correction 0."""
        pres, periph = wirtinger(parse_dt("4 6 8 2"))
        assert pres.generator_count == 4
        assert len(pres.relators) == 4
        assert periph.writhe_correction == 0
        assert exponent_sum(periph.longitude) == 0

    def test_colorings(self):
        """3-colorings: trefoil 9, figure-8 3, 5_1 3."""
        assert fox_colorings(wirtinger(parse_dt("4 6 2"))[0], 3) == 9
        assert fox_colorings(wirtinger(parse_dt("4 6 8 2"))[0], 3) == 3
        assert fox_colorings(wirtinger(parse_dt("6 8 10 2 4"))[0], 3) == 3
        assert fox_colorings(wirtinger(parse_dt("6 8 10 2 4"))[0], 5) == 25

    def test_colorings_need_prime(self):
        """Only odd primes are accepted."""
        with pytest.raises(ValueError):
            fox_colorings(wirtinger(parse_dt("4 6 2"))[0], 4)

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), min_size=1, max_size=9))
    def test_random_braids(self, word):
        """Every knot closure has abelianization Z and a null-homologous longitude."""
        try:
            d = parse_braid(" ".join(str(x) for x in word))
        except LinkNotKnot:
            assume(False)
        pres, periph = wirtinger(d)
        assert abelian_invariants(pres) == [0]
        assert exponent_sum(periph.longitude) == 0
        for n in (1, 2, 3):
            filled = filled_presentation(pres, periph, FillingSpec(1, n))
            assert abelian_invariants(filled) == []


class TestFilling:
    """Test suite for Dehn filling presentations."""

    def test_unknot_s3(self):
        """(1,0) on the unknot gives the trivial group."""
        pres, periph = wirtinger(parse_dt(""))
        assert abelian_invariants(filled_presentation(pres, periph, FillingSpec(1, 0))) == []

    @pytest.mark.parametrize("p, q, expected", [(1, 1, []), (0, 1, [0]), (5, 1, [5]), (-1, 2, [])])
    def test_trefoil(self, p, q, expected):
        """H1 of p/q filling is Z/p."""
        pres, periph = wirtinger(parse_dt("4 6 2"))
        assert abelian_invariants(filled_presentation(pres, periph, FillingSpec(p, q))) == expected

    def test_non_coprime(self):
        """(2,4) is not a slope."""
        pres, periph = wirtinger(parse_dt("4 6 2"))
        with pytest.raises(NonCoprime):
            filled_presentation(pres, periph, FillingSpec(2, 4))

    @pytest.mark.parametrize(
        "text, expected", [("1/2", FillingSpec(1, 2)), ("3", FillingSpec(3, 1)), ("-1/4", FillingSpec(-1, 4))]
    )
    def test_parse(self, text, expected):
        """Slopes parse from p/q text."""
        assert FillingSpec.parse(text) == expected

    def test_parse_errors(self):
        """Bad slope text is rejected."""
        with pytest.raises(NonCoprime):
            FillingSpec.parse("2/4")
        with pytest.raises(MalformedCode):
            FillingSpec.parse("a/b")


class TestWords:
    """Test suite for word helpers and the bundled table."""

    def test_free_reduce(self):
        """Adjacent inverse pairs cancel."""
        assert free_reduce((1, 2, -2, -1, 3)) == (3,)

    def test_word_power(self):
        """Negative powers invert the word."""
        assert word_power((1, 2), -2) == (-2, -1, -2, -1)
        assert word_power((1,), 0) == ()

    def test_table(self):
        """The bundled table starts with the trefoil and has unique names."""
        table = load_knot_table()
        assert table[0] == ("3_1", "4 6 2")
        assert table[1] == ("4_1", "4 6 8 2")
        names = [name for name, _ in table]
        assert len(names) == len(set(names)) >= 15

    def test_parse_table_text(self):
        """Comments and blank lines are skipped; an empty code is the unknot."""
        text = "# knots\n\n0_1\n3_1  4 6 2 \n"
        assert parse_knot_table(text) == [("0_1", ""), ("3_1", "4 6 2")]
