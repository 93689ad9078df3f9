"""Prefix rewriting maps: validity, application, composition, generators."""

import pytest
from hypothesis import given, settings, strategies as st

from cantorenv.cantor import ClopenSet, Point, extensions
from cantorenv.errors import NotInDomain, ParseError
from cantorenv.prefix_map import (
    IDENTITY,
    ODOMETER,
    GeneratedMap,
    PrefixMap,
    compose,
    power,
)
from cantorenv.sampling import Sampler

from oracles import odometer_rules, step, transport, value, words


def pm(text):
    return PrefixMap.parse(text)


class TestValidity:
    def test_identity_is_valid(self):
        assert IDENTITY.is_valid()
        assert IDENTITY.domain() == ClopenSet.parse("{ε}")

    def test_overlapping_sources_flagged(self):
        m = PrefixMap((("0", "1"), ("01", "00")))
        assert not m.is_valid()
        assert any("source" in v for v in m.violations())

    def test_overlapping_targets_flagged(self):
        m = PrefixMap((("00", "1"), ("01", "10")))
        assert not m.is_valid()

    def test_empty_map_is_valid(self):
        assert PrefixMap(()).is_valid()
        assert PrefixMap(()).domain().is_empty()

    def test_parse_rejects_bad_syntax(self):
        for bad in ["0->1", "[0 => 1]", "[0 -> 2]"]:
            with pytest.raises(ParseError):
                pm(bad)

    def test_str_parse_roundtrip(self):
        m = pm("[10 -> 01, 0 -> 1]")
        assert PrefixMap.parse(str(m)) == m


class TestApplication:
    def test_apply_point(self):
        m = pm("[0 -> 1]")
        assert m.apply_point(Point.parse("01(0)")) == Point.parse("11(0)")
        with pytest.raises(NotInDomain):
            m.apply_point(Point.parse("(1)"))

    def test_image_and_preimage_sets(self):
        m = pm("[10 -> 01, 0 -> 1]")
        assert m.domain() == ClopenSet.parse("{0,10}")
        assert m.image() == ClopenSet.parse("{1,01}")
        assert m.image_set(ClopenSet.parse("{10}")) == ClopenSet.parse("{01}")
        assert m.preimage_set(ClopenSet.parse("{01}")) == ClopenSet.parse("{10}")

    def test_inverse_swaps_rules(self):
        m = pm("[0 -> 1]")
        assert m.inverse().apply_point(Point.parse("1(0)")) == Point.parse("0(0)")
        assert m.inverse().inverse() == m

    @given(data=st.data())
    @settings(max_examples=60, deadline=None)
    def test_apply_matches_oracle_on_deep_words(self, data):
        m = Sampler(data.draw(st.integers(0, 10**6))).prefix_map()
        depth = max((len(u) for u, _ in m.rules), default=0) + 1
        for w in extensions("", depth):
            got = None
            if m.maps_point(Point(w, "0")):
                got = m.apply_point(Point(w, "1")).unroll(depth + 2)
            want = step(list(m.rules), w)
            if want is None:
                assert got is None
            else:
                assert got is not None and got.startswith(want[: depth + 2])


class TestCompose:
    def test_compose_with_identity(self):
        m = pm("[10 -> 01, 0 -> 1]")
        assert compose(m, IDENTITY) == m
        assert compose(IDENTITY, m) == m

    def test_level_one_odometer_powers(self):
        # expected word maps derived by stepping the carry rules directly
        m = ODOMETER.truncation(1)
        h2 = power(m, 2)
        assert {u: v for u, v in h2.rules} == {"00": "01", "10": "11"}
        h3 = power(m, 3)
        assert {u: v for u, v in h3.rules} == {"00": "11"}
        assert power(m, 4).rules == ()
        # X_{-2} = dom(h_2)
        assert h2.domain() == ClopenSet.parse("{00,10}")
        assert h2.image() == ClopenSet.parse("{01,11}")

    @given(data=st.data())
    @settings(max_examples=60, deadline=None)
    def test_compose_matches_stepwise_oracle(self, data):
        s = Sampler(data.draw(st.integers(0, 10**6)))
        f, g = s.prefix_map(), s.prefix_map()
        c = compose(g, f)  # g after f
        depth = sum(
            max((len(u) for u, _ in m.rules), default=0) for m in (f, g)
        ) + 1
        for w in extensions("", depth):
            mid = step(list(f.rules), w)
            want = step(list(g.rules), mid) if mid is not None else None
            got = step(list(c.rules), w)
            if want is None:
                assert got is None
            else:
                assert got is not None
                k = min(len(got), len(want))
                assert got[:k] == want[:k]


class TestGeneratedMap:
    def test_odometer_rules(self):
        for i in range(4):
            assert ODOMETER.rule(i) == ("1" * i + "0", "0" * i + "1")
        assert not ODOMETER.is_finite
        assert ODOMETER.rule_count is None

    def test_truncation_matches_rule_list(self):
        t2 = ODOMETER.truncation(2)
        assert list(t2.rules) == odometer_rules(2)

    def test_inverse_swaps_direction(self):
        inv = ODOMETER.inverse()
        assert inv.rule(1) == ("01", "10")
        assert inv.inverse().rule(1) == ("10", "01")

    def test_apply_point_reports_rule_index(self):
        y, idx = ODOMETER.apply_point(Point.parse("110(1)"))
        assert (str(y), idx) == ("00(1)", 2)
        y, idx = ODOMETER.apply_point(Point.parse("(0)"))
        assert (str(y), idx) == ("1(0)", 0)

    def test_all_ones_has_no_image(self):
        with pytest.raises(NotInDomain):
            ODOMETER.apply_point(Point.parse("(1)"))

    def test_odometer_adds_one_in_binary(self):
        # the level-k truncation adds one on every word that carries within k
        rules = odometer_rules(3)
        t3 = ODOMETER.truncation(3)
        for w in words(4):
            want = transport(rules, 1, w)
            if want is None:
                assert not t3.maps_point(Point(w, "0"))
            else:
                got = t3.apply_point(Point(w, "0")).unroll(4)
                assert got == want
                assert value(want) == value(w) + 1
