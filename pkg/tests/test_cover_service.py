import math

import pytest
from hypothesis import given

from earsim.errors import BudgetExceededError, DegenerateSystemError
from earsim.rules.transform import s_max
from earsim.services import CoverMethod, CoverService
from earsim.utils.codec import parse_rules

from strategies import rule_systems


def covers_all(system, cover):
    return all(not r.attributes or r.attributes & set(cover) for r in system.rules)


class TestGreedyCover:
    def test_tie_broken_by_min_index(self):
        assert list(CoverService.greedy_cover(parse_rules("a1=0 & a2=1 -> 1"))) == [1]

    def test_most_rules_first(self):
        system = parse_rules("a1=0 -> 1\na1=1 -> 2\na2=0 -> 3")
        assert list(CoverService.greedy_cover(system)) == [1, 2]

    def test_shared_attribute(self):
        system = parse_rules("a2=0 & a3=0 -> 1\na3=1 & a4=1 -> 2")
        assert list(CoverService.greedy_cover(system)) == [3]

    def test_rejects_degenerate(self):
        with pytest.raises(DegenerateSystemError):
            CoverService.greedy_cover(parse_rules("-> 1"))


class TestRuleCover:
    def test_whole_rule(self):
        assert list(CoverService.rule_cover(parse_rules("a1=0 & a2=1 -> 1"))) == [1, 2]

    def test_skips_covered_rule(self):
        assert list(CoverService.rule_cover(parse_rules("a1=0 -> 1\na1=1 -> 2"))) == [1]

    def test_accumulates(self):
        system = parse_rules("a1=0 -> 1\na2=0 & a3=0 -> 2")
        assert list(CoverService.rule_cover(system)) == [1, 2, 3]

    def test_rejects_degenerate(self):
        with pytest.raises(DegenerateSystemError):
            CoverService.rule_cover(parse_rules("-> 1\n-> 2"))


class TestExactCover:
    def test_empty_cover(self):
        cover, beta = CoverService.exact_min_cover(parse_rules("-> 1"))
        assert (list(cover), beta) == ([], 0)

    def test_disjoint_edges(self):
        cover, beta = CoverService.exact_min_cover(parse_rules("a1=0 -> 1\na2=0 -> 2"))
        assert (list(cover), beta) == ([1, 2], 2)

    def test_hub_attribute(self):
        cover, beta = CoverService.exact_min_cover(parse_rules("a1=0 & a2=0 -> 1\na2=0 & a3=0 -> 2"))
        assert (list(cover), beta) == ([2], 1)

    def test_budget(self):
        system = parse_rules("\n".join(f"a{i}=0 -> 0" for i in range(1, 22)))
        with pytest.raises(BudgetExceededError) as excinfo:
            CoverService.exact_min_cover(system, max_attributes=20)
        assert excinfo.value.dimension == "attributes"
        assert "limit 20" in str(excinfo.value)

    def test_build_dispatch(self, sample_system):
        assert list(CoverService.build(sample_system, CoverMethod.RULE)) == [1, 2]
        assert list(CoverService.build(sample_system, "greedy")) == [1]
        assert list(CoverService.build(sample_system, "exact")) == [1]


class TestCoverProperties:
    @given(rule_systems(max_n=4, nonempty=True))
    def test_all_methods_cover(self, system):
        for method in CoverMethod:
            assert covers_all(system, CoverService.build(system, method))

    @given(rule_systems(max_n=4, nonempty=True))
    def test_exact_is_smallest(self, system):
        _, beta = CoverService.exact_min_cover(system)
        assert beta <= len(CoverService.greedy_cover(system))
        assert beta <= len(CoverService.rule_cover(system))

    @given(rule_systems(max_n=4, max_len=3, nonempty=True))
    def test_greedy_bound_on_reduct(self, system):
        assert CoverService.check_greedy_bound(system)

    @given(rule_systems(nonempty=True))
    def test_deterministic(self, system):
        assert CoverService.greedy_cover(system) == CoverService.greedy_cover(system)
        assert CoverService.rule_cover(system) == CoverService.rule_cover(system)

    def test_greedy_bound_value(self):
        system = parse_rules("a1=0 -> 1\na2=0 -> 2\na3=0 -> 3")
        assert len(s_max(system)) == 3
        assert CoverService.greedy_bound(system) == pytest.approx(3 * math.log(3) + 1)
