"""Service de construction de couvertures de G(S)"""
import itertools
import logging
import math
from collections import Counter
from enum import Enum
from typing import FrozenSet, List, Tuple

from earsim.errors import BudgetExceededError, DegenerateSystemError
from earsim.rules import AttributeId, RuleSystem
from earsim.rules.transform import NodeCover, s_max

logger = logging.getLogger(__name__)

DEFAULT_COVER_MAX_ATTRIBUTES = 20


class CoverMethod(str, Enum):
    GREEDY = "greedy"
    RULE = "rule"
    EXACT = "exact"


class CoverService:
    """Couvertures gloutonne, par règle (algorithme antérieur) et exacte"""

    @staticmethod
    def greedy_cover(system: RuleSystem) -> NodeCover:
        """Choisit à chaque pas l'attribut couvrant le plus de règles non couvertes (index min en cas d'égalité)"""
        _require_attributes(system)
        uncovered = [r.attributes for r in system.rules if r.attributes]
        chosen: List[AttributeId] = []
        while uncovered:
            counts = Counter(a for attributes in uncovered for a in attributes)
            best = max(counts, key=lambda a: (counts[a], -a))
            chosen.append(best)
            uncovered = [attributes for attributes in uncovered if best not in attributes]
        return NodeCover.for_system(system, chosen)

    @staticmethod
    def rule_cover(system: RuleSystem) -> NodeCover:
        """Ajoute tous les attributs de la première règle non couverte (plus petit id)"""
        _require_attributes(system)
        chosen: List[AttributeId] = []
        for rule in sorted(system.rules, key=lambda r: r.id):
            if rule.attributes and rule.attributes.isdisjoint(chosen):
                chosen.extend(a for a, _ in rule.lhs)
        return NodeCover.for_system(system, chosen)

    @staticmethod
    def exact_min_cover(
        system: RuleSystem,
        max_attributes: int = DEFAULT_COVER_MAX_ATTRIBUTES,
    ) -> Tuple[NodeCover, int]:
        """Couverture de cardinalité minimale β(S), première dans l'ordre lexicographique"""
        n = system.measures.n
        if n > max_attributes:
            raise BudgetExceededError("attributes", n, max_attributes)
        edges = _minimal_edges(r.attributes for r in system.rules if r.attributes)
        if not edges:
            return NodeCover(()), 0

        nodes = sorted(set().union(*edges))
        for size in range(_disjoint_lower_bound(edges), len(nodes) + 1):
            for candidate in itertools.combinations(nodes, size):
                picked = set(candidate)
                if all(not edge.isdisjoint(picked) for edge in edges):
                    logger.debug("[COVER] exact cover of size %d found", size)
                    return NodeCover.for_system(system, candidate), size
        # unreachable: all nodes always form a cover
        raise AssertionError("no node cover found")

    @staticmethod
    def build(system: RuleSystem, method: CoverMethod, max_attributes: int = DEFAULT_COVER_MAX_ATTRIBUTES) -> NodeCover:
        method = CoverMethod(method)
        if method is CoverMethod.GREEDY:
            return CoverService.greedy_cover(system)
        if method is CoverMethod.RULE:
            return CoverService.rule_cover(system)
        return CoverService.exact_min_cover(system, max_attributes)[0]

    @staticmethod
    def greedy_bound(system: RuleSystem, max_attributes: int = DEFAULT_COVER_MAX_ATTRIBUTES) -> float:
        """β(S^max)·ln|S^max| + 1"""
        _require_attributes(system)
        reduct = s_max(system)
        _, beta = CoverService.exact_min_cover(reduct, max_attributes)
        return beta * math.log(len(reduct)) + 1

    @staticmethod
    def check_greedy_bound(system: RuleSystem, max_attributes: int = DEFAULT_COVER_MAX_ATTRIBUTES) -> bool:
        """|greedy_cover(S^max)| ≤ β(S^max)·ln|S^max| + 1"""
        greedy = CoverService.greedy_cover(s_max(system))
        return len(greedy) <= CoverService.greedy_bound(system, max_attributes)


def _require_attributes(system: RuleSystem) -> None:
    if system.measures.n == 0:
        raise DegenerateSystemError("cover construction requires n(S) > 0")


def _minimal_edges(edges) -> List[FrozenSet[AttributeId]]:
    """Supprime doublons et sur-ensembles: toucher une arête minimale suffit"""
    unique = sorted(set(edges), key=lambda e: (len(e), sorted(e)))
    minimal: List[FrozenSet[AttributeId]] = []
    for edge in unique:
        if not any(kept <= edge for kept in minimal):
            minimal.append(edge)
    return minimal


def _disjoint_lower_bound(edges: List[FrozenSet[AttributeId]]) -> int:
    """Nombre d'arêtes deux à deux disjointes choisies gloutonnement (minorant de β)"""
    used = set()
    count = 0
    for edge in edges:
        if edge.isdisjoint(used):
            used |= edge
            count += 1
    return count
