"""Simulation round par round du travail d'un arbre de décision sur un tuple

Chaque round couvre le réduit ^max du système courant, interroge les attributs
de la couverture dans l'ordre de sélection puis restreint le système d'origine
par toutes les équations obtenues. Le travail s'arrête quand le système
restreint est vide ou ne contient que des règles à membre gauche vide.
"""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, List, Tuple, Union

from earsim.errors import DegenerateSystemError, InvalidTupleError
from earsim.rules import (
    STAR,
    AttributeId,
    EquationSystem,
    ExtendedTuple,
    ExtendedValue,
    RuleSystem,
    Star,
    ear_solution_for_degenerate,
    is_consistent,
    is_natural,
)
from earsim.rules.transform import restrict, s_max
from earsim.services.cover_service import CoverService

logger = logging.getLogger(__name__)


class Strategy(str, Enum):
    GREEDY = "greedy"
    RULE = "rule"


class ValueProvider(ABC):
    """Source de valeurs d'attributs interrogée par la simulation"""

    @abstractmethod
    def value_of(self, attribute: AttributeId) -> Union[int, Star]:
        ...


class TupleProvider(ValueProvider):
    """Fournisseur standard: lit les valeurs dans un ExtendedTuple"""

    def __init__(self, tuple_: ExtendedTuple):
        self.tuple = tuple_
        self._values = tuple_.as_mapping()

    def value_of(self, attribute: AttributeId) -> ExtendedValue:
        return self._values[attribute]


class CachingProvider(ValueProvider):
    """Mémorise les réponses d'un autre fournisseur (réponses stables)"""

    def __init__(self, inner: ValueProvider):
        self.inner = inner
        self._answers: Dict[AttributeId, Union[int, Star]] = {}

    def value_of(self, attribute: AttributeId) -> Union[int, Star]:
        if attribute not in self._answers:
            self._answers[attribute] = self.inner.value_of(attribute)
        return self._answers[attribute]


@dataclass
class SimulationResult:
    """Chemin complet induit par un tuple: réponse, trace des requêtes, rounds"""
    answer: FrozenSet[int]
    trace: List[Tuple[AttributeId, ExtendedValue]] = field(default_factory=list)
    rounds: List[int] = field(default_factory=list)
    lengths: List[int] = field(default_factory=list)
    strategy: Strategy = Strategy.GREEDY

    @property
    def depth(self) -> int:
        return len(self.trace)

    @property
    def queried(self) -> List[AttributeId]:
        return [a for a, _ in self.trace]


def normalize_value(system: RuleSystem, attribute: AttributeId, value: Union[int, Star]) -> ExtendedValue:
    """Ramène une valeur brute dans EV_S(a): toute valeur hors V_S(a) devient ∗"""
    values = system.measures.values
    if attribute not in values:
        raise InvalidTupleError(f"a{attribute} is not an attribute of the system")
    if value is STAR:
        return STAR
    if not is_natural(value):
        raise InvalidTupleError(f"value of a{attribute} must be a natural number or '*', got {value!r}")
    return value if value in values[attribute] else STAR


def simulate_ear(
    system: RuleSystem,
    provider: ValueProvider,
    strategy: Strategy = Strategy.GREEDY,
    cover_full: bool = False,
) -> SimulationResult:
    """Simule l'arbre sur les réponses de provider (n(S) > 0 requis)

    strategy=greedy est l'algorithme glouton, strategy=rule couvre par règles
    entières. cover_full=True couvre le système courant au lieu de son ^max.
    """
    if system.measures.n == 0:
        raise DegenerateSystemError("simulation requires n(S) > 0; use ear_solution_for_degenerate")
    strategy = Strategy(strategy)
    build_cover = CoverService.greedy_cover if strategy is Strategy.GREEDY else CoverService.rule_cover

    alpha: Dict[AttributeId, ExtendedValue] = {}
    result = SimulationResult(answer=frozenset(), strategy=strategy)
    current = system
    while True:
        target = current if cover_full else s_max(current)
        cover = build_cover(target)
        result.lengths.append(current.measures.d)
        for attribute in cover:
            value = normalize_value(system, attribute, provider.value_of(attribute))
            alpha[attribute] = value
            result.trace.append((attribute, value))
        result.rounds.append(len(cover))
        logger.debug("[SIMULATE] round %d: queried %s", len(result.rounds), cover)

        restricted = restrict(system, EquationSystem.from_pairs(alpha.items()))
        if restricted.is_terminal:
            break
        current = restricted.system

    known = frozenset(alpha.items())
    result.answer = frozenset(r.id for r in system.rules if is_consistent(r.equations | known))
    logger.debug("[SIMULATE] depth %d, %d round(s), answer %s", result.depth, len(result.rounds), sorted(result.answer))
    return result


def solve_tuple(
    system: RuleSystem,
    tuple_: ExtendedTuple,
    strategy: Strategy = Strategy.GREEDY,
    cover_full: bool = False,
) -> SimulationResult:
    """Résout EAR(S) pour un tuple, y compris le cas dégénéré n(S) = 0"""
    if system.measures.n == 0:
        return SimulationResult(answer=ear_solution_for_degenerate(system), strategy=Strategy(strategy))
    return simulate_ear(system, TupleProvider(tuple_), strategy, cover_full)
