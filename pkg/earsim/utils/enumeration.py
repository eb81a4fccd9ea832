"""Énumération exhaustive des petits systèmes de règles"""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Tuple

from earsim.errors import GenerationError
from earsim.rules import DecisionRule, RuleSystem

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_CAP = 1_000_000


@dataclass(frozen=True)
class EnumerationParams:
    """Bornes: attributs a1..a_max_n, longueur ≤ max_len, valeurs et décisions dans [0, value_set_size)"""
    max_n: int
    max_rules: int
    max_len: int
    value_set_size: int
    cap: int = DEFAULT_ENUMERATION_CAP

    def validate(self) -> None:
        if self.max_n < 1:
            raise GenerationError(f"max_n must be >= 1, got {self.max_n}")
        if self.max_rules < 1 or self.max_len < 0 or self.value_set_size < 1:
            raise GenerationError(f"invalid enumeration bounds: {self}")


def count_rules(params: EnumerationParams) -> int:
    v = params.value_set_size
    lhs_count = sum(math.comb(params.max_n, length) * v ** length for length in range(params.max_len + 1))
    return lhs_count * v


def count_systems(params: EnumerationParams) -> int:
    """Σ_{j=1..max_rules} C(R, j) où R est le nombre de règles distinctes"""
    rules = count_rules(params)
    return sum(math.comb(rules, j) for j in range(1, params.max_rules + 1))


def all_rules(params: EnumerationParams) -> List[Tuple[Tuple[Tuple[int, int], ...], int]]:
    """Règles distinctes (lhs, σ) par longueur, attributs, valeurs puis décision"""
    attributes = range(1, params.max_n + 1)
    values = range(params.value_set_size)
    rules = []
    for length in range(min(params.max_len, params.max_n) + 1):
        for chosen in itertools.combinations(attributes, length):
            for assigned in itertools.product(values, repeat=length):
                lhs = tuple(zip(chosen, assigned))
                rules.extend((lhs, decision) for decision in values)
    return rules


def enumerate_systems(params: EnumerationParams) -> Iterator[RuleSystem]:
    """Tous les systèmes de règles distinctes dans les bornes, dans un ordre déterministe"""
    params.validate()
    total = count_systems(params)
    if total > params.cap:
        raise GenerationError(f"enumeration would yield {total} systems, above the cap of {params.cap}")
    logger.info("[ENUM] enumerating %d system(s)", total)
    rules = all_rules(params)
    for size in range(1, params.max_rules + 1):
        for combo in itertools.combinations(rules, size):
            yield RuleSystem(tuple(DecisionRule(lhs, rhs, i) for i, (lhs, rhs) in enumerate(combo)))
