"""Systèmes de règles de décision: règles, mesures, cohérence, problème EAR

Un système S est une liste non vide de règles (a_i1=δ1) ∧ ... ∧ (a_im=δm) → σ.
Les attributs sont des entiers (a_i ↦ i), les valeurs des entiers naturels,
et ∗ est le singleton STAR: il représente toute valeur absente de V_S(a).
"""
import itertools
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Tuple, Union

from earsim.errors import (
    DegenerateSystemError,
    InconsistentEquationsError,
    InvalidRuleError,
    InvalidTupleError,
)


class Star(Enum):
    """Valeur étendue ∗"""
    STAR = "*"

    def __repr__(self) -> str:
        return "*"

    def __str__(self) -> str:
        return "*"


STAR = Star.STAR

AttributeId = int
ExtendedValue = Union[int, Star]
Equation = Tuple[AttributeId, ExtendedValue]


def is_natural(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= 0


def value_sort_key(value: ExtendedValue) -> Tuple[int, int]:
    """Ordre des valeurs étendues: concrètes croissantes, ∗ en dernier"""
    return (1, 0) if value is STAR else (0, value)


def format_value(value: ExtendedValue) -> str:
    return "*" if value is STAR else str(value)


@dataclass(frozen=True)
class EquationSystem:
    """Ensemble d'équations a_i = δ (joue le rôle de α et de K(ξ))"""
    equations: FrozenSet[Equation] = frozenset()

    @classmethod
    def from_pairs(cls, pairs: Iterable[Equation]) -> 'EquationSystem':
        return cls(frozenset(pairs))

    @property
    def attributes(self) -> FrozenSet[AttributeId]:
        return frozenset(a for a, _ in self.equations)

    def is_consistent(self) -> bool:
        return is_consistent(self.equations)

    def union(self, other: Union['EquationSystem', Iterable[Equation]]) -> 'EquationSystem':
        pairs = other.equations if isinstance(other, EquationSystem) else frozenset(other)
        return EquationSystem(self.equations | pairs)

    def as_mapping(self) -> Dict[AttributeId, ExtendedValue]:
        """Vue attribut → valeur (systèmes cohérents uniquement)"""
        if not self.is_consistent():
            raise InconsistentEquationsError(f"inconsistent equation system: {self}")
        return dict(self.equations)

    def __len__(self) -> int:
        return len(self.equations)

    def __iter__(self) -> Iterator[Equation]:
        return iter(sorted(self.equations, key=lambda eq: (eq[0], value_sort_key(eq[1]))))

    def __contains__(self, equation) -> bool:
        return equation in self.equations

    def __str__(self) -> str:
        return "{" + ", ".join(f"a{a}={format_value(v)}" for a, v in self) + "}"


def is_consistent(equations: Union[EquationSystem, Iterable[Equation]]) -> bool:
    """Vrai ssi aucun attribut n'apparaît avec deux valeurs distinctes"""
    if isinstance(equations, EquationSystem):
        equations = equations.equations
    seen: Dict[AttributeId, ExtendedValue] = {}
    for attribute, value in equations:
        if attribute in seen and seen[attribute] != value:
            return False
        seen[attribute] = value
    return True


@dataclass(frozen=True)
class DecisionRule:
    """Règle de décision; lhs est normalisé par index d'attribut croissant"""
    lhs: Tuple[Tuple[AttributeId, int], ...]
    rhs: int
    id: int = 0

    def __post_init__(self):
        pairs = tuple(tuple(pair) for pair in self.lhs)
        attributes = [a for a, _ in pairs]
        if len(set(attributes)) != len(attributes):
            raise InvalidRuleError(f"repeated attribute in rule {self.id}")
        for attribute, value in pairs:
            if not is_natural(attribute):
                raise InvalidRuleError(f"attribute index must be a natural number, got {attribute!r}")
            if value is STAR:
                raise InvalidRuleError("'*' cannot appear in a decision rule")
            if not is_natural(value):
                raise InvalidRuleError(f"value of a{attribute} must be a natural number, got {value!r}")
        if not is_natural(self.rhs):
            raise InvalidRuleError(f"decision must be a natural number, got {self.rhs!r}")
        object.__setattr__(self, "lhs", tuple(sorted(pairs)))

    @cached_property
    def attributes(self) -> FrozenSet[AttributeId]:
        """A(r)"""
        return frozenset(a for a, _ in self.lhs)

    @cached_property
    def equations(self) -> FrozenSet[Equation]:
        """K(r)"""
        return frozenset(self.lhs)

    @property
    def length(self) -> int:
        return len(self.lhs)

    @property
    def is_empty(self) -> bool:
        return not self.lhs

    def with_lhs(self, lhs: Iterable[Tuple[AttributeId, int]]) -> 'DecisionRule':
        return DecisionRule(tuple(lhs), self.rhs, self.id)

    def __str__(self) -> str:
        body = " & ".join(f"a{a}={v}" for a, v in self.lhs)
        return f"{body} -> {self.rhs}" if body else f"-> {self.rhs}"


@dataclass(frozen=True)
class Measures:
    """Mesures dérivées A(S), n(S), d(S), k(S) et V_S(a)"""
    attrs: FrozenSet[AttributeId]
    n: int
    d: int
    k: int
    values: Mapping[AttributeId, FrozenSet[int]]


@dataclass(frozen=True)
class RuleSystem:
    """Système de règles non vide; les ids sont stables et uniques"""
    rules: Tuple[DecisionRule, ...]

    def __post_init__(self):
        rules = tuple(self.rules)
        if not rules:
            raise InvalidRuleError("a rule system must contain at least one rule")
        ids = [r.id for r in rules]
        if len(set(ids)) != len(ids):
            raise InvalidRuleError("rule ids must be unique within a system")
        object.__setattr__(self, "rules", rules)

    @classmethod
    def from_rules(cls, specs: Iterable[Tuple[Iterable[Tuple[AttributeId, int]], int]]) -> 'RuleSystem':
        """Construit un système à partir de (lhs, rhs); ids attribués dans l'ordre"""
        return cls(tuple(DecisionRule(tuple(lhs), rhs, i) for i, (lhs, rhs) in enumerate(specs)))

    @cached_property
    def measures(self) -> Measures:
        return measures(self)

    @property
    def ids(self) -> Tuple[int, ...]:
        return tuple(r.id for r in self.rules)

    @property
    def attributes(self) -> List[AttributeId]:
        """A(S) par index croissant"""
        return sorted(self.measures.attrs)

    def rule(self, rule_id: int) -> DecisionRule:
        for r in self.rules:
            if r.id == rule_id:
                return r
        raise KeyError(rule_id)

    def extended_values(self, attribute: AttributeId) -> Tuple[ExtendedValue, ...]:
        """EV_S(a) = V_S(a) ∪ {∗}, ∗ en dernier"""
        return tuple(sorted(self.measures.values[attribute])) + (STAR,)

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self) -> Iterator[DecisionRule]:
        return iter(self.rules)

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.rules)


def measures(system: RuleSystem) -> Measures:
    """Calcule A(S), n, d, k et V_S; k = 0 quand n = 0"""
    values: Dict[AttributeId, set] = {}
    for rule in system.rules:
        for attribute, value in rule.lhs:
            values.setdefault(attribute, set()).add(value)
    frozen = {a: frozenset(vs) for a, vs in sorted(values.items())}
    return Measures(
        attrs=frozenset(frozen),
        n=len(frozen),
        d=max(r.length for r in system.rules),
        k=max((len(vs) for vs in frozen.values()), default=0),
        values=frozen,
    )


@dataclass(frozen=True)
class ExtendedTuple:
    """Tuple δ̄ ∈ EV(S): une valeur étendue par attribut de A(S)"""
    assignment: Tuple[Tuple[AttributeId, ExtendedValue], ...]

    @classmethod
    def over(cls, system: RuleSystem, mapping: Mapping[AttributeId, ExtendedValue]) -> 'ExtendedTuple':
        """Valide le domaine (exactement A(S)) et les valeurs (dans EV_S(a))"""
        expected = system.measures.attrs
        missing = sorted(expected - set(mapping))
        if missing:
            raise InvalidTupleError("tuple misses attribute(s): " + ", ".join(f"a{a}" for a in missing))
        extra = sorted(set(mapping) - expected)
        if extra:
            raise InvalidTupleError("tuple assigns unknown attribute(s): " + ", ".join(f"a{a}" for a in extra))
        for attribute, value in mapping.items():
            if value is not STAR and value not in system.measures.values[attribute]:
                raise InvalidTupleError(f"value {value!r} of a{attribute} is outside EV_S(a{attribute})")
        return cls(tuple(sorted(mapping.items())))

    def value(self, attribute: AttributeId) -> ExtendedValue:
        for a, v in self.assignment:
            if a == attribute:
                return v
        raise KeyError(attribute)

    def as_mapping(self) -> Dict[AttributeId, ExtendedValue]:
        return dict(self.assignment)

    def equations(self) -> EquationSystem:
        """K(S, δ̄)"""
        return EquationSystem(frozenset(self.assignment))

    def __str__(self) -> str:
        return ",".join(f"a{a}={format_value(v)}" for a, v in self.assignment)


def realizable_rules(system: RuleSystem, tuple_: ExtendedTuple) -> FrozenSet[int]:
    """Ids des règles r telles que K(r) ⊆ K(S, δ̄)"""
    known = tuple_.equations().equations
    return frozenset(r.id for r in system.rules if r.equations <= known)


def ear_solution_for_degenerate(system: RuleSystem) -> FrozenSet[int]:
    """Solution de EAR(S) quand n(S) = 0: toutes les règles"""
    if system.measures.n > 0:
        raise DegenerateSystemError(f"n(S) = {system.measures.n} > 0: the system is not degenerate")
    return frozenset(system.ids)


def all_tuples(system: RuleSystem) -> Iterator[ExtendedTuple]:
    """Énumère EV(S) dans l'ordre des attributs, ∗ en dernier pour chaque position"""
    attributes = system.attributes
    domains = [system.extended_values(a) for a in attributes]
    for values in itertools.product(*domains):
        yield ExtendedTuple(tuple(zip(attributes, values)))


__all__ = [
    'STAR', 'Star', 'AttributeId', 'ExtendedValue', 'Equation',
    'EquationSystem', 'DecisionRule', 'Measures', 'RuleSystem', 'ExtendedTuple',
    'is_consistent', 'measures', 'realizable_rules', 'ear_solution_for_degenerate',
    'all_tuples', 'value_sort_key', 'format_value', 'is_natural',
]
