"""Transformations d'un système: restriction S_α, réduit S^max, hypergraphe G(S)"""
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

from earsim.errors import EarsimError, InconsistentEquationsError
from earsim.rules import (
    AttributeId,
    DecisionRule,
    Equation,
    EquationSystem,
    RuleSystem,
)


@dataclass(frozen=True)
class Restriction:
    """Résultat de restrict: un RuleSystem, ou vide (system is None)"""
    system: Optional[RuleSystem] = None

    @property
    def is_empty(self) -> bool:
        return self.system is None

    @property
    def is_terminal(self) -> bool:
        """Vide, ou toutes les règles ont un membre gauche vide"""
        return self.system is None or all(r.is_empty for r in self.system.rules)

    @property
    def rules(self) -> Tuple[DecisionRule, ...]:
        return () if self.system is None else self.system.rules

    def __len__(self) -> int:
        return len(self.rules)


def restrict(
    system: Union[RuleSystem, Restriction],
    alpha: Union[EquationSystem, Iterable[Equation]],
) -> Restriction:
    """S_α: retire de chaque K(r) les équations de α, écarte les règles incohérentes avec α"""
    if not isinstance(alpha, EquationSystem):
        alpha = EquationSystem.from_pairs(alpha)
    if not alpha.is_consistent():
        raise InconsistentEquationsError(f"cannot restrict by inconsistent system {alpha}")
    if isinstance(system, Restriction):
        if system.is_empty:
            return system
        system = system.system

    fixed = dict(alpha.equations)
    kept: List[DecisionRule] = []
    for rule in system.rules:
        if rule.attributes.isdisjoint(fixed):
            kept.append(rule)
            continue
        if any(a in fixed and fixed[a] != v for a, v in rule.lhs):
            continue
        kept.append(rule.with_lhs((a, v) for a, v in rule.lhs if a not in fixed))
    return Restriction(RuleSystem(tuple(kept)) if kept else None)


def s_max(system: RuleSystem) -> RuleSystem:
    """Un représentant (plus petit id) par classe K(r) parmi les règles de longueur d(S)"""
    d = system.measures.d
    representatives: Dict[FrozenSet[Equation], DecisionRule] = {}
    for rule in sorted(system.rules, key=lambda r: r.id):
        if rule.length == d and rule.equations not in representatives:
            representatives[rule.equations] = rule
    chosen = {r.id for r in representatives.values()}
    # ordre d'entrée conservé
    return RuleSystem(tuple(r for r in system.rules if r.id in chosen))


@dataclass(frozen=True)
class Hypergraph:
    """G(S): noeuds A(S), une arête A(r) par règle"""
    nodes: FrozenSet[AttributeId]
    edges: Tuple[Tuple[int, FrozenSet[AttributeId]], ...]

    def to_text(self) -> str:
        """Dump d'adjacence pour le débogage"""
        lines = ["nodes: " + " ".join(f"a{a}" for a in sorted(self.nodes))]
        for rule_id, attributes in self.edges:
            lines.append(f"r{rule_id}: " + " ".join(f"a{a}" for a in sorted(attributes)))
        return "\n".join(lines)


def hypergraph(system: RuleSystem) -> Hypergraph:
    return Hypergraph(
        nodes=system.measures.attrs,
        edges=tuple((r.id, r.attributes) for r in system.rules),
    )


@dataclass(frozen=True)
class NodeCover:
    """Couverture de G(S); l'ordre est l'ordre de sélection"""
    attributes: Tuple[AttributeId, ...]

    @classmethod
    def for_system(cls, system: RuleSystem, attributes: Iterable[AttributeId]) -> 'NodeCover':
        """Construit et vérifie la propriété de couverture"""
        attributes = tuple(attributes)
        chosen = set(attributes)
        if len(chosen) != len(attributes):
            raise EarsimError("a node cover cannot repeat an attribute")
        for rule in system.rules:
            if rule.attributes and not rule.attributes & chosen:
                raise EarsimError(f"attributes {sorted(chosen)} do not cover rule {rule.id}")
        return cls(attributes)

    def __len__(self) -> int:
        return len(self.attributes)

    def __iter__(self):
        return iter(self.attributes)

    def __str__(self) -> str:
        return " ".join(f"a{a}" for a in self.attributes)
