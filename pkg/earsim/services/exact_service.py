"""Oracles exacts: profondeur minimale h_EAR(S) et vérification des bornes"""
import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union

import pandas as pd

from earsim.config import SearchBudget
from earsim.errors import EarsimError, InconsistentEquationsError
from earsim.rules import (
    STAR,
    AttributeId,
    DecisionRule,
    EquationSystem,
    ExtendedTuple,
    ExtendedValue,
    RuleSystem,
    all_tuples,
    realizable_rules,
)
from earsim.rules.transform import Restriction, restrict, s_max
from earsim.services.cover_service import CoverService
from earsim.services.simulator import Strategy, solve_tuple
from earsim.utils.enumeration import EnumerationParams, enumerate_systems

logger = logging.getLogger(__name__)

CanonicalForm = Tuple[Tuple[Tuple[Tuple[AttributeId, int], ...], int], ...]

BRANCH_DOMAINS = ("current", "original")


def canonical_form(system: Union[RuleSystem, Restriction]) -> CanonicalForm:
    """Règles triées par (K(r), σ), ids ignorés, identité des attributs conservée"""
    rules = system.rules
    return tuple(sorted((r.lhs, r.rhs) for r in rules))


class DepthOracle:
    """Recherche minimax de h_EAR pour les restrictions d'un système racine

    Le cache est partagé par toutes les requêtes sur la même racine.
    length_cutoff arrête la recherche dès que la profondeur atteint d(S)
    (minorant h_EAR ≥ d); les vérifications de bornes le désactivent.
    """

    def __init__(
        self,
        root: RuleSystem,
        budget: Optional[SearchBudget] = None,
        memoize: bool = True,
        branch_domain: str = "current",
        length_cutoff: bool = True,
    ):
        if branch_domain not in BRANCH_DOMAINS:
            raise EarsimError(f"unknown branch domain {branch_domain!r}")
        self.budget = budget or SearchBudget()
        self.budget.check(root)
        self.root = root
        self.memoize = memoize
        self.branch_domain = branch_domain
        self.length_cutoff = length_cutoff
        self._memo: Dict[CanonicalForm, int] = {}
        self.nodes_expanded = 0

    def min_depth(self, system: Union[RuleSystem, Restriction, None] = None) -> int:
        """h_EAR du système (par défaut la racine)"""
        if system is None:
            system = self.root
        if isinstance(system, RuleSystem):
            system = Restriction(system)
        return self._depth(system)

    def _domain(self, current: RuleSystem, attribute: AttributeId) -> Tuple[ExtendedValue, ...]:
        if self.branch_domain == "original" and attribute in self.root.measures.values:
            return self.root.extended_values(attribute)
        return current.extended_values(attribute)

    def _depth(self, restriction: Restriction) -> int:
        if restriction.is_terminal:
            return 0
        key = canonical_form(restriction) if self.memoize else None
        if key is not None and key in self._memo:
            return self._memo[key]

        current = restriction.system
        self.nodes_expanded += 1
        lower = current.measures.d if self.length_cutoff else None
        best: Optional[int] = None
        for attribute in current.attributes:
            worst = 0
            for value in self._domain(current, attribute):
                sub = restrict(current, EquationSystem(frozenset({(attribute, value)})))
                worst = max(worst, self._depth(sub))
                if best is not None and 1 + worst >= best:
                    break
            if best is None or 1 + worst < best:
                best = 1 + worst
            if best == lower:
                break

        if key is not None:
            self._memo[key] = best
        return best


def exact_min_depth(
    system: Union[RuleSystem, Restriction],
    budget: Optional[SearchBudget] = None,
    memoize: bool = True,
    branch_domain: str = "current",
    length_cutoff: bool = True,
) -> int:
    """h_EAR(S) par minimax; 0 pour un système vide ou sans attribut"""
    if isinstance(system, Restriction):
        if system.is_terminal:
            return 0
        system = system.system
    oracle = DepthOracle(system, budget, memoize=memoize, branch_domain=branch_domain, length_cutoff=length_cutoff)
    depth = oracle.min_depth()
    logger.debug("[EXACT] h_EAR = %d (%d node(s) expanded)", depth, oracle.nodes_expanded)
    return depth


@dataclass
class BoundReport:
    """Bornes inférieures, borne du glouton et verdicts pour un système"""
    h_exact: int
    beta: int
    d: int
    k: int
    s_max_size: int
    lb_cover: int
    lb_length: int
    lb_count: float
    ub_theorem1: float
    per_round_bound: float
    greedy_cover_size: int = 0
    greedy_bound: float = 0.0
    max_depth_greedy: int = 0
    max_depth_rule: int = 0
    max_rounds: int = 0
    verdicts: Dict[str, bool] = field(default_factory=dict)

    # borne de profondeur pour la stratégie par règles: informatif uniquement
    INFORMATIONAL = ("depth_bound_rule",)

    @property
    def all_passed(self) -> bool:
        return all(ok for name, ok in self.verdicts.items() if name not in self.INFORMATIONAL)

    @property
    def failures(self) -> List[str]:
        return [name for name, ok in self.verdicts.items() if not ok and name not in self.INFORMATIONAL]


def verify_bounds(
    system: RuleSystem,
    budget: Optional[SearchBudget] = None,
    oracle: Optional[DepthOracle] = None,
) -> BoundReport:
    """Calcule h_EAR, β, d, les trois minorants et la borne supérieure, puis vérifie tout"""
    oracle = oracle or DepthOracle(system, budget, length_cutoff=False)
    m = system.measures
    h = oracle.min_depth()
    _, beta = CoverService.exact_min_cover(system)
    reduct = s_max(system)

    if m.n == 0:
        lb_count = 0.0
        log_k = 0.0
    else:
        log_k = math.log(m.k + 1)
        lb_count = math.log(len(reduct)) / log_k
    ub = h ** 3 * log_k + h
    per_round = h ** 2 * log_k + 1

    report = BoundReport(
        h_exact=h, beta=beta, d=m.d, k=m.k, s_max_size=len(reduct),
        lb_cover=beta, lb_length=m.d, lb_count=lb_count,
        ub_theorem1=ub, per_round_bound=per_round,
    )
    verdicts = report.verdicts
    verdicts["cover_lower_bound"] = h >= beta
    verdicts["length_lower_bound"] = h >= m.d
    verdicts["count_lower_bound"] = h >= lb_count

    if m.n > 0:
        report.greedy_cover_size = len(CoverService.greedy_cover(reduct))
        report.greedy_bound = CoverService.greedy_bound(system)
        verdicts["greedy_cover_bound"] = report.greedy_cover_size <= report.greedy_bound

    oracle_ok = rounds_ok = lengths_ok = per_round_ok = True
    for tuple_ in all_tuples(system):
        expected = realizable_rules(system, tuple_)
        for strategy in Strategy:
            result = solve_tuple(system, tuple_, strategy)
            oracle_ok &= result.answer == expected
            rounds_ok &= len(result.rounds) <= m.d
            lengths_ok &= all(a > b for a, b in zip(result.lengths, result.lengths[1:]))
            lengths_ok &= len(set(result.queried)) == result.depth
            if strategy is Strategy.GREEDY:
                report.max_depth_greedy = max(report.max_depth_greedy, result.depth)
                report.max_rounds = max(report.max_rounds, len(result.rounds))
                per_round_ok &= all(q <= per_round for q in result.rounds)
            else:
                report.max_depth_rule = max(report.max_depth_rule, result.depth)

    verdicts["depth_bound_greedy"] = report.max_depth_greedy <= ub
    verdicts["depth_bound_rule"] = report.max_depth_rule <= ub
    verdicts["rounds_within_d"] = rounds_ok
    verdicts["lengths_decrease"] = lengths_ok
    verdicts["per_round_greedy"] = per_round_ok
    verdicts["oracle_equivalence"] = oracle_ok
    if not report.all_passed:
        logger.warning("[EXACT] bound check failed for system:\n%s\nfailures: %s", system, report.failures)
    return report


def check_lemma1(
    system: RuleSystem,
    alpha: EquationSystem,
    budget: Optional[SearchBudget] = None,
    oracle: Optional[DepthOracle] = None,
) -> bool:
    """h_EAR(S) ≥ h_EAR(S_α)"""
    if not alpha.is_consistent():
        raise InconsistentEquationsError(f"alpha must be consistent: {alpha}")
    oracle = oracle or DepthOracle(system, budget)
    return oracle.min_depth() >= oracle.min_depth(restrict(system, alpha))


def witness_tuple(system: RuleSystem, rule: DecisionRule) -> ExtendedTuple:
    """δ̄(r): valeurs de r sur A(r), ∗ ailleurs"""
    own = dict(rule.lhs)
    return ExtendedTuple(tuple((a, own.get(a, STAR)) for a in system.attributes))


def check_lemma4_tuple(system: RuleSystem, rule: DecisionRule) -> bool:
    """La seule règle de S^max réalisable pour δ̄(r) est r elle-même"""
    reduct = s_max(system)
    if rule.id not in reduct.ids or reduct.rule(rule.id) != rule:
        raise EarsimError(f"rule {rule.id} is not a member of S^max")
    known = witness_tuple(system, rule).equations().equations
    realizable = {r.id for r in reduct.rules if r.equations <= known}
    return realizable == {rule.id}


def consistent_alphas(system: RuleSystem) -> Iterator[EquationSystem]:
    """Toutes les affectations partielles de A(S) à valeurs dans EV_S (α cohérents)"""
    attributes = system.attributes
    choices = [(None,) + system.extended_values(a) for a in attributes]
    for values in itertools.product(*choices):
        yield EquationSystem(frozenset((a, v) for a, v in zip(attributes, values) if v is not None))


@dataclass
class CheckTally:
    name: str
    checked: int = 0
    failures: int = 0
    informational: bool = False

    def record(self, ok: bool) -> None:
        self.checked += 1
        if not ok:
            self.failures += 1


@dataclass
class VerificationSummary:
    """Tableau (vérification, cas vérifiés, échecs) d'une campagne exhaustive"""
    tallies: Dict[str, CheckTally] = field(default_factory=dict)
    systems: int = 0
    failing_systems: List[str] = field(default_factory=list)

    def record(self, name: str, ok: bool, informational: bool = False) -> None:
        tally = self.tallies.setdefault(name, CheckTally(name, informational=informational))
        tally.record(ok)

    @property
    def passed(self) -> bool:
        return all(t.failures == 0 for t in self.tallies.values() if not t.informational)

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for tally in self.tallies.values():
            if tally.informational:
                status = "info"
            else:
                status = "PASS" if tally.failures == 0 else "FAIL"
            rows.append({"check": tally.name, "checked": tally.checked, "failures": tally.failures, "status": status})
        return pd.DataFrame(rows, columns=["check", "checked", "failures", "status"])


MAX_FAILING_EXAMPLES = 5


def verify_exhaustive(
    params: EnumerationParams,
    budget: Optional[SearchBudget] = None,
    monotonicity: bool = True,
) -> VerificationSummary:
    """Minorants, borne du glouton, témoins S^max et monotonie sur chaque système énuméré"""
    summary = VerificationSummary()
    for system in enumerate_systems(params):
        summary.systems += 1
        oracle = DepthOracle(system, budget, length_cutoff=False)
        report = verify_bounds(system, oracle=oracle)
        ok = report.all_passed
        for name, verdict in report.verdicts.items():
            summary.record(name, verdict, informational=name in BoundReport.INFORMATIONAL)

        for rule in s_max(system).rules:
            verdict = check_lemma4_tuple(system, rule)
            summary.record("smax_witness", verdict)
            ok &= verdict
        if monotonicity:
            for alpha in consistent_alphas(system):
                verdict = check_lemma1(system, alpha, oracle=oracle)
                summary.record("restriction_monotone", verdict)
                ok &= verdict

        if not ok and len(summary.failing_systems) < MAX_FAILING_EXAMPLES:
            summary.failing_systems.append(str(system))
        if summary.systems % 1000 == 0:
            logger.info("[EXACT] %d system(s) verified", summary.systems)
    return summary
