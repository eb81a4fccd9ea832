"""Banc d'essai: glouton vs couverture par règles sur une grille de systèmes aléatoires"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import pandas as pd

from earsim.config import SearchBudget
from earsim.errors import BudgetExceededError, GenerationError
from earsim.services.exact_service import exact_min_depth
from earsim.services.simulator import Strategy, solve_tuple
from earsim.utils import GenParams, random_system, sample_tuples
from earsim.utils.codec import BenchRow, frame_to_csv, rows_to_frame

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BenchCell:
    """Une case de la grille (GenParams sans la graine)"""
    n_attrs: int
    n_rules: int
    min_len: int
    max_len: int
    n_values: int

    @classmethod
    def parse(cls, text: str) -> 'BenchCell':
        """Format N:RULES:MINLEN:MAXLEN:VALUES"""
        parts = text.split(":")
        if len(parts) != 5:
            raise GenerationError(f"bench cell must be N:RULES:MINLEN:MAXLEN:VALUES, got {text!r}")
        try:
            cell = cls(*(int(p) for p in parts))
        except ValueError:
            raise GenerationError(f"bench cell fields must be integers, got {text!r}")
        cell.params(0).validate()
        return cell

    def params(self, seed: int) -> GenParams:
        return GenParams(self.n_attrs, self.n_rules, self.min_len, self.max_len, self.n_values, seed)

    def check_budget(self, budget: SearchBudget) -> None:
        """Une case n'est compatible avec --exact que si tout système généré l'est"""
        if self.n_attrs > budget.max_attributes:
            raise BudgetExceededError("attributes", self.n_attrs, budget.max_attributes)
        if self.n_rules > budget.max_rules:
            raise BudgetExceededError("rules", self.n_rules, budget.max_rules)
        if self.n_values > budget.max_values:
            raise BudgetExceededError("values", self.n_values, budget.max_values)

    def __str__(self) -> str:
        return f"{self.n_attrs}:{self.n_rules}:{self.min_len}:{self.max_len}:{self.n_values}"


DEFAULT_CELLS = (BenchCell(8, 8, 1, 2, 2), BenchCell(12, 8, 6, 8, 2))


@dataclass
class BenchConfig:
    cells: Sequence[BenchCell] = DEFAULT_CELLS
    seeds: int = 10
    base_seed: int = 0
    tuples: int = 20
    strategies: Sequence[Strategy] = (Strategy.GREEDY, Strategy.RULE)
    exact: bool = False
    cover_full: bool = False
    workers: int = 4
    budget: SearchBudget = field(default_factory=SearchBudget)

    def validate(self) -> None:
        if not self.cells:
            raise GenerationError("bench grid has no cell")
        if self.seeds < 1 or self.tuples < 1 or self.workers < 1:
            raise GenerationError("seeds, tuples and workers must be >= 1")
        if not self.strategies:
            raise GenerationError("at least one strategy is required")
        if self.exact:
            for cell in self.cells:
                cell.check_budget(self.budget)


@dataclass
class BenchResult:
    frame: pd.DataFrame
    summary: pd.DataFrame
    wins: pd.DataFrame

    def to_csv(self) -> str:
        return frame_to_csv(self.frame)

    def summary_text(self) -> str:
        parts = ["== depth by d(S) and strategy ==", self.summary.to_string(index=False, float_format="%.3f")]
        if not self.wins.empty:
            parts += ["", "== greedy vs rule (per tuple) ==", self.wins.to_string(index=False)]
        return "\n".join(parts) + "\n"


class BenchRunner:
    """Exécute la grille; les cases tournent en parallèle, l'ordre de sortie reste celui de la grille"""

    def __init__(self, config: BenchConfig):
        config.validate()
        self.config = config

    def run(self) -> BenchResult:
        cfg = self.config
        logger.info("[BENCH] %d cell(s) x %d seed(s) x %d tuple(s)", len(cfg.cells), cfg.seeds, cfg.tuples)
        # map conserve l'ordre de la grille
        with ProcessPoolExecutor(max_workers=min(cfg.workers, len(cfg.cells))) as executor:
            per_cell = list(executor.map(self._run_cell, range(len(cfg.cells)), cfg.cells))

        rows = [row for cell_rows in per_cell for _, row in cell_rows]
        frame = rows_to_frame(rows)
        frame.insert(0, "cell", [index for cell_rows in per_cell for index, _ in cell_rows])
        return BenchResult(frame=frame, summary=summarize(frame), wins=win_counts(frame))

    def _modes(self) -> List[Tuple[str, Strategy, bool]]:
        modes = [(s.value, s, False) for s in map(Strategy, self.config.strategies)]
        if self.config.cover_full:
            modes += [(f"{s.value}_full", s, True) for s in map(Strategy, self.config.strategies)]
        return modes

    def _run_cell(self, index: int, cell: BenchCell) -> List[Tuple[int, BenchRow]]:
        cfg = self.config
        rows: List[Tuple[int, BenchRow]] = []
        for offset in range(cfg.seeds):
            seed = cfg.base_seed + offset
            system = random_system(cell.params(seed))
            m = system.measures
            h_exact: Optional[int] = None
            ub: Optional[float] = None
            if cfg.exact:
                h_exact = exact_min_depth(system, cfg.budget)
                ub = h_exact ** 3 * math.log(m.k + 1) + h_exact
            for tuple_id, tuple_ in enumerate(sample_tuples(system, cfg.tuples, seed)):
                for label, strategy, cover_full in self._modes():
                    result = solve_tuple(system, tuple_, strategy, cover_full)
                    if ub is not None and label == Strategy.GREEDY.value and result.depth > ub:
                        logger.error("[BENCH] cell %s seed %d: depth %d above bound %.3f", cell, seed, result.depth, ub)
                    rows.append((index, BenchRow(
                        seed=seed, n=m.n, d=m.d, k=m.k, rules=len(system),
                        tuple_id=tuple_id, strategy=label, depth=result.depth,
                        rounds=len(result.rounds), h_exact=h_exact, ub_theorem1=ub,
                        answer_size=len(result.answer),
                    )))
        logger.debug("[BENCH] cell %s done (%d row(s))", cell, len(rows))
        return rows


def summarize(frame: pd.DataFrame) -> pd.DataFrame:
    """Profondeur moyenne / max et rounds moyens par (d, stratégie)"""
    if frame.empty:
        return pd.DataFrame(columns=["d", "strategy", "systems", "rows", "mean_depth", "max_depth", "mean_rounds"])
    grouped = frame.groupby(["d", "strategy"], sort=True)
    summary = grouped.agg(
        rows=("depth", "size"),
        mean_depth=("depth", "mean"),
        max_depth=("depth", "max"),
        mean_rounds=("rounds", "mean"),
    ).reset_index()
    systems = (
        frame.drop_duplicates(["d", "strategy", "cell", "seed"])
        .groupby(["d", "strategy"], sort=True)
        .size()
        .reset_index(name="systems")
    )
    summary = summary.merge(systems, on=["d", "strategy"])
    return summary[["d", "strategy", "systems", "rows", "mean_depth", "max_depth", "mean_rounds"]]


def win_counts(frame: pd.DataFrame) -> pd.DataFrame:
    """Par d(S): nombre de tuples où le glouton (resp. la couverture par règles) est strictement meilleur"""
    columns = ["d", "greedy_wins", "rule_wins", "ties"]
    strategies = set(frame["strategy"]) if not frame.empty else set()
    if not {Strategy.GREEDY.value, Strategy.RULE.value} <= strategies:
        return pd.DataFrame(columns=columns)
    pivot = frame.pivot_table(
        index=["cell", "seed", "tuple_id", "d"], columns="strategy", values="depth", aggfunc="first"
    ).reset_index()
    greedy, rule = pivot[Strategy.GREEDY.value], pivot[Strategy.RULE.value]
    pivot["greedy_wins"] = (greedy < rule).astype(int)
    pivot["rule_wins"] = (rule < greedy).astype(int)
    pivot["ties"] = (greedy == rule).astype(int)
    return pivot.groupby("d", sort=True)[["greedy_wins", "rule_wins", "ties"]].sum().reset_index()[columns]
