import pickle

import pytest

from earsim.bench import DEFAULT_CELLS, BenchCell, BenchConfig, BenchRunner
from earsim.errors import BudgetExceededError, GenerationError
from earsim.services import Strategy
from earsim.utils.codec import CSV_COLUMNS

SMALL = BenchCell(4, 4, 1, 2, 2)
LONG = BenchCell(6, 4, 3, 4, 2)


@pytest.fixture
def config():
    return BenchConfig(cells=[SMALL, LONG], seeds=2, tuples=3, workers=2)


class TestBenchCell:
    def test_parse(self):
        assert BenchCell.parse("8:8:1:2:2") == BenchCell(8, 8, 1, 2, 2)
        assert str(BenchCell.parse("12:8:6:8:2")) == "12:8:6:8:2"

    @pytest.mark.parametrize("text", ["8:8", "8:8:x:2:2", "8:8:3:2:2", "4:1:1:5:2"])
    def test_invalid(self, text):
        with pytest.raises(GenerationError):
            BenchCell.parse(text)

    def test_default_grid(self):
        assert [str(c) for c in DEFAULT_CELLS] == ["8:8:1:2:2", "12:8:6:8:2"]


class TestBenchRunner:
    def test_row_count(self, config):
        result = BenchRunner(config).run()
        assert len(result.frame) == 2 * 2 * 3 * 2
        assert result.to_csv().splitlines()[0] == ",".join(CSV_COLUMNS)

    def test_deterministic(self, config):
        assert BenchRunner(config).run().to_csv() == BenchRunner(config).run().to_csv()

    def test_worker_count_does_not_change_output(self, config):
        single = BenchConfig(cells=config.cells, seeds=2, tuples=3, workers=1)
        assert BenchRunner(single).run().to_csv() == BenchRunner(config).run().to_csv()

    def test_runner_crosses_process_boundary(self, config):
        runner = BenchRunner(config)
        clone = pickle.loads(pickle.dumps(runner))
        assert clone._run_cell(1, LONG) == runner._run_cell(1, LONG)

    def test_rows_follow_grid_order(self, config):
        frame = BenchRunner(config).run().frame
        assert frame["cell"].tolist() == sorted(frame["cell"].tolist())
        assert set(frame.loc[frame["cell"] == 1, "d"]) <= {3, 4}

    def test_summary_and_wins(self, config):
        result = BenchRunner(config).run()
        assert list(result.summary.columns) == ["d", "strategy", "systems", "rows", "mean_depth", "max_depth", "mean_rounds"]
        assert set(result.summary["strategy"]) == {"greedy", "rule"}
        assert int(result.summary["rows"].sum()) == len(result.frame)
        totals = result.wins[["greedy_wins", "rule_wins", "ties"]].to_numpy().sum()
        assert totals == 2 * 2 * 3
        assert "greedy vs rule" in result.summary_text()

    def test_single_strategy_has_no_wins(self):
        result = BenchRunner(BenchConfig(cells=[SMALL], seeds=1, tuples=2, strategies=[Strategy.GREEDY])).run()
        assert result.wins.empty
        assert set(result.frame["strategy"]) == {"greedy"}

    def test_cover_full_variant(self):
        result = BenchRunner(BenchConfig(cells=[SMALL], seeds=1, tuples=2, cover_full=True)).run()
        assert set(result.frame["strategy"]) == {"greedy", "rule", "greedy_full", "rule_full"}
        assert len(result.frame) == 2 * 4

    def test_exact_rows_respect_greedy_bound(self):
        result = BenchRunner(BenchConfig(cells=[SMALL], seeds=3, tuples=5, exact=True)).run()
        frame = result.frame
        assert frame["h_exact"].notna().all()
        greedy = frame[frame["strategy"] == "greedy"]
        assert (greedy["depth"] <= greedy["ub_theorem1"]).all()

    def test_exact_rejects_oversized_cell(self):
        with pytest.raises(BudgetExceededError, match="attributes=12"):
            BenchRunner(BenchConfig(cells=[BenchCell(12, 8, 6, 8, 2)], exact=True))

    def test_invalid_config(self):
        with pytest.raises(GenerationError):
            BenchRunner(BenchConfig(cells=[SMALL], seeds=0))
