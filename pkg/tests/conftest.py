import json
import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from earsim.utils.codec import parse_rules

settings.register_profile(
    "earsim", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.function_scoped_fixture]
)
settings.load_profile("earsim")

GOLDEN_DIR = Path(__file__).parent / "golden"

SAMPLE_RULES = "a1=0 & a2=1 -> 1\na1=1 -> 2\n"


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    """Environnement isolé: ni variables EARSIM_* ni écritures de load_dotenv ne fuient"""
    environ = {k: v for k, v in os.environ.items() if not k.startswith("EARSIM_")}
    monkeypatch.setattr(os, "environ", environ)
    return environ


@pytest.fixture
def sample_system():
    """S = { a1=0 & a2=1 -> 1, a1=1 -> 2 }"""
    return parse_rules(SAMPLE_RULES)


@pytest.fixture
def golden_result():
    return json.loads((GOLDEN_DIR / "simulate_result.json").read_text(encoding="utf-8"))


@pytest.fixture
def rule_file(tmp_path):
    def write(text: str = SAMPLE_RULES, name: str = "rules.txt") -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return write
