"""Configuration centrale pour earsim"""
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Union

from dotenv import dotenv_values, find_dotenv, load_dotenv

from earsim.errors import BudgetExceededError, ConfigError

logger = logging.getLogger(__name__)

ENV_PREFIX = "EARSIM_"


@dataclass(frozen=True)
class SearchBudget:
    """Limites de la recherche exacte (minimax)"""
    max_attributes: int = 8
    max_rules: int = 10
    max_values: int = 3

    def check(self, system) -> None:
        """Lève BudgetExceededError si le système dépasse une des limites"""
        m = system.measures
        if m.n > self.max_attributes:
            raise BudgetExceededError("attributes", m.n, self.max_attributes)
        if len(system.rules) > self.max_rules:
            raise BudgetExceededError("rules", len(system.rules), self.max_rules)
        if m.k > self.max_values:
            raise BudgetExceededError("values", m.k, self.max_values)

    def validate(self) -> bool:
        return min(self.max_attributes, self.max_rules, self.max_values) >= 0


@dataclass
class AppConfig:
    """Configuration de l'application (valeurs par défaut + variables EARSIM_*)"""
    seed: int = 0
    workers: int = 4
    log_level: str = "WARNING"
    budget: SearchBudget = field(default_factory=SearchBudget)
    cover_max_attributes: int = 20
    enumeration_cap: int = 1_000_000

    @classmethod
    def from_env(cls, env_file: Optional[Union[str, Path]] = None) -> 'AppConfig':
        """Charge depuis un fichier .env puis les variables d'environnement"""
        if env_file is not None:
            load_dotenv(env_file, override=False)
        else:
            load_dotenv(find_dotenv(usecwd=True), override=False)

        defaults = cls()
        budget = SearchBudget(
            max_attributes=_env_int("MAX_ATTRIBUTES", defaults.budget.max_attributes),
            max_rules=_env_int("MAX_RULES", defaults.budget.max_rules),
            max_values=_env_int("MAX_VALUES", defaults.budget.max_values),
        )
        config = cls(
            seed=_env_int("SEED", defaults.seed),
            workers=_env_int("WORKERS", defaults.workers),
            log_level=os.getenv(ENV_PREFIX + "LOG_LEVEL", defaults.log_level).upper(),
            budget=budget,
            cover_max_attributes=_env_int("COVER_MAX_ATTRIBUTES", defaults.cover_max_attributes),
            enumeration_cap=_env_int("ENUMERATION_CAP", defaults.enumeration_cap),
        )
        if not config.validate():
            raise ConfigError(f"invalid configuration: {config}")
        return config

    def validate(self) -> bool:
        """Valide les bornes numériques et le niveau de log"""
        if self.seed < 0 or self.workers < 1:
            return False
        if self.cover_max_attributes < 0 or self.enumeration_cap < 1:
            return False
        if not isinstance(logging.getLevelName(self.log_level), int):
            return False
        return self.budget.validate()


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(ENV_PREFIX + name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{ENV_PREFIX}{name} must be an integer, got {raw!r}")


def normalize_flag_name(key: str) -> str:
    """'max-len', 'MAX_LEN' et '--max_len' désignent tous le dest argparse 'max_len'"""
    return key.strip().lstrip("-").lower().replace("-", "_")


def load_flag_presets(path: Union[str, Path]) -> Dict[str, str]:
    """Lit un fichier key=value de préréglages de flags"""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    presets = {}
    for key, value in dotenv_values(path).items():
        if value is None:
            raise ConfigError(f"config key {key!r} has no value in {path}")
        presets[normalize_flag_name(key)] = value
    logger.debug("[CONFIG] %d preset(s) loaded from %s", len(presets), path)
    return presets
