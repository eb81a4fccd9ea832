"""Exceptions du package earsim"""
from typing import Optional


class EarsimError(ValueError):
    """Erreur de domaine (mappée sur le code de sortie 1 par la CLI)"""


class InvalidRuleError(EarsimError):
    """Règle mal formée (attribut répété, ∗ dans une règle, nombre négatif)"""


class InvalidTupleError(EarsimError):
    """Tuple hors de EV(S): attribut manquant, inconnu ou valeur hors domaine"""


class InconsistentEquationsError(EarsimError):
    """Système d'équations incohérent là où la cohérence est requise"""


class DegenerateSystemError(EarsimError):
    """Opération appelée avec le mauvais régime n(S) = 0 / n(S) > 0"""


class GenerationError(EarsimError):
    """Paramètres de génération ou d'énumération invalides"""


class ConfigError(EarsimError):
    """Valeur de configuration invalide"""


class BudgetExceededError(EarsimError):
    """Instance trop grande pour une recherche exhaustive"""

    def __init__(self, dimension: str, value: int, limit: int):
        self.dimension = dimension
        self.value = value
        self.limit = limit
        super().__init__(f"budget exceeded: {dimension}={value} > limit {limit}")


class RuleParseError(EarsimError):
    """Erreur de parsing annotée par position (1-indexed)"""

    def __init__(self, message: str, line: int, column: int, expected: Optional[str] = None):
        self.message = message
        self.line = line
        self.column = column
        self.expected = expected
        text = f"line {line}, column {column}: {message}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)
