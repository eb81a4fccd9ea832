"""Génération aléatoire de systèmes de règles, de tuples et d'équations

Le générateur est numpy PCG64 (PCG-XSL-RR 128/64, multiplicateur
0x2360ED051FC65DA44385DF649FCCF645) initialisé par SeedSequence(seed,
spawn_key=(flux,)): mêmes graine et flux, mêmes tirages sur toute plateforme.
"""
from dataclasses import dataclass
from typing import List

import numpy as np

from earsim.errors import GenerationError
from earsim.rules import EquationSystem, ExtendedTuple, RuleSystem

SYSTEM_STREAM = 0
TUPLE_STREAM = 1
ALPHA_STREAM = 2

MAX_SEED = 2 ** 64 - 1


def make_rng(seed: int, stream: int = SYSTEM_STREAM) -> np.random.Generator:
    if not 0 <= seed <= MAX_SEED:
        raise GenerationError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))


@dataclass(frozen=True)
class GenParams:
    """Paramètres d'un système aléatoire (axes n(S), d(S), k(S))"""
    n_attrs: int
    n_rules: int
    min_len: int
    max_len: int
    n_values: int
    seed: int = 0

    def validate(self) -> None:
        if not 1 <= self.min_len <= self.max_len <= self.n_attrs:
            raise GenerationError(
                f"need 1 <= min_len <= max_len <= n_attrs, got {self.min_len}, {self.max_len}, {self.n_attrs}"
            )
        if self.n_rules < 1:
            raise GenerationError(f"n_rules must be >= 1, got {self.n_rules}")
        if self.n_values < 1:
            raise GenerationError(f"n_values must be >= 1, got {self.n_values}")
        if not 0 <= self.seed <= MAX_SEED:
            raise GenerationError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


def random_system(params: GenParams) -> RuleSystem:
    """Longueur uniforme, sous-ensemble d'attributs uniforme, valeurs et décision uniformes"""
    params.validate()
    rng = make_rng(params.seed, SYSTEM_STREAM)
    specs = []
    for _ in range(params.n_rules):
        length = int(rng.integers(params.min_len, params.max_len + 1))
        attributes = rng.choice(params.n_attrs, size=length, replace=False) + 1
        values = rng.integers(0, params.n_values, size=length)
        decision = int(rng.integers(0, params.n_values))
        specs.append(([(int(a), int(v)) for a, v in zip(attributes, values)], decision))
    return RuleSystem.from_rules(specs)


def sample_tuples(system: RuleSystem, count: int, seed: int) -> List[ExtendedTuple]:
    """Tuples tirés uniformément dans EV(S)"""
    rng = make_rng(seed, TUPLE_STREAM)
    attributes = system.attributes
    if not attributes:
        return [ExtendedTuple(()) for _ in range(count)]
    domains = [system.extended_values(a) for a in attributes]
    sizes = np.array([len(domain) for domain in domains])
    picks = rng.integers(0, sizes, size=(count, len(attributes)))
    return [
        ExtendedTuple(tuple((a, domains[j][int(i)]) for j, (a, i) in enumerate(zip(attributes, row))))
        for row in picks
    ]


def random_alpha(system: RuleSystem, rng: np.random.Generator) -> EquationSystem:
    """Affectation partielle cohérente: chaque attribut de A(S) fixé avec probabilité 1/2"""
    pairs = []
    for attribute in system.attributes:
        if rng.random() < 0.5:
            domain = system.extended_values(attribute)
            pairs.append((attribute, domain[int(rng.integers(0, len(domain)))]))
    return EquationSystem.from_pairs(pairs)


__all__ = [
    'GenParams', 'random_system', 'sample_tuples', 'random_alpha', 'make_rng',
    'SYSTEM_STREAM', 'TUPLE_STREAM', 'ALPHA_STREAM',
]
