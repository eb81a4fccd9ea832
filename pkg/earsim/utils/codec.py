"""Lecture / écriture: fichiers de règles, tuples, résultats JSON, lignes CSV

Grammaire des fichiers de règles (une règle par ligne, `#` commentaire):
    rule  := lhs "->" NAT | "->" NAT
    lhs   := term (" & " term)*
    term  := "a" NAT "=" NAT
Grammaire des tuples:
    tuple := term ("," term)*      term := "a" NAT "=" (NAT | "*")
"""
import io
import json
import re
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, List, Optional

import pandas as pd

from earsim.errors import InvalidRuleError, RuleParseError
from earsim.rules import STAR, DecisionRule, ExtendedTuple, RuleSystem, format_value
from earsim.services.simulator import SimulationResult, Strategy, normalize_value

RULE_GRAMMAR = """rule file grammar (one rule per line, '#' starts a comment):
  rule  := lhs "->" NAT | "->" NAT
  lhs   := term (" & " term)*
  term  := "a" NAT "=" NAT
tuple grammar:
  tuple := term ("," term)*
  term  := "a" NAT "=" (NAT | "*")"""

_SPACE = re.compile(r"[ \t]*")
_RULE_TERM = re.compile(r"a(\d+)[ \t]*=[ \t]*(\d+)")
_TUPLE_TERM = re.compile(r"a(\d+)[ \t]*=[ \t]*(\d+|\*)")
_AND = re.compile(r"[ \t]*&[ \t]*")
_ARROW = re.compile(r"[ \t]*->[ \t]*")
_COMMA = re.compile(r"[ \t]*,[ \t]*")
_NAT = re.compile(r"\d+")


class _Cursor:
    """Position courante dans une ligne, pour les erreurs annotées"""

    def __init__(self, text: str, line: int):
        self.text = text
        self.line = line
        self.pos = 0

    def match(self, pattern: re.Pattern) -> Optional[re.Match]:
        found = pattern.match(self.text, self.pos)
        if found:
            self.pos = found.end()
        return found

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def error(self, message: str, expected: Optional[str] = None, column: Optional[int] = None) -> RuleParseError:
        return RuleParseError(message, self.line, (self.pos if column is None else column) + 1, expected)


def parse_rule(text: str, rule_id: int = 0, line: int = 1) -> DecisionRule:
    cursor = _Cursor(text.rstrip(), line)
    cursor.match(_SPACE)
    lhs = []
    seen = set()
    if not cursor.match(_ARROW):
        while True:
            start = cursor.pos
            term = cursor.match(_RULE_TERM)
            if term is None:
                raise cursor.error("malformed term", "a<NAT>=<NAT>")
            attribute, value = int(term.group(1)), int(term.group(2))
            if attribute in seen:
                raise cursor.error(f"repeated attribute a{attribute}", column=start)
            seen.add(attribute)
            lhs.append((attribute, value))
            if cursor.match(_ARROW):
                break
            if not cursor.match(_AND):
                raise cursor.error("unexpected input after term", "'&' or '->'")
    decision = cursor.match(_NAT)
    if decision is None:
        raise cursor.error("missing decision", "NAT")
    cursor.match(_SPACE)
    if not cursor.at_end():
        raise cursor.error("trailing input", "end of line")
    try:
        return DecisionRule(tuple(lhs), int(decision.group()), rule_id)
    except InvalidRuleError as e:
        raise RuleParseError(str(e), line, 1)


def parse_rules(text: str) -> RuleSystem:
    """Parse un fichier de règles; ids attribués dans l'ordre des lignes"""
    rules = []
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        if not content.strip():
            continue
        rules.append(parse_rule(content, len(rules), number))
    if not rules:
        raise RuleParseError("no rule found", max(1, len(text.splitlines())), 1, "at least one rule")
    return RuleSystem(tuple(rules))


def serialize_rules(system: RuleSystem) -> str:
    return "\n".join(str(rule) for rule in system.rules) + "\n"


def parse_tuple(text: str, system: RuleSystem) -> ExtendedTuple:
    """Parse 'a1=0,a2=*'; tous les attributs de A(S) sont requis, valeurs hors V_S(a) → ∗"""
    cursor = _Cursor(text.strip(), 1)
    mapping = {}
    if cursor.text:
        while True:
            start = cursor.pos
            term = cursor.match(_TUPLE_TERM)
            if term is None:
                raise cursor.error("malformed tuple term", "a<NAT>=<NAT|*>")
            attribute = int(term.group(1))
            if attribute in mapping:
                raise cursor.error(f"repeated attribute a{attribute}", column=start)
            if attribute not in system.measures.values:
                raise cursor.error(f"a{attribute} is not an attribute of the system", column=start)
            raw = STAR if term.group(2) == "*" else int(term.group(2))
            mapping[attribute] = normalize_value(system, attribute, raw)
            if cursor.at_end():
                break
            if not cursor.match(_COMMA):
                raise cursor.error("unexpected input after term", "','")
    missing = sorted(system.measures.attrs - set(mapping))
    if missing:
        raise cursor.error("missing attribute(s) " + ", ".join(f"a{a}" for a in missing), "every attribute of A(S)")
    return ExtendedTuple.over(system, mapping)


def serialize_tuple(tuple_: ExtendedTuple) -> str:
    return str(tuple_)


def _value_to_json(value) -> Any:
    return format_value(value) if value is STAR else value


def _value_from_json(value) -> Any:
    return STAR if value == "*" else int(value)


def result_to_dict(result: SimulationResult) -> Dict[str, Any]:
    return {
        "strategy": result.strategy.value,
        "answer": sorted(result.answer),
        "trace": [{"attribute": a, "value": _value_to_json(v)} for a, v in result.trace],
        "rounds": list(result.rounds),
        "lengths": list(result.lengths),
        "depth": result.depth,
    }


def result_from_dict(data: Dict[str, Any]) -> SimulationResult:
    result = SimulationResult(
        answer=frozenset(int(i) for i in data["answer"]),
        trace=[(int(step["attribute"]), _value_from_json(step["value"])) for step in data["trace"]],
        rounds=[int(q) for q in data["rounds"]],
        lengths=[int(d) for d in data.get("lengths", [])],
        strategy=Strategy(data["strategy"]),
    )
    if "depth" in data and int(data["depth"]) != result.depth:
        raise RuleParseError("depth does not match trace length", 1, 1)
    return result


def result_to_json(result: SimulationResult) -> str:
    return json.dumps(result_to_dict(result), indent=2)


def result_from_json(text: str) -> SimulationResult:
    return result_from_dict(json.loads(text))


@dataclass
class BenchRow:
    """Une ligne CSV: un tuple simulé par une stratégie"""
    seed: int
    n: int
    d: int
    k: int
    rules: int
    tuple_id: int
    strategy: str
    depth: int
    rounds: int
    h_exact: Optional[int]
    ub_theorem1: Optional[float]
    answer_size: int


CSV_COLUMNS = [f.name for f in fields(BenchRow)]


def rows_to_frame(rows: List[BenchRow]) -> pd.DataFrame:
    frame = pd.DataFrame([asdict(row) for row in rows], columns=CSV_COLUMNS)
    frame["h_exact"] = frame["h_exact"].astype("Int64")
    frame["ub_theorem1"] = frame["ub_theorem1"].astype("float64")
    return frame


def frame_to_csv(frame: pd.DataFrame) -> str:
    """CSV à colonnes fixes; chaîne vide pour les optionnels absents"""
    buffer = io.StringIO()
    frame[CSV_COLUMNS].to_csv(buffer, index=False, na_rep="", float_format="%.6f", lineterminator="\n")
    return buffer.getvalue()


def read_bench_csv(text: str) -> pd.DataFrame:
    frame = pd.read_csv(io.StringIO(text), dtype={"strategy": str})
    frame["h_exact"] = frame["h_exact"].astype("Int64")
    frame["ub_theorem1"] = frame["ub_theorem1"].astype("float64")
    return frame[CSV_COLUMNS]
