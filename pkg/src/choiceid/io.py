"""JSON model files and verdict reports.

Model files carry labels; the library works with indices. Reports are
rendered back into labels, with rationals as ``"num/den"`` strings, so
a JSON report is plain data and round-trips exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .errors import ValidationError
from .matching import Matching
from .model import (
    ConcreteMatrix,
    MultiOccasionModel,
    PossibilityPattern,
    TypeDistribution,
    TypeStateModel,
    ensure_valid,
    format_rational,
    parse_rational,
)
from .typestate import StateMatching
from .verdict import Verdict

__all__ = ["LoadedModel", "Section", "Report", "load_model", "parse_model", "render_witnesses"]

KINDS = ("pattern", "typestate", "multi")


@dataclass(frozen=True)
class LoadedModel:
    kind: str
    subject: PossibilityPattern | TypeStateModel | MultiOccasionModel
    name: str = ""
    matrix: ConcreteMatrix | None = None
    pi: TypeDistribution | None = None
    description: str = ""


def _need(doc: Mapping, key: str, where: str):
    if key not in doc:
        raise ValidationError(f"{where}: missing field {key!r}")
    return doc[key]


def _labels(doc: Mapping, key: str, where: str) -> tuple[str, ...]:
    value = _need(doc, key, where)
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ValidationError(f"{where}: {key!r} must be a list of strings")
    return tuple(value)


def _rational(value, where: str) -> Fraction:
    try:
        return parse_rational(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"{where}: {exc}") from None


def _parse_pattern(doc: Mapping, where: str, types=None) -> PossibilityPattern:
    alts = _labels(doc, "alternatives", where)
    types = types if types is not None else _labels(doc, "types", where)
    grid = _need(doc, "allowed", where)
    if (
        not isinstance(grid, list)
        or len(grid) != len(alts)
        or not all(isinstance(row, list) and len(row) == len(types) for row in grid)
    ):
        raise ValidationError(f"{where}: 'allowed' must be a {len(alts)}x{len(types)} grid (rows = alternatives)")
    if not all(v in (0, 1, True, False) for row in grid for v in row):
        raise ValidationError(f"{where}: 'allowed' entries must be 0 or 1")
    return PossibilityPattern(alts, types, [[bool(v) for v in row] for row in grid])


def _parse_typestate(doc: Mapping, where: str, types=None) -> TypeStateModel:
    alts = _labels(doc, "alternatives", where)
    types = types if types is not None else _labels(doc, "types", where)
    states = _labels(doc, "states", where)
    choice = _need(doc, "choice", where)
    if not isinstance(choice, Mapping):
        raise ValidationError(f"{where}: 'choice' must map type -> state -> alternative")
    problems = []
    table = []
    for t in types:
        row = choice.get(t)
        if not isinstance(row, Mapping):
            problems.append(f"{where}: no choices given for type {t!r}")
            continue
        out = []
        for s in states:
            x = row.get(s)
            if x not in alts:
                problems.append(f"{where}: type {t!r} in state {s!r} chooses {x!r}, not a listed alternative")
                continue
            out.append(x)
        extra = set(row) - set(states)
        if extra:
            problems.append(f"{where}: type {t!r} has choices for unknown states {sorted(extra)}")
        table.append(out)
    extra_types = set(choice) - set(types)
    if extra_types:
        problems.append(f"{where}: choices given for unknown types {sorted(extra_types)}")
    if problems:
        raise ValidationError(problems)
    weights = None
    if "weights" in doc:
        w = doc["weights"]
        if not isinstance(w, Mapping):
            raise ValidationError(f"{where}: 'weights' must map state -> rational")
        unknown = set(w) - set(states)
        if unknown:
            raise ValidationError(f"{where}: unknown state label(s) in weights: {sorted(unknown)}")
        weights = tuple(_rational(w.get(s, 0), f"{where} weights") for s in states)
    grid = [[alts.index(x) for x in row] for row in table]
    return TypeStateModel(alts, types, states, grid, weights)


def _parse_matrix(doc: Mapping, pattern: PossibilityPattern, where: str) -> ConcreteMatrix:
    grid = doc["matrix"]
    if not isinstance(grid, list) or len(grid) != pattern.n or not all(
        isinstance(row, list) and len(row) == pattern.r for row in grid
    ):
        raise ValidationError(f"{where}: 'matrix' must be a {pattern.n}x{pattern.r} grid")
    values = [[_rational(v, f"{where} matrix") for v in row] for row in grid]
    return ConcreteMatrix(values, pattern)


def parse_model(doc: Any, name: str = "") -> LoadedModel:
    """Build and validate the in-memory model described by a decoded JSON document."""
    if not isinstance(doc, Mapping):
        raise ValidationError("model file must contain a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise ValidationError(f"'kind' must be one of {list(KINDS)}, got {kind!r}")
    name = doc.get("name", name)
    description = doc.get("description", "")
    matrix = None
    if kind == "pattern":
        subject = _parse_pattern(doc, "model")
        if "matrix" in doc:
            matrix = _parse_matrix(doc, subject, "model")
    elif kind == "typestate":
        subject = _parse_typestate(doc, "model")
    else:
        types = _labels(doc, "types", "model")
        occ_docs = _need(doc, "occasions", "model")
        if not isinstance(occ_docs, list):
            raise ValidationError("model: 'occasions' must be a list")
        occasions = []
        for j, od in enumerate(occ_docs):
            where = f"occasion {j + 1}"
            if not isinstance(od, Mapping) or od.get("kind") not in ("pattern", "typestate"):
                raise ValidationError(f"{where}: needs 'kind' 'pattern' or 'typestate'")
            if "types" in od and tuple(od["types"]) != types:
                raise ValidationError(f"{where}: type list differs from the shared type list")
            parse = _parse_pattern if od["kind"] == "pattern" else _parse_typestate
            occasions.append(parse(od, where, types))
        subject = MultiOccasionModel(types, occasions)
    ensure_valid(subject)
    pi = None
    if "pi" in doc:
        raw = doc["pi"]
        if not isinstance(raw, list):
            raise ValidationError("model: 'pi' must be a list of rationals")
        pi = TypeDistribution(tuple(_rational(v, "pi") for v in raw))
        ensure_valid(pi)
        if len(pi) != subject.r:
            raise ValidationError(f"model: 'pi' has {len(pi)} entries for {subject.r} types")
    if matrix is not None:
        ensure_valid(matrix)
    return LoadedModel(kind, subject, name, matrix, pi, description)


def _decode(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{source}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load_model(path: str | Path) -> LoadedModel:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    return parse_model(_decode(text, str(path)), name=path.stem)


def load_rationals(path: str | Path, key: str) -> tuple[Fraction, ...]:
    """A bare JSON list of rationals, or an object holding one under ``key``."""
    path = Path(path)
    try:
        doc = _decode(path.read_text(encoding="utf-8"), str(path))
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    if isinstance(doc, Mapping):
        doc = doc.get(key)
    if not isinstance(doc, list):
        raise ValidationError(f"{path}: expected a list of rationals (or an object with {key!r})")
    return tuple(_rational(v, str(path)) for v in doc)


# -- witness rendering ---------------------------------------------------------------


def _fr(v) -> str:
    return format_rational(Fraction(v))


class _Labels:
    def __init__(self, alternatives, types, states=()):
        self.alts = list(alternatives)
        self.types = list(types)
        self.states = list(states)

    def matching(self, m) -> dict:
        a = m.assignment if isinstance(m, Matching) else tuple(m)
        return {"assignment": {self.types[l]: self.alts[k] for l, k in enumerate(a)}, "parity": Matching(a).parity}

    def state_matching(self, sm: StateMatching) -> dict:
        out = self.matching(sm.matching)
        out["states"] = {self.types[l]: self.states[i] for l, i in enumerate(sm.gamma)}
        out["usage"] = list(sm.usage)
        return out

    def rows(self, rows) -> list[str]:
        return [self.alts[k] for k in rows]

    def type_set(self, ts) -> list[str] | None:
        return None if ts is None else [self.types[l] for l in ts]


def render_witnesses(verdict: Verdict, labels: _Labels) -> dict:
    """Label-based, JSON-ready form of a verdict's witnesses."""
    out: dict[str, Any] = {}
    for key, value in verdict.witnesses.items():
        if key in ("rows",):
            out[key] = labels.rows(value)
        elif key == "all_rows":
            out[key] = [labels.rows(r) for r in value]
        elif key == "matching":
            out[key] = labels.matching(value)
        elif key == "state_matching":
            out[key] = labels.state_matching(value)
        elif key == "deficient_types":
            out[key] = labels.type_set(value)
        elif key == "neighborhood":
            out[key] = labels.rows(value)
        elif key == "opposite_parity_pairs":
            pairs = []
            for rows, pair in value:
                render = labels.state_matching if isinstance(pair[0], StateMatching) else labels.matching
                pairs.append({"rows": labels.rows(rows), "even": render(pair[0]), "odd": render(pair[1])})
            out[key] = pairs
        elif key == "cancelled":
            out[key] = [
                {"rows": labels.rows(rows), "classes": [{"usage": list(u), "coefficient": c} for u, c in coeffs.items()]}
                for rows, coeffs in value
            ]
        elif key == "all":
            out[key] = [{"rows": labels.rows(r), "usage": list(u), "coefficient": c} for r, u, c in value]
        elif key == "usage":
            out[key] = list(value)
        elif key == "weights":
            out[key] = {s: _fr(v) for s, v in zip(labels.states, value)}
        elif key == "states":
            out[key] = [labels.states[i] for i in value]
        elif key == "failures":
            out[key] = [
                {"rows": labels.rows(rows), "states": [labels.states[a], labels.states[b]], "types": [labels.types[t], labels.types[u]], "kind": kind}
                for rows, (a, b), (t, u, kind) in value
            ]
        elif key == "reference_state":
            out[key] = labels.states[value]
        elif key == "odd_reassignment":
            out[key] = {labels.types[t]: labels.types[u] for t, u in enumerate(value)}
        elif key == "deficient":
            out[key] = [labels.type_set(s) for s in value]
        elif key in ("v", "occasions", "failing"):
            out[key] = list(value)
        else:
            out[key] = value
    return out


def _fmt_set(items) -> str:
    return "{" + ", ".join(items) + "}"


def _usage(u) -> str:
    return "[" + ",".join(map(str, u)) + "]"


def summarize(verdict: Verdict, rendered: dict) -> str:
    """Short parenthetical used in the headline."""
    w = rendered

    def desc(m):
        return ", ".join(f"{t}→{x}" for t, x in m["assignment"].items())

    if "matching" in w and verdict.klass.value == "global":
        if w.get("permanent") == 1:
            return f"unique matching {desc(w['matching'])}"
        return f"all matchings onto {_fmt_set(w['rows'])} share parity, e.g. {desc(w['matching'])}"
    if "state_matching" in w:
        return f"all state-matchings onto {_fmt_set(w['rows'])} share parity, e.g. {desc(w['state_matching'])}"
    if "deficient_types" in w:
        return f"types {_fmt_set(w['deficient_types'])} possible only at {_fmt_set(w['neighborhood'])}"
    if "usage" in w:
        return f"Γ-class {_usage(w['usage'])} has net coefficient {w['coefficient']} on rows {_fmt_set(w['rows'])}"
    if "cancelled" in w:
        classes = sorted({tuple(c["usage"]) for entry in w["cancelled"] for c in entry["classes"]}, reverse=True)
        names = ", ".join(_usage(u) for u in classes)
        return f"Γ-class {names} cancels" if len(classes) == 1 else f"Γ-classes {names} all cancel"
    if "matching" in w:
        return f"matching {desc(w['matching'])}; every row subset mixes parities"
    if "odd_reassignment" in w:
        return "odd reassignment " + ", ".join(f"{t}⇝{u}" for t, u in w["odd_reassignment"].items())
    if "reassignments" in w:
        return f"{w['reassignments']} possible reassignment(s), all even"
    if "states" in w:
        return f"states ({', '.join(w['states'])}): pooled pairs split non-typically on {_fmt_set(w['rows'])}"
    if "failures" in w:
        return f"every ordered state pair fails the split condition ({len(w['failures'])} failures)"
    if "v" in w:
        total = sum(w["v"])
        rel = "≥" if total >= w["bound"] else "<"
        return f"v = ({', '.join(map(str, w['v']))}), {total} {rel} {w['bound']}"
    if "occasions" in w:
        return "per-occasion verdicts " + ", ".join(w["occasions"]) if w["occasions"] else "single type"
    if "weights" in w:
        return "full-rank minor at a sampled state measure"
    return verdict.provenance


# -- reports -----------------------------------------------------------------------


@dataclass(frozen=True)
class Section:
    name: str
    klass: str
    summary: str
    provenance: str
    witnesses: dict = field(default_factory=dict)
    probabilistic: bool = False
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "class": self.klass,
            "summary": self.summary,
            "provenance": self.provenance,
            "probabilistic": self.probabilistic,
            "notes": list(self.notes),
            "witnesses": self.witnesses,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Section":
        return cls(d["name"], d["class"], d["summary"], d["provenance"], dict(d["witnesses"]), d["probabilistic"], tuple(d["notes"]))


def section_from_verdict(name: str, verdict: Verdict, labels: _Labels, notes: tuple[str, ...] = ()) -> Section:
    rendered = render_witnesses(verdict, labels)
    return Section(
        name,
        verdict.klass.value,
        summarize(verdict, rendered),
        verdict.provenance,
        rendered,
        verdict.probabilistic,
        tuple(verdict.notes) + tuple(notes),
    )


@dataclass(frozen=True)
class Report:
    command: str
    model: dict
    headline: str
    sections: tuple[Section, ...] = ()
    result: dict | None = None
    timing_ms: float | None = None

    def to_dict(self) -> dict:
        d: dict[str, Any] = {
            "command": self.command,
            "model": self.model,
            "headline": self.headline,
            "sections": [s.to_dict() for s in self.sections],
        }
        if self.result is not None:
            d["result"] = self.result
        if self.timing_ms is not None:
            d["timing_ms"] = self.timing_ms
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, d: Mapping) -> "Report":
        return cls(
            d["command"],
            dict(d["model"]),
            d["headline"],
            tuple(Section.from_dict(s) for s in d["sections"]),
            d.get("result"),
            d.get("timing_ms"),
        )

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def to_text(self) -> str:
        lines = [self.headline]
        m = self.model
        lines.append(f"model: {m.get('name') or '(unnamed)'} [{m['kind']}]")
        for s in self.sections:
            lines.append("")
            flag = " (probabilistic)" if s.probabilistic else ""
            lines.append(f"[{s.name}] {s.klass.upper()}{flag}: {s.summary}")
            lines.append(f"  provenance: {s.provenance}")
            for key, value in s.witnesses.items():
                lines.append(f"  {key}: {json.dumps(value, ensure_ascii=False)}")
            for note in s.notes:
                lines.append(f"  note: {note}")
        if self.result is not None:
            lines.append("")
            for key, value in self.result.items():
                lines.append(f"{key}: {json.dumps(value, ensure_ascii=False)}")
        if self.timing_ms is not None:
            lines.append(f"timing: {self.timing_ms:.1f} ms")
        return "\n".join(lines) + "\n"


def labels_for(subject) -> _Labels:
    if isinstance(subject, TypeStateModel):
        return _Labels(subject.alternatives, subject.types, subject.states)
    if isinstance(subject, PossibilityPattern):
        return _Labels(subject.alternatives, subject.types)
    return _Labels((), subject.types)


def model_summary(loaded: LoadedModel) -> dict:
    s = loaded.subject
    d: dict[str, Any] = {"name": loaded.name, "kind": loaded.kind, "types": list(s.types)}
    if isinstance(s, MultiOccasionModel):
        d["occasions"] = len(s.occasions)
    else:
        d["alternatives"] = list(s.alternatives)
    if isinstance(s, TypeStateModel):
        d["states"] = list(s.states)
    return d
