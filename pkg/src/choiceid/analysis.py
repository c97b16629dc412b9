"""Run every applicable verdict for a loaded model and assemble a report."""

from __future__ import annotations

import time

from .errors import IntractableError
from .io import LoadedModel, Report, Section, labels_for, model_summary, section_from_verdict
from .matching import verdict_general
from .model import MultiOccasionModel, PossibilityPattern, TypeStateModel
from .nullspace import verdict_nullspace
from .tensor import verdict_multi
from .typestate import reassignment_check, separating_states, verdict_typestate_generic, verdict_typestate_global
from .verdict import Klass, Verdict

__all__ = ["analyze", "MODES"]

MODES = ("all", "global", "generic")


def _pattern_sections(p: PossibilityPattern, mode: str, verbose: bool) -> list[Section]:
    return [section_from_verdict("general", verdict_general(p, verbose=verbose), labels_for(p))]


def _typestate_sections(ts: TypeStateModel, mode: str, verbose: bool, seed: int) -> list[Section]:
    labels = labels_for(ts)
    if mode == "generic":
        return [section_from_verdict("usage-classes", verdict_typestate_generic(ts, verbose=verbose, seed=seed), labels)]
    main = verdict_typestate_global(ts, verbose=verbose, seed=seed)
    sections = [section_from_verdict("type-state", main, labels)]
    if mode == "global":
        return sections
    for state in separating_states(ts):
        sections.append(section_from_verdict(f"reassignment[{state}]", reassignment_check(ts, state), labels))
    pattern = ts.induced_pattern()
    sections.append(
        section_from_verdict(
            "induced-pattern",
            verdict_general(pattern, verbose=verbose),
            labels_for(pattern),
            ("treats every positive entry as a free parameter, covering boundary state measures",),
        )
    )
    if ts.n_states == 2:
        sections.append(_typical_split_section(ts, main, seed))
    return sections


def _typical_split_section(ts: TypeStateModel, exact: Verdict, seed: int) -> Section:
    labels = labels_for(ts)
    try:
        v = verdict_nullspace(ts, seed=seed)
    except IntractableError as exc:
        return Section("typical-split", Klass.INCONCLUSIVE.value, str(exc), "random typicality samples disagreed")
    agrees = v.identifiable == exact.identifiable
    note = (
        "agrees with the exact usage-class verdict"
        if agrees
        else "DISAGREES with the exact usage-class verdict; the split condition alone is not sufficient here"
    )
    return section_from_verdict("typical-split", v, labels, (note,))


def _multi_sections(mm: MultiOccasionModel, mode: str, verbose: bool, seed: int) -> list[Section]:
    labels = labels_for(mm)
    if mm.J == 3:
        head = verdict_multi(mm, seed=seed)
    else:
        head = Verdict(Klass.INCONCLUSIVE, "the tensor conditions need three occasions", {"occasions_given": mm.J})
    sections = [section_from_verdict("three-occasion", head, labels)]
    for j, occ in enumerate(mm.occasions):
        if isinstance(occ, TypeStateModel):
            v = verdict_typestate_global(occ, verbose=verbose, seed=seed)
        else:
            v = verdict_general(occ, verbose=verbose)
        sections.append(section_from_verdict(f"occasion {j + 1}", v, labels_for(occ)))
    return sections


def analyze(loaded: LoadedModel, mode: str = "all", verbose: bool = False, seed: int = 0, timing: bool = False) -> Report:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    start = time.perf_counter()
    s = loaded.subject
    if isinstance(s, PossibilityPattern):
        sections = _pattern_sections(s, mode, verbose)
    elif isinstance(s, TypeStateModel):
        sections = _typestate_sections(s, mode, verbose, seed)
    else:
        sections = _multi_sections(s, mode, verbose, seed)
    head = sections[0]
    headline = f"{head.klass.upper()} ({head.summary})"
    elapsed = (time.perf_counter() - start) * 1000 if timing else None
    return Report("analyze", model_summary(loaded), headline, tuple(sections), None, elapsed)
