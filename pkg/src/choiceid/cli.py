"""Command-line interface: ``choiceid analyze | recover | montecarlo | fixtures``.

Exit codes: 0 a verdict or result was produced, 1 golden mismatch in
``fixtures check``, 2 invalid input, 3 intractable, 4 shares
inconsistent with the model.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analysis import analyze
from .errors import (
    DimensionError,
    EnumerationRefused,
    InconsistentSystemError,
    IntractableError,
    ValidationError,
)
from .io import LoadedModel, Report, load_model, load_rationals, model_summary
from .model import (
    MultiOccasionModel,
    ObservedShares,
    TypeStateModel,
    aggregate_shares,
    assemble_matrix,
    ensure_valid,
    format_rational,
)
from .recovery import montecarlo_rank, solve_distribution

FIXTURE_DIR = Path(__file__).parent / "fixtures"
GOLDEN_DIR = FIXTURE_DIR / "golden"

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_INTRACTABLE, EXIT_INCONSISTENT = 0, 1, 2, 3, 4


def resolve_model(source: str) -> LoadedModel:
    """A path, or ``fixture:NAME`` for a shipped fixture."""
    if source.startswith("fixture:"):
        name = source.split(":", 1)[1]
        path = FIXTURE_DIR / f"{name}.json"
        if not path.exists():
            raise ValidationError(f"no fixture named {name!r}")
        return load_model(path)
    return load_model(source)


def _emit(report: Report, fmt: str) -> None:
    sys.stdout.write(report.to_json() if fmt == "json" else report.to_text())


def _fmt_vec(v) -> list[str]:
    return [format_rational(x) for x in v]


def _concrete_matrix(loaded: LoadedModel):
    s = loaded.subject
    if loaded.matrix is not None:
        return loaded.matrix
    if isinstance(s, TypeStateModel) and s.weights is not None:
        return assemble_matrix(s)
    raise ValidationError("recover needs a concrete matrix ('matrix' in a pattern file) or state 'weights'")


def cmd_analyze(args) -> int:
    loaded = resolve_model(args.model)
    _emit(analyze(loaded, args.mode, verbose=args.verbose, seed=args.seed, timing=args.timing), args.format)
    return EXIT_OK


def recover_report(loaded: LoadedModel, shares: ObservedShares) -> Report:
    M = _concrete_matrix(loaded)
    sol = solve_distribution(M, shares)
    result = {
        "matrix": [_fmt_vec(row) for row in M.values],
        "shares": _fmt_vec(shares.probs),
        "unique": sol.unique,
        "particular": _fmt_vec(sol.particular),
        "in_simplex": sol.in_simplex,
        "kernel": [_fmt_vec(v) for v in sol.kernel.basis],
        "segments": [
            None if seg is None else [None if e is None else format_rational(e) for e in seg] for seg in sol.segments
        ],
    }
    if sol.unique:
        headline = f"UNIQUE (π = ({', '.join(result['particular'])}))"
    else:
        dirs = "; ".join("(" + ", ".join(v) + ")" for v in result["kernel"])
        headline = f"NOT UNIQUE (kernel dimension {sol.kernel.dim}, directions {dirs})"
    return Report("recover", model_summary(loaded), headline, (), result)


def cmd_recover(args) -> int:
    loaded = resolve_model(args.model)
    if args.shares:
        shares = ObservedShares(load_rationals(args.shares, "shares"))
    elif loaded.pi is not None:
        shares = aggregate_shares(_concrete_matrix(loaded), loaded.pi)
    else:
        raise ValidationError("no --shares file given and the model has no 'pi'")
    ensure_valid(shares)
    _emit(recover_report(loaded, shares), args.format)
    return EXIT_OK


def montecarlo_report(loaded: LoadedModel, samples: int, seed: int) -> Report:
    if isinstance(loaded.subject, MultiOccasionModel):
        raise ValidationError("montecarlo works on a pattern or type-state model")
    rep = montecarlo_rank(loaded.subject, samples=samples, seed=seed)
    result = {
        "samples": rep.samples,
        "seed": rep.seed,
        "full_rank": rep.full_rank,
        "full_rank_fraction": rep.full_rank_fraction,
        "min_singular_value": rep.min_singular_value,
    }
    headline = f"full_rank_fraction = {rep.full_rank_fraction} ({rep.full_rank}/{rep.samples} samples)"
    return Report("montecarlo", model_summary(loaded), headline, (), result)


def cmd_montecarlo(args) -> int:
    if args.samples < 1:
        raise ValidationError("--samples must be at least 1")
    _emit(montecarlo_report(resolve_model(args.model), args.samples, args.seed), args.format)
    return EXIT_OK


def fixture_names() -> list[str]:
    return sorted(p.stem for p in FIXTURE_DIR.glob("*.json"))


def golden_pair(name: str) -> tuple[str, str]:
    report = analyze(load_model(FIXTURE_DIR / f"{name}.json"))
    return report.to_text(), report.to_json()


def cmd_fixtures(args) -> int:
    names = fixture_names()
    if args.action == "list":
        for name in names:
            desc = load_model(FIXTURE_DIR / f"{name}.json").description
            print(f"{name:36s} {desc}")
        return EXIT_OK
    mismatches = 0
    for name in names:
        text, js = golden_pair(name)
        paths = (GOLDEN_DIR / f"{name}.txt", GOLDEN_DIR / f"{name}.json")
        if args.bless:
            GOLDEN_DIR.mkdir(exist_ok=True)
            paths[0].write_text(text, encoding="utf-8")
            paths[1].write_text(js, encoding="utf-8")
            print(f"blessed {name}")
            continue
        ok = all(p.exists() and p.read_text(encoding="utf-8") == want for p, want in zip(paths, (text, js)))
        mismatches += not ok
        print(f"{'ok  ' if ok else 'FAIL'} {name}")
    return EXIT_MISMATCH if mismatches else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="choiceid", description="Identifiability analysis for latent-type choice models.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_seed=True):
        p.add_argument("model", help="model JSON file, or fixture:NAME")
        p.add_argument("--format", choices=("text", "json"), default="text")
        if with_seed:
            p.add_argument("--seed", type=int, default=0, help="seed for randomised checks (default 0)")

    p = sub.add_parser("analyze", help="identifiability verdicts with witnesses")
    common(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--all", dest="mode", action="store_const", const="all", help="every applicable test (default)")
    mode.add_argument("--global", dest="mode", action="store_const", const="global", help="global/generic/structural trichotomy only")
    mode.add_argument("--generic", dest="mode", action="store_const", const="generic", help="generic test only")
    p.set_defaults(mode="all")
    p.add_argument("--verbose", action="store_true", help="list every qualifying row subset")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("recover", help="solve p = M pi exactly")
    common(p, with_seed=False)
    p.add_argument("--shares", help="JSON list of observed shares (or object with 'shares')")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("montecarlo", help="exact rank at random grid parameters")
    common(p)
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(func=cmd_montecarlo)

    p = sub.add_parser("fixtures", help="list shipped fixtures or compare them with golden reports")
    p.add_argument("action", choices=("list", "check"))
    p.add_argument("--bless", action="store_true", help="rewrite golden reports instead of comparing")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (IntractableError, EnumerationRefused) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTRACTABLE
    except InconsistentSystemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
