"""Batch command line interface.

Commands: validate, reconstruct, compare, suite.  Exit codes are disjoint
and exhaustive: 0 pass, 1 fail with witness, 2 input error, 3 inconclusive
(isomorphism search budget exhausted).  Reports embed the tool version,
seed, tolerance and input content hash, and identical (input, config)
pairs produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .algebra import TwistedAlgebra
from .errors import InputError, NotCartanError
from .fileio import (
    content_hash,
    dumps,
    groupoid_from_dict,
    load_basis,
    load_groupoid_file,
)
from .groupoid import BudgetExhausted, _Budget, iter_isomorphisms, validate_groupoid
from .reconstruction import reconstruct
from .semigroups import SemigroupSpec
from .suites import (
    cartan_suite,
    expectation_suite,
    masa_suite,
    norms_suite,
    relations_suite,
    states_suite,
)

VERSION = "0.1.0"

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_INCONCLUSIVE = 3


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = 1e-9
    seed: int = 42
    iso_budget: int = 10**6
    semigroup: str = "monomial"

    def to_dict(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "seed": self.seed,
            "iso_budget": self.iso_budget,
            "semigroup": self.semigroup,
        }


def _envelope(path: str, config: RunConfig) -> dict:
    return {
        "tool": {"name": "twistalg", "version": VERSION},
        "config": config.to_dict(),
        "input": {"name": Path(path).name, "sha256": content_hash(path)},
    }


def _emit(doc: dict, out: str | None) -> None:
    text = dumps(doc)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_context(path: str, config: RunConfig):
    gpd, cocycle = load_groupoid_file(path)
    report = validate_groupoid(gpd)
    if not report.ok:
        raise InputError("invalid groupoid: " + report.violations[0].message)
    return TwistedAlgebra(gpd, cocycle, zero_tol=config.tolerance, name=gpd.name)


def _resolve_spec(ctx, config: RunConfig) -> SemigroupSpec:
    if config.semigroup == "monomial":
        return SemigroupSpec.monomial(ctx)
    if config.semigroup.startswith("basis:"):
        return SemigroupSpec.basis_restricted(ctx, load_basis(config.semigroup[6:], ctx))
    raise InputError(f"unknown --semigroup value {config.semigroup!r}")


# -- commands -----------------------------------------------------------------------


def cmd_validate(path: str, config: RunConfig, out: str | None = None) -> int:
    doc = _envelope(path, config)
    try:
        gpd, cocycle = load_groupoid_file(path)
    except json.JSONDecodeError as exc:
        doc["error"] = {"kind": "parse", "message": str(exc), "line": exc.lineno, "column": exc.colno}
        _emit(doc, out)
        return EXIT_INPUT
    except InputError as exc:
        doc["error"] = {"kind": "structure", "message": str(exc)}
        _emit(doc, out)
        return EXIT_INPUT
    report = validate_groupoid(gpd)
    doc["groupoid"] = report.to_dict()
    cocycle_violations = cocycle.violations() if report.ok else []
    doc["cocycle"] = {"ok": not cocycle_violations, "violations": cocycle_violations}
    ok = report.ok and not cocycle_violations
    doc["passed"] = ok
    _emit(doc, out)
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_reconstruct(path: str, config: RunConfig, out: str | None = None) -> int:
    doc = _envelope(path, config)
    try:
        ctx = _load_context(path, config)
        spec = _resolve_spec(ctx, config)
    except json.JSONDecodeError as exc:
        doc["error"] = {"kind": "parse", "message": str(exc), "line": exc.lineno, "column": exc.colno}
        _emit(doc, out)
        return EXIT_INPUT
    except InputError as exc:
        doc["error"] = {"kind": "input", "message": str(exc)}
        _emit(doc, out)
        return EXIT_INPUT
    try:
        report = reconstruct(ctx, spec, seed=config.seed, iso_budget=config.iso_budget,
                             tolerance=config.tolerance)
    except NotCartanError as exc:
        doc["error"] = {"kind": "not-cartan", "failures": list(exc.failures)}
        _emit(doc, out)
        return EXIT_FAIL
    doc["reconstruction"] = report.to_dict()
    _emit(doc, out)
    if report.isomorphism["status"] == "inconclusive":
        return EXIT_INCONCLUSIVE
    return EXIT_PASS if report.passed else EXIT_FAIL


def _load_report(path: str) -> dict:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if "reconstruction" not in doc:
        raise InputError(f"{path} is not a reconstruction report")
    rec = doc["reconstruction"]
    if "rebuilt_groupoid" not in rec or "recovered_cocycle" not in rec:
        raise InputError(f"{path} is missing the rebuilt groupoid")
    return rec


def cmd_compare(path_a: str, path_b: str, config: RunConfig, out: str | None = None) -> int:
    doc = {
        "tool": {"name": "twistalg", "version": VERSION},
        "config": config.to_dict(),
        "inputs": [
            {"name": Path(path_a).name, "sha256": content_hash(path_a)},
            {"name": Path(path_b).name, "sha256": content_hash(path_b)},
        ],
    }
    try:
        rec_a, rec_b = _load_report(path_a), _load_report(path_b)
        gpd_a = groupoid_from_dict(rec_a["rebuilt_groupoid"], "A")
        gpd_b = groupoid_from_dict(rec_b["rebuilt_groupoid"], "B")
    except (json.JSONDecodeError, InputError, KeyError) as exc:
        doc["error"] = {"kind": "input", "message": str(exc)}
        _emit(doc, out)
        return EXIT_INPUT

    def turns(rec):
        return {
            tuple(k.split("|")): Fraction(v["turns"][0], v["turns"][1]) % 1
            for k, v in rec["recovered_cocycle"].items()
        }

    ta, tb = turns(rec_a), turns(rec_b)

    budget = _Budget(config.iso_budget)
    matched = None
    found_groupoid_iso = False
    try:
        for mapping in iter_isomorphisms(gpd_a, gpd_b, budget):
            found_groupoid_iso = True
            ok = True
            for (g, h) in gpd_a.compose:
                lhs = ta.get((g, h), Fraction(0))
                rhs = tb.get((mapping[g], mapping[h]), Fraction(0))
                if lhs != rhs:
                    ok = False
                    break
            if ok:
                matched = mapping
                break
    except BudgetExhausted:
        doc["result"] = {"status": "inconclusive", "nodes_visited": budget.used}
        _emit(doc, out)
        return EXIT_INCONCLUSIVE
    if matched is not None:
        doc["result"] = {
            "status": "isomorphic",
            "mapping": dict(sorted(matched.items())),
            "nodes_visited": budget.used,
        }
        _emit(doc, out)
        return EXIT_PASS
    doc["result"] = {
        "status": "not_isomorphic",
        "groupoids_isomorphic": found_groupoid_iso,
        "nodes_visited": budget.used,
    }
    _emit(doc, out)
    return EXIT_FAIL


SUITE_NAMES = ("cartan", "relations", "states", "masa", "all")


def cmd_suite(path: str, config: RunConfig, suite: str, out: str | None = None) -> int:
    if suite not in SUITE_NAMES:
        sys.stderr.write(f"unknown suite {suite!r}; choose from {', '.join(SUITE_NAMES)}\n")
        return EXIT_INPUT
    doc = _envelope(path, config)
    try:
        ctx = _load_context(path, config)
        spec = _resolve_spec(ctx, config)
    except json.JSONDecodeError as exc:
        doc["error"] = {"kind": "parse", "message": str(exc), "line": exc.lineno, "column": exc.colno}
        _emit(doc, out)
        return EXIT_INPUT
    except InputError as exc:
        doc["error"] = {"kind": "input", "message": str(exc)}
        _emit(doc, out)
        return EXIT_INPUT
    runners = {
        "cartan": lambda: cartan_suite(ctx, config.seed, spec),
        "relations": lambda: relations_suite(ctx, config.seed),
        "states": lambda: states_suite(ctx, config.seed),
        "masa": lambda: masa_suite(ctx, config.seed),
    }
    selected = list(runners) if suite == "all" else [suite]
    results = {name: runners[name]() for name in selected}
    if suite == "all":
        results["expectation"] = expectation_suite(ctx, config.seed)
        results["norms"] = norms_suite(ctx, config.seed)
    doc["suites"] = results
    doc["passed"] = all(r["passed"] for r in results.values())
    _emit(doc, out)
    return EXIT_PASS if doc["passed"] else EXIT_FAIL


# -- entry point ---------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="numeric tolerance")
    common.add_argument("--seed", type=int, default=42, help="root seed for all sampling")
    common.add_argument("--iso-budget", type=int, default=10**6,
                        help="node budget for isomorphism search")
    common.add_argument("--out", default=None, help="write the report to this path")

    parser = argparse.ArgumentParser(
        prog="twistalg",
        description="Twisted groupoid algebras: validation, reconstruction, property suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", parents=[common],
                           help="check groupoid and cocycle axioms")
    p_val.add_argument("path")

    p_rec = sub.add_parser("reconstruct", parents=[common],
                           help="run the full reconstruction pipeline")
    p_rec.add_argument("path")
    p_rec.add_argument("--semigroup", default="monomial",
                       help="monomial or basis:<file>")

    p_cmp = sub.add_parser("compare", parents=[common],
                           help="compare two reconstruction reports")
    p_cmp.add_argument("report_a")
    p_cmp.add_argument("report_b")

    p_suite = sub.add_parser("suite", parents=[common], help="run property suites")
    p_suite.add_argument("path")
    p_suite.add_argument("--suite", default="all", help="|".join(SUITE_NAMES))
    p_suite.add_argument("--semigroup", default="monomial")
    return parser


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    config = RunConfig(
        tolerance=args.tol,
        seed=args.seed,
        iso_budget=args.iso_budget,
        semigroup=getattr(args, "semigroup", "monomial"),
    )
    if config.tolerance <= 0:
        sys.stderr.write("tolerance must be positive\n")
        return EXIT_INPUT
    try:
        if args.command == "validate":
            return cmd_validate(args.path, config, args.out)
        if args.command == "reconstruct":
            return cmd_reconstruct(args.path, config, args.out)
        if args.command == "compare":
            return cmd_compare(args.report_a, args.report_b, config, args.out)
        if args.command == "suite":
            return cmd_suite(args.path, config, args.suite, args.out)
    except FileNotFoundError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_INPUT
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
