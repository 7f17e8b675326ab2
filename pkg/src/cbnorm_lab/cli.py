"""Reproducible experiment runner: JSON configs in, JSON result records out.

Exit codes: 0 success, 1 input/schema errors, 2 property failures (a check
report that did not pass, or an internal sandwich violation).  Records rerun
bit-for-bit from the same config; only runtime_ms is exempt.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time

import jsonschema

from . import __version__, cbnorm, descriptors, gcb, mconvex
from .errors import CbnormLabError, SandwichViolationError

SCHEMA_VERSION = 1

COMMANDS = (
    "estimate",
    "sandwich",
    "schwarz",
    "algebra",
    "probe",
    "hull",
    "separate",
    "gcb",
    "delta-isometry",
)

_OBJECT = {"type": "object"}
_PROPERTIES = {
    "schema_version": {"type": "integer", "const": SCHEMA_VERSION},
    "command": {"type": "string"},
    "seed": {"type": "integer", "minimum": 0},
    "budget": {"type": "integer", "minimum": 1},
    "max_level": {"type": "integer", "minimum": 1},
    "trials": {"type": "integer", "minimum": 1},
    "schedule": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
    "function": _OBJECT,
    "function2": _OBJECT,
    "set": _OBJECT,
    "x0": _OBJECT,
    "element": _OBJECT,
    "dictionary": _OBJECT,
    "space": _OBJECT,
    "point": _OBJECT,
    "out": {"type": "string"},
}

_REQUIRED = {
    "estimate": ["function", "max_level", "budget", "seed"],
    "sandwich": ["function", "max_level", "budget", "seed"],
    "schwarz": ["function", "trials", "seed"],
    "algebra": ["function", "function2", "max_level", "budget", "seed"],
    "probe": ["function", "max_level", "budget", "seed"],
    "hull": ["set", "trials", "seed"],
    "separate": ["set", "x0", "budget", "seed"],
    "gcb": ["element", "dictionary", "budget", "seed"],
    "delta-isometry": ["space", "point", "budget", "seed"],
}


def config_schema(command: str) -> dict:
    return {
        "type": "object",
        "properties": _PROPERTIES,
        "required": _REQUIRED[command],
        "additionalProperties": False,
    }


def validate_config(command: str, config: dict) -> None:
    validator = jsonschema.Draft202012Validator(config_schema(command))
    errors = sorted(validator.iter_errors(config), key=lambda e: list(e.absolute_path))
    if errors:
        best = jsonschema.exceptions.best_match(errors)
        raise CbnormLabError(f"config invalid at {best.json_path}: {best.message}")
    declared = config.get("command")
    if declared is not None and declared != command:
        raise CbnormLabError(f"config declares command {declared!r} but {command!r} was invoked")


def _serialize_witness(w: cbnorm.Witness) -> dict:
    if hasattr(w.matrix, "entries"):
        matrix = descriptors.space_matrix_to_descriptor(w.matrix)
    else:
        matrix = descriptors._array_out(w.matrix)
    return {"level": w.level, "value": w.value, "matrix": matrix}


def _serialize_estimate(est: cbnorm.CbEstimate) -> tuple[dict, dict]:
    results = {
        "lower": est.lower,
        "upper": est.upper,
        "gap": None if est.upper is None else est.upper - est.lower,
        "provenance": est.provenance,
        "level_table": {
            str(m): {"value": e.value, "samples": e.samples} for m, e in est.level_table.items()
        },
    }
    witnesses = {str(m): _serialize_witness(e.witness) for m, e in est.level_table.items()}
    return results, witnesses


def _run_estimate(config):
    f = descriptors.function_from_descriptor(config["function"])
    est = cbnorm.cb_lower_bound(f, config["max_level"], config["budget"], config["seed"])
    results, witnesses = _serialize_estimate(est)
    return results, witnesses, True


def _run_sandwich(config):
    f = descriptors.function_from_descriptor(config["function"])
    est = cbnorm.sandwich(f, config["max_level"], config["budget"], config["seed"])
    results, witnesses = _serialize_estimate(est)
    return results, witnesses, True


def _run_schwarz(config):
    f = descriptors.function_from_descriptor(config["function"])
    est = cbnorm.sandwich(
        f, config.get("max_level", 2), config.get("budget", 2000), config["seed"]
    )
    report = cbnorm.schwarz_check(f, est, config["trials"], config["seed"])
    results = {
        "upper": est.upper,
        "passed": report.passed,
        "trials": report.trials,
        "worst_slack": report.worst_slack,
        "detail": report.detail,
    }
    return results, None, report.passed


def _run_algebra(config):
    f = descriptors.function_from_descriptor(config["function"])
    g = descriptors.function_from_descriptor(config["function2"])
    report = cbnorm.algebra_check(f, g, config["max_level"], config["budget"], config["seed"])
    results = {
        "passed": report.passed,
        "worst_slack": report.worst_slack,
        "detail": report.detail,
    }
    return results, None, report.passed


def _run_probe(config):
    f = descriptors.function_from_descriptor(config["function"])
    report = cbnorm.question_probe(
        f,
        config["max_level"],
        config["budget"],
        config["seed"],
        schedule=config.get("schedule"),
    )
    results = {
        "levels": list(report.levels),
        "values": list(report.values),
        "slope": report.slope,
        "relative_growth": report.relative_growth,
        "verdict": report.verdict,
        "note": report.note,
    }
    return results, None, True


def _run_hull(config):
    k = descriptors.matrix_set_from_descriptor(config["set"])
    report = mconvex.hull_norm_check(k, config["trials"], config["seed"])
    results = {
        "passed": report.passed,
        "trials": report.trials,
        "set_norm": report.set_norm,
        "worst_excess": report.worst_excess,
        "identity_attained": report.identity_attained,
        "detail": report.detail,
    }
    return results, None, report.passed


def _run_separate(config):
    k = descriptors.matrix_set_from_descriptor(config["set"])
    x0 = descriptors.space_matrix_from_descriptor(config["x0"], k.space)
    cert = mconvex.find_certificate(k, x0, config["budget"], config["seed"])
    if cert is None:
        results = {"found": False, "certificate": None, "verdict": None}
    else:
        verdict = mconvex.check_certificate(cert, k, x0)
        results = {
            "found": True,
            "certificate": descriptors.certificate_to_descriptor(cert),
            "verdict": {
                "valid": verdict.valid,
                "generator_values": list(verdict.generator_values),
                "target_value": verdict.target_value,
            },
        }
    return results, None, True


def _run_gcb(config):
    u = descriptors.gcb_element_from_descriptor(config["element"])
    dictionary = descriptors.dictionary_from_descriptor(config["dictionary"], u.space)
    upper = gcb.gcb_upper_bound(u, config["budget"], config["seed"])
    lower = gcb.gcb_lower_bound(u, dictionary)
    passed = lower <= upper + 1e-6
    results = {"upper": upper, "lower": lower, "gap": upper - lower, "passed": passed}
    return results, None, passed


def _run_delta_isometry(config):
    space = descriptors.space_from_descriptor(config["space"])
    x = descriptors.space_matrix_from_descriptor(config["point"], space)
    report = gcb.delta_isometry_check(x, config["budget"], config["seed"])
    results = {
        "passed": report.passed,
        "point_norm": report.point_norm,
        "upper": report.upper,
        "lower": report.lower,
        "upper_gap": report.upper_gap,
        "lower_gap": report.lower_gap,
    }
    return results, None, report.passed


_RUNNERS = {
    "estimate": _run_estimate,
    "sandwich": _run_sandwich,
    "schwarz": _run_schwarz,
    "algebra": _run_algebra,
    "probe": _run_probe,
    "hull": _run_hull,
    "separate": _run_separate,
    "gcb": _run_gcb,
    "delta-isometry": _run_delta_isometry,
}


def run(command: str, config: dict) -> tuple[dict, bool]:
    """Validate, dispatch, and wrap the outcome in a result record.

    Returns (record, passed); property-check commands report passed=False
    instead of raising.
    """
    validate_config(command, config)
    echo = {k: v for k, v in config.items() if k != "out"}
    started = time.perf_counter()
    results, witnesses, passed = _RUNNERS[command](config)
    record = {
        "schema_version": SCHEMA_VERSION,
        "artifact_version": __version__,
        "command": command,
        "config": echo,
        "results": results,
    }
    if witnesses is not None:
        record["witnesses"] = witnesses
    record["runtime_ms"] = int((time.perf_counter() - started) * 1000)
    return record, passed


def record_to_json(record: dict) -> str:
    return json.dumps(record, sort_keys=True, indent=2) + "\n"


def report_rows(paths) -> list[list[str]]:
    """One CSV row per readable record: id, lower, upper, gap, level summary."""
    rows = []
    for path in paths:
        try:
            with open(path) as fh:
                record = json.load(fh)
            results = record["results"]
        except (OSError, ValueError, KeyError) as exc:
            print(f"warning: skipping {path}: {exc}", file=sys.stderr)
            continue
        config = record.get("config", {})
        ident = (
            descriptors.function_id(config["function"])
            if "function" in config
            else record.get("command", "?")
        )
        lower = results.get("lower")
        upper = results.get("upper")
        gap = results.get("gap")
        table = results.get("level_table", {})
        summary = ";".join(f"{m}:{table[m]['value']:.6g}" for m in sorted(table, key=int))
        fmt = lambda v: "" if v is None else repr(v)
        rows.append([ident, fmt(lower), fmt(upper), fmt(gap), summary])
    return rows


def _write_report(paths, out: str | None) -> None:
    rows = report_rows(paths)
    target = open(out, "w", newline="") if out else sys.stdout
    try:
        writer = csv.writer(target)
        writer.writerow(["id", "lower", "upper", "gap", "levels"])
        writer.writerows(rows)
    finally:
        if out:
            target.close()


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="cbnorm-lab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to a JSON experiment config")
        p.add_argument("--out", default=None, help="where to write the result record")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
    rep = sub.add_parser("report")
    rep.add_argument("records", nargs="*", help="result record paths")
    rep.add_argument("--out", default=None, help="write the CSV here instead of stdout")

    args = parser.parse_args(argv)
    if args.command == "report":
        _write_report(args.records, args.out)
        return 0

    try:
        with open(args.config) as fh:
            config = json.load(fh)
        if not isinstance(config, dict):
            raise CbnormLabError("config must be a JSON object")
        if args.seed is not None:
            config["seed"] = args.seed
        record, passed = run(args.command, config)
    except SandwichViolationError as exc:
        print(f"property failure: {exc}", file=sys.stderr)
        return 2
    except (CbnormLabError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    text = record_to_json(record)
    out = args.out or config.get("out")
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if passed else 2


if __name__ == "__main__":
    sys.exit(main())
