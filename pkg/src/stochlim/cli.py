"""Command line driver.

Computes correlators of entangled creation/annihilation words, their
weak-coupling limit, the free master-field value, oracle recomputations,
diagram statistics and the oscillation-limit quadrature sweep.  Reports
are deterministic: the same job always produces byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from . import quadrature as quadmod
from .correlator import (
    FOCK,
    GAUSSIAN,
    StateSpec,
    finite_lambda_correlator,
    limit_correlator,
    temperature,
)
from .diagrams import (
    count_fock_surviving,
    count_non_crossing,
    enumerate_pairings,
    is_non_crossing,
)
from .masterfield import check_free_equivalence, free_correlator
from .oracle import (
    Assignment,
    doubled_normal_order,
    numeric_eval,
    qdef_normal_order,
    random_assignment,
)
from .scalars import ScalarSum
from .symbols import TimeLabel, WaveLabel
from .words import (
    Letter,
    OperatorWord,
    PatternError,
    balanced_patterns,
    parse_pattern,
    word_from_pattern,
)

__all__ = ["main", "entry", "JobSpec"]

SCHEMA_VERSION = 1
MAX_PATTERN = 12
MODES = (
    "finite",
    "limit",
    "free",
    "oracle-fock",
    "oracle-double",
    "check-free",
    "diagrams",
    "quadrature",
)


@dataclass
class JobSpec:
    mode: str
    word: Optional[OperatorWord]
    state: StateSpec
    max_n: int = 6
    numeric: Optional[Assignment] = None
    seed: Optional[int] = None
    as_json: bool = False
    csv_path: Optional[str] = None


class JobError(ValueError):
    pass


def _state_from_args(name: str, beta: Optional[float]) -> StateSpec:
    if name == "fock":
        return FOCK
    if name == "gaussian":
        return GAUSSIAN
    if beta is None:
        raise JobError("temperature state needs --beta")
    return temperature(beta)


def _word_from_job(pattern_entries) -> OperatorWord:
    letters = []
    for i, entry in enumerate(pattern_entries, start=1):
        if isinstance(entry, str):
            eps = -1 if entry == "a" else 1 if entry == "a+" else None
            if eps is None:
                raise PatternError(f"expected 'a' or 'a+', got {entry!r}", i)
            letters.append(Letter(eps, TimeLabel(f"t{i}"), WaveLabel(f"k{i}")))
        else:
            letters.append(
                Letter(
                    int(entry["eps"]),
                    TimeLabel(entry["time"]),
                    WaveLabel(entry["wave"]),
                )
            )
    return OperatorWord.build(letters)


def _load_numeric(path: str) -> Assignment:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    dots = {}
    for key, value in data.get("dot", {}).items():
        a, b = (part.strip() for part in key.split(","))
        dots[(a, b)] = float(value)
    return Assignment(
        lam=float(data["lambda"]),
        times={k: float(v) for k, v in data.get("times", {}).items()},
        omega={k: float(v) for k, v in data.get("omega", {}).items()},
        dot=dots,
        dot_p={k: float(v) for k, v in data.get("dotP", {}).items()},
        occupation={k: float(v) for k, v in data.get("occupation", {}).items()},
    )


def build_job(args: argparse.Namespace) -> JobSpec:
    if args.job:
        with open(args.job, encoding="utf-8") as fh:
            data = json.load(fh)
        mode = data.get("mode", args.mode)
        state = _state_from_args(data.get("state", args.state), data.get("beta", args.beta))
        word = _word_from_job(data["pattern"]) if "pattern" in data else None
        max_n = int(data.get("maxN", args.max_n))
    else:
        mode = args.mode
        state = _state_from_args(args.state, args.beta)
        word = None
        if args.pattern is not None:
            word = word_from_pattern(parse_pattern(args.pattern))
        max_n = args.max_n
    if word is not None and len(word) > MAX_PATTERN:
        raise JobError(f"pattern longer than the maximum of {MAX_PATTERN}")
    if mode not in MODES:
        raise JobError(f"unknown mode {mode!r}")
    if mode == "oracle-fock" and state.kind != "fock":
        raise JobError("oracle-fock requires --state fock")
    if mode == "oracle-double" and state.kind == "fock":
        raise JobError("oracle-double requires a gaussian or temperature state")
    if mode in ("finite", "limit", "free", "oracle-fock", "oracle-double", "diagrams"):
        if word is None:
            raise JobError(f"mode {mode} needs --pattern")
    numeric = _load_numeric(args.numeric) if args.numeric else None
    return JobSpec(
        mode=mode,
        word=word,
        state=state,
        max_n=max_n,
        numeric=numeric,
        seed=args.seed,
        as_json=args.json,
        csv_path=args.csv,
    )


def _sum_result(job: JobSpec, value: ScalarSum, lines: list[str], payload: dict) -> int:
    lines.append("result:")
    lines.append(value.render())
    payload["result"] = {"sum": value.to_json(), "rendered": value.render()}
    assign = job.numeric
    if assign is None and job.seed is not None:
        pool = [value]
        dual = None
        if job.mode in ("finite", "oracle-fock") and job.state.kind == "fock":
            dual = (
                qdef_normal_order(job.word)
                if job.mode == "finite"
                else finite_lambda_correlator(job.word, job.state)
            )
            pool.append(dual)
        assign = random_assignment(pool, random.Random(job.seed), job.state)
        if dual is not None:
            v1 = numeric_eval(value, assign)
            v2 = numeric_eval(dual, assign)
            lines.append(f"numeric (seed={job.seed}): {v1.real:.12e}{v1.imag:+.12e}j")
            lines.append(f"numeric (dual path):     {v2.real:.12e}{v2.imag:+.12e}j")
            lines.append(f"|difference| = {abs(v1 - v2):.3e}")
            payload["numeric"] = {
                "seed": job.seed,
                "value": [v1.real, v1.imag],
                "dual": [v2.real, v2.imag],
                "difference": abs(v1 - v2),
            }
            return 0
    if assign is not None:
        v = numeric_eval(value, assign)
        lines.append(f"numeric: {v.real:.12e}{v.imag:+.12e}j")
        payload["numeric"] = {"value": [v.real, v.imag]}
    return 0


def run(job: JobSpec) -> tuple[list[str], dict, int]:
    lines = [f"mode: {job.mode}"]
    payload: dict = {"schemaVersion": SCHEMA_VERSION, "mode": job.mode}
    if job.word is not None:
        tokens = " ".join("a" if e == -1 else "a+" for e in job.word.pattern)
        lines.append(f"pattern: {tokens}")
        payload["pattern"] = tokens
    lines.append(f"state: {job.state.kind}")
    payload["state"] = job.state.kind
    code = 0

    if job.mode == "finite":
        code = _sum_result(
            job, finite_lambda_correlator(job.word, job.state), lines, payload
        )
    elif job.mode == "limit":
        _sum_result(job, limit_correlator(job.word, job.state), lines, payload)
    elif job.mode == "free":
        _sum_result(job, free_correlator(job.word, job.state), lines, payload)
    elif job.mode == "oracle-fock":
        code = _sum_result(job, qdef_normal_order(job.word), lines, payload)
    elif job.mode == "oracle-double":
        _sum_result(job, doubled_normal_order(job.word, job.state), lines, payload)
    elif job.mode == "diagrams":
        pattern = job.word.pattern
        diagrams = enumerate_pairings(pattern)
        lines.append(f"pairings: {len(diagrams)}")
        lines.append(f"non-crossing: {count_non_crossing(pattern)}")
        lines.append(f"fock-surviving: {count_fock_surviving(pattern)}")
        detail = []
        for d in diagrams:
            tag = "non-crossing" if is_non_crossing(d) else "crossing"
            lines.append(f"{d} {tag}")
            detail.append({"edges": str(d), "nonCrossing": is_non_crossing(d)})
        payload["result"] = {
            "pairings": len(diagrams),
            "nonCrossing": count_non_crossing(pattern),
            "fockSurviving": count_fock_surviving(pattern),
            "diagrams": detail,
        }
    elif job.mode == "check-free":
        lines.append(f"max-n: {job.max_n}")
        payload["maxN"] = job.max_n
        mismatches = 0
        checked = 0
        detail = []
        for n in range(2, job.max_n + 1, 2):
            for pattern in balanced_patterns(n):
                word = word_from_pattern(pattern)
                report = check_free_equivalence(word, job.state)
                checked += 1
                tokens = " ".join("a" if e == -1 else "a+" for e in pattern)
                status = "ok" if report.equal else "MISMATCH"
                lines.append(f"{status} {tokens}")
                detail.append({"pattern": tokens, "equal": report.equal})
                if not report.equal:
                    mismatches += 1
                    for t in report.only_diagram:
                        lines.append(f"  only diagram path: {t}")
                    for t in report.only_free:
                        lines.append(f"  only free path:    {t}")
        lines.append(f"checked: {checked}  mismatches: {mismatches}")
        payload["result"] = {
            "checked": checked,
            "mismatches": mismatches,
            "patterns": detail,
        }
        code = 0 if mismatches == 0 else 1
    elif job.mode == "quadrature":
        results = quadmod.quadrature_sweep()
        rows = quadmod.sweep_csv_rows(results)
        lines.extend(rows)
        errors = [r.abs_error for r in results]
        converging = all(b < a for a, b in zip(errors, errors[1:]))
        lines.append(f"converging: {'yes' if converging else 'no'}")
        payload["result"] = {
            "rows": [
                {
                    "lambda": r.lam,
                    "real": r.value.real,
                    "imag": r.value.imag,
                    "absError": r.abs_error,
                }
                for r in results
            ],
            "converging": converging,
        }
        if job.csv_path:
            with open(job.csv_path, "w", encoding="utf-8") as fh:
                fh.write("\n".join(rows) + "\n")
            lines.append(f"csv written: {job.csv_path}")
        code = 0 if converging else 1
    return lines, payload, code


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="stochlim",
        description="correlators of entangled operators and their weak-coupling limit",
    )
    p.add_argument("--pattern", help="whitespace tokens: 'a' annihilation, 'a+' creation")
    p.add_argument(
        "--state", choices=["fock", "gaussian", "temperature"], default="fock"
    )
    p.add_argument("--beta", type=float, help="inverse temperature")
    p.add_argument("--mode", choices=list(MODES), default="finite")
    p.add_argument("--max-n", type=int, default=6, help="sweep bound for check-free")
    p.add_argument("--numeric", metavar="FILE", help="JSON numeric assignment")
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    p.add_argument("--csv", metavar="PATH", help="CSV output for quadrature sweeps")
    p.add_argument("--seed", type=int, help="seed for a random numeric assignment")
    p.add_argument("--job", metavar="FILE", help="JSON job description")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        job = build_job(args)
        lines, payload, code = run(job)
    except (JobError, PatternError, ValueError) as err:
        parser.exit(2, f"error: {err}\n")
    if job.as_json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))
    return code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
