"""Batch command-line front end: one JSON problem in, one JSON report out.

Exit codes: 0 success, 1 a residual exceeded the tolerance, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from contextlib import nullcontext
from typing import Any

import numpy as np

from .cnp import CnpSample, kernel_matrix, restrict_smirnov
from .commutative import MultiIndexSeries, da_norm_sq, free_lift
from .series import FreeSeries, as_matrix_tuple, evaluate, fock_norm_sq, in_free_ball
from .smirnov import SmirnovPair, a_inverse, canonical_pair, verify_pair

MODES = ("factor", "lift", "eval", "verify", "cnp-check")
PSD_TOL = 1e-10

EXIT_OK, EXIT_RESIDUAL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _round(x: Any) -> Any:
    """Limit floats to 12 significant digits, recursively; complex -> [re, im]."""
    if isinstance(x, bool) or x is None or isinstance(x, (str, int)):
        return x
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return x
        return float(f"{x:.12g}") + 0.0
    if isinstance(x, (complex, np.complexfloating)):
        return [_round(x.real), _round(x.imag)]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.ndarray):
        return _round(x.tolist())
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    return x


def _as_list(obj) -> list:
    if obj is None:
        return []
    return obj if isinstance(obj, list) else [obj]


def _parse_complex(z) -> complex:
    if isinstance(z, (list, tuple)):
        if len(z) != 2:
            raise InputError(f"complex numbers are [re, im] pairs, got {z!r}")
        return complex(float(z[0]), float(z[1]))
    if isinstance(z, dict):
        return complex(float(z.get("re", 0.0)), float(z.get("im", 0.0)))
    return complex(float(z))


def _parse_matrix(m) -> np.ndarray:
    if not isinstance(m, list):
        return np.array([[_parse_complex(m)]])
    return np.array([[_parse_complex(z) for z in row] for row in m], dtype=complex)


def _free_inputs(problem: dict) -> list[FreeSeries]:
    """Free series from "series", plus norm-preserving lifts of "commutative"."""
    out = [FreeSeries.from_json(s) for s in _as_list(problem.get("series"))]
    out += [free_lift(MultiIndexSeries.from_json(s)) for s in _as_list(problem.get("commutative"))]
    return out


def _ambient(problem: dict, series: list) -> int | None:
    if "d" in problem:
        return int(problem["d"])
    return series[0].d if series else None


def cmd_factor(problem: dict, N: int, tol: float, seed: int) -> tuple[dict, int]:
    H_list = _free_inputs(problem)
    d = _ambient(problem, H_list) or 1
    pair = canonical_pair(H_list, N, d=d)
    report = verify_pair(H_list, pair, N, tol=tol, seed=seed)
    out = {
        "mode": "factor",
        "N": N,
        "a_empty": pair.a_empty,
        "pair": pair.to_json(),
        "a_inverse": a_inverse(pair).to_json(),
        "report": report.to_json(),
    }
    return out, EXIT_OK if report.passed(tol) else EXIT_RESIDUAL


def cmd_verify(problem: dict, N: int, tol: float, seed: int) -> tuple[dict, int]:
    """Verify a supplied pair {"A": ..., "B": [...]}, or the canonical one if absent."""
    H_list = _free_inputs(problem)
    d = _ambient(problem, H_list) or 1
    if "pair" in problem:
        A = FreeSeries.from_json(problem["pair"]["A"])
        B = tuple(FreeSeries.from_json(b) for b in _as_list(problem["pair"].get("B")))
        if len(B) != len(H_list):
            raise InputError("pair must have one B per input series")
        pair = SmirnovPair(A=A, B_list=B, N=N, representer_norm_sq=A.constant.real ** 2)
    else:
        pair = canonical_pair(H_list, N, d=d)
    report = verify_pair(H_list, pair, N, tol=tol, seed=seed)
    return {"mode": "verify", "N": N, "report": report.to_json()}, (
        EXIT_OK if report.passed(tol) else EXIT_RESIDUAL
    )


def cmd_lift(problem: dict, N: int, tol: float, seed: int) -> tuple[dict, int]:
    hs = [MultiIndexSeries.from_json(s) for s in _as_list(problem.get("commutative"))]
    if not hs:
        raise InputError("lift needs at least one entry under 'commutative'")
    lifts = []
    for h in hs:
        F = free_lift(h)
        lifts.append({"lift": F.to_json(), "da_norm_sq": da_norm_sq(h), "fock_norm_sq": fock_norm_sq(F)})
    return {"mode": "lift", "lifts": lifts}, EXIT_OK


def cmd_eval(problem: dict, N: int, tol: float, seed: int) -> tuple[dict, int]:
    series = [FreeSeries.from_json(s) for s in _as_list(problem.get("series"))]
    if not series:
        raise InputError("eval needs at least one entry under 'series'")
    if "tuple" in problem:
        X = as_matrix_tuple([_parse_matrix(m) for m in problem["tuple"]])
    elif "point" in problem:
        X = as_matrix_tuple([[[_parse_complex(z)]] for z in problem["point"]])
    else:
        raise InputError("eval needs 'point' or 'tuple'")
    inside, margin = in_free_ball(X)
    values = [evaluate(F, X) for F in series]
    out = {
        "mode": "eval",
        "in_free_ball": inside,
        "ball_margin": margin,
        "values": [v[0, 0] if v.shape == (1, 1) else v for v in values],
    }
    return out, EXIT_OK


def cmd_cnp_check(problem: dict, N: int, tol: float, seed: int) -> tuple[dict, int]:
    if "sample" not in problem:
        raise InputError("cnp-check needs a 'sample'")
    sample = CnpSample.from_json(problem["sample"])
    K = kernel_matrix(sample)
    min_eig = float(np.linalg.eigvalsh(K)[0]) if len(sample) else 0.0
    code = EXIT_OK if min_eig >= -PSD_TOL else EXIT_RESIDUAL
    out: dict[str, Any] = {"mode": "cnp-check", "kernel": K, "kernel_min_eigenvalue": min_eig}
    h_list: list = [MultiIndexSeries.from_json(s) for s in _as_list(problem.get("commutative"))]
    h_list += [FreeSeries.from_json(s) for s in _as_list(problem.get("series"))]
    if h_list:
        rep = restrict_smirnov(h_list, sample, N, seed=seed)
        out["restriction"] = rep.to_json()
        if rep.residual > tol or not rep.outer:
            code = EXIT_RESIDUAL
    return out, code


COMMANDS = {
    "factor": cmd_factor,
    "lift": cmd_lift,
    "eval": cmd_eval,
    "verify": cmd_verify,
    "cnp-check": cmd_cnp_check,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fock-smirnov", description=__doc__.splitlines()[0])
    p.add_argument("--input", required=True, help="problem JSON file ('-' for stdin)")
    p.add_argument("--mode", choices=MODES, help="overrides the problem's 'mode'")
    p.add_argument("--degree", type=int, help="truncation degree N (default 30)")
    p.add_argument("--tol", type=float, help="residual tolerance (default 1e-8)")
    p.add_argument("--seed", type=int, help="sampling seed (default 0)")
    p.add_argument("--output", default="stdout", help="report path or 'stdout'")
    return p


def _thread_limit():
    raw = os.environ.get("FOCK_SMIRNOV_THREADS")
    if not raw:
        return nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=max(1, int(raw)))


def run(args: argparse.Namespace) -> tuple[str, int]:
    try:
        if args.input == "-":
            problem = json.load(sys.stdin)
        else:
            with open(args.input) as fh:
                problem = json.load(fh)
        if not isinstance(problem, dict):
            raise InputError("problem file must hold a JSON object")
        mode = args.mode or problem.get("mode")
        if mode not in MODES:
            raise InputError(f"unknown or missing mode {mode!r}")
        N = args.degree if args.degree is not None else int(problem.get("degree", 30))
        tol = args.tol if args.tol is not None else float(problem.get("tol", 1e-8))
        seed = args.seed if args.seed is not None else int(problem.get("seed", 0))
        if N < 1:
            raise InputError("degree must be >= 1")
        if not tol > 0:
            raise InputError("tolerance must be positive")
        with _thread_limit():
            report, code = COMMANDS[mode](problem, N, tol, seed)
    except (OSError, json.JSONDecodeError, InputError, KeyError, ValueError, TypeError) as exc:
        report, code = {"error": f"{type(exc).__name__}: {exc}"}, EXIT_INPUT
    report["exit_code"] = code
    return json.dumps(_round(report), indent=2), code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    text, code = run(args)
    if args.output == "stdout":
        print(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
