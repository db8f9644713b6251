"""Command-line surface: mixing checks, simulation, hypothesis tests, demos.

Exit codes are the machine contract:
  0  success / verdict Mixing / test passed
  1  invalid input, unreadable or unwritable files
  2  verdict NotMixing / test rejected
  3  verdict Inconclusive

stdout carries a short human-readable summary; structured reports go to the
JSON file given by --out (validating against the schemas shipped under
invfields/schemas).  The env var LOG_LEVEL in {error, warn, info, debug}
controls diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import math
import os
import sys

import numpy as np

from . import fields, mixing, stats
from .bases import (
    SelfConjBasis,
    left_translated_basis,
    make_module,
    random_selfconj_basis,
    torus_adapted_selfconj_basis,
)
from .groups import RngStream, SO4Element, SU2Element, haar_sample, su2_from_euler

# fixed default so every artifact is reproducible without flags
DEFAULT_SEED = 20260813

log = logging.getLogger("invfields")


@dataclasses.dataclass(frozen=True)
class RunConfig:
    command: str
    space: str | None
    ell: int | None
    basis: str | None
    seed: int
    samples: int | None
    tol: float | None
    out: str | None
    format: str


def _setup_logging() -> None:
    level = os.environ.get("LOG_LEVEL", "warn").lower()
    table = {
        "error": logging.ERROR,
        "warn": logging.WARNING,
        "info": logging.INFO,
        "debug": logging.DEBUG,
    }
    logging.basicConfig(stream=sys.stderr, level=table.get(level, logging.WARNING))


def _parse_euler(text: str) -> SU2Element:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError("--g expects three comma-separated Euler angles")
    alpha, beta, gamma = (float(p) for p in parts)
    return su2_from_euler(alpha, beta, gamma)


def _build_basis(space: str, ell: int, kind: str, seed: int, g_text: str | None) -> SelfConjBasis:
    module = make_module(space, ell)
    ref = torus_adapted_selfconj_basis(module)
    if kind == "torus":
        return ref
    if kind == "random":
        return random_selfconj_basis(ref, RngStream(seed, 101))
    if kind == "translated":
        if g_text is not None and space != "s3":
            g0 = _parse_euler(g_text)
        else:
            g0 = module.haar(RngStream(seed, 102))
        return left_translated_basis(ref, g0)
    raise ValueError(f"unknown basis kind {kind!r}; expected torus, random or translated")


def _element_json(g):
    if isinstance(g, SU2Element):
        return {
            "type": "su2",
            "a": [g.a.real, g.a.imag],
            "b": [g.b.real, g.b.imag],
        }
    if isinstance(g, SO4Element):
        return {
            "type": "so4",
            "g1": _element_json(g.g1),
            "g2": _element_json(g.g2),
        }
    return None


def _write_json(path: str | None, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    log.info("report written to %s", path or "<stdout only>")


def _config_dict(config: RunConfig) -> dict:
    return dataclasses.asdict(config)


def _test_payload(config: RunConfig, kind: str, report: stats.TestReport, extra=None) -> dict:
    payload = {
        "report_type": "test",
        "config": _config_dict(config),
        "test": kind,
        "statistic": report.statistic,
        "p_value": report.p_value,
        "n": report.n,
        "alpha_decisions": {str(a): bool(v) for a, v in report.reject_at.items()},
        "seed": config.seed,
    }
    if extra:
        payload.update(extra)
    return payload


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_check_mixing(args) -> int:
    config = RunConfig(
        command="check-mixing", space=args.space, ell=args.ell, basis=args.basis,
        seed=args.seed, samples=args.samples, tol=args.tol, out=args.out, format="json",
    )
    basis = _build_basis(args.space, args.ell, args.basis, args.seed, args.g)
    report = mixing.check_mixing(
        basis, n_samples=args.samples, tol=args.tol,
        rng=RngStream(args.seed, 1), threads=args.threads,
    )
    payload = {
        "report_type": "mixing",
        "config": _config_dict(config),
        "dim": report.dim,
        "verdict": report.verdict,
        "margin": report.margin,
        "pair": list(report.pair) if report.pair else None,
        "samples_used": report.samples_used,
        "tol": report.tol,
        "detail": report.detail,
        "witness": _element_json(report.witness_g),
    }
    verdict = report.verdict

    if args.orbit:
        orb = mixing.orbit_orthogonality(
            basis, n_samples=args.samples, rng=RngStream(args.seed, 2)
        )
        payload["orbit"] = {
            "verdict": orb.verdict,
            "interacting": sorted(orb.interacting),
            "isolated": sorted(orb.isolated),
            "orthogonal_pairs": sorted(map(list, orb.orthogonal_pairs)),
            "ranks": {str(k): v for k, v in orb.ranks.items()},
            "stabilized": orb.stabilized,
            "agrees": orb.verdict == report.verdict,
        }
        log.info("orbit cross-check verdict: %s", orb.verdict)

    if args.exact:
        if args.space != "s3":
            print("--exact requires --space s3", file=sys.stderr)
            return 1
        if args.rows:
            m1, m2 = (float(x) for x in args.rows.split(","))
        else:
            m1, m2 = 1.0, (1.0 if args.ell == 2 else 2.0)
        cert = mixing.s3_exact_mixing(args.ell, m1, m2)
        payload["exact"] = {
            "verdict": cert.verdict,
            "rows": [str(r) for r in cert.rows],
            "comparisons": [
                {
                    "row": str(c.row), "r": str(c.r),
                    "columns": [c.col_plus, c.col_minus],
                    "h": [c.h_plus, c.h_minus],
                    "leading_exponents": [c.lead_plus, c.lead_minus],
                    "polys_differ": c.polys_differ,
                }
                for c in cert.comparisons
            ],
        }
        verdict = cert.verdict
        payload["verdict"] = verdict

    _write_json(args.out, payload)
    print(f"verdict: {verdict} (margin {report.margin:.3e}, pair {report.pair})")
    return {"Mixing": 0, "NotMixing": 2, "Inconclusive": 3}[verdict]


def cmd_simulate(args) -> int:
    if not args.out:
        raise ValueError("simulate requires --out CSV_PATH")
    rng = RngStream(args.seed, 3)
    if args.dist == "bijoux":
        if args.alpha is None:
            raise ValueError("--dist bijoux requires --alpha")
        alpha = _parse_alpha(args.alpha)
        if len(alpha) != args.ell + 1:
            raise ValueError("--alpha length must equal ell + 1")
        mats = fields.bijoux_sample_batch(args.ell, alpha, rng, args.n, threads=args.threads)
        d = args.ell + 1
        # flat labels k = i*d + j for the (i, j) matrix entry
        values = mats.reshape(args.n, d * d)
        labels = list(range(d * d))
    else:
        basis = _build_basis(args.space, args.ell, args.basis, args.seed, None)
        param = {"gaussian": args.c, "uniform-disc": args.r, "two-point": args.rho}[args.dist]
        marginal = fields.make_marginal(args.dist, param)
        values = fields.sample_independent_batch(basis, marginal, rng, args.n, threads=args.threads)
        labels = basis.labels
    fields.write_samples_csv(args.out, values, labels)
    print(f"wrote {values.shape[0] * values.shape[1]} rows to {args.out}")
    return 0


def _read_csv_or_fail(path: str):
    return fields.read_samples_csv(path)


def cmd_test(args) -> int:
    config = RunConfig(
        command="test", space=args.space, ell=args.ell, basis=args.basis,
        seed=args.seed, samples=None, tol=None, out=args.out, format="json",
    )
    labels, values = _read_csv_or_fail(getattr(args, "in"))
    alpha = args.alpha

    if args.kind == "invariance":
        basis = _build_basis(args.space, args.ell, args.basis, args.seed, None)
        if labels != basis.labels:
            raise ValueError(
                f"CSV labels {labels} do not match the {args.space} ell={args.ell} basis"
            )
        if args.g:
            g_list = [_parse_euler(t) for t in args.g]
        else:
            g_list = basis.module.haar_list(RngStream(args.seed, 4), args.n_g)
        half = values.shape[0] // 2
        report = stats.invariance_from_draws(basis, values[:half], values[half:], g_list)
        payload = _test_payload(config, "invariance", report)
        _write_json(args.out, payload)
        rejected = report.p_value < alpha
    elif args.kind == "structure":
        d = math.isqrt(len(labels))
        if d * d != len(labels):
            raise ValueError("structure test expects d*d flattened matrix coefficients")
        mats = values.reshape(values.shape[0], d, d)
        rep = stats.check_column_structure(mats)
        pseudo = stats.TestReport(
            statistic=max(rep.max_cross_ratio, rep.max_within_ratio),
            p_value=1.0 if rep.passed else 0.0,
            reject_at={a: not rep.passed for a in stats.ALPHAS},
            n=rep.n,
        )
        payload = _test_payload(
            config, "structure", pseudo,
            extra={
                "max_cross_column": rep.max_cross_column,
                "max_cross_ratio": rep.max_cross_ratio,
                "max_within_deviation": rep.max_within_deviation,
                "max_within_ratio": rep.max_within_ratio,
                "threshold": rep.threshold,
                "pooled_re": rep.pooled.C_hat.real.tolist(),
                "pooled_im": rep.pooled.C_hat.imag.tolist(),
                "pooled_std_err": rep.pooled.std_err.tolist(),
            },
        )
        _write_json(args.out, payload)
        rejected = not rep.passed
    elif args.kind == "gaussianity":
        reports = []
        for j, k in enumerate(labels):
            for part, arr in (("re", values[:, j].real), ("im", values[:, j].imag)):
                if np.abs(arr).max() < 1e-12:
                    continue
                reports.append((k, part, stats.gaussianity_test(arr)))
        if not reports:
            raise ValueError("all coordinates are numerically zero; nothing to test")
        n_tests = len(reports)
        k_best, part_best, best = min(reports, key=lambda t: t[2].p_value)
        adj = min(1.0, best.p_value * n_tests)
        combined = stats.TestReport(
            statistic=best.statistic, p_value=adj,
            reject_at={a: adj < a for a in stats.ALPHAS}, n=best.n,
        )
        payload = _test_payload(
            config, "gaussianity", combined,
            extra={"worst_coordinate": {"k": k_best, "part": part_best}, "tests_run": n_tests},
        )
        _write_json(args.out, payload)
        rejected = adj < alpha
    elif args.kind == "phase":
        k = args.label if args.label is not None else max(labels)
        if k not in labels:
            raise ValueError(f"label {k} not present in the CSV")
        col = values[:, labels.index(k)]
        report = stats.phase_invariance_test(col, args.phi)
        payload = _test_payload(
            config, "phase", report, extra={"phi": args.phi, "label": k}
        )
        _write_json(args.out, payload)
        rejected = report.p_value < alpha
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown test kind {args.kind!r}")

    print(f"{args.kind} test: p_adj={payload['p_value']:.4g} -> {'reject' if rejected else 'pass'}")
    return 2 if rejected else 0


def _parse_alpha(text: str) -> np.ndarray:
    try:
        return np.array([complex(p.strip()) for p in text.split(",")], dtype=complex)
    except ValueError:
        raise ValueError("--alpha expects comma-separated complex numbers, e.g. '0.7,0.7j'") from None


def cmd_demo_nonorthogonal(args) -> int:
    alpha = _parse_alpha(args.alpha)
    if alpha.size < 2:
        print("need at least 2 alpha entries", file=sys.stderr)
        return 1
    config = RunConfig(
        command="demo-nonorthogonal", space="su2", ell=alpha.size - 1, basis=None,
        seed=args.seed, samples=args.n, tol=None, out=args.out, format="json",
    )
    mats = fields.bijoux_sample_batch(alpha.size - 1, alpha, RngStream(args.seed, 5), args.n)
    d = alpha.size
    cols = mats.transpose(0, 2, 1).reshape(-1, d)
    est = stats.estimate_cov(cols)
    insufficient = args.n < 100
    table = []
    for i in range(d):
        for k in range(d):
            se = float(est.std_err[i, k])
            value = est.C_hat[i, k]
            significant = (not insufficient) and i != k and se > 0 and abs(value) > 4 * se
            table.append(
                {
                    "i": i, "k": k,
                    "re": float(value.real), "im": float(value.imag),
                    "std_err": se, "significant_off_diagonal": bool(significant),
                }
            )
    payload = {
        "report_type": "demo-nonorthogonal",
        "config": _config_dict(config),
        "alpha": [[a.real, a.imag] for a in alpha],
        "n": args.n,
        "insufficient_n": insufficient,
        "C": {
            "re": est.C_hat.real.tolist(),
            "im": est.C_hat.imag.tolist(),
            "std_err": est.std_err.tolist(),
        },
        "table": table,
    }
    _write_json(args.out, payload)
    flagged = sum(1 for row in table if row["significant_off_diagonal"])
    print(
        f"estimated coefficient covariance for alpha of length {d}: "
        f"{flagged} significant off-diagonal entries"
        + (" (insufficient n: no significance claims)" if insufficient else "")
    )
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invfields",
        description="invariant random fields on S2, S3 and SU(2): mixing checks, simulation, tests",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--space", choices=["s2", "s3", "su2"], default="s2")
        p.add_argument("--ell", type=int, default=4, help="SU(2) degree of the module")
        p.add_argument("--basis", choices=["torus", "random", "translated"], default="torus")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--out", default=None, help="output file path")
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("check-mixing", help="search for a mixing witness")
    add_common(p)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--orbit", action="store_true", help="add the orbit-span cross-check")
    p.add_argument("--exact", action="store_true", help="exact polynomial certificate (s3 only)")
    p.add_argument("--rows", default=None, help="row labels m1,m2 for --exact")
    p.add_argument("--g", default=None, help="Euler angles 'a,b,c' for the translated basis")
    p.set_defaults(func=cmd_check_mixing)

    p = sub.add_parser("simulate", help="draw coefficient samples to CSV")
    add_common(p)
    p.add_argument("--dist", choices=["gaussian", "uniform-disc", "two-point", "bijoux"],
                   default="gaussian")
    p.add_argument("--c", type=float, default=1.0, help="gaussian variance")
    p.add_argument("--r", type=float, default=1.0, help="uniform-disc radius")
    p.add_argument("--rho", type=float, default=1.0, help="two-point modulus")
    p.add_argument("--alpha", default=None, help="complex entries for --dist bijoux")
    p.add_argument("--n", type=int, default=1000)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("test", help="hypothesis tests on CSV samples")
    add_common(p)
    p.add_argument("--kind", choices=["invariance", "structure", "gaussianity", "phase"],
                   required=True)
    p.add_argument("--in", dest="in", required=True, help="input CSV path")
    p.add_argument("--alpha", type=float, default=0.01, help="rejection level")
    p.add_argument("--g", action="append", default=None,
                   help="Euler angles 'a,b,c' (repeatable) for invariance")
    p.add_argument("--n-g", type=int, default=5, help="number of Haar rotations when --g absent")
    p.add_argument("--phi", type=float, default=1.0, help="phase for the phase test")
    p.add_argument("--label", type=int, default=None, help="coefficient label for the phase test")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("demo-nonorthogonal",
                       help="estimate the correlated coefficient covariance of the rank-one field")
    p.add_argument("--alpha", required=True, help="comma-separated complex entries")
    p.add_argument("--n", type=int, default=100000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_demo_nonorthogonal)

    return parser


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
