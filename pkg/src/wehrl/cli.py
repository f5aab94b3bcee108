"""Command-line front end: ``wehrl <command> [flags]``.

Exit codes: 0 on success, 1 on a validation error, 2 when a numerical check
fails. Reports are JSON (CSV for ``sweep``) with 17 significant digits.
"""
from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import io
from .closed_forms import Spin2Edges, embeddable4, spin1_entropy, spin2_entropy, spin2_inverse_c, spin32_entropy
from .entropy import (
    coherent_entropy,
    entropy_lower_bound,
    ln_c_quadrature,
    s_norm_exact,
    s_norm_quadrature,
    wehrl_closed,
    wehrl_quadrature,
)
from .errors import WehrlError
from .majorana import analyze, rotate_state, su2_rotation, synthesize
from .quadrature import QuadratureGrid
from .search import SearchConfig, minimize_entropy, perturbation_sweep
from .spin import MAX_TWICE_J, random_state

EXIT_OK, EXIT_INVALID, EXIT_CHECK = 0, 1, 2

QUAD_TOL = 1e-6
BOUND_TOL = 1e-9
SNORM_TOL = 1e-12
SNORM_MATCH_TOL = 1e-10
SNORM_REAL_TOL = 1e-9
NORMALIZATION_TOL = 1e-10
ROTATION_TOL = 1e-9
LN_C_TOL = 1e-6
DOUBLING_TOL = 1e-8
SWEEP_C_TOL = 1e-10
INTEGER_POWERS = (2, 3, 4)
REAL_POWERS = (1.5, 2.5)
CHAIN_POWERS = (1.0, 1.5, 2.0, 2.5, 3.0, 4.0)
CHAIN_TOL = 1e-10


class UsageError(WehrlError):
    """Malformed command-line flags."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class CheckFailed(Exception):
    """A numerical check failed; carries the report to emit anyway."""

    def __init__(self, message: str, report: str):
        super().__init__(message)
        self.report = report


# -- flag parsing -----------------------------------------------------------

def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _edge_list(values: list[str]) -> list[float]:
    return [x for v in values for x in _floats(v)]


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands ---------------------------------------------------------------

def cmd_entropy(args) -> str:
    state = io.read_state(_read(args.state), args.state)
    if args.method == "closed":
        report = wehrl_closed(state).to_dict()
    else:
        grid = None
        if args.np or args.nphi:
            default = QuadratureGrid.default(state.twice_j)
            grid = QuadratureGrid(args.np or default.n_p, args.nphi or default.n_phi)
        report = wehrl_quadrature(state, grid, check=args.check).to_dict()
        delta = report["diagnostics"].get("doubling_delta")
        if delta is not None and delta > DOUBLING_TOL:
            raise CheckFailed(f"quadrature not converged: doubling delta {delta:.3g}", io.dumps(report))
    return io.dumps(report)


def cmd_snorm(args) -> str:
    state = io.read_state(_read(args.state), args.state)
    if args.exact:
        if not float(args.s).is_integer():
            raise UsageError("--exact requires an integer --s")
        value = s_norm_exact(state, int(args.s))
        method = "exact"
    else:
        value = s_norm_quadrature(state, args.s)
        method = "quadrature"
    return io.dumps({"twice_j": state.twice_j, "s": args.s, "method": method, "value": value})


def cmd_closed(args) -> str:
    edges = _edge_list(args.edges)
    expected = {"1": 1, "3/2": 3, "2": 6}[args.spin]
    if len(edges) != expected:
        raise UsageError(f"spin {args.spin} takes {expected} chord-squares, got {len(edges)}")
    if args.spin == "1":
        value, inverse_c = spin1_entropy(edges[0]), 1.0 - edges[0] / 2
    elif args.spin == "3/2":
        value, inverse_c = spin32_entropy(*edges), None
    else:
        e = Spin2Edges(*edges)
        value, inverse_c = spin2_entropy(e), spin2_inverse_c(e)
        # evaluated regardless, but flagged: off the sphere the formula can dip below 4/5
        embeddable = embeddable4(e).ok
    out = {"spin": args.spin, "edges": edges, "value": value}
    if args.spin == "2":
        out["embeddable"] = embeddable
    if inverse_c is not None:
        out["inverse_c"] = inverse_c
    return io.dumps(out)


def cmd_embed4(args) -> str:
    edges = _edge_list(args.edges)
    if len(edges) != 6:
        raise UsageError(f"embed4 takes 6 chord-squares, got {len(edges)}")
    result = embeddable4(Spin2Edges(*edges))
    out = {"embeddable": result.ok, "residual": result.residual}
    if result.ok:
        out["points"] = [[pt.theta, pt.phi] for pt in result.points]
    return io.dumps(out)


def cmd_analyze(args) -> str:
    state = io.read_state(_read(args.state), args.state)
    return io.dumps(io.decomposition_to_json(analyze(state)))


def cmd_synth(args) -> str:
    twice_j, points = io.read_points(_read(args.points), args.points)
    state, c = synthesize(twice_j, points)
    out = io.state_to_json(state)
    out["c"] = c
    return io.dumps(out)


def cmd_minimize(args) -> str:
    config = SearchConfig(args.twice_j, restarts=args.restarts, max_iters=args.max_iters, seed=args.seed)
    report = minimize_entropy(config)
    text = io.dumps(report.to_dict())
    if report.alarms:
        raise CheckFailed(f"{len(report.alarms)} restart(s) fell below the coherent value", text)
    return text


def cmd_sweep(args) -> str:
    rows = perturbation_sweep(args.twice_j, _floats(args.eps))
    text = io.sweep_csv(rows)
    worst = max(abs(r.c_measured - r.c_predicted) for r in rows)
    if worst > SWEEP_C_TOL:
        raise CheckFailed(f"measured 1/c deviates from prediction by {worst:.3g}", text)
    return text


def _check(rows: list, twice_j: int, name: str, worst: float, tol: float, count: int) -> None:
    rows.append({"twice_j": twice_j, "check": name, "samples": count, "worst": worst, "tolerance": tol, "passed": bool(worst <= tol)})


def run_verify(twice_j_list: list[int], samples: int, seed: int, ln_c_samples: int = 5) -> dict:
    """Check the entropy invariants on Haar-random states for each spin.

    ``worst`` in each row is the largest violation found (non-positive values
    mean the inequality held with room to spare).
    """
    if samples < 1:
        raise UsageError(f"samples must be >= 1, got {samples}")
    if ln_c_samples < 0:
        raise UsageError(f"ln-c-samples must be >= 0, got {ln_c_samples}")
    if not twice_j_list:
        raise UsageError("twice-j list is empty")
    for n in twice_j_list:
        if not 1 <= n <= MAX_TWICE_J:
            raise UsageError(f"twice_j must be in [1, {MAX_TWICE_J}], got {n}")

    rows: list[dict] = []
    for n in twice_j_list:
        rng = np.random.default_rng([seed, n])
        target, floor = coherent_entropy(n), entropy_lower_bound(n)
        powers = [s for s in INTEGER_POWERS if n * s <= MAX_TWICE_J]
        w = dict.fromkeys(["oracle", "coherent_minimum", "lower_bound", "normalization", "rotation", "ln_c", "s_norm_monotone"], -math.inf)
        w.update({f"s_norm_bound_{s}": -math.inf for s in powers})
        w.update({f"s_norm_match_{s}": -math.inf for s in powers})
        w.update({f"s_norm_bound_{s}": -math.inf for s in REAL_POWERS})
        for i in range(samples):
            state = random_state(n, rng)
            closed = wehrl_closed(state).value
            quad = wehrl_quadrature(state)
            w["oracle"] = max(w["oracle"], abs(closed - quad.value))
            w["coherent_minimum"] = max(w["coherent_minimum"], target - closed)
            w["lower_bound"] = max(w["lower_bound"], floor - closed)
            w["normalization"] = max(w["normalization"], abs(quad.diagnostics["normalization"] - 1.0))
            u = su2_rotation(rng.standard_normal(3), rng.uniform(0.0, 2 * math.pi))
            w["rotation"] = max(w["rotation"], abs(wehrl_closed(rotate_state(state, u)).value - closed))
            for s in powers:
                exact = s_norm_exact(state, s)
                w[f"s_norm_bound_{s}"] = max(w[f"s_norm_bound_{s}"], exact - 1.0)
                w[f"s_norm_match_{s}"] = max(w[f"s_norm_match_{s}"], abs(exact - s_norm_quadrature(state, s)))
            for s in REAL_POWERS:
                w[f"s_norm_bound_{s}"] = max(w[f"s_norm_bound_{s}"], s_norm_quadrature(state, s) - 1.0)
            chain = [s_norm_quadrature(state, s) for s in CHAIN_POWERS if n * s <= MAX_TWICE_J]
            w["s_norm_monotone"] = max(w["s_norm_monotone"], float(np.max(np.diff(chain), initial=-math.inf)))
            if i < ln_c_samples:
                w["ln_c"] = max(w["ln_c"], abs(ln_c_quadrature(state) - math.log(quad.c)))

        count = {"ln_c": min(samples, ln_c_samples)}
        tol = {
            "oracle": QUAD_TOL,
            "coherent_minimum": BOUND_TOL,
            "lower_bound": BOUND_TOL,
            "normalization": NORMALIZATION_TOL,
            "rotation": ROTATION_TOL,
            "ln_c": LN_C_TOL,
            "s_norm_monotone": CHAIN_TOL,
        }
        for name, worst in w.items():
            if name == "ln_c" and count["ln_c"] == 0:
                continue
            if name.startswith("s_norm_bound_"):
                t = SNORM_TOL if float(name.rsplit("_", 1)[1]).is_integer() else SNORM_REAL_TOL
            elif name.startswith("s_norm_match_"):
                t = SNORM_MATCH_TOL
            else:
                t = tol[name]
            _check(rows, n, name, worst, t, count.get(name, samples))

    return {
        "seed": seed,
        "samples": samples,
        "twice_j": list(twice_j_list),
        "passed": all(r["passed"] for r in rows),
        "checks": rows,
    }


def cmd_verify(args) -> str:
    summary = run_verify(_ints(args.twice_j), args.samples, args.seed, args.ln_c_samples)
    text = io.dumps(summary)
    if not summary["passed"]:
        failed = [f"{r['check']} (2j={r['twice_j']})" for r in summary["checks"] if not r["passed"]]
        raise CheckFailed("failed checks: " + ", ".join(failed), text)
    return text


# -- parser -----------------------------------------------------------------

def _spin_flag(text: str) -> str:
    try:
        value = Fraction(text)
    except ValueError:
        raise UsageError(f"--spin must be 1, 3/2 or 2, got {text!r}") from None
    labels = {Fraction(1): "1", Fraction(3, 2): "3/2", Fraction(2): "2"}
    if value not in labels:
        raise UsageError(f"--spin must be 1, 3/2 or 2, got {text!r}")
    return labels[value]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wehrl", description="Wehrl entropy of spin states via the points representation.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("entropy", help="Wehrl entropy of a state")
    p.add_argument("--state", required=True, help="state or point JSON")
    p.add_argument("--method", choices=["closed", "quad"], default="closed")
    p.add_argument("--np", type=int, default=None, help="Gauss-Legendre nodes in p")
    p.add_argument("--nphi", type=int, default=None, help="azimuthal nodes")
    p.add_argument("--check", action="store_true", help="repeat on the doubled grid (quad only)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("snorm", help="s-norm integral of a state")
    p.add_argument("--state", required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--exact", action="store_true", help="finite-sum evaluation (integer s)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_snorm)

    p = sub.add_parser("closed", help="entropy from chord-squares (spin 1, 3/2, 2)")
    p.add_argument("--spin", type=_spin_flag, required=True)
    p.add_argument("--edges", nargs="+", required=True,
                   help="spin 1: mu; spin 3/2: eps mu nu; spin 2: eps mu nu alpha beta gamma")
    p.add_argument("--out")
    p.set_defaults(func=cmd_closed)

    p = sub.add_parser("embed4", help="are six chord-squares realized by four points?")
    p.add_argument("--edges", nargs="+", required=True, help="eps mu nu alpha beta gamma")
    p.add_argument("--out")
    p.set_defaults(func=cmd_embed4)

    p = sub.add_parser("analyze", help="state -> points and c")
    p.add_argument("--state", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("synth", help="points -> state and c")
    p.add_argument("--points", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("minimize", help="multi-start entropy minimization")
    p.add_argument("--twice-j", type=int, required=True)
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("sweep", help="near-coherent perturbation table (CSV)")
    p.add_argument("--twice-j", type=int, required=True)
    p.add_argument("--eps", default="0.04,0.02,0.01,0.005")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="check entropy invariants on random states")
    p.add_argument("--twice-j", default="2,3,4", help="comma-separated list")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ln-c-samples", type=int, default=5, help="states per spin for the ln c check")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _emit(args.func(args), args.out)
    except CheckFailed as exc:
        _emit(exc.report, args.out)
        print(f"wehrl: check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK
    except ValueError as exc:
        # WehrlError subclasses ValueError, as do numpy/argument conversions
        print(f"wehrl: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
