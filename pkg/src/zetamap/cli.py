"""Batch command line.

Each invocation runs one analysis and writes a CSV table (default) or a JSON
document ``{"meta": ..., "data": [...]}``. Output bytes depend only on the
flags and the input files.

Exit codes: 0 ok, 1 usage/validation error, 2 bad input data, 3 numeric
failure. Failures print one diagnostic line on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import chaos, dynamics, reference, spectral, zeta
from .errors import InputDataError, NumericError, ValidationError

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3

COMMANDS = ("iterate", "lyapunov", "bifurcate", "entropy", "paircorr", "spacings", "density", "errtable", "spectrum")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    params: Dict[str, Any]
    output_path: Optional[str] = None
    format: str = "csv"
    config_path: Optional[str] = None

    def echo(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "params": self.params,
            "format": self.format,
            "out": self.output_path,
            "config": self.config_path,
        }


@dataclass
class Result:
    header: List[str]
    rows: List[Sequence[Any]]
    meta: Dict[str, Any] = field(default_factory=dict)
    status: int = EXIT_OK
    diagnostic: str = ""
    warnings: List[str] = field(default_factory=list)


# argument types ---------------------------------------------------------


def _finite(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return v


def _count(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return v


def _positive_count(text: str) -> int:
    v = _count(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH", help="write to PATH (atomically) instead of stdout")
    common.add_argument("--config", metavar="PATH", help="flat key=value file; flags override it")

    parser = _Parser(prog="zetamap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    p = sub.add_parser("iterate", parents=[common], help="orbit of the map")
    p.add_argument("--x0", type=_finite, required=True)
    p.add_argument("--steps", type=_count, required=True)
    p.add_argument("--eps", type=_finite, default=1.0)

    p = sub.add_parser("lyapunov", parents=[common], help="running Lyapunov exponent estimates")
    p.add_argument("--x0", type=_finite, required=True)
    p.add_argument("--steps", type=_positive_count, required=True)
    p.add_argument("--eps", type=_finite, default=1.0)
    p.add_argument("--compare-paper", choices=sorted(reference.LYAPUNOV_TABLES))

    p = sub.add_parser("bifurcate", parents=[common], help="orbit tails over a grid of eps")
    p.add_argument("--x0", type=_finite, required=True)
    p.add_argument("--eps-from", type=_finite, required=True)
    p.add_argument("--eps-to", type=_finite, required=True)
    p.add_argument("--eps-steps", type=_count, required=True)
    p.add_argument("--transient", type=_count, required=True)
    p.add_argument("--sample", type=_positive_count, required=True)

    p = sub.add_parser("entropy", parents=[common], help="Shannon entropy of a histogram")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--from-trajectory", action="store_true")
    mode.add_argument("--uniform-bins", type=_positive_count, metavar="B")
    p.add_argument("--x0", type=_finite)
    p.add_argument("--steps", type=_count)
    p.add_argument("--eps", type=_finite, default=1.0)
    p.add_argument("--bins", type=_positive_count)
    p.add_argument("--lo", type=_finite)
    p.add_argument("--hi", type=_finite)

    p = sub.add_parser("paircorr", parents=[common], help="empirical pair correlation of zeta zeros")
    p.add_argument("--zeros", required=True, metavar="PATH")
    p.add_argument("--max-u", type=_finite, required=True)
    p.add_argument("--bins", type=_positive_count, required=True)
    p.add_argument("--convention", choices=zeta.CONVENTIONS, default="paper")

    p = sub.add_parser("spacings", parents=[common], help="normalized spacings of zeta zeros")
    p.add_argument("--zeros", required=True, metavar="PATH")
    p.add_argument("--convention", choices=zeta.CONVENTIONS, default="paper")

    p = sub.add_parser("density", parents=[common], help="zero density ln(E)/(2 pi) on a grid")
    p.add_argument("--e-from", type=_finite, required=True)
    p.add_argument("--e-to", type=_finite, required=True)
    p.add_argument("--points", type=_positive_count, required=True)

    p = sub.add_parser("errtable", parents=[common], help="signed/absolute error table")
    p.add_argument("--a", metavar="PATH")
    p.add_argument("--b", metavar="PATH")
    p.add_argument("--case3", action="store_true", help="compare the x0 = 5e-13 orbit with its one-step shift")
    p.add_argument("--steps", type=_positive_count)

    p = sub.add_parser("spectrum", parents=[common], help="eigenvalues of the tridiagonal operator")
    p.add_argument("--n", type=_count, required=True)
    p.add_argument("--h", type=_finite)
    p.add_argument("--symmetrized", action="store_true")
    p.add_argument("--unfold", action="store_true", help="emit the unfolded spacing histogram instead")
    return parser


# config files -----------------------------------------------------------


def _read_config(path: str) -> List[Tuple[str, str]]:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            if "=" not in text:
                raise UsageError(f"{path}:{line_no}: expected key=value")
            key, value = (s.strip() for s in text.split("=", 1))
            pairs.append((key.replace("_", "-").lstrip("-"), value))
    return pairs


def _config_tokens(parser: argparse.ArgumentParser, command: str, pairs) -> List[str]:
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    sub = subparsers.choices[command]
    actions = {opt: a for a in sub._actions for opt in a.option_strings}
    tokens = []
    for key, value in pairs:
        opt = "--" + key
        if opt not in actions or key in ("config", "help"):
            raise UsageError(f"config key {key!r} is not an option of {command!r}")
        if actions[opt].nargs == 0:
            if value.lower() in ("1", "true", "yes", "on"):
                tokens.append(opt)
            elif value.lower() not in ("0", "false", "no", "off"):
                raise UsageError(f"config key {key!r} expects true/false, got {value!r}")
        else:
            tokens += [opt, value]
    return tokens


def parse_config(argv: Sequence[str]) -> RunConfig:
    """Turn argv into a validated RunConfig; flags override --config entries."""
    argv = list(argv)
    pre = _Parser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    parser = build_parser()
    if known.config is not None and rest and rest[0] in COMMANDS:
        try:
            pairs = _read_config(known.config)
        except OSError as exc:
            raise UsageError(f"cannot read config {known.config}: {exc.strerror}")
        rest = rest[:1] + _config_tokens(parser, rest[0], pairs) + rest[1:]
    args = parser.parse_args(rest)
    params = {
        k: v for k, v in sorted(vars(args).items()) if k not in ("command", "format", "out", "config")
    }
    return RunConfig(
        command=args.command,
        params=params,
        output_path=args.out,
        format=args.format,
        config_path=known.config,
    )


# commands ---------------------------------------------------------------


def _require(params, *names):
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise ValidationError("missing required option(s): " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _check_x0(x0):
    if abs(x0) < dynamics.MapParams().min_abs_x:
        raise ValidationError(f"|x0| must be at least {dynamics.MapParams().min_abs_x!r}")


def _trajectory_notes(res: Result, traj: dynamics.Trajectory):
    res.meta.update(
        terminated_early=traj.terminated_early,
        failed_at=traj.failed_at,
        negative_values=int(np.count_nonzero(traj.values < 0)),
    )
    if traj.has_negative:
        res.warnings.append("warning: orbit entered x < 0")
    if traj.terminated_early:
        res.status = EXIT_NUMERIC
        res.diagnostic = f"orbit stopped after {traj.steps} steps: {traj.reason}"


def _cmd_iterate(p) -> Result:
    _check_x0(p["x0"])
    traj = dynamics.iterate(p["x0"], p["steps"], dynamics.MapParams(eps=p["eps"]))
    res = Result(["n", "x"], [(k, v) for k, v in enumerate(traj.values)])
    _trajectory_notes(res, traj)
    return res


def _cmd_lyapunov(p) -> Result:
    _check_x0(p["x0"])
    series = chaos.lyapunov_exponents(p["x0"], p["steps"], dynamics.MapParams(eps=p["eps"]))
    case = p.get("compare_paper")
    if case is None:
        res = Result(["iteration", "lambda"], [(k + 1, lam) for k, lam in enumerate(series.lambdas)])
    else:
        table = {r.iteration: r for r in reference.lyapunov_reference(case)}
        rows = []
        for k, lam in enumerate(series.lambdas):
            ref = table.get(k + 1)
            if ref is None:
                rows.append((k + 1, lam, None, None, None))
            else:
                diff = lam - ref.value if ref.usable else None
                rows.append((k + 1, lam, ref.raw, ref.usable, diff))
        res = Result(["iteration", "lambda", "paper_lambda", "paper_usable", "difference"], rows)
        res.meta["paper_table"] = case
        res.meta["paper_x0"] = reference.LYAPUNOV_CASE_X0[case]
    res.meta["truncated"] = series.truncated
    if series.truncated:
        res.status = EXIT_NUMERIC
        res.diagnostic = f"orbit stopped early; {len(series.lambdas)} estimates computed"
    return res


def _cmd_bifurcate(p) -> Result:
    _check_x0(p["x0"])
    diagram = chaos.bifurcation_scan(
        p["x0"], p["eps_from"], p["eps_to"], p["eps_steps"], p["transient"], p["sample"]
    )
    rows = []
    for eps, tail, cut in zip(diagram.param_values, diagram.samples, diagram.truncated):
        for i, x in enumerate(tail):
            rows.append((float(eps), p["transient"] + 1 + i, x, cut))
    res = Result(["eps", "n", "x", "truncated"], rows)
    res.meta["truncated_eps"] = [float(e) for e, c in zip(diagram.param_values, diagram.truncated) if c]
    if res.meta["truncated_eps"]:
        res.warnings.append(f"warning: {len(res.meta['truncated_eps'])} eps value(s) gave truncated orbits")
    return res


def _cmd_entropy(p) -> Result:
    res = Result(["bins", "total", "dropped", "entropy_bits"], [])
    if p.get("uniform_bins") is not None:
        b = p["uniform_bins"]
        centers = (np.arange(b) + 0.5) / b
        hist = chaos.build_histogram(centers, b, 0.0, 1.0)
        res.meta["mode"] = "uniform-bins"
    else:
        _require(p, "x0", "steps", "bins", "lo", "hi")
        _check_x0(p["x0"])
        traj = dynamics.iterate(p["x0"], p["steps"], dynamics.MapParams(eps=p["eps"]))
        hist = chaos.build_histogram(traj.values, p["bins"], p["lo"], p["hi"])
        res.meta["mode"] = "from-trajectory"
        _trajectory_notes(res, traj)
    res.rows.append((hist.bins, hist.total, hist.dropped, chaos.shannon_entropy(hist)))
    return res


def _load_zero_file(path) -> zeta.ZeroTable:
    with open(path, "rb") as fh:
        return zeta.load_zeros(fh, name=os.path.basename(path))


def _cmd_paircorr(p) -> Result:
    if not p["max_u"] > 0:
        raise ValidationError("--max-u must be positive")
    table = _load_zero_file(p["zeros"])
    pc = zeta.pair_correlation_empirical(table, p["max_u"], p["bins"], p["convention"])
    max_dev, msd = zeta.compare_model(pc)
    res = Result(
        ["bin_center", "empirical", "model"],
        list(zip(pc.bin_centers, pc.empirical, pc.model)),
    )
    res.meta.update(n_zeros=pc.n_zeros, bin_width=pc.bin_width, max_abs_dev=max_dev, mean_sq_dev=msd)
    return res


def _cmd_spacings(p) -> Result:
    table = _load_zero_file(p["zeros"])
    ens = zeta.normalized_spacings(table, p["convention"])
    res = Result(["n", "u"], [(k, u) for k, u in enumerate(ens.spacings, start=1)])
    res.meta.update(n_zeros=len(table), mean_spacing=ens.mean)
    return res


def _cmd_density(p) -> Result:
    lo, hi, n = p["e_from"], p["e_to"], p["points"]
    if not lo > 1:
        raise ValidationError("--e-from must exceed 1")
    if hi < lo or (n > 1 and hi == lo):
        raise ValidationError("--e-to must exceed --e-from")
    grid = np.linspace(lo, hi, n) if n > 1 else np.array([lo])
    return Result(["E", "rho"], [(e, zeta.zero_density(float(e))) for e in grid])


def _cmd_errtable(p) -> Result:
    res = Result(["n", "a", "b", "signed_error", "abs_error"], [])
    if p["case3"]:
        if p.get("a") or p.get("b"):
            raise ValidationError("--case3 cannot be combined with --a/--b")
        _require(p, "steps")
        traj = dynamics.iterate(5e-13, p["steps"])
        values = list(traj.values)
        a, b = values[:-1], values[1:]
        _trajectory_notes(res, traj)
        if not a:
            return res
    else:
        _require(p, "a", "b")
        with open(p["a"], "rb") as fa, open(p["b"], "rb") as fb:
            a, b = zeta.read_values(fa), zeta.read_values(fb)
    table = zeta.error_table(a, b)
    res.rows = list(table.rows)
    res.meta["max_abs_error"] = table.max_abs_error
    return res


def _cmd_spectrum(p) -> Result:
    op = spectral.build_operator(p["n"], p.get("h"), p["symmetrized"])
    spectrum = spectral.eigenvalues(op)
    meta = {"n": op.n, "h": op.h, "symmetrized": op.symmetrized}
    if not p["unfold"]:
        return Result(["index", "eigenvalue"], [(k, e) for k, e in enumerate(spectrum.eigenvalues, start=1)], meta)
    stats = spectral.unfold_spectrum(spectrum)
    hist = stats.spacing_hist
    density = spectral.spacing_density(hist)
    rows = [(c, d, spectral.wigner_surmise_gue(float(c))) for c, d in zip(hist.centers, density)]
    meta.update(mean_spacing=stats.mean_spacing, n_spacings=hist.total, dropped=hist.dropped)
    return Result(["bin_center", "density", "gue_model"], rows, meta)


HANDLERS = {
    "iterate": _cmd_iterate,
    "lyapunov": _cmd_lyapunov,
    "bifurcate": _cmd_bifurcate,
    "entropy": _cmd_entropy,
    "paircorr": _cmd_paircorr,
    "spacings": _cmd_spacings,
    "density": _cmd_density,
    "errtable": _cmd_errtable,
    "spectrum": _cmd_spectrum,
}


# serialization ----------------------------------------------------------


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _json_value(v):
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    return v


def render(config: RunConfig, res: Result) -> str:
    if config.format == "json":
        doc = {
            "meta": {**config.echo(), **{k: _json_value(v) for k, v in res.meta.items()}},
            "data": [{h: _json_value(v) for h, v in zip(res.header, row)} for row in res.rows],
        }
        return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(res.header)
    for row in res.rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".zetamap-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(config: RunConfig, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        res = HANDLERS[config.command](config.params)
    except ValidationError as exc:
        print(f"zetamap {config.command}: {exc}", file=stderr)
        return EXIT_USAGE
    except (InputDataError, OSError) as exc:
        print(f"zetamap {config.command}: input error: {exc}", file=stderr)
        return EXIT_INPUT
    except NumericError as exc:
        print(f"zetamap {config.command}: numeric failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    text = render(config, res)
    try:
        if config.output_path:
            _write_atomic(config.output_path, text)
        else:
            stdout.write(text)
    except OSError as exc:
        print(f"zetamap {config.command}: cannot write output: {exc}", file=stderr)
        return EXIT_USAGE
    for w in res.warnings:
        print(f"zetamap {config.command}: {w}", file=stderr)
    if res.status != EXIT_OK:
        print(f"zetamap {config.command}: numeric failure: {res.diagnostic}", file=stderr)
    return res.status


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        config = parse_config(argv)
    except UsageError as exc:
        print(f"zetamap: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
