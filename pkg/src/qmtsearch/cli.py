"""Command-line entry point: ``qmtsearch <subcommand> [flags]``.

Subcommands: fig1, fig2, sweep, count, validate-signal, extract.
A ``--config`` file of ``key = value`` lines supplies defaults for the
same flags; flags given on the command line win.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

import numpy as np

from . import harness
from .harness import ExperimentConfig
from .search import METHODS

EXIT_OK, EXIT_CONFIG, EXIT_CHECK = 0, 1, 2

FIG1_MIN_COVERAGE = 0.93
COUNT_MAX_TV = 0.01

_KEYS = ("n", "solutions", "num_solutions", "snr", "fidelity", "trials", "seed", "alpha", "methods", "out", "workers")


class ConfigError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def parse_grid(text: str) -> tuple[float, ...]:
    """``log:START:STOP:COUNT``, ``lin:START:STOP:COUNT`` or a comma list (``inf`` allowed)."""
    text = text.strip()
    if text.startswith(("log:", "lin:")):
        kind, a, b, k = text.split(":")
        a, b, k = float(a), float(b), int(k)
        if kind == "log":
            return tuple(float(x) for x in np.logspace(math.log10(a), math.log10(b), k))
        return tuple(float(x) for x in np.linspace(a, b, k))
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def read_config_file(path: str) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.lstrip("-").replace("-", "_")
            if key not in _KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = value
    return out


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="file of 'key = value' lines mirroring these flags")
    p.add_argument("--n", type=int)
    sol = p.add_mutually_exclusive_group()
    sol.add_argument("--solutions", help="comma list of planted solutions")
    sol.add_argument("--num-solutions", dest="num_solutions", type=int, help="M solutions placed at random")
    grid = p.add_mutually_exclusive_group()
    grid.add_argument("--snr", help="SNR grid: log:A:B:K, lin:A:B:K or comma list")
    grid.add_argument("--fidelity", help="oracle fidelity grid, converted to SNR")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--methods", help=f"comma list from {','.join(METHODS)}")
    p.add_argument("--out", help="CSV output path (stdout if omitted)")
    p.add_argument("--workers", type=int)


def build_config(args: argparse.Namespace, base: ExperimentConfig) -> ExperimentConfig:
    from_file = read_config_file(args.config) if getattr(args, "config", None) else {}
    from_cli = {k: getattr(args, k) for k in _KEYS if getattr(args, k, None) is not None}
    # a flag also overrides the file's value for its mutually exclusive partner
    for x, y in (("solutions", "num_solutions"), ("snr", "fidelity")):
        if x in from_cli:
            from_file.pop(y, None)
        if y in from_cli:
            from_file.pop(x, None)
    merged = {**from_file, **from_cli}
    if "solutions" in merged and "num_solutions" in merged:
        raise ConfigError("give either solutions or num_solutions, not both")
    if "snr" in merged and "fidelity" in merged:
        raise ConfigError("give either snr or fidelity, not both")

    kw = {}
    try:
        if "n" in merged:
            kw["n"] = int(merged["n"])
        if "solutions" in merged:
            kw["solutions"] = tuple(int(t) for t in str(merged["solutions"]).split(",") if t.strip())
        elif "num_solutions" in merged:
            kw["num_solutions"] = int(merged["num_solutions"])
            kw["solutions"] = None
        if "fidelity" in merged:
            kw["fidelity_grid"] = parse_grid(str(merged["fidelity"]))
        elif "snr" in merged:
            kw["snr_grid"] = parse_grid(str(merged["snr"]))
        if "trials" in merged:
            kw["trials"] = int(merged["trials"])
        if "seed" in merged:
            kw["base_seed"] = int(merged["seed"])
        if "alpha" in merged:
            kw["alpha"] = float(merged["alpha"])
        if "methods" in merged:
            kw["methods"] = tuple(m.strip() for m in str(merged["methods"]).split(",") if m.strip())
        if "out" in merged:
            kw["out_path"] = str(merged["out"])
        if "workers" in merged:
            kw["workers"] = int(merged["workers"])
        config = replace(base, **kw)
        harness.snr_values(config)
        harness.resolve_spec(config)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return config


def _emit(result, config: ExperimentConfig):
    if config.out_path:
        result.to_csv(config.out_path)
    else:
        sys.stdout.write(result.to_csv())


def _info(msg: str):
    print(msg, file=sys.stderr)


def cmd_sweep(args, base: ExperimentConfig) -> int:
    config = build_config(args, base)
    result = harness.run_sweep(config)
    _emit(result, config)
    cov = result.coverage()
    _info(f"theory inside {1 - config.alpha:.0%} CI at {cov:.1%} of {len(result.rows)} points")
    if getattr(args, "check", False) and cov < FIG1_MIN_COVERAGE:
        _info(f"FAIL coverage {cov:.3f} < {FIG1_MIN_COVERAGE}")
        return EXIT_CHECK
    return EXIT_OK


def cmd_fig2(args, base: ExperimentConfig) -> int:
    config = build_config(args, base)
    snrs = harness.snr_values(config) if (args.snr or args.fidelity) else None
    result = harness.run_fig2(args.max_n, snrs)
    _emit(result, config)
    worst = result.max_ratio()
    _info(f"max p_G / P_S = {worst:.15g} over {len(result.rows)} rows")
    if args.check and worst > 1 + 1e-12:
        return EXIT_CHECK
    return EXIT_OK


def cmd_count(args, base: ExperimentConfig) -> int:
    config = build_config(args, base)
    result = harness.run_count_experiment(config)
    _emit(result, config)
    sys.stderr.write(result.summary_csv())
    if args.check and any(s.tv_distance > COUNT_MAX_TV for s in result.summaries):
        return EXIT_CHECK
    return EXIT_OK


def cmd_validate(args, base: ExperimentConfig) -> int:
    config = build_config(args, base)
    if config.n > 4:
        raise ConfigError("validate-signal supports n <= 4")
    report = harness.run_validate_signal(config)
    text = "\n".join(report.lines()) + "\n"
    if config.out_path:
        with open(config.out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_CHECK


def cmd_extract(args, base: ExperimentConfig) -> int:
    config = build_config(args, base)
    result = harness.run_extract(config, max_iters=args.max_iters)
    _emit(result, config)
    spec = harness.resolve_spec(config)
    _info(f"S = {list(spec.solutions)}; recovered exactly in {result.exact_rate():.1%} of {config.trials} runs")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qmtsearch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fig1", help="Monte Carlo success rates vs SNR for N=16, M=3")
    _common(p)
    p.add_argument("--check", action="store_true", help=f"exit {EXIT_CHECK} if CI coverage < {FIG1_MIN_COVERAGE}")
    p.set_defaults(func=cmd_sweep, base=ExperimentConfig())

    p = sub.add_parser("sweep", help="Monte Carlo sweep for any instance")
    _common(p)
    p.add_argument("--check", action="store_true")
    p.set_defaults(func=cmd_sweep, base=ExperimentConfig())

    p = sub.add_parser("fig2", help="analytic p_G / P_S table for n <= max-n")
    _common(p)
    p.add_argument("--max-n", dest="max_n", type=int, default=4)
    p.add_argument("--check", action="store_true")
    p.set_defaults(func=cmd_fig2, base=ExperimentConfig())

    p = sub.add_parser("count", help="distribution of the rounded solution-count estimate")
    _common(p)
    p.add_argument("--check", action="store_true", help=f"exit {EXIT_CHECK} if any TV distance > {COUNT_MAX_TV}")
    p.set_defaults(func=cmd_count, base=ExperimentConfig(snr_grid=(25.0, 100.0), trials=100_000))

    p = sub.add_parser("validate-signal", help="cross-check amplitude and signal engines")
    _common(p)
    # the corpus plants its own solution sets; num_solutions=0 keeps any --n valid
    p.set_defaults(func=cmd_validate, base=ExperimentConfig(num_solutions=0))

    p = sub.add_parser("extract", help="iteratively extract all solutions from one oracle call")
    _common(p)
    p.add_argument("--max-iters", dest="max_iters", type=int, default=64)
    p.set_defaults(func=cmd_extract, base=ExperimentConfig(snr_grid=(1e4,), trials=1000))
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, args.base)
    except ConfigError as exc:
        _info(f"qmtsearch: invalid configuration: {exc}")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
