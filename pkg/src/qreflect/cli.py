"""Command-line driver.

    verify --suite ybe --dims 2,3 --backend exact --q symbolic --seed 7

Flags mirror the flat key=value config-file keys one to one; command-line
values override file values.  Exit codes: 0 all checks pass, 1 at least one
check failed, 2 configuration error.
"""

from __future__ import annotations

import argparse
import sys

from .suite import (
    SUITES,
    ConfigError,
    SuiteConfig,
    emit_report,
    run_suite,
    summarize,
)


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="verify",
        description="Verify boundary quantum-integrability identities "
                    "(Yang-Baxter, reflection, intertwining, coideal, "
                    "appendix conjugations) exactly or numerically.")
    ap.add_argument("--config", help="flat key=value config file; flags override")
    ap.add_argument("--suite", choices=SUITES)
    ap.add_argument("--dims", help="comma-separated representation dimensions, e.g. 2,3,4")
    ap.add_argument("--backend", choices=("exact", "numeric"))
    ap.add_argument("--q", help="'symbolic', an exact rational 'p/r' (perfect "
                                "square), or a complex like 1.4+0.3i")
    ap.add_argument("--x-exp", type=int, dest="x_exp",
                    help="pin the spectral exponent m of x = q^m")
    ap.add_argument("--y-exp", type=int, dest="y_exp")
    ap.add_argument("--s0", type=int)
    ap.add_argument("--s1", type=int)
    ap.add_argument("--eps-plus", dest="eps_plus")
    ap.add_argument("--eps-minus", dest="eps_minus")
    ap.add_argument("--k-plus", dest="k_plus")
    ap.add_argument("--k-minus", dest="k_minus")
    ap.add_argument("--p-tilde", dest="p_tilde")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--tol", type=float)
    ap.add_argument("--draws", type=int)
    ap.add_argument("--report", choices=("json", "text"), default="text")
    ap.add_argument("--out", help="write the report here instead of stdout")
    return ap


_INT_KEYS = {"x_exp", "y_exp", "s0", "s1", "seed", "draws"}
_FLOAT_KEYS = {"tol"}


def parse_config_file(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            value = value.strip()
            if key == "dims":
                out[key] = _parse_dims(value, f"{path}:{lineno}")
            elif key in _INT_KEYS:
                try:
                    out[key] = int(value)
                except ValueError:
                    raise ConfigError(f"{path}:{lineno}: {key} must be an integer")
            elif key in _FLOAT_KEYS:
                try:
                    out[key] = float(value)
                except ValueError:
                    raise ConfigError(f"{path}:{lineno}: {key} must be a number")
            else:
                out[key] = value
    return out


def _parse_dims(text: str, where: str = "--dims") -> tuple:
    parts = [p for p in str(text).replace(" ", "").split(",") if p]
    if not parts:
        raise ConfigError(f"{where}: empty dims list")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise ConfigError(f"{where}: dims must be integers")


def config_from_args(args) -> SuiteConfig:
    values = {}
    if args.config:
        values.update(parse_config_file(args.config))
    for key in ("suite", "backend", "q", "x_exp", "y_exp", "s0", "s1",
                "eps_plus", "eps_minus", "k_plus", "k_minus", "p_tilde",
                "seed", "tol", "draws"):
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    if args.dims is not None:
        values["dims"] = _parse_dims(args.dims)
    known = set(SuiteConfig.__dataclass_fields__)
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    config = SuiteConfig(**values)
    config.validate()
    return config


def main(argv=None) -> int:
    ap = build_arg_parser()
    args = ap.parse_args(argv)
    try:
        config = config_from_args(args)
        reports = run_suite(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    text = emit_report(reports, args.report, config)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    summary = summarize(reports, config.tol)
    return 0 if summary["failed"] == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
