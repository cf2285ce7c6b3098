"""Suite runner: parameter drawing, check dispatch, report emission.

A SuiteConfig pins the backend, the verification suite, the representation
dimensions and (optionally) explicit parameter values; everything left free
is drawn from a seeded RNG, so a config (seed included) determines the
report content exactly.
"""

from __future__ import annotations

import cmath
import json
import math
import time
from dataclasses import dataclass

from .checks import (
    CheckReport,
    check_appendix,
    check_aux_lemmas,
    check_coideal_algebras,
    check_coideal_coproduct,
    check_intertwining,
    check_onsager_candidate,
    check_reflection,
    check_symmetries,
    check_ybe,
)
from .representations import make_irrep, make_params
from .scalars import PoleError, ScalarContext, Spectral, rational

SUITES = ("all", "ybe", "reflection", "intertwining", "coideal", "appendix",
          "symmetries", "onsager")
SPECTRAL_EXPONENTS = (0, 1, -1, 2, -2, 3)
GRADATIONS = (-1, 0, 1, 2)
K_VARIANTS = ("diagonal", "upper", "lower", "upper_alt", "lower_alt")


class ConfigError(ValueError):
    """Invalid suite configuration (CLI exit code 2)."""


@dataclass
class SuiteConfig:
    suite: str = "all"
    dims: tuple = (2, 3)
    backend: str = "exact"
    q: str = "symbolic"
    x_exp: int | None = None
    y_exp: int | None = None
    s0: int | None = None
    s1: int | None = None
    eps_plus: str | None = None
    eps_minus: str | None = None
    k_plus: str | None = None
    k_minus: str | None = None
    p_tilde: str | None = None
    seed: int = 1
    tol: float = 1e-9
    draws: int = 3

    def validate(self):
        if self.suite not in SUITES:
            raise ConfigError(f"unknown suite {self.suite!r}; pick from {SUITES}")
        if not self.dims:
            raise ConfigError("dims must list at least one representation dimension")
        if any(int(n) < 1 for n in self.dims):
            raise ConfigError("dims entries must be positive")
        if self.backend not in ("exact", "numeric"):
            raise ConfigError("backend must be 'exact' or 'numeric'")
        if self.draws < 1:
            raise ConfigError("draws must be >= 1")
        if self.eps_plus is not None and _is_zero_string(self.eps_plus):
            raise ConfigError("eps_plus must be nonzero")
        if self.eps_minus is not None and _is_zero_string(self.eps_minus):
            raise ConfigError("eps_minus must be nonzero")
        for name in ("x_exp", "y_exp", "s0", "s1"):
            v = getattr(self, name)
            if v is not None and v != int(v):
                raise ConfigError(f"{name} must be an integer")

    def context(self) -> ScalarContext:
        if self.backend == "numeric":
            if self.q == "symbolic":
                raise ConfigError("numeric backend needs a complex q (e.g. 1.4+0.3i)")
            q = _parse_complex(self.q)
            if abs(q) <= 1:
                raise ConfigError("numeric backend requires |q| > 1")
            return ScalarContext(backend="numeric", q_value=q)
        if self.q == "symbolic":
            return ScalarContext()
        v = _rational_sqrt(self.q)
        if v is None:
            raise ConfigError(
                f"exact backend with a pinned q needs a perfect-square rational "
                f"(got {self.q!r}); q = v^2 must keep v = q^(1/2) rational")
        return ScalarContext(v_value=v)

    def as_dict(self) -> dict:
        return {
            "suite": self.suite, "dims": list(self.dims),
            "backend": self.backend, "q": self.q,
            "x_exp": self.x_exp, "y_exp": self.y_exp,
            "s0": self.s0, "s1": self.s1,
            "eps_plus": self.eps_plus, "eps_minus": self.eps_minus,
            "k_plus": self.k_plus, "k_minus": self.k_minus,
            "p_tilde": self.p_tilde,
            "seed": self.seed, "tol": self.tol, "draws": self.draws,
        }


def _is_zero_string(s) -> bool:
    try:
        return rational(str(s)) == 0
    except (ValueError, ZeroDivisionError):
        return False


def _parse_complex(text: str) -> complex:
    t = str(text).strip().replace("i", "j").replace(" ", "")
    try:
        return complex(t)
    except ValueError:
        try:
            return complex(float(rational(text)))
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"cannot parse q value {text!r}")


def _rational_sqrt(text: str):
    """sqrt of 'p/r' when both parts are perfect squares, else None."""
    try:
        q = rational(str(text))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"cannot parse q value {text!r}")
    if q <= 0:
        return None
    p, r = int(q.numerator), int(q.denominator)
    sp, sr = math.isqrt(p), math.isqrt(r)
    if sp * sp != p or sr * sr != r:
        return None
    return rational(sp, sr)


# ---------------------------------------------------------------------------
# Parameter drawing
# ---------------------------------------------------------------------------

class Drawer:
    """Seeded source of rational boundary parameters and spectral points."""

    def __init__(self, config: SuiteConfig, rng):
        self.config = config
        self.rng = rng

    def rational_str(self, nonzero=True) -> str:
        num = self.rng.randint(1, 20)
        den = self.rng.randint(1, 20)
        sign = self.rng.choice(("", "-"))
        if not nonzero and self.rng.random() < 0.2:
            return "0"
        return f"{sign}{num}/{den}"

    def gradation(self, pin) -> int:
        return pin if pin is not None else self.rng.choice(GRADATIONS)

    def exponent(self, pin) -> int:
        return pin if pin is not None else self.rng.choice(SPECTRAL_EXPONENTS)

    def spectral(self, ctx, pin_exp) -> Spectral:
        if ctx.is_exact or pin_exp is not None:
            return Spectral.q_power(self.exponent(pin_exp))
        radius = 0.5 + 1.5 * self.rng.random()
        angle = 2 * math.pi * self.rng.random()
        return Spectral.of(cmath.rect(radius, angle))

    def params(self, ctx, k_plus_zero=False, k_minus_zero=False,
               need_k_plus=False, need_k_minus=False):
        c = self.config
        for _ in range(100):
            ep = c.eps_plus or self.rational_str()
            em = c.eps_minus or self.rational_str()
            kp = "0" if k_plus_zero else (c.k_plus or self.rational_str())
            km = "0" if k_minus_zero else (c.k_minus or self.rational_str())
            pt = c.p_tilde or self.rational_str(nonzero=False)
            s0 = self.gradation(c.s0)
            s1 = self.gradation(c.s1)
            if need_k_plus and rational(kp) == 0:
                continue
            if need_k_minus and rational(km) == 0:
                continue
            # eps+ = -eps- collides with a telescoping factor at exponent 0
            if rational(ep) + rational(em) == 0:
                continue
            try:
                return make_params(ctx, ep, em, kp, km, s0, s1, pt)
            except ValueError:
                continue
        raise ConfigError("could not draw admissible parameters; "
                          "check the pinned values")


# ---------------------------------------------------------------------------
# Suite execution
# ---------------------------------------------------------------------------

def run_suite(config: SuiteConfig) -> list:
    """Execute the configured checks; returns the (sorted, timed) reports."""
    import random

    config.validate()
    ctx = config.context()
    rng = random.Random(config.seed)
    drawer = Drawer(config, rng)
    suites = SUITES[1:] if config.suite == "all" else (config.suite,)
    reports = []
    for name in suites:
        runner = _SUITE_RUNNERS[name]
        reports.extend(runner(ctx, config, drawer))
    reports.sort(key=lambda r: (r.name, json.dumps(r.params, sort_keys=True,
                                                   default=str)))
    return reports


def _timed(fn, *args, **kwargs):
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    elapsed = int(round((time.perf_counter() - start) * 1000))
    if isinstance(out, CheckReport):
        out.elapsed_ms = elapsed
        return [out]
    for r in out:
        r.elapsed_ms = elapsed
    return list(out)


def _with_pole_retry(drawer, build_params, run):
    """Run a check, redrawing parameters when a telescoping pole is hit."""
    for _ in range(20):
        params = build_params()
        try:
            return run(params)
        except PoleError:
            continue
    raise ConfigError("persistent pole collisions; pinned parameters sit on "
                      "a vanishing telescoping factor")


def _suite_ybe(ctx, config, drawer):
    out = []
    for n in config.dims:
        rep = make_irrep(ctx, n)
        for _ in range(config.draws):
            params = drawer.params(ctx)
            x = drawer.spectral(ctx, config.x_exp)
            y = drawer.spectral(ctx, config.y_exp)
            z = drawer.spectral(ctx, None)
            for kind in ("RRR", "RbRbRb", "LLR", "LbLbRb"):
                out.extend(_timed(check_ybe, ctx, kind, rep, params, x, y, z))
    return out


def _suite_reflection(ctx, config, drawer):
    out = []
    for _ in range(config.draws):
        x = drawer.spectral(ctx, config.x_exp)
        y = drawer.spectral(ctx, config.y_exp)
        out.extend(_with_pole_retry(
            drawer,
            lambda: drawer.params(ctx, need_k_plus=True, need_k_minus=True),
            lambda p: _timed(check_reflection, ctx, "matrix", None, None, p, x, y)))
    for n in config.dims:
        rep = make_irrep(ctx, n)
        for variant in K_VARIANTS:
            kp0, km0 = _variant_zeroing(variant)
            for _ in range(config.draws):
                x = drawer.spectral(ctx, config.x_exp)
                y = drawer.spectral(ctx, config.y_exp)
                out.extend(_with_pole_retry(
                    drawer,
                    lambda: drawer.params(ctx, k_plus_zero=kp0, k_minus_zero=km0),
                    lambda p: _timed(check_reflection, ctx, "operator", variant,
                                     rep, p, x, y)))
    return out


def _variant_zeroing(variant):
    return {
        "diagonal": (True, True),
        "upper": (False, True),
        "lower": (True, False),
        "upper_alt": (True, False),
        "lower_alt": (False, True),
    }[variant]


def _suite_intertwining(ctx, config, drawer):
    out = []
    for n in config.dims:
        rep = make_irrep(ctx, n)
        for variant in K_VARIANTS:
            kp0, km0 = _variant_zeroing(variant)
            for _ in range(config.draws):
                x = drawer.spectral(ctx, config.x_exp)
                out.extend(_with_pole_retry(
                    drawer,
                    lambda: drawer.params(ctx, k_plus_zero=kp0, k_minus_zero=km0),
                    lambda p: _timed(check_intertwining, ctx, variant, rep, p, x)))
        for _ in range(config.draws):
            x = drawer.spectral(ctx, config.x_exp)
            out.extend(_with_pole_retry(
                drawer,
                lambda: drawer.params(ctx, k_minus_zero=True),
                lambda p: _timed(check_aux_lemmas, ctx, rep, p, x)))
    return out


def _suite_coideal(ctx, config, drawer):
    out = []
    for n in config.dims:
        rep = make_irrep(ctx, n)
        for _ in range(config.draws):
            params = drawer.params(ctx)
            x = drawer.spectral(ctx, config.x_exp)
            out.extend(_timed(check_coideal_algebras, ctx, rep, params, x))
    for n in config.dims:
        for m in config.dims:
            rep1 = make_irrep(ctx, n)
            rep2 = make_irrep(ctx, m)
            for _ in range(config.draws):
                params = drawer.params(ctx)
                x = drawer.spectral(ctx, config.x_exp)
                y = drawer.spectral(ctx, config.y_exp)
                out.extend(_timed(check_coideal_coproduct, ctx, rep1, rep2,
                                  params, x, y))
    return out


def _suite_appendix(ctx, config, drawer):
    halves = (-2, -1, 0, 1, 2, 3)
    out = []
    for n in config.dims:
        rep = make_irrep(ctx, n)
        for _ in range(config.draws):
            a = drawer.rational_str()
            from fractions import Fraction

            b = Fraction(drawer.rng.choice(halves), 2)
            c = Fraction(drawer.rng.choice(halves), 2)
            for ident in range(1, 14):
                out.extend(_timed(check_appendix, ctx, ident, rep, a, b, c))
    return out


def _suite_symmetries(ctx, config, drawer):
    out = []
    for n in config.dims:
        rep = make_irrep(ctx, n)
        for _ in range(config.draws):
            params = drawer.params(ctx)
            x = drawer.spectral(ctx, config.x_exp)
            out.extend(_timed(check_symmetries, ctx, rep, params, x))
    return out


def _suite_onsager(ctx, config, drawer):
    out = []
    for n in config.dims:
        rep = make_irrep(ctx, n)
        for _ in range(config.draws):
            x = drawer.spectral(ctx, config.x_exp)
            out.extend(_with_pole_retry(
                drawer,
                lambda: drawer.params(ctx, need_k_plus=True,
                                      need_k_minus=True),
                lambda p: _timed(check_onsager_candidate, ctx, rep, p, x)))
            # triangular degenerations satisfy both relations
            out.extend(_with_pole_retry(
                drawer,
                lambda: drawer.params(ctx, k_minus_zero=True, need_k_plus=True),
                lambda p: _timed(check_onsager_candidate, ctx, rep, p, x)))
            out.extend(_with_pole_retry(
                drawer,
                lambda: drawer.params(ctx, k_plus_zero=True, need_k_minus=True),
                lambda p: _timed(check_onsager_candidate, ctx, rep, p, x)))
    return out


_SUITE_RUNNERS = {
    "ybe": _suite_ybe,
    "reflection": _suite_reflection,
    "intertwining": _suite_intertwining,
    "coideal": _suite_coideal,
    "appendix": _suite_appendix,
    "symmetries": _suite_symmetries,
    "onsager": _suite_onsager,
}


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

def summarize(reports, tol: float) -> dict:
    passed = failed = findings = 0
    for r in reports:
        if r.is_finding:
            findings += 1
        elif r.passed(tol):
            passed += 1
        else:
            failed += 1
    return {"passed": passed, "failed": failed, "findings": findings}


def report_to_dict(r: CheckReport) -> dict:
    out = {"name": r.name, "params": r.params}
    if r.exact_zero is not None:
        out["exact_zero"] = r.exact_zero
    if r.residual is not None:
        out["residual"] = r.residual
    if r.detail:
        out["detail"] = r.detail
    if r.is_finding:
        out["finding"] = True
    out["elapsed_ms"] = r.elapsed_ms
    return out


def emit_report(reports, fmt: str = "json", config: SuiteConfig | None = None,
                tol: float | None = None) -> str:
    if tol is None:
        tol = config.tol if config is not None else 1e-9
    summary = summarize(reports, tol)
    if fmt == "json":
        doc = {
            "suite": config.suite if config else None,
            "config": config.as_dict() if config else None,
            "checks": [report_to_dict(r) for r in reports],
            "summary": summary,
        }
        return json.dumps(doc, indent=2, default=str) + "\n"
    if fmt != "text":
        raise ConfigError(f"unknown report format {fmt!r}")
    lines = []
    width = max((len(r.name) for r in reports), default=20) + 2
    for r in reports:
        if r.is_finding:
            status = "FINDING"
        elif r.passed(tol):
            status = "ok"
        else:
            status = "FAIL"
        if r.exact_zero is not None:
            value = "exact zero" if r.exact_zero else "NONZERO"
        else:
            value = f"residual {r.residual:.3e}"
        line = f"{r.name:<{width}} {status:<8} {value}"
        if r.detail and (status != "ok"):
            line += f"  [{r.detail}]"
        lines.append(line)
    lines.append(f"passed {summary['passed']}  failed {summary['failed']}  "
                 f"findings {summary['findings']}")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> dict:
    """Round-trip helper: parse an emitted JSON report."""
    return json.loads(text)
