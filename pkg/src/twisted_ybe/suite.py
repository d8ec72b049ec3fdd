"""Run a configured set of checks and collect a deterministic report."""
from __future__ import annotations

import json
import math
import re
import time
from dataclasses import dataclass, field
from typing import Callable

from . import __version__
from .coefficients import (
    CoefficientScheme,
    GradingSignature,
    _fmt_c,
    check_constraints,
    check_recursions,
    nonresonant_momenta,
    validate_b0,
)
from .config import RunConfig
from .errors import PoleError
from .momentum import Momentum, random_generic, shifted_points
from .reports import FAIL, PASS, SKIP, CheckReport
from .rmatrix import RMatrixSpec, build_constant_r
from .tensor_core import Residual
from .verify import (
    check_additive_dybe,
    check_constant_ybe,
    check_dynamical_ybe,
    check_hecke,
    check_hermiticity,
    check_reflection,
    check_spectral_dybe,
    check_unitarity,
)

MAX_RESAMPLES = 50
GROUP_KINDS = {"glq": "dynamical", "slq": "dynamical_sl", "slq_super": "dynamical_super_sl"}


@dataclass
class Entry:
    key: str
    report: CheckReport
    resampled: int = 0

    def to_dict(self) -> dict:
        out = {"id": self.key, **self.report.to_dict()}
        if self.resampled:
            out["resampled"] = self.resampled
        return out


@dataclass
class SuiteReport:
    config: dict
    entries: list[Entry]
    version: str = __version__
    wall_time: float = field(default=0.0, compare=False)

    @property
    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, SKIP: 0}
        for e in self.entries:
            out[e.report.status] += 1
        return out

    @property
    def exit_code(self) -> int:
        return 1 if self.counts[FAIL] else 0

    def to_dict(self) -> dict:
        # wall time varies run to run, so it stays out of the persisted report
        return {
            "version": self.version,
            "config": self.config,
            "summary": self.counts,
            "checks": [e.to_dict() for e in self.entries],
        }

    def to_json(self) -> str:
        return dumps_fixed(self.to_dict())

    def table(self) -> str:
        """Per-check summary, followed by one line per failure."""
        groups: dict[str, list[Entry]] = {}
        for e in self.entries:
            groups.setdefault(e.report.name, []).append(e)
        rows = [("check", "pass", "fail", "skip", "worst rel", "tol")]
        for name, es in groups.items():
            c = {PASS: 0, FAIL: 0, SKIP: 0}
            for e in es:
                c[e.report.status] += 1
            rels = [e.report.residual.relative for e in es if e.report.status != SKIP]
            worst = f"{max(rels):.3e}" if rels else "-"
            rows.append((name, str(c[PASS]), str(c[FAIL]), str(c[SKIP]), worst,
                         f"{es[0].report.tolerance:.1e}"))
        widths = [max(len(r[k]) for r in rows) for k in range(len(rows[0]))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
        for e in self.entries:
            if e.report.status == FAIL:
                r = e.report
                where = f" at {r.worst}" if r.worst else ""
                lines.append(f"FAIL {e.key}: relative {r.residual.relative:.3e}{where}")
        c = self.counts
        lines.append(f"{c[PASS]} passed, {c[FAIL]} failed, {c[SKIP]} skipped "
                     f"in {self.wall_time:.2f}s")
        return "\n".join(lines)


_FLOAT_MARK = "\x00f"
_FLOAT_RE = re.compile(r'"\\u0000f([^"]*)"')


def _mark_floats(x):
    if isinstance(x, bool) or x is None:
        return x
    if isinstance(x, float):
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return _FLOAT_MARK + f"{x:.17g}"
    if isinstance(x, dict):
        return {k: _mark_floats(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_mark_floats(v) for v in x]
    return x


def dumps_fixed(doc) -> str:
    """JSON with every float written to 17 significant digits; NaN becomes null."""
    text = json.dumps(_mark_floats(doc), indent=2, ensure_ascii=True)
    return _FLOAT_RE.sub(lambda mt: mt.group(1), text) + "\n"


def make_scheme(cfg: RunConfig) -> CoefficientScheme:
    sig = GradingSignature(cfg.N, cfg.grading_K, cfg.q)
    return CoefficientScheme(sig, cfg.bzero(), cfg.gauge, cfg.h)


class _Unnormalised:
    """Base Hecke matrix of a normalised family, for baxterization."""

    def __init__(self, spec: RMatrixSpec):
        self.spec = spec

    def __call__(self, m: Momentum):
        return self.spec(m) / self.spec.factor

    def describe(self) -> str:
        return "unnormalised(" + self.spec.describe() + ")"


class _Runner:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.scheme = make_scheme(cfg)
        self.spec = RMatrixSpec(GROUP_KINDS[cfg.group], cfg.N, scheme=self.scheme)
        self.base = self.spec if self.spec.factor == 1 else _Unnormalised(self.spec)
        self.entries: list[Entry] = []
        if cfg.explicit_momenta is not None:
            self.momenta = [Momentum(p, cfg.h) for p in cfg.explicit_momenta]
            self.attempts = [0] * len(self.momenta)
        else:
            drawn = nonresonant_momenta(self.scheme, cfg.count, cfg.seed, scale=cfg.scale)
            self.momenta = [m for m, _ in drawn]
            self.attempts = [a for _, a in drawn]

    def add(self, key: str, report: CheckReport, resampled: int = 0) -> None:
        self.entries.append(Entry(key, report, resampled))

    def _redraw(self, k: int, attempt: int) -> Momentum:
        cfg = self.cfg
        margin = cfg.h / 10
        while True:
            m = random_generic(cfg.N, cfg.h, (cfg.seed, k, attempt), cfg.scale)
            if all(self.scheme.resonance(pt, margin).ok for pt in shifted_points(m, (1, -1, 2, -2))):
                return m
            attempt += 1

    def per_momentum(self, key: str, fn: Callable[[Momentum], CheckReport]) -> None:
        """Run ``fn`` at every momentum; a pole triggers a bounded resample."""
        for k, m in enumerate(self.momenta):
            ident = f"{key}/m{k:02d}"
            resampled = 0
            attempt = self.attempts[k]
            while True:
                try:
                    report = fn(m)
                    break
                except PoleError as exc:
                    if self.cfg.explicit_momenta is not None or resampled >= MAX_RESAMPLES:
                        report = CheckReport(key.split("/")[0], Residual(math.inf, math.inf),
                                             self.cfg.tolerance, m.describe(), worst=f"pole: {exc}")
                        break
                    resampled += 1
                    attempt += 1
                    m = self._redraw(k, attempt)
            self.add(ident, report, resampled)

    def run(self) -> list[Entry]:
        cfg, tol = self.cfg, self.cfg.tolerance
        lam = self.scheme.lam
        checks = set(cfg.checks)
        scheme, spec, base = self.scheme, self.spec, self.base

        if "validate_b0" in checks:
            if scheme.b0.canonical:
                self.add("validate_b0", CheckReport.skipped(
                    "validate_b0", "canonical limit has no finite b0 entries", tol, "b0=canonical"))
            else:
                self.add("validate_b0", validate_b0(scheme.b0, cfg.q, min(tol, 1e-12)))
        if "hecke" in checks:
            self.add("hecke/constant", check_hecke(build_constant_r(cfg.N, cfg.q), lam, tol))
            self.per_momentum("hecke/" + cfg.group,
                              lambda m: check_hecke(spec(m), lam, tol, spec.factor))
        if "constant_ybe" in checks:
            self.add("constant_ybe", check_constant_ybe(build_constant_r(cfg.N, cfg.q), tol))
        if "constraints" in checks:
            self.per_momentum("constraints", lambda m: check_constraints(scheme, m, tol))
        if "recursions" in checks:
            self.per_momentum("recursions", lambda m: check_recursions(scheme, m, tol))
        if "dynamical_ybe" in checks:
            self.per_momentum("dynamical_ybe", lambda m: check_dynamical_ybe(spec, m, tol))
        if "reflection" in checks:
            self.per_momentum("reflection", lambda m: check_reflection(spec, m, tol))
        if "spectral_dybe" in checks:
            for n, (y, z) in enumerate(cfg.yz):
                self.per_momentum(f"spectral_dybe/yz{n}",
                                  lambda m, y=y, z=z: check_spectral_dybe(base, m, y, z, lam, tol))
        if "unitarity" in checks:
            ys = sorted({y for y, _ in cfg.yz}, key=lambda w: (w.real, w.imag))
            for n, y in enumerate(ys):
                self.per_momentum(f"unitarity/y{n}",
                                  lambda m, y=y: check_unitarity(base(m), y, lam, tol))
        if "additive_dybe" in checks:
            for n, (t1, t2) in enumerate(cfg.theta):
                key = f"additive_dybe/theta{n}"
                if scheme.sig.is_super:
                    self.add(key, CheckReport.skipped(
                        "additive_dybe", "the rational family is defined for the pure GL grading",
                        tol, f"theta={_fmt_c(t1)},{_fmt_c(t2)}"))
                    continue
                self.per_momentum(key, lambda m, t1=t1, t2=t2: check_additive_dybe(m, t1, t2, tol=tol))
        if "hermiticity" in checks:
            self.per_momentum("hermiticity", lambda m: check_hermiticity(scheme, m, tol, spec))
        return sorted(self.entries, key=lambda e: e.key)


def run_suite(cfg: RunConfig) -> SuiteReport:
    start = time.perf_counter()
    entries = _Runner(cfg).run()
    return SuiteReport(cfg.echo(), entries, wall_time=time.perf_counter() - start)
