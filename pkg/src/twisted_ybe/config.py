"""Run configuration: a YAML (or JSON) mapping validated into a RunConfig.

Schema (defaults in brackets)::

    group: glq | slq | slq_super
    N: int
    K: int                      # required for slq_super, forbidden otherwise
    q: number | [re, im] | "a+bj"
    h: positive number
    gauge: unitary | upper_triangular          [unitary]
    b0: canonical | {beta: [...]} | {explicit: [[...], ...]}   [canonical]
    momenta: {seed: int [0], count: int [20], scale: float [1.0]}
             | {explicit: [[p_1, ..., p_N], ...]}
    checks: all | [name, ...]                  [all]
    spectral:
      yz: [[y, z], ...]                        [[1.3, 0.7], [2, 0.5], ["0.9+0.1j", 1.1]]
      theta: [[theta, theta2], ...]            [[0.4, -0.9], [0.7, 0.7]]
    tolerance: float                           [1e-9]
    output: path                               [none]
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import yaml

from .coefficients import GAUGES, BZero, beta_family, deformation, validate_b0
from .errors import ConfigError, TwistedYBEError

GROUPS = ("glq", "slq", "slq_super")
CHECK_NAMES = (
    "validate_b0",
    "hecke",
    "constant_ybe",
    "constraints",
    "recursions",
    "dynamical_ybe",
    "reflection",
    "spectral_dybe",
    "unitarity",
    "additive_dybe",
    "hermiticity",
)
DEFAULT_YZ = ((1.3 + 0j, 0.7 + 0j), (2 + 0j, 0.5 + 0j), (0.9 + 0.1j, 1.1 + 0j))
DEFAULT_THETA = ((0.4 + 0j, -0.9 + 0j), (0.7 + 0j, 0.7 + 0j))
TOP_KEYS = {"group", "N", "K", "q", "h", "gauge", "b0", "momenta", "checks", "spectral",
            "tolerance", "output"}


@dataclass(frozen=True)
class RunConfig:
    group: str
    N: int
    q: complex
    h: float
    K: int | None = None
    gauge: str = "unitary"
    b0_kind: str = "canonical"
    b0_data: tuple = ()
    seed: int = 0
    count: int = 20
    scale: float = 1.0
    explicit_momenta: tuple[tuple[float, ...], ...] | None = None
    checks: tuple[str, ...] = CHECK_NAMES
    yz: tuple[tuple[complex, complex], ...] = DEFAULT_YZ
    theta: tuple[tuple[complex, complex], ...] = DEFAULT_THETA
    tolerance: float = 1e-9
    output: str | None = None
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def grading_K(self) -> int:
        return self.K if self.group == "slq_super" else self.N

    def bzero(self) -> BZero:
        if self.b0_kind == "canonical":
            return BZero.canonical_limit()
        if self.b0_kind == "beta":
            return beta_family(self.N, self.b0_data, self.q)
        return BZero([list(row) for row in self.b0_data])

    def echo(self) -> dict[str, Any]:
        """Normalised view of the configuration for the report header."""
        out: dict[str, Any] = {
            "group": self.group,
            "N": self.N,
            "q": _c(self.q),
            "h": self.h,
            "gauge": self.gauge,
            "b0": self.b0_kind if self.b0_kind == "canonical"
            else {self.b0_kind: _nested(self.b0_data)},
            "checks": list(self.checks),
            "spectral": {"yz": _nested(self.yz), "theta": _nested(self.theta)},
            "tolerance": self.tolerance,
        }
        if self.K is not None:
            out["K"] = self.K
        if self.explicit_momenta is not None:
            out["momenta"] = {"explicit": [list(p) for p in self.explicit_momenta]}
        else:
            out["momenta"] = {"seed": self.seed, "count": self.count, "scale": self.scale}
        return out


def _c(z: complex):
    return z.real if z.imag == 0 else [z.real, z.imag]


def _nested(x):
    if isinstance(x, complex):
        return _c(x)
    if isinstance(x, (tuple, list)):
        return [_nested(v) for v in x]
    return x


def _require(d: dict, key: str, path: str):
    if key not in d:
        raise ConfigError(f"{path}{key}", "required key missing")
    return d[key]


def _as_int(v, path: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(path, f"expected an integer, got {v!r}")
    return v


def _as_float(v, path: str) -> float:
    # YAML 1.1 reads exponent forms such as 1e-9 (no dot) as strings
    if isinstance(v, str):
        try:
            return float(v)
        except ValueError:
            pass
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(path, f"expected a number, got {v!r}")
    return float(v)


def _as_complex(v, path: str) -> complex:
    if isinstance(v, bool):
        raise ConfigError(path, f"expected a number, got {v!r}")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(_as_float(v[0], f"{path}[0]"), _as_float(v[1], f"{path}[1]"))
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", "").replace("i", "j"))
        except ValueError:
            pass
    raise ConfigError(path, f"expected a real, [re, im] pair or complex string, got {v!r}")


def _pairs(v, path: str) -> tuple[tuple[complex, complex], ...]:
    if not isinstance(v, list):
        raise ConfigError(path, "expected a list of pairs")
    out = []
    for k, pair in enumerate(v):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ConfigError(f"{path}[{k}]", f"expected a pair, got {pair!r}")
        out.append((_as_complex(pair[0], f"{path}[{k}][0]"), _as_complex(pair[1], f"{path}[{k}][1]")))
    return tuple(out)


def _unknown(d: dict, allowed: set, path: str) -> None:
    for key in d:
        if key not in allowed:
            raise ConfigError(f"{path}{key}", "unknown key")


def config_from_mapping(doc: Any) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError("<root>", "expected a mapping")
    _unknown(doc, TOP_KEYS, "")
    group = _require(doc, "group", "")
    if group not in GROUPS:
        raise ConfigError("group", f"expected one of {GROUPS}, got {group!r}")
    N = _as_int(_require(doc, "N", ""), "N")
    if not 1 <= N <= 8:
        raise ConfigError("N", f"supported range is 1..8, got {N}")
    q = _as_complex(_require(doc, "q", ""), "q")
    try:
        deformation(q)
    except TwistedYBEError as exc:
        raise ConfigError("q", str(exc)) from None
    h = _as_float(_require(doc, "h", ""), "h")
    if not h > 0:
        raise ConfigError("h", "must be positive")

    K = doc.get("K")
    if group == "slq_super":
        if K is None:
            raise ConfigError("K", "required for group slq_super")
        K = _as_int(K, "K")
        if not 1 <= K <= N - 1:
            raise ConfigError("K", f"must satisfy 1 <= K <= N-1, got {K}")
    elif K is not None:
        raise ConfigError("K", "only allowed for group slq_super")

    gauge = doc.get("gauge", "unitary")
    if gauge not in GAUGES:
        raise ConfigError("gauge", f"expected one of {GAUGES}, got {gauge!r}")

    b0_kind, b0_data = _parse_b0(doc.get("b0", "canonical"), N)
    if group in ("slq", "slq_super"):
        if b0_kind != "canonical":
            raise ConfigError("b0", f"group {group} is defined in the canonical limit only")
        if gauge != "unitary":
            raise ConfigError("gauge", f"group {group} uses the unitary gauge")

    kw: dict[str, Any] = {}
    mom = doc.get("momenta", {})
    if not isinstance(mom, dict):
        raise ConfigError("momenta", "expected a mapping")
    if "explicit" in mom:
        _unknown(mom, {"explicit"}, "momenta.")
        vecs = mom["explicit"]
        if not isinstance(vecs, list) or not vecs:
            raise ConfigError("momenta.explicit", "expected a non-empty list of vectors")
        out = []
        for k, vec in enumerate(vecs):
            if not isinstance(vec, list) or len(vec) != N:
                raise ConfigError(f"momenta.explicit[{k}]", f"expected {N} numbers")
            out.append(tuple(_as_float(x, f"momenta.explicit[{k}][{i}]") for i, x in enumerate(vec)))
        kw["explicit_momenta"] = tuple(out)
    else:
        _unknown(mom, {"seed", "count", "scale"}, "momenta.")
        kw["seed"] = _as_int(mom.get("seed", 0), "momenta.seed")
        kw["count"] = _as_int(mom.get("count", 20), "momenta.count")
        if kw["count"] < 1:
            raise ConfigError("momenta.count", "must be >= 1")
        kw["scale"] = _as_float(mom.get("scale", 1.0), "momenta.scale")
        if not kw["scale"] > 0:
            raise ConfigError("momenta.scale", "must be positive")

    checks = doc.get("checks", "all")
    if checks == "all":
        kw["checks"] = CHECK_NAMES
    else:
        if not isinstance(checks, list) or not checks:
            raise ConfigError("checks", "expected 'all' or a non-empty list of check names")
        for k, name in enumerate(checks):
            if name not in CHECK_NAMES:
                raise ConfigError(f"checks[{k}]", f"unknown check {name!r}; known: {CHECK_NAMES}")
        kw["checks"] = tuple(sorted(set(checks), key=CHECK_NAMES.index))

    spectral = doc.get("spectral", {})
    if not isinstance(spectral, dict):
        raise ConfigError("spectral", "expected a mapping")
    _unknown(spectral, {"yz", "theta"}, "spectral.")
    if "yz" in spectral:
        kw["yz"] = _pairs(spectral["yz"], "spectral.yz")
        for k, (y, z) in enumerate(kw["yz"]):
            if y == 0 or z == 0:
                raise ConfigError(f"spectral.yz[{k}]", "spectral parameters must be nonzero")
    if "theta" in spectral:
        kw["theta"] = _pairs(spectral["theta"], "spectral.theta")

    tol = _as_float(doc.get("tolerance", 1e-9), "tolerance")
    if not tol > 0:
        raise ConfigError("tolerance", "must be positive")
    output = doc.get("output")
    if output is not None and not isinstance(output, str):
        raise ConfigError("output", "expected a path string")

    cfg = RunConfig(group=group, N=N, q=q, h=h, K=K, gauge=gauge, b0_kind=b0_kind,
                    b0_data=b0_data, tolerance=tol, output=output, **kw)
    if b0_kind != "canonical":
        try:
            b0 = cfg.bzero()
        except ValueError as exc:
            raise ConfigError("b0", str(exc)) from None
        report = validate_b0(b0, q, 1e-12)
        if not report.passed:
            raise ConfigError("b0", f"violates the b0 constraints; worst {report.worst} "
                                    f"(relative {report.residual.relative:.3e})")
    return cfg


def _parse_b0(v, N: int) -> tuple[str, tuple]:
    if v == "canonical":
        return "canonical", ()
    if not isinstance(v, dict) or len(v) != 1:
        raise ConfigError("b0", "expected 'canonical', {beta: [...]} or {explicit: [[...]]}")
    (kind, data), = v.items()
    if kind == "beta":
        if not isinstance(data, list) or len(data) != N:
            raise ConfigError("b0.beta", f"expected {N} values")
        return "beta", tuple(_as_complex(x, f"b0.beta[{k}]") for k, x in enumerate(data))
    if kind == "explicit":
        if not isinstance(data, list) or len(data) != N:
            raise ConfigError("b0.explicit", f"expected an {N}x{N} matrix")
        rows = []
        for i, row in enumerate(data):
            if not isinstance(row, list) or len(row) != N:
                raise ConfigError(f"b0.explicit[{i}]", f"expected {N} entries")
            rows.append(tuple(_as_complex(x, f"b0.explicit[{i}][{j}]") for j, x in enumerate(row)))
        return "explicit", tuple(rows)
    raise ConfigError(f"b0.{kind}", "unknown key")


def parse_config(text: str) -> RunConfig:
    """Parse a YAML/JSON document into a validated RunConfig."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError("<document>", f"malformed YAML: {exc}") from None
    return config_from_mapping(doc)
