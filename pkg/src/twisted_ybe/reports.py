from __future__ import annotations

from dataclasses import dataclass

from .tensor_core import Residual

PASS = "pass"
FAIL = "fail"
SKIP = "skip"


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a single verification.

    ``passed`` holds exactly when ``residual.relative <= tolerance``. A skipped
    check carries ``skip_reason`` and a NaN residual and counts as neither
    passed nor failed.
    """

    name: str
    residual: Residual
    tolerance: float
    inputs_digest: str = ""
    details: tuple[tuple[str, float], ...] = ()
    skip_reason: str | None = None
    worst: str | None = None

    @property
    def passed(self) -> bool:
        return self.skip_reason is None and self.residual.relative <= self.tolerance

    @property
    def status(self) -> str:
        if self.skip_reason is not None:
            return SKIP
        return PASS if self.passed else FAIL

    @classmethod
    def skipped(cls, name: str, reason: str, tolerance: float, inputs_digest: str = "") -> CheckReport:
        nan = float("nan")
        return cls(name, Residual(nan, nan), tolerance, inputs_digest, skip_reason=reason)

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "status": self.status,
            "absolute": self.residual.absolute,
            "relative": self.residual.relative,
            "tolerance": self.tolerance,
            "inputs": self.inputs_digest,
        }
        if self.worst is not None:
            out["worst"] = self.worst
        if self.details:
            out["details"] = {k: v for k, v in self.details}
        if self.skip_reason is not None:
            out["skip_reason"] = self.skip_reason
        return out


def combine(name: str, parts: list[tuple[str, Residual]], tolerance: float,
            inputs_digest: str = "") -> CheckReport:
    """Fold several sub-residuals into one report keyed on the worst relative one."""
    if not parts:
        return CheckReport(name, Residual(0.0, 0.0), tolerance, inputs_digest)
    label, worst = max(parts, key=lambda kv: kv[1].relative)
    details = tuple((k, r.relative) for k, r in parts)
    return CheckReport(name, worst, tolerance, inputs_digest, details=details, worst=label)
