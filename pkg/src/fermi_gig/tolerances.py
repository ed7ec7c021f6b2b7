"""Library-wide numerical tolerances.

All defaults live here so that the CLI can override them by name with
``--tol name=value``.
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace

TOL_HERM = 1e-10
TOL_PSD = 1e-10
KERNEL_REL = 1e-9
# Absolute floor for kernel detection, so that roundoff-sized spectra count as zero.
KERNEL_ABS = 1e-12
TOL_SR = 1e-8
JACOBI_OFF_REL = 1e-13
JACOBI_MAX_SWEEPS = 60
EXPM_SCALED_NORM = 0.5
EXPM_TAYLOR_TERMS = 30
TOL_UNITARY = 1e-10
FAITHFUL_MIN_EIG = 1e-12
INJECTIVE_MIN_SV = 1e-8
CLASSIFY_STEP = 1e-4


@dataclass(frozen=True)
class Tolerances:
    """Acceptance thresholds used by the verification suites."""

    car: float = 1e-13
    moment: float = 1e-10
    wolfe_pass: float = 1e-9
    wolfe_fail: float = 1e-3
    ehk_symbol: float = 1e-10
    covariance: float = 1e-10
    dual: float = 1e-10
    classify: float = 1e-7
    generator: float = 1e-6
    chernoff_slope: float = 0.2
    mehler_exact: float = 1e-10
    spectrum: float = 1e-8
    detailed_balance: float = 1e-10
    steady: float = 1e-10
    steady_iter: float = 1e-6
    embed_negative: float = -1e-4
    embed_roundtrip: float = 1e-9
    tpsymbol: float = 1e-8
    condexp: float = 1e-10
    product: float = 1e-12
    petz_recover: float = 1e-11
    petz_dual: float = 1e-10
    gig_preserve: float = 1e-8

    @classmethod
    def names(cls):
        return [f.name for f in fields(cls)]

    def with_overrides(self, overrides: dict[str, float]) -> "Tolerances":
        unknown = sorted(set(overrides) - set(self.names()))
        if unknown:
            raise KeyError(", ".join(unknown))
        return replace(self, **{k: float(v) for k, v in overrides.items()})
