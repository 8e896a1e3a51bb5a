"""Data-smoothness checks and ill-posedness quantification for the inversion.

The existence theory asks for phi in the Sobolev class of order tau and psi
one order higher, with tau > N/2.  Whether tau counts direct Sobolev orders
or powers of the elliptic operator (each worth m Sobolev orders) is left
ambiguous by the theory, so the report carries both readings; the verdict is
keyed to the direct reading and the operator-power numbers ride along as
data.

Ill-posedness is mild here: the inversion multiplies mode n by
1/(T^rho * E_{rho,rho+1}(-A(n) T^rho)), which grows only like A(n).  The
profile reports per-shell maxima of that factor.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .mittag_leffler import MLParams, ml_array
from .errors import DomainError
from .spectral import (
    EllipticSymbol,
    SpectralField,
    TorusGrid,
    decay_exponent,
    shell_index,
    sobolev_norm,
)

VERDICT_EXACT = "exact_band_limited"
VERDICT_PLAUSIBLE = "conditions_plausible"
VERDICT_SUSPECT = "conditions_suspect"


@dataclass(frozen=True)
class DiagnosticThresholds:
    """Tunable cutoffs; defaults are echoed into every report."""

    # extra Sobolev margin above the theorem's tau > N/2 requirement
    tau_margin: float = 0.5
    # required slack of the slope-implied smoothness over the requirement
    slope_margin: float = 0.0
    # flag shells whose amplification, weighted by the observation's energy
    # fraction there, exceeds this
    amplification_score_ceiling: float = 10.0


@dataclass
class ConditionReport:
    tau_required: float
    tau_checked: float
    sobolev_norms_phi: dict[str, float]
    sobolev_norms_psi: dict[str, float]
    decay_slope_phi: float
    decay_slope_psi: float
    implied_order_phi: float
    implied_order_psi: float
    shell_radii: list[int]
    amplification: list[float]
    flagged_shells: list[int]
    thresholds: DiagnosticThresholds
    verdict: str
    operator_power_note: str = field(
        default=(
            "sobolev_norms at keys 'tau*m'/'(tau+1)*m' use the operator-power "
            "reading of the smoothness hypothesis; plain keys use the direct "
            "Sobolev reading, which drives the verdict"
        )
    )

    def to_dict(self) -> dict:
        return {
            "tau_required": self.tau_required,
            "tau_checked": self.tau_checked,
            "sobolev_norms_phi": self.sobolev_norms_phi,
            "sobolev_norms_psi": self.sobolev_norms_psi,
            "decay_slope_phi": self.decay_slope_phi,
            "decay_slope_psi": self.decay_slope_psi,
            "implied_order_phi": self.implied_order_phi,
            "implied_order_psi": self.implied_order_psi,
            "shell_radii": self.shell_radii,
            "amplification": self.amplification,
            "flagged_shells": self.flagged_shells,
            "thresholds": {
                "tau_margin": self.thresholds.tau_margin,
                "slope_margin": self.thresholds.slope_margin,
                "amplification_score_ceiling": self.thresholds.amplification_score_ceiling,
            },
            "verdict": self.verdict,
            "operator_power_note": self.operator_power_note,
        }


def amplification_profile(
    rho: float, final_time: float, symbol: EllipticSymbol, grid: TorusGrid
) -> tuple[np.ndarray, np.ndarray]:
    """Per-shell maxima of 1/(T^rho E_{rho,rho+1}(-A(n) T^rho)).

    The zero shell sits at the floor gamma(rho+1)/T^rho; for large
    A(n) T^rho the profile approaches A(n) itself.
    """
    if final_time <= 0.0:
        raise DomainError(f"final_time must be > 0, got {final_time!r}")
    lam = symbol.values_on_grid(grid)
    tp = final_time**rho
    e2 = ml_array(MLParams(rho, rho + 1.0), -lam * tp)
    amp = 1.0 / (tp * e2)
    r = shell_index(grid).ravel()
    out = np.zeros(int(r.max()) + 1)
    np.maximum.at(out, r, amp.ravel())
    return np.arange(len(out)), out


def _slope_or_inf(f: SpectralField) -> float:
    from .errors import InsufficientDataError

    try:
        return decay_exponent(f)
    except InsufficientDataError:
        # too few shells to fit: treat as no information, worst case
        return 0.0


def check_conditions(
    spec,
    thresholds: DiagnosticThresholds = DiagnosticThresholds(),
) -> ConditionReport:
    """Evaluate the smoothness hypotheses on an inverse-mode problem."""
    if spec.mode != "inverse":
        raise DomainError("check_conditions expects an inverse-mode problem")
    grid = spec.grid
    n = grid.dim
    m = spec.symbol.order
    tau_req = n / 2.0
    tau = tau_req + thresholds.tau_margin

    phi, psi = spec.phi, spec.observation
    norms_phi = {
        "tau": sobolev_norm(phi, tau),
        "tau*m": sobolev_norm(phi, tau * m),
    }
    norms_psi = {
        "tau+1": sobolev_norm(psi, tau + 1.0),
        "(tau+1)*m": sobolev_norm(psi, (tau + 1.0) * m),
    }

    slope_phi = _slope_or_inf(phi)
    slope_psi = _slope_or_inf(psi)
    # |g_n| <~ (1+|n|)^s puts g in the Sobolev class of any order < -s - N/2
    implied_phi = -slope_phi - n / 2.0
    implied_psi = -slope_psi - n / 2.0

    radii, amp = amplification_profile(spec.rho, spec.final_time, spec.symbol, grid)
    flagged = _flag_shells(psi, amp, thresholds.amplification_score_ceiling)

    if math.isinf(slope_phi) and math.isinf(slope_psi):
        verdict = VERDICT_EXACT
    else:
        phi_ok = implied_phi >= tau_req + thresholds.slope_margin
        psi_ok = implied_psi >= tau_req + 1.0 + thresholds.slope_margin
        verdict = VERDICT_PLAUSIBLE if (phi_ok and psi_ok and not flagged) else VERDICT_SUSPECT

    return ConditionReport(
        tau_required=tau_req,
        tau_checked=tau,
        sobolev_norms_phi=norms_phi,
        sobolev_norms_psi=norms_psi,
        decay_slope_phi=slope_phi,
        decay_slope_psi=slope_psi,
        implied_order_phi=implied_phi,
        implied_order_psi=implied_psi,
        shell_radii=[int(r) for r in radii],
        amplification=[float(a) for a in amp],
        flagged_shells=flagged,
        thresholds=thresholds,
        verdict=verdict,
    )


def _flag_shells(
    psi: SpectralField, amp: np.ndarray, ceiling: float
) -> list[int]:
    """Shells where amplification times the observation's energy fraction
    exceeds the ceiling: reconstruction there is noise-dominated."""
    r = shell_index(psi.grid).ravel()
    energy = np.zeros(len(amp))
    np.add.at(energy, r, np.abs(psi.coeffs.ravel()) ** 2)
    total = float(energy.sum())
    if total == 0.0:
        return []
    score = amp * np.sqrt(energy / total)
    return [int(i) for i in np.nonzero(score > ceiling)[0]]


__all__ = [
    "DiagnosticThresholds",
    "ConditionReport",
    "amplification_profile",
    "check_conditions",
    "VERDICT_EXACT",
    "VERDICT_PLAUSIBLE",
    "VERDICT_SUSPECT",
]
