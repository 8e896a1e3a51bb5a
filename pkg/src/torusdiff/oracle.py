"""Independent verification paths for the closed-form solver.

Two deliberately different routes:

* :func:`ml_series_reference` sums the defining Mittag-Leffler series in
  arbitrary precision (mpmath), with the working precision sized from the
  largest term so the result is certified to the requested tolerance.  It
  shares no code with the double-precision evaluator in
  :mod:`torusdiff.mittag_leffler`.
* :func:`l1_solve_mode` integrates the per-mode Cauchy problem
  ``D^rho y + lam*y = f, y(0) = phi`` with the standard L1 quadrature of the
  Caputo derivative on a uniform grid, implicit in the stiff term.  It never
  evaluates a Mittag-Leffler function, so agreement with the closed form is
  a true cross-check.
"""

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .errors import CancellationError, DomainError

# refuse series summations that would need more decimal digits than this
SERIES_DPS_BUDGET = 600


@dataclass(frozen=True)
class L1SchemeConfig:
    """Uniform-grid L1 discretization: M steps of size T/M, order rho."""

    steps: int
    rho: float

    def __post_init__(self):
        if int(self.steps) != self.steps or self.steps < 2:
            raise DomainError(f"steps must be an integer >= 2, got {self.steps!r}")
        if not (0.0 < self.rho <= 1.0):
            raise DomainError(f"rho must be in (0, 1], got {self.rho!r}")
        object.__setattr__(self, "steps", int(self.steps))
        object.__setattr__(self, "rho", float(self.rho))


def ml_series_reference(rho: float, mu: float, z: float, tol: float = 1e-20):
    """Arbitrary-precision sum of sum_k z^k / gamma(rho*k + mu).

    Returns an ``mpmath.mpf`` whose absolute error is below ``tol``.  The
    working precision is chosen from the largest partial term (~exp(s),
    s = |z|^(1/rho)); if that would exceed the module budget a
    CancellationError is raised and the caller should use the stepping
    oracle instead.
    """
    rho = float(rho)
    mu = float(mu)
    z = float(z)
    tol = float(tol)
    if not (0.0 < rho <= 1.0):
        raise DomainError(f"rho must be in (0, 1], got {rho!r}")
    if mu <= 0.0:
        raise DomainError(f"mu must be > 0, got {mu!r}")
    if z > 0.0:
        raise DomainError(f"reference series expects z <= 0, got {z!r}")
    if tol <= 0.0:
        raise DomainError("tol must be positive")

    t = -z
    s = t ** (1.0 / rho) if t > 0.0 else 0.0
    digits_cancelled = s * math.log10(math.e)
    dps = int(digits_cancelled - math.log10(tol)) + 15
    if dps > SERIES_DPS_BUDGET:
        raise CancellationError(
            f"series needs ~{dps} digits (budget {SERIES_DPS_BUDGET}); "
            "argument too large for the direct series"
        )

    with mp.workdps(dps):
        zz = mp.mpf(z)
        mrho = mp.mpf(rho)
        mmu = mp.mpf(mu)
        total = mp.mpf(0)
        k = 0
        cutoff = mp.mpf(tol) / 100
        hump = s / rho
        while True:
            # the gamma argument must be formed in working precision: a
            # double-rounded argument times psi(a) already costs ~1e-14
            # relative per term, fatal next to exp(s)-sized terms
            term = zz**k * mp.rgamma(mrho * k + mmu)
            total += term
            if k > hump and abs(term) < cutoff:
                break
            k += 1
            if k > 100000:  # unreachable within the dps budget
                raise CancellationError("series failed to converge")
        return +total


def l1_solve_mode(
    cfg: L1SchemeConfig,
    lam: float,
    phi_n: complex,
    f_n: complex,
    final_time: float,
) -> np.ndarray:
    """March the mode ODE to ``final_time``; returns values at k*T/M.

    Weights b_j = (j+1)^(1-rho) - j^(1-rho); the lam*y term is treated
    implicitly, which is unconditionally stable for lam >= 0.  Converges to
    the closed-form solution with order 2 - rho at fixed positive time.
    """
    if lam < 0.0:
        raise DomainError(f"lam must be >= 0, got {lam!r}")
    if final_time <= 0.0:
        raise DomainError(f"final_time must be > 0, got {final_time!r}")
    m = cfg.steps
    rho = cfg.rho
    dt = final_time / m
    from .special import gamma as _gamma

    sigma = dt ** (-rho) / _gamma(2.0 - rho)
    j = np.arange(m, dtype=float)
    b = (j + 1.0) ** (1.0 - rho) - j ** (1.0 - rho)
    b[0] = 1.0  # 0^0 convention: the rho -> 1 limit must give backward Euler

    y = np.zeros(m + 1, dtype=complex)
    dy = np.zeros(m + 1, dtype=complex)  # dy[k] = y[k] - y[k-1]
    y[0] = phi_n
    denom = sigma * b[0] + lam
    for n in range(1, m + 1):
        # history sum: sum_{j=1}^{n-1} b_j * (y[n-j] - y[n-j-1])
        hist = np.dot(b[1:n], dy[n - 1 : 0 : -1]) if n > 1 else 0.0
        y[n] = (f_n + sigma * (b[0] * y[n - 1] - hist)) / denom
        dy[n] = y[n] - y[n - 1]
    return y


__all__ = ["L1SchemeConfig", "ml_series_reference", "l1_solve_mode", "SERIES_DPS_BUDGET"]
