"""Truncated Fourier representation of real periodic functions on T^N.

Coefficients are taken against the orthonormal basis (2*pi)^(-N/2) e^{i n x},
so Parseval reads sum |g_n|^2 = integral |g|^2 dx, and the discrete grid sum
(2*pi/P)^N sum_k |g(x_k)|^2 matches it exactly for band-limited fields.

The coefficient array keeps numpy's FFT layout; axis frequencies follow the
convention n in {-P/2+1, ..., P/2}, i.e. the Nyquist index carries +P/2
(same symbol values as -P/2 for the even symbols used here).  Grid samples
live at x_k = 2*pi*k/P, the canonical parametrization of the torus.
"""

import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

from .errors import (
    DomainError,
    InsufficientDataError,
    PositivityError,
    ShapeError,
    SymmetryError,
)

_HERMITIAN_RTOL = 1e-10
_IMAG_RESIDUE_TOL = 1e-12
_BAND_LIMIT_RTOL = 1e-13


@dataclass(frozen=True)
class TorusGrid:
    """Uniform tensor grid with P points per axis on the N-torus."""

    dim: int
    points_per_dim: int

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainError(f"dim must be an integer >= 1, got {self.dim!r}")
        p = self.points_per_dim
        if int(p) != p or p < 2 or p % 2:
            raise DomainError(f"points_per_dim must be even and >= 2, got {p!r}")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "points_per_dim", int(p))

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_dim,) * self.dim

    @property
    def total_modes(self) -> int:
        return self.points_per_dim**self.dim

    def axis_frequencies(self) -> np.ndarray:
        """Integer frequencies per axis in FFT index order."""
        p = self.points_per_dim
        k = np.arange(p)
        return np.where(k <= p // 2, k, k - p)

    def frequency_mesh(self) -> tuple[np.ndarray, ...]:
        f = self.axis_frequencies()
        return np.meshgrid(*([f] * self.dim), indexing="ij")

    def abs2_mesh(self) -> np.ndarray:
        """|n|^2 over the frequency box."""
        out = np.zeros(self.shape)
        for axis_f in self.frequency_mesh():
            out += axis_f.astype(float) ** 2
        return out

    def axis_points(self) -> np.ndarray:
        p = self.points_per_dim
        return 2.0 * math.pi * np.arange(p) / p

    def point_mesh(self) -> tuple[np.ndarray, ...]:
        x = self.axis_points()
        return np.meshgrid(*([x] * self.dim), indexing="ij")

    def frequencies(self) -> Iterator[tuple[int, ...]]:
        """All multi-indices n in the box, in coefficient-array order."""
        f = [int(v) for v in self.axis_frequencies()]
        import itertools

        return itertools.product(f, repeat=self.dim)


def _reflect(coeffs: np.ndarray) -> np.ndarray:
    """Coefficient array at -n (indices negated mod P on every axis)."""
    out = coeffs
    for ax in range(out.ndim):
        out = np.roll(np.flip(out, axis=ax), 1, axis=ax)
    return out


@dataclass
class SpectralField:
    """Fourier coefficients of a (nominally real) function on a TorusGrid."""

    grid: TorusGrid
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.shape != self.grid.shape:
            if c.size == self.grid.total_modes:
                c = c.reshape(self.grid.shape)
            else:
                raise ShapeError(
                    f"coefficient array of size {c.size} does not match grid "
                    f"with {self.grid.total_modes} modes"
                )
        self.coeffs = c

    @classmethod
    def zeros(cls, grid: TorusGrid) -> "SpectralField":
        return cls(grid, np.zeros(grid.shape, dtype=complex))

    @classmethod
    def from_modes(
        cls, grid: TorusGrid, modes: Mapping[tuple[int, ...], complex]
    ) -> "SpectralField":
        """Build a field from {multi-index: coefficient}; no symmetrization."""
        f = cls.zeros(grid)
        p = grid.points_per_dim
        half = p // 2
        for n, c in modes.items():
            if len(n) != grid.dim:
                raise ShapeError(f"mode {n!r} has wrong dimension for grid")
            if any(not (-half + 1 <= ni <= half) for ni in n):
                raise DomainError(f"mode {n!r} outside the frequency box")
            idx = tuple(ni % p for ni in n)
            f.coeffs[idx] += complex(c)
        return f

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs.copy())

    def hermitian_defect(self) -> float:
        """Max |g_{-n} - conj(g_n)| relative to the largest coefficient."""
        scale = float(np.max(np.abs(self.coeffs)))
        if scale == 0.0:
            return 0.0
        return float(np.max(np.abs(_reflect(self.coeffs).conj() - self.coeffs))) / scale

    def l2(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def __add__(self, other: "SpectralField") -> "SpectralField":
        if other.grid != self.grid:
            raise ShapeError("fields live on different grids")
        return SpectralField(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        if other.grid != self.grid:
            raise ShapeError("fields live on different grids")
        return SpectralField(self.grid, self.coeffs - other.coeffs)

    def __mul__(self, scalar: complex) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * scalar)

    __rmul__ = __mul__


def analyze(grid: TorusGrid, samples: np.ndarray) -> SpectralField:
    """Samples on the grid -> orthonormal-basis coefficients.

    Real input is Hermitian-symmetrized exactly, so synthesize() round-trips
    to a real field at machine precision.
    """
    s = np.asarray(samples, dtype=float)
    if s.size != grid.total_modes:
        raise ShapeError(
            f"expected {grid.total_modes} samples for grid {grid.shape}, got {s.size}"
        )
    s = s.reshape(grid.shape)
    scale = (2.0 * math.pi) ** (grid.dim / 2.0) / grid.total_modes
    c = np.fft.fftn(s) * scale
    c = 0.5 * (c + _reflect(c).conj())  # exact Hermitian symmetry
    return SpectralField(grid, c)


def synthesize(field: SpectralField) -> np.ndarray:
    """Coefficients -> real samples at the grid points.

    Raises SymmetryError when the Hermitian defect exceeds 1e-10; smaller
    defects are symmetrized away and the residual imaginary part (checked
    against 1e-12) is discarded.
    """
    defect = field.hermitian_defect()
    if defect > _HERMITIAN_RTOL:
        raise SymmetryError(
            f"field is not Hermitian-symmetric (defect {defect:.3e} > {_HERMITIAN_RTOL})"
        )
    grid = field.grid
    c = 0.5 * (field.coeffs + _reflect(field.coeffs).conj())
    scale = grid.total_modes / (2.0 * math.pi) ** (grid.dim / 2.0)
    u = np.fft.ifftn(c) * scale
    scale_ref = float(np.max(np.abs(u))) or 1.0
    residue = float(np.max(np.abs(u.imag))) / scale_ref
    if residue > _IMAG_RESIDUE_TOL:
        raise SymmetryError(f"imaginary residue {residue:.3e} after symmetrization")
    return np.ascontiguousarray(u.real)


@dataclass(frozen=True)
class EllipticSymbol:
    """Homogeneous elliptic symbol A(n) = sum_{|alpha|=m} a_alpha n^alpha.

    Coefficients are real and every multi-index must have total order m.
    Positivity away from n = 0 is grid-dependent and checked by
    :meth:`validate_on_grid` (the solver does this on construction of a
    problem).
    """

    order: int
    coefficients: Mapping[tuple[int, ...], float]

    def __post_init__(self):
        m = self.order
        if int(m) != m or m < 2 or m % 2:
            raise DomainError(f"order must be an even integer >= 2, got {m!r}")
        object.__setattr__(self, "order", int(m))
        coeffs = {}
        dim = None
        for alpha, a in self.coefficients.items():
            alpha = tuple(int(x) for x in alpha)
            if any(x < 0 for x in alpha):
                raise DomainError(f"multi-index {alpha!r} has negative entries")
            if sum(alpha) != self.order:
                raise DomainError(
                    f"multi-index {alpha!r} has order {sum(alpha)}, expected {self.order}"
                )
            if dim is None:
                dim = len(alpha)
            elif len(alpha) != dim:
                raise DomainError("multi-indices of mixed dimension")
            coeffs[alpha] = float(a)
        if not coeffs:
            raise DomainError("symbol needs at least one coefficient")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "dim", dim)

    def __call__(self, n) -> float:
        return symbol_eval(self, n)

    def values_on_grid(self, grid: TorusGrid) -> np.ndarray:
        """A(n) over the grid's frequency box."""
        if grid.dim != self.dim:
            raise ShapeError(f"symbol has dim {self.dim}, grid has dim {grid.dim}")
        mesh = grid.frequency_mesh()
        out = np.zeros(grid.shape)
        for alpha, a in self.coefficients.items():
            term = np.full(grid.shape, a)
            for ax, power in enumerate(alpha):
                if power:
                    term = term * mesh[ax].astype(float) ** power
            out += term
        return out

    def validate_on_grid(self, grid: TorusGrid) -> np.ndarray:
        """Check A > 0 off the zero mode; returns the eigenvalue array."""
        vals = self.values_on_grid(grid)
        zero = (0,) * grid.dim
        mask = np.ones(grid.shape, dtype=bool)
        mask[zero] = False
        if np.any(vals[mask] <= 0.0):
            bad = int(np.argmax(vals[mask] <= 0.0))
            raise PositivityError(
                f"symbol is not positive on the grid (first failure among "
                f"nonzero modes, index {bad}); not elliptic-positive here"
            )
        return vals


def symbol_eval(sym: EllipticSymbol, n) -> float:
    """A(n) for a single frequency multi-index."""
    n = tuple(int(x) for x in n)
    if len(n) != sym.dim:
        raise ShapeError(f"frequency {n!r} has wrong dimension for symbol")
    total = 0.0
    for alpha, a in sym.coefficients.items():
        term = a
        for ni, power in zip(n, alpha):
            if power:
                term *= float(ni) ** power
        total += term
    return total


def laplacian_symbol(dim: int) -> EllipticSymbol:
    """A(n) = |n|^2."""
    coeffs = {}
    for j in range(dim):
        alpha = [0] * dim
        alpha[j] = 2
        coeffs[tuple(alpha)] = 1.0
    return EllipticSymbol(order=2, coefficients=coeffs)


def bilaplacian_symbol(dim: int) -> EllipticSymbol:
    """A(n) = |n|^4."""
    coeffs = {}
    for i in range(dim):
        for j in range(dim):
            alpha = [0] * dim
            alpha[i] += 2
            alpha[j] += 2
            key = tuple(alpha)
            coeffs[key] = coeffs.get(key, 0.0) + 1.0
    return EllipticSymbol(order=4, coefficients=coeffs)


def sobolev_norm(f: SpectralField, a: float) -> float:
    """Sobolev norm: sqrt(sum (1+|n|^2)^a |g_n|^2) over the frequency box."""
    a = float(a)
    if a < 0.0:
        raise DomainError(f"exponent must be >= 0, got {a!r}")
    w = (1.0 + f.grid.abs2_mesh()) ** a
    return math.sqrt(float(np.sum(w * np.abs(f.coeffs) ** 2)))


def shell_index(grid: TorusGrid) -> np.ndarray:
    """Integer shell r = round(|n|) for every mode."""
    return np.rint(np.sqrt(grid.abs2_mesh())).astype(int)


def shell_maxima(f: SpectralField) -> np.ndarray:
    """Per-shell maximum of |g_n|, indexed by shell radius 0..r_max."""
    r = shell_index(f.grid).ravel()
    mags = np.abs(f.coeffs).ravel()
    out = np.zeros(int(r.max()) + 1)
    np.maximum.at(out, r, mags)
    return out


def decay_exponent(f: SpectralField) -> float:
    """Least-squares slope of log|g_n| against log(1+|n|) over shell maxima.

    Returns -inf for fields whose spectrum stops strictly inside the box
    ("spectrally exact"); otherwise requires at least 8 nonzero shells.
    A field in the Sobolev class of order a needs a slope below
    -a - N/2, which is how the diagnostics interpret the fit.
    """
    mx = shell_maxima(f)
    scale = float(mx.max())
    if scale == 0.0:
        return -math.inf
    nz = mx > _BAND_LIMIT_RTOL * scale
    last = int(np.max(np.nonzero(nz)))
    if last < len(mx) - 1:
        # zero tail: band-limited strictly inside the box
        return -math.inf
    radii = np.nonzero(nz)[0]
    if len(radii) < 8:
        raise InsufficientDataError(
            f"need >= 8 nonzero shells to fit a decay exponent, have {len(radii)}"
        )
    x = np.log1p(radii.astype(float))
    y = np.log(mx[radii])
    slope = np.polyfit(x, y, 1)[0]
    return float(slope)


__all__ = [
    "TorusGrid",
    "SpectralField",
    "EllipticSymbol",
    "analyze",
    "synthesize",
    "symbol_eval",
    "laplacian_symbol",
    "bilaplacian_symbol",
    "sobolev_norm",
    "shell_index",
    "shell_maxima",
    "decay_exponent",
]
