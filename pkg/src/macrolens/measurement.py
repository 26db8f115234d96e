"""Detector models and outcome distributions.

Homodyne detection at angle phi samples the rotated quadrature
x_phi = (a e^{-i phi} + a^dag e^{i phi}) / sqrt(2); a photon-number
resolving detector (PNRD) samples the photon number.  Finite detector
resolution is modeled as a Gaussian blur of width sigma applied to the
ideal outcome distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .errors import (
    GridCoverageError,
    InvalidArgumentError,
    UsePmfDirectly,
)
from .fock import Ensemble, FockVector, quadrature_stats

HOMODYNE = "homodyne"
PNRD = "pnrd"

DEFAULT_GRID_POINTS = 2048
_MASS_TOL = 1e-6


@dataclass(frozen=True)
class DetectorModel:
    """Measurement kind plus Gaussian resolution sigma.

    sigma is in quadrature units for homodyne detection and in
    photon-number units for a PNRD; the two are not interconvertible.
    """

    kind: str
    angle: float = 0.0
    sigma: float = 0.0

    def __post_init__(self):
        if self.kind not in (HOMODYNE, PNRD):
            raise InvalidArgumentError(f"unknown detector kind {self.kind!r}")
        if not math.isfinite(self.angle):
            raise InvalidArgumentError("angle must be finite")
        if not (math.isfinite(self.sigma) and self.sigma >= 0.0):
            raise InvalidArgumentError("sigma must be finite and >= 0")

    @classmethod
    def homodyne(cls, angle: float = 0.0, sigma: float = 0.0) -> "DetectorModel":
        return cls(HOMODYNE, angle=angle, sigma=sigma)

    @classmethod
    def pnrd(cls, sigma: float = 0.0) -> "DetectorModel":
        return cls(PNRD, sigma=sigma)


@dataclass(frozen=True)
class Pdf:
    """Probability density sampled on a uniform grid."""

    grid_min: float
    grid_max: float
    n_points: int
    values: np.ndarray

    def __post_init__(self):
        if self.n_points < 64:
            raise InvalidArgumentError("a Pdf needs at least 64 grid points")
        if self.grid_max <= self.grid_min:
            raise InvalidArgumentError("grid_max must exceed grid_min")
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.n_points,):
            raise InvalidArgumentError("values length must equal n_points")
        if vals.min() < -1e-12:
            raise InvalidArgumentError(
                f"pdf has a negative value {vals.min()} below the noise floor"
            )
        np.clip(vals, 0.0, None, out=vals)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        mass = self.integral()
        if abs(mass - 1.0) > _MASS_TOL:
            raise InvalidArgumentError(f"pdf integrates to {mass}, expected 1")

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.grid_min, self.grid_max, self.n_points)

    @property
    def dx(self) -> float:
        return (self.grid_max - self.grid_min) / (self.n_points - 1)

    def integral(self) -> float:
        return float(np.trapezoid(self.values, dx=self.dx))

    def mean(self) -> float:
        return float(np.trapezoid(self.xs * self.values, dx=self.dx))

    def variance(self) -> float:
        mu = self.mean()
        return float(np.trapezoid((self.xs - mu) ** 2 * self.values, dx=self.dx))

    def same_grid(self, other: "Pdf") -> bool:
        return (
            self.n_points == other.n_points
            and self.grid_min == other.grid_min
            and self.grid_max == other.grid_max
        )


@dataclass(frozen=True)
class Pmf:
    """Probability mass function over photon counts 0..cutoff-1."""

    probabilities: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probabilities, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise InvalidArgumentError("probabilities must be a non-empty 1-D sequence")
        if probs.min() < -1e-12:
            raise InvalidArgumentError("pmf has a significantly negative entry")
        np.clip(probs, 0.0, None, out=probs)
        total = probs.sum()
        if abs(total - 1.0) > 1e-8:
            raise InvalidArgumentError(f"pmf sums to {total}, expected 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probabilities", probs)

    @property
    def cutoff(self) -> int:
        return self.probabilities.size


def hermite_functions(x, n_max: int):
    """Harmonic-oscillator eigenfunctions psi_n(x) for n = 0..n_max.

    psi_n(x) = H_n(x) e^{-x^2/2} / (pi^{1/4} sqrt(2^n n!)), evaluated with
    the normalized three-term recurrence.  To stay accurate far into the
    classically forbidden region the Gaussian factor is carried as a
    separate per-point exponent, so values remain finite (underflowing
    cleanly to zero) for large |x| and n.

    Accepts a scalar or 1-D array; returns shape (n_max+1,) or
    (n_max+1, len(x)).
    """
    if n_max < 0:
        raise InvalidArgumentError("n_max must be >= 0")
    scalar = np.isscalar(x)
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((n_max + 1, xs.size))
    gauss_log = -0.5 * xs * xs
    prev = np.zeros_like(xs)
    cur = np.full_like(xs, math.pi ** -0.25)
    expo = np.zeros_like(xs)  # log of the factor pulled out of the recurrence
    out[0] = cur * np.exp(expo + gauss_log)
    rescale = 120.0 * math.log(10.0)
    for n in range(n_max):
        nxt = math.sqrt(2.0 / (n + 1)) * xs * cur - math.sqrt(n / (n + 1)) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > 1e120
        if big.any():
            prev[big] *= 1e-120
            cur[big] *= 1e-120
            expo[big] += rescale
        out[n + 1] = cur * np.exp(expo + gauss_log)
    return out[:, 0] if scalar else out


def _components(subject) -> list[tuple[float, FockVector]]:
    if isinstance(subject, FockVector):
        return [(1.0, subject)]
    if isinstance(subject, Ensemble):
        return subject.padded_components()
    raise InvalidArgumentError("subject must be a FockVector or Ensemble")


def default_homodyne_grid(
    subject, angle: float, sigma: float = 0.0, n_points: int = DEFAULT_GRID_POINTS
) -> tuple[float, float, int]:
    """Grid spanning every component's rotated mean +- 6(sqrt(var)+sigma)+1."""
    stats = [quadrature_stats(s, angle) for _, s in _components(subject)]
    means = [m for m, _ in stats]
    spread = 6.0 * (math.sqrt(max(v for _, v in stats)) + sigma) + 1.0
    return min(means) - spread, max(means) + spread, n_points


def homodyne_pdf(subject, angle: float = 0.0, grid=None) -> Pdf:
    """Quadrature outcome distribution P(x) at the given homodyne angle.

    For a pure state P(x) = |sum_n c_n e^{-i n phi} psi_n(x)|^2; for an
    ensemble the weighted average of the component distributions.
    """
    comps = _components(subject)
    if grid is None:
        grid = default_homodyne_grid(subject, angle)
    grid_min, grid_max, n_points = grid
    xs = np.linspace(grid_min, grid_max, n_points)
    n_max = max(s.cutoff for _, s in comps) - 1
    psi = hermite_functions(xs, n_max)
    values = np.zeros(n_points)
    for weight, state in comps:
        ns = np.arange(state.cutoff)
        rotated = state.amplitudes * np.exp(-1j * ns * angle)
        wave = rotated @ psi[: state.cutoff]
        values += weight * np.abs(wave) ** 2
    dx = (grid_max - grid_min) / (n_points - 1)
    mass = float(np.trapezoid(values, dx=dx))
    if mass < 1.0 - _MASS_TOL:
        raise GridCoverageError(
            f"grid [{grid_min}, {grid_max}] captures only {mass} of the state"
        )
    return Pdf(grid_min, grid_max, n_points, values)


def pnrd_pmf(subject) -> Pmf:
    """Photon-count distribution P(n) = |c_n|^2 (weight-averaged for mixtures)."""
    comps = _components(subject)
    cutoff = max(s.cutoff for _, s in comps)
    probs = np.zeros(cutoff)
    for weight, state in comps:
        probs[: state.cutoff] += weight * np.abs(state.amplitudes) ** 2
    return Pmf(probs)


def blur_pdf(pdf: Pdf, sigma: float) -> Pdf:
    """Convolve a Pdf with a Gaussian kernel of width sigma.

    The grid is extended by 6 sigma on both sides so no mass leaves it.
    """
    if sigma < 0.0 or not math.isfinite(sigma):
        raise InvalidArgumentError("sigma must be finite and >= 0")
    if sigma == 0.0:
        return pdf
    dx = pdf.dx
    pad = math.ceil(6.0 * sigma / dx)
    values = np.concatenate([np.zeros(pad), pdf.values, np.zeros(pad)])
    offsets = np.arange(-pad, pad + 1) * dx
    kernel = np.exp(-0.5 * (offsets / sigma) ** 2)
    kernel /= kernel.sum()  # discrete normalization preserves sum(v)*dx
    blurred = np.convolve(values, kernel, mode="same")
    return Pdf(
        pdf.grid_min - pad * dx,
        pdf.grid_max + pad * dx,
        pdf.n_points + 2 * pad,
        blurred,
    )


def blur_pmf(pmf: Pmf, sigma: float, n_points: int | None = None,
             n_max: int | None = None) -> Pdf:
    """Continuous distribution from a Pmf read out with Gaussian noise.

    The result lives on lambda in [-6 sigma, n_max + 6 sigma] and is a
    mixture of Gaussians of width sigma centered on the integer outcomes.
    ``n_max`` defaults to the largest outcome with non-negligible weight;
    pass it explicitly to place several Pmfs on one shared grid.
    """
    if sigma < 0.0 or not math.isfinite(sigma):
        raise InvalidArgumentError("sigma must be finite and >= 0")
    if sigma == 0.0:
        raise UsePmfDirectly("sigma = 0: keep using the discrete Pmf")
    probs = pmf.probabilities
    significant = np.nonzero(probs > probs.max() * 1e-16)[0]
    # The grid covers the effective support only, with a step fixed at
    # sigma/16: grids built from slightly different supports (e.g. after
    # zero-padding the Pmf at a larger Fock cutoff) then share their sample
    # points and agree to the tail mass beyond 6 sigma.
    lo = -6.0 * sigma
    top = int(significant[-1]) if n_max is None else int(n_max)
    hi = top + 6.0 * sigma
    if n_points is None:
        step = sigma / 16.0
        n_points = int(math.ceil((hi - lo) / step)) + 1
        hi = lo + (n_points - 1) * step
    xs = np.linspace(lo, hi, n_points)
    norm = 1.0 / (sigma * math.sqrt(2.0 * math.pi))
    values = np.zeros(n_points)
    for n in significant:
        values += probs[n] * norm * np.exp(-0.5 * ((xs - n) / sigma) ** 2)
    return Pdf(lo, hi, n_points, values)


@dataclass(frozen=True)
class WignerField:
    """Wigner function sampled on a rectangular phase-space grid."""

    xs: np.ndarray
    ps: np.ndarray
    values: np.ndarray  # shape (len(xs), len(ps))

    def integral(self) -> float:
        inner = np.trapezoid(self.values, x=self.ps, axis=1)
        return float(np.trapezoid(inner, x=self.xs))

    def marginal_x(self) -> np.ndarray:
        """Integrate out p; equals the phi=0 homodyne PDF on self.xs."""
        return np.trapezoid(self.values, x=self.ps, axis=1)


def _wigner_pure(state: FockVector, xgrid: np.ndarray, pgrid: np.ndarray) -> np.ndarray:
    X, P = np.meshgrid(xgrid, pgrid, indexing="ij")
    r2 = X**2 + P**2
    envelope = np.exp(-r2) / math.pi
    z = X - 1j * P
    c = state.amplitudes
    dim = c.size
    rho = np.outer(c, np.conj(c))
    w = np.zeros_like(X, dtype=complex)
    for m in range(dim):
        for n in range(m + 1):
            if abs(rho[m, n]) < 1e-18:
                continue
            coeff = (-1.0) ** n * math.exp(
                0.5 * ((m - n) * math.log(2.0) + gammaln(n + 1) - gammaln(m + 1))
            )
            kernel = coeff * z ** (m - n) * eval_genlaguerre(n, m - n, 2.0 * r2)
            if m == n:
                w += rho[m, n] * kernel
            else:
                w += rho[m, n] * kernel + np.conj(rho[m, n] * kernel)
    return envelope * w.real


def wigner(subject, x_range=(-5.0, 5.0), p_range=(-5.0, 5.0), n_points: int = 101) -> WignerField:
    """Wigner function W(x, p), normalized so that its double integral is 1.

    Marginals reproduce the homodyne distributions: integrating out p gives
    the phi=0 quadrature PDF.
    """
    if n_points < 2:
        raise InvalidArgumentError("n_points must be >= 2")
    xs = np.linspace(x_range[0], x_range[1], n_points)
    ps = np.linspace(p_range[0], p_range[1], n_points)
    values = np.zeros((n_points, n_points))
    for weight, state in _components(subject):
        values += weight * _wigner_pure(state, xs, ps)
    field = WignerField(xs, ps, values)
    if abs(field.integral() - 1.0) > 1e-4:
        raise GridCoverageError(
            f"phase-space grid captures {field.integral()} of the Wigner mass"
        )
    return field
