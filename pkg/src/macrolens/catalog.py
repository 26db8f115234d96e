"""The three two-branch state families studied by the package.

Each family provides branches |b1>, |b2> with equal coefficients 1/sqrt(2)
together with the superpositions psi_pm proportional to |b1> +- |b2>:

* css: coherent branches |alpha> and |-alpha> (even/odd cat superpositions)
* psv: sums/differences of m- and (m+1)-photon-subtracted squeezed vacuum
* dfs: displaced (|0> +- |1>)/sqrt(2) branches
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distinguishability import BranchSet, d_kd
from .errors import InvalidArgumentError, UnsupportedRangeError
from .fock import (
    FockVector,
    coherent_state,
    displace,
    fock_state,
    squeezed_vacuum,
    subtract_photons,
    superpose,
)
from .measurement import DetectorModel

FAMILIES = ("css", "psv", "dfs")


@dataclass(frozen=True)
class TwoBranchState:
    """A B=2 branch set with its derived superpositions psi_pm."""

    branch_set: BranchSet
    psi_plus: FockVector
    psi_minus: FockVector
    family: str
    params: dict
    recommended_homodyne_angle: float


def _two_branch(b1: FockVector, b2: FockVector, family: str, params: dict,
                angle: float) -> TwoBranchState:
    coeffs = np.array([1.0, 1.0]) / math.sqrt(2.0)
    return TwoBranchState(
        branch_set=BranchSet(coeffs, (b1, b2)),
        psi_plus=superpose(b1, b2, +1),
        psi_minus=superpose(b1, b2, -1),
        family=family,
        params=params,
        recommended_homodyne_angle=angle,
    )


def css(alpha: float, tail_tolerance: float | None = None) -> TwoBranchState:
    """Coherent state superposition: branches |alpha> and |-alpha>."""
    alpha = float(alpha)
    if not (0.0 < alpha <= 4.0):
        raise UnsupportedRangeError(f"css requires 0 < alpha <= 4, got {alpha}")
    b1 = coherent_state(alpha, tail_tolerance)
    b2 = coherent_state(-alpha, tail_tolerance)
    return _two_branch(b1, b2, "css", {"alpha": alpha}, angle=0.0)


def psv(r: float, m: int = 1, tail_tolerance: float | None = None) -> TwoBranchState:
    """Photon-subtracted squeezed vacuum superposition.

    Branches are (u +- v)/sqrt(2) with u, v the normalized m- and
    (m+1)-photon-subtracted squeezed vacua; psi_plus is then proportional
    to a^m S|0> and psi_minus to a^{m+1} S|0>.  The squeeze applied here is
    exp[(r/2)(a^dag^2 - a^2)], i.e. the p quadrature is squeezed: photon
    subtraction then carves two lobes along the wide x axis and the
    branches are well separated there.  (With the opposite sign the lobe
    amplitudes cancel and the branches barely separate at any angle.)
    The recommended homodyne angle is whichever of {0, pi/2} best
    separates the branches with an ideal detector.
    """
    r = float(r)
    if not (0.0 <= r <= 2.5):
        raise UnsupportedRangeError(f"psv requires 0 <= r <= 2.5, got {r}")
    if m < 1:
        raise InvalidArgumentError("m must be a positive integer")
    # r = 0 is the vacuum: the subtraction below fails as degenerate
    sv = squeezed_vacuum(-r, tail_tolerance)
    u, _ = subtract_photons(sv, m)
    v, _ = subtract_photons(sv, m + 1)
    # u and v have opposite photon-number parity, hence are orthogonal
    b1 = superpose(u, v, +1)
    b2 = superpose(u, v, -1)
    state = _two_branch(b1, b2, "psv", {"r": r, "m": m}, angle=0.0)
    ideal = [
        d_kd(state.branch_set, DetectorModel.homodyne(angle=phi))
        for phi in (0.0, math.pi / 2.0)
    ]
    best = 0.0 if ideal[0] >= ideal[1] else math.pi / 2.0
    if best != 0.0:
        state = TwoBranchState(
            branch_set=state.branch_set,
            psi_plus=state.psi_plus,
            psi_minus=state.psi_minus,
            family=state.family,
            params=state.params,
            recommended_homodyne_angle=best,
        )
    return state


def dfs(alpha: float, tail_tolerance: float | None = None) -> TwoBranchState:
    """Displaced Fock superposition: branches D(alpha)(|0> +- |1>)/sqrt(2)."""
    alpha = float(alpha)
    if not (0.0 <= alpha <= 4.0):
        raise UnsupportedRangeError(f"dfs requires 0 <= alpha <= 4, got {alpha}")
    vac = fock_state(0, 4)
    one = fock_state(1, 4)
    b1 = displace(superpose(vac, one, +1), alpha)
    b2 = displace(superpose(vac, one, -1), alpha)
    return _two_branch(b1, b2, "dfs", {"alpha": alpha}, angle=0.0)


def build(family: str, tail_tolerance: float | None = None, **params) -> TwoBranchState:
    """Construct a catalog state by family name (CLI entry point)."""
    if family == "css":
        return css(params["alpha"], tail_tolerance)
    if family == "psv":
        return psv(params["r"], params.get("m", 1), tail_tolerance)
    if family == "dfs":
        return dfs(params["alpha"], tail_tolerance)
    raise InvalidArgumentError(f"unknown family {family!r}; expected one of {FAMILIES}")
