"""Result tables: single-point computations, parameter sweeps, and the
data behind each of the package's reference figures.

Everything here emits numbers, not images: each figure is a ResultTable
whose CSV/JSON rendering a plotting tool can consume directly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from ._version import __version__
from .catalog import FAMILIES, TwoBranchState, build, css
from .distinguishability import both_measures, dfs_kd_closed_form
from .errors import InvalidArgumentError
from .fock import Ensemble, coherent_state, moments
from .macroscopicity import n_fluct, report
from .measurement import DetectorModel, wigner

CONVENTION = "x=(a+adag)/sqrt(2); p=(a-adag)/(i*sqrt(2)); vacuum var=1/2"

FIGURE_ALIASES = {
    "fig-wigner": 1,
    "fig-css": 2,
    "fig-psv": 3,
    "fig-dfs": 4,
    "fig-noise-css": 5,
    "fig-noise-psv": 6,
    "fig-noise-dfs": 7,
    "fig-summary": 8,
}

ALL_MEASURES = ("n_fluct", "mean_n", "d_bc", "d_kd", "m_bc", "m_kd")


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.12g}"


@dataclass
class ResultTable:
    """Rectangular table of results plus an audit metadata block."""

    columns: list
    rows: list
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise InvalidArgumentError("table rows must match the column count")

    def to_csv(self) -> str:
        lines = [f"# {key} = {value}" for key, value in self.metadata.items()]
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(_fmt(v) for v in row))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        def jsonify(v):
            if isinstance(v, str):
                return v
            if isinstance(v, (int, np.integer)):
                return int(v)
            return float(_fmt(v))  # 12-significant-digit rounding

        doc = {
            "metadata": self.metadata,
            "columns": self.columns,
            "rows": [[jsonify(v) for v in row] for row in self.rows],
        }
        return json.dumps(doc, indent=2) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise InvalidArgumentError(f"unknown output format {fmt!r}")

    def column(self, name: str) -> list:
        return [row[self.columns.index(name)] for row in self.rows]


@dataclass(frozen=True)
class SweepSpec:
    """Declarative description of a parameter x sigma sweep."""

    family: str
    start: float
    stop: float
    steps: int
    detector: str
    sigmas: tuple
    angle: float | None = None
    m: int = 1
    measures: tuple = ALL_MEASURES
    out: str | None = None
    fmt: str = "csv"

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidArgumentError(f"unknown family {self.family!r}")
        if self.steps < 2:
            raise InvalidArgumentError("steps must be >= 2")
        if not self.start < self.stop:
            raise InvalidArgumentError("start must be less than stop")
        if any(s < 0 for s in self.sigmas) or not self.sigmas:
            raise InvalidArgumentError("sigma entries must be >= 0")
        unknown = set(self.measures) - set(ALL_MEASURES)
        if unknown:
            raise InvalidArgumentError(f"unknown measures {sorted(unknown)}")
        if self.fmt not in ("csv", "json"):
            raise InvalidArgumentError(f"unknown format {self.fmt!r}")


_SWEEP_KEYS = {
    "family": str,
    "start": float,
    "stop": float,
    "steps": int,
    "detector": str,
    "sigma": str,
    "angle": float,
    "m": int,
    "measures": str,
    "out": str,
    "format": str,
}


def parse_sweep_config(text: str) -> SweepSpec:
    """Parse a flat ``key = value`` config file into a SweepSpec.

    Unknown keys are errors; '#' starts a comment line.
    """
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidArgumentError(f"config line {lineno} is not 'key = value'")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _SWEEP_KEYS:
            raise InvalidArgumentError(f"unknown config key {key!r} (line {lineno})")
        if key in raw:
            raise InvalidArgumentError(f"duplicate config key {key!r} (line {lineno})")
        raw[key] = _SWEEP_KEYS[key](value)
    for required in ("family", "start", "stop", "steps", "detector", "sigma"):
        if required not in raw:
            raise InvalidArgumentError(f"config is missing the {required!r} key")
    sigmas = tuple(float(s) for s in raw["sigma"].split(","))
    measures = (
        tuple(m.strip() for m in raw["measures"].split(","))
        if "measures" in raw
        else ALL_MEASURES
    )
    return SweepSpec(
        family=raw["family"],
        start=raw["start"],
        stop=raw["stop"],
        steps=raw["steps"],
        detector=raw["detector"],
        sigmas=sigmas,
        angle=raw.get("angle"),
        m=raw.get("m", 1),
        measures=measures,
        out=raw.get("out"),
        fmt=raw.get("format", "csv"),
    )


def _param_name(family: str) -> str:
    return "r" if family == "psv" else "alpha"


def _detector_for(state: TwoBranchState, kind: str, sigma: float,
                  angle: float | None) -> DetectorModel:
    if kind == "homodyne":
        phi = state.recommended_homodyne_angle if angle is None else angle
        return DetectorModel.homodyne(angle=phi, sigma=sigma)
    if kind == "pnrd":
        return DetectorModel.pnrd(sigma=sigma)
    raise InvalidArgumentError(f"unknown detector kind {kind!r}")


def _base_metadata(**extra) -> dict:
    meta = {"tool_version": __version__, "convention": CONVENTION}
    meta.update(extra)
    return meta


def _max_cutoff(state: TwoBranchState) -> int:
    return max(
        state.psi_plus.cutoff,
        state.psi_minus.cutoff,
        *(b.cutoff for b in state.branch_set.branches),
    )


def compute(family: str, params: dict, detector: str, sigma: float,
            angle: float | None = None, sign: int = -1) -> ResultTable:
    """One MacroReport rendered as a single table row."""
    state = build(family, **params)
    det = _detector_for(state, detector, sigma, angle)
    rep = report(state, sign, det)
    param = state.params[_param_name(family)]
    columns = [
        "family", "sign", "detector", "angle", "sigma", _param_name(family),
        "mean_n", "n_fluct", "d_bc", "d_kd", "m_bc", "m_kd",
    ]
    row = [
        family, "+" if sign == +1 else "-", det.kind, det.angle, det.sigma, param,
        rep.mean_n, rep.n_fluct, rep.d_bc, rep.d_kd, rep.m_bc, rep.m_kd,
    ]
    meta = _base_metadata(cutoff=_max_cutoff(state))
    if family == "psv":
        meta["m"] = state.params["m"]
    return ResultTable(columns, [row], meta)


def sweep(spec: SweepSpec) -> ResultTable:
    """Cartesian product of parameter x sigma rows, ascending in both."""
    params = np.linspace(spec.start, spec.stop, spec.steps)
    columns = [_param_name(spec.family), "sigma"]
    for measure in spec.measures:
        if measure in ("d_bc", "d_kd"):
            columns.append(measure)
        else:
            columns.extend([f"{measure}_plus", f"{measure}_minus"])
    rows = []
    max_cutoff = 0
    for value in params:
        kwargs = {"m": spec.m} if spec.family == "psv" else {}
        kwargs[_param_name(spec.family)] = float(value)
        state = build(spec.family, **kwargs)
        max_cutoff = max(max_cutoff, _max_cutoff(state))
        n_plus = n_fluct(state.psi_plus)
        n_minus = n_fluct(state.psi_minus)
        mean_plus = moments(state.psi_plus).mean_n
        mean_minus = moments(state.psi_minus).mean_n
        for sigma in spec.sigmas:
            det = _detector_for(state, spec.detector, sigma, spec.angle)
            dist_bc, dist_kd = both_measures(state.branch_set, det)
            values = {
                "n_fluct": (n_plus, n_minus),
                "mean_n": (mean_plus, mean_minus),
                "d_bc": dist_bc,
                "d_kd": dist_kd,
                "m_bc": (n_plus * dist_bc, n_minus * dist_bc),
                "m_kd": (n_plus * dist_kd, n_minus * dist_kd),
            }
            row = [float(value), sigma]
            for measure in spec.measures:
                v = values[measure]
                row.extend(v if isinstance(v, tuple) else [v])
            rows.append(row)
    meta = _base_metadata(
        family=spec.family,
        detector=spec.detector,
        max_cutoff=max_cutoff,
        grid_points=2048,
    )
    if spec.family == "psv":
        meta["m"] = spec.m
    return ResultTable(columns, rows, meta)


def _figure_wigner(steps: int) -> ResultTable:
    alpha = 1.5
    # Wigner values are amplitude-level quantities: the truncation tail must
    # sit below ~1e-20 for the mixture to stay non-negative to 1e-10.
    tol = 1e-16
    state = css(alpha, tail_tolerance=tol)
    mixture = Ensemble(
        ((0.5, coherent_state(alpha, tol)), (0.5, coherent_state(-alpha, tol)))
    )
    extent = 5.0
    sup = wigner(state.psi_minus, (-extent, extent), (-extent, extent), steps)
    mix = wigner(mixture, (-extent, extent), (-extent, extent), steps)
    rows = []
    for i, x in enumerate(sup.xs):
        for j, p in enumerate(sup.ps):
            rows.append([x, p, sup.values[i, j], mix.values[i, j]])
    meta = _base_metadata(
        figure="wigner",
        alpha=alpha,
        max_cutoff=_max_cutoff(state),
        grid_points=steps,
    )
    return ResultTable(["x", "p", "w_superposition", "w_mixture"], rows, meta)


def _figure_family(family: str, start: float, stop: float, steps: int) -> ResultTable:
    """N(psi_pm) and ideal-detector distinguishabilities vs the family parameter."""
    param = _param_name(family)
    columns = [param, "n_plus", "n_minus", "d_bc", "d_kd", "d_pnrd"]
    if family == "dfs":
        columns = [
            param, "n_plus", "n_minus",
            "d_bc_homodyne", "d_kd_homodyne",
            "d_bc_pnrd", "d_kd_pnrd", "d_kd_closed_form",
        ]
    rows = []
    max_cutoff = 0
    for value in np.linspace(start, stop, steps):
        state = build(family, **{param: float(value)})
        max_cutoff = max(max_cutoff, _max_cutoff(state))
        homodyne = _detector_for(state, "homodyne", 0.0, None)
        dist_bc, dist_kd = both_measures(state.branch_set, homodyne)
        pnrd_bc, pnrd_kd = both_measures(state.branch_set, DetectorModel.pnrd())
        n_plus = n_fluct(state.psi_plus)
        n_minus = n_fluct(state.psi_minus)
        if family == "dfs":
            closed = dfs_kd_closed_form(float(value)) if value > 0 else 0.0
            rows.append([
                float(value), n_plus, n_minus,
                dist_bc, dist_kd, pnrd_bc, pnrd_kd, closed,
            ])
        else:
            rows.append([float(value), n_plus, n_minus, dist_bc, dist_kd, pnrd_kd])
    meta = _base_metadata(
        figure=family, family=family, max_cutoff=max_cutoff, grid_points=2048
    )
    return ResultTable(columns, rows, meta)


_NOISE_PARAMS = {
    "css": ("alpha", (0.5, 1.0, 2.0)),
    "psv": ("r", (0.5, 1.0, 2.0)),
    "dfs": ("alpha", (0.5, 1.0, 2.0)),
}


def _figure_noise(family: str, steps: int) -> ResultTable:
    """Kolmogorov distinguishability vs detector resolution sigma."""
    param, values = _NOISE_PARAMS[family]
    sigmas = np.linspace(0.0, 4.0, steps)
    detectors = ("homodyne", "pnrd") if family == "dfs" else ("homodyne",)
    columns = ["sigma"]
    for v in values:
        for kind in detectors:
            suffix = f"_{kind}" if len(detectors) > 1 else ""
            columns.append(f"d_kd{suffix}_{param}_{_fmt(v)}")
    states = [build(family, **{param: v}) for v in values]
    rows = []
    for sigma in sigmas:
        row = [float(sigma)]
        for state in states:
            for kind in detectors:
                det = _detector_for(state, kind, float(sigma), None)
                row.append(both_measures(state.branch_set, det)[1])
        rows.append(row)
    meta = _base_metadata(
        figure=f"noise-{family}",
        family=family,
        max_cutoff=max(_max_cutoff(s) for s in states),
        grid_points=2048,
        sigma_note="sigma is in detector-native units; homodyne and pnrd axes are not comparable",
    )
    return ResultTable(columns, rows, meta)


_SUMMARY_RANGES = {
    "css": (0.1, 3.0),
    "psv": (0.1, 2.0),
    "dfs": (0.1, 4.0),
}


def _figure_summary(steps: int) -> ResultTable:
    """Subjective macroscopicity m_kd against total photon number."""
    columns = [
        "family", "sign", "detector", "sigma", "param",
        "mean_n", "n_fluct", "d_kd", "m_kd",
    ]
    rows = []
    max_cutoff = 0
    for family in FAMILIES:
        param = _param_name(family)
        start, stop = _SUMMARY_RANGES[family]
        values = np.linspace(start, stop, steps)
        states = [build(family, **{param: float(v)}) for v in values]
        max_cutoff = max(max_cutoff, *(_max_cutoff(s) for s in states))
        for kind in ("homodyne", "pnrd"):
            for sigma in (0.0, 2.0):
                for value, state in zip(values, states):
                    det = _detector_for(state, kind, sigma, None)
                    dist_kd = both_measures(state.branch_set, det)[1]
                    for sign, psi in (("+", state.psi_plus), ("-", state.psi_minus)):
                        n = n_fluct(psi)
                        rows.append([
                            family, sign, kind, sigma, float(value),
                            moments(psi).mean_n, n, dist_kd, n * dist_kd,
                        ])
    meta = _base_metadata(
        figure="summary",
        max_cutoff=max_cutoff,
        grid_points=2048,
        sigma_note="sigma is in detector-native units; homodyne and pnrd axes are not comparable",
    )
    return ResultTable(columns, rows, meta)


_DEFAULT_STEPS = {1: 81, 2: 61, 3: 61, 4: 61, 5: 21, 6: 21, 7: 21, 8: 21}


def run_figure(figure, steps: int | None = None) -> ResultTable:
    """Emit the data table behind one reference figure (1-8 or alias)."""
    key = str(figure)
    if key in FIGURE_ALIASES:
        fig_id = FIGURE_ALIASES[key]
    else:
        try:
            fig_id = int(key)
        except ValueError:
            raise InvalidArgumentError(f"unknown figure {figure!r}") from None
    if fig_id not in range(1, 9):
        raise InvalidArgumentError(f"figure id must be 1..8, got {fig_id}")
    n = steps or _DEFAULT_STEPS[fig_id]
    if fig_id == 1:
        return _figure_wigner(n)
    if fig_id == 2:
        return _figure_family("css", 0.05, 3.0, n)
    if fig_id == 3:
        return _figure_family("psv", 0.05, 2.5, n)
    if fig_id == 4:
        return _figure_family("dfs", 0.0, 4.0, n)
    if fig_id in (5, 6, 7):
        return _figure_noise(("css", "psv", "dfs")[fig_id - 5], n)
    return _figure_summary(n)
