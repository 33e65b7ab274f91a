"""Deterministic grid sweeps over the design space.

A sweep is the Cartesian product of up to three one-parameter grids laid
over a fully-specified base design. Rows come out in lexicographic order
of the grid indices (first grid slowest), each row is a pure function of
its own inputs, and grid endpoints are echoed exactly as given, so a sweep
is reproducible byte for byte.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .analytic import sensitivity_report
from .core import (
    GeometrySpec,
    KerrDerived,
    MediumSpec,
    NoiseSpec,
    ParameterError,
    PulseSpec,
    derive,
    get_preset,
    operating_arm_length,
)

GRID_PARAMETERS = (
    "tau",
    "area",
    "power",
    "n2",
    "wavelength",
    "eta",
    "sigma",
    "nt",
    "arm_length",
    "signal_x",
)

MAX_ROWS = 1_000_000

# Column order is a compatibility contract with the CLI CSV output.
CSV_COLUMNS = (
    "tau_s",
    "area_m2",
    "power_w",
    "n2_m2_per_w",
    "wavelength_m",
    "eta",
    "sigma",
    "nt",
    "n_photons",
    "chi",
    "k_per_m",
    "delta_x_m",
    "delta_x_linear_m",
    "improvement",
    "margin_small_signal",
    "margin_thermal",
    "margin_dephasing",
    "margin_operating_point",
    "margin_nl_dominant",
)


@dataclass(frozen=True)
class GridSpec:
    """One sweep axis: parameter name, closed range, point count, spacing."""

    parameter: str
    lo: float
    hi: float
    points: int
    spacing: str = "linear"

    def __post_init__(self) -> None:
        if self.parameter not in GRID_PARAMETERS:
            raise ParameterError(
                f"unknown sweep parameter {self.parameter!r} "
                f"(known: {', '.join(GRID_PARAMETERS)})"
            )
        if self.spacing not in ("linear", "log"):
            raise ParameterError(f"spacing must be 'linear' or 'log', got {self.spacing!r}")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise ParameterError(f"grid needs lo < hi, got {self.lo!r}..{self.hi!r}")
        if self.points < 2:
            raise ParameterError(f"grid needs at least 2 points, got {self.points}")
        if self.spacing == "log" and self.lo <= 0.0:
            raise ParameterError("log spacing requires lo > 0")

    def values(self) -> list[float]:
        """Grid points; endpoints are exactly lo and hi."""
        if self.spacing == "log":
            arr = np.geomspace(self.lo, self.hi, self.points)
        else:
            arr = np.linspace(self.lo, self.hi, self.points)
        return [float(v) for v in arr]


@dataclass(frozen=True)
class ParameterSet:
    """A complete design, flat and in SI units.

    arm_length None means "the shortest arm length on the operating point
    for m = 1", falling back to 1 m when the medium is linear and the
    operating condition holds for any length.
    """

    wavelength: float
    tau: float
    area: float
    power: float
    n2: float
    n0: float = 1.0
    eta: float = 1.0
    sigma: float = 0.0
    nt: float = 0.0
    arm_length: float | None = None
    signal_x: float = 0.0

    @classmethod
    def from_preset(cls, name: str) -> "ParameterSet":
        p = get_preset(name)
        return cls(
            wavelength=p.pulse.wavelength,
            tau=p.pulse.duration,
            area=p.pulse.cross_section,
            power=p.pulse.power,
            n2=p.medium.kerr_coefficient,
            n0=p.medium.linear_index,
            eta=p.noise.efficiency,
            sigma=p.noise.phase_sigma,
            nt=p.noise.thermal_photons,
        )

    def pulse(self) -> PulseSpec:
        return PulseSpec(
            wavelength=self.wavelength,
            duration=self.tau,
            cross_section=self.area,
            power=self.power,
        )

    def medium(self) -> MediumSpec:
        return MediumSpec(linear_index=self.n0, kerr_coefficient=self.n2)

    def noise(self) -> NoiseSpec:
        return NoiseSpec(
            efficiency=self.eta, phase_sigma=self.sigma, thermal_photons=self.nt
        )

    def resolve_arm_length(self, derived: KerrDerived) -> float:
        if self.arm_length is not None:
            return self.arm_length
        if derived.chi > 0.0:
            return operating_arm_length(derived, m=1)
        return 1.0


@dataclass(frozen=True)
class SweepRow:
    """All inputs of one design point plus everything derived from them."""

    tau_s: float
    area_m2: float
    power_w: float
    n2_m2_per_w: float
    wavelength_m: float
    eta: float
    sigma: float
    nt: float
    arm_length_m: float
    signal_x_m: float
    n_photons: float
    chi: float
    k_per_m: float
    delta_x_m: float
    delta_x_linear_m: float
    improvement: float
    margin_small_signal: float
    margin_thermal: float
    margin_dephasing: float
    margin_operating_point: float
    margin_nl_dominant: float
    small_signal: bool
    weak_thermal: bool
    weak_dephasing: bool
    on_operating_point: bool
    nonlinearity_dominant: bool

    def csv_values(self) -> list[str]:
        return [repr(getattr(self, col)) for col in CSV_COLUMNS]

    def as_dict(self) -> dict[str, float | bool]:
        return dataclasses.asdict(self)


def evaluate(params: ParameterSet, threshold: float = 1e-2) -> SweepRow:
    """One design point through the closed-form engine."""
    derived = derive(params.pulse(), params.medium())
    arm = params.resolve_arm_length(derived)
    geometry = GeometrySpec(arm_length=arm, signal=params.signal_x)
    report = sensitivity_report(derived, geometry, params.noise(), threshold)
    v = report.validity
    return SweepRow(
        tau_s=params.tau,
        area_m2=params.area,
        power_w=params.power,
        n2_m2_per_w=params.n2,
        wavelength_m=params.wavelength,
        eta=params.eta,
        sigma=params.sigma,
        nt=params.nt,
        arm_length_m=arm,
        signal_x_m=params.signal_x,
        n_photons=derived.photons,
        chi=derived.chi,
        k_per_m=derived.wavenumber,
        delta_x_m=report.delta_x,
        delta_x_linear_m=report.delta_x_linear,
        improvement=report.improvement,
        margin_small_signal=v.small_signal.margin,
        margin_thermal=v.weak_thermal.margin,
        margin_dephasing=v.weak_dephasing.margin,
        margin_operating_point=v.on_operating_point.margin,
        margin_nl_dominant=v.nonlinearity_dominant.margin,
        small_signal=v.small_signal.ok,
        weak_thermal=v.weak_thermal.ok,
        weak_dephasing=v.weak_dephasing.ok,
        on_operating_point=v.on_operating_point.ok,
        nonlinearity_dominant=v.nonlinearity_dominant.ok,
    )


def run_sweep(
    base: ParameterSet,
    grids: Sequence[GridSpec] = (),
    threshold: float = 1e-2,
    max_rows: int = MAX_ROWS,
) -> list[SweepRow]:
    """Evaluate the Cartesian product of the grids over the base design.

    Row order is lexicographic in the grid indices with the first grid
    varying slowest. No grids means a single row at the base point.
    """
    if len(grids) > 3:
        raise ParameterError(f"at most 3 simultaneous grids, got {len(grids)}")
    names = [g.parameter for g in grids]
    if len(set(names)) != len(names):
        raise ParameterError(f"duplicate sweep parameter in {names}")
    axes = [g.values() for g in grids]
    total = math.prod(len(a) for a in axes) if axes else 1
    if total > max_rows:
        raise ParameterError(f"sweep would emit {total} rows, cap is {max_rows}")

    rows: list[SweepRow] = []
    for combo in _ordered_product(axes):
        point = base
        if combo:
            point = dataclasses.replace(base, **dict(zip(names, combo)))
        rows.append(evaluate(point, threshold))
    return rows


def _ordered_product(axes: Sequence[Sequence[float]]) -> Iterable[tuple[float, ...]]:
    if not axes:
        yield ()
        return
    head, *rest = axes
    for v in head:
        for tail in _ordered_product(rest):
            yield (v, *tail)


@dataclass(frozen=True)
class RegimeReport:
    """Operating-point solution and working window for a named regime.

    x_min_m..x_max_m is the detectable-signal window (resolution up to the
    small-signal bound 1/(chi N k)); sigma_max and nt_max are the dephasing
    and thermal levels at which the added noise would reach the square of
    the nonlinear gain, eroding its advantage.
    """

    name: str
    row: SweepRow
    arm_length_m: float
    x_min_m: float
    x_max_m: float
    sigma_max: float
    nt_max: float
    notes: tuple[str, ...]


# Beyond this the required interferometer stops being buildable on Earth.
PRACTICAL_ARM_LIMIT = 1e6  # m


def regime_report(name: str, m: int = 1, threshold: float = 1e-2) -> RegimeReport:
    """Evaluate a built-in regime at its m-th operating point."""
    preset = get_preset(name)
    derived = preset.derived()
    arm = operating_arm_length(derived, m)
    params = dataclasses.replace(
        ParameterSet.from_preset(name), arm_length=arm, signal_x=0.0
    )
    row = evaluate(params, threshold)

    n = derived.photons
    chi = derived.chi
    k = derived.wavenumber
    gain = chi * n
    x_max = 1.0 / (gain * k) if gain > 0.0 else math.inf
    sigma_max = chi * math.sqrt(n / preset.noise.efficiency)
    nt_max = gain * gain

    notes: list[str] = []
    if arm > PRACTICAL_ARM_LIMIT:
        notes.append(
            f"operating arm length {arm:.3g} m is impractical; driving the "
            "fixed-length Kerr phase to zero (m = 0) with a compensating "
            "medium of opposite sign would be needed instead"
        )
    return RegimeReport(
        name=name,
        row=row,
        arm_length_m=arm,
        x_min_m=row.delta_x_m,
        x_max_m=x_max,
        sigma_max=sigma_max,
        nt_max=nt_max,
        notes=tuple(notes),
    )
