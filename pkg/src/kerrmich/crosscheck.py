"""Brute-force verification of the closed forms against the Fock oracle.

Five families of checks, each pitting an independent computation against a
closed form at desk scale (a few tens of photons):

  mean      exact <M> formula vs direct two-mode contraction
  identity  the coherent-state expectation identity behind that formula
  variance  <M^2> at balance vs its closed form, on the operating point
  gaussian  dephasing factors vs Gauss-Hermite quadrature and Monte Carlo
  noise     the efficiency/dephasing/thermal replacement rules end to end

Deterministic for a fixed seed; Monte Carlo cases pass on a 3-standard-
error band, everything else on the requested relative tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import (
    balanced_second_moment,
    signal_mean_exact,
    signal_variance,
)
from .core import NoiseSpec
from .fock import (
    apply_kerr,
    coherent_identity_residual,
    fock_dim,
    gauss_hermite_phase,
    moments,
    monte_carlo_phase,
    noisy_moments,
    product_input,
)

DEFAULT_PHOTON_NUMBERS = (1, 4, 9, 16, 25)
DEFAULT_CHIS = (0.0, 0.01, 0.1)
# Five (phi1, phi2, offset) settings chosen to keep the mean well away
# from zero for every default photon number and chi.
DEFAULT_PHASE_SETTINGS = (
    (0.30, 0.32, 0.0),
    (0.00, 0.40, 0.25),
    (1.10, 0.90, -0.40),
    (0.70, 0.70, 0.60),
    (2.00, 2.50, 1.00),
)
MC_SAMPLES = 100_000
MC_SIGMA_BAND = 3.0


@dataclass(frozen=True)
class CheckCase:
    """One comparison: a label, its error, and the limit it must meet."""

    section: str
    label: str
    error: float
    limit: float

    @property
    def ok(self) -> bool:
        return self.error <= self.limit


@dataclass(frozen=True)
class CrossCheckReport:
    cases: tuple[CheckCase, ...]
    tolerance: float
    seed: int

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.cases)

    @property
    def failures(self) -> tuple[CheckCase, ...]:
        return tuple(c for c in self.cases if not c.ok)

    def max_error(self, section: str | None = None) -> float:
        errs = [c.error for c in self.cases if section is None or c.section == section]
        return max(errs, default=0.0)

    def lines(self) -> list[str]:
        out = []
        for c in self.cases:
            status = "PASS" if c.ok else "FAIL"
            out.append(
                f"{status} [{c.section}] {c.label}: error {c.error:.3e} "
                f"(limit {c.limit:.3e})"
            )
        status = "PASS" if self.ok else "FAIL"
        out.append(
            f"{status} {len(self.cases)} checks, "
            f"{len(self.failures)} failed, max error {self.max_error():.3e}"
        )
        return out


def relative_error(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    if scale == 0.0:
        return 0.0
    return abs(a - b) / scale


def _photon_grid(max_photons: int) -> tuple[int, ...]:
    ns = tuple(n for n in DEFAULT_PHOTON_NUMBERS if n <= max_photons)
    return ns if ns else (0,)


def _evolved_moments(n: int, chi: float, phi1: float, phi2: float, offset: float,
                     dim_margin: int):
    dim = fock_dim(n / 2.0) + dim_margin
    state = product_input(math.sqrt(float(n)), dim=dim)
    return moments(apply_kerr(state, phi1, phi2, chi), offset=offset)


def _mean_cases(max_photons: int, dim_margin: int) -> list[CheckCase]:
    cases = []
    for n in _photon_grid(max_photons):
        for chi in DEFAULT_CHIS:
            for phi1, phi2, offset in DEFAULT_PHASE_SETTINGS:
                got = _evolved_moments(n, chi, phi1, phi2, offset, dim_margin).mean_m
                want = signal_mean_exact(float(n), chi, phi1, phi2, offset)
                cases.append(
                    CheckCase(
                        section="mean",
                        label=f"N={n} chi={chi} phi=({phi1},{phi2}) off={offset}",
                        error=relative_error(got, want),
                        limit=math.nan,  # filled by caller
                    )
                )
    return cases


def _extra_mean_cases(
    max_photons: int, dim_margin: int, count: int, rng: np.random.Generator
) -> list[CheckCase]:
    cases = []
    top = max(max_photons, 0)
    for i in range(count):
        # redraw until the expected mean is not pathologically small, so a
        # relative comparison stays meaningful
        while True:
            n = int(rng.integers(0, top + 1))
            chi = float(rng.uniform(0.0, 0.12))
            phi1 = float(rng.uniform(0.0, 2.5))
            phi2 = float(rng.uniform(0.0, 2.5))
            offset = float(rng.uniform(-1.0, 1.0))
            want = signal_mean_exact(float(n), chi, phi1, phi2, offset)
            if n == 0 or abs(want) >= 1e-3:
                break
        got = _evolved_moments(n, chi, phi1, phi2, offset, dim_margin).mean_m
        cases.append(
            CheckCase(
                section="mean",
                label=f"random[{i}] N={n} chi={chi:.4f}",
                error=relative_error(got, want),
                limit=math.nan,
            )
        )
    return cases


def _identity_cases(max_photons: int) -> list[CheckCase]:
    mus = tuple(mu for mu in (0.5, 2.0, 5.0, 10.0) if mu <= max(max_photons, 0))
    if not mus:
        mus = (0.0,)
    cases = []
    for mu in mus:
        for z in np.linspace(0.0, math.pi, 7):
            residual = coherent_identity_residual(math.sqrt(mu), float(z))
            cases.append(
                CheckCase(
                    section="identity",
                    label=f"|beta|^2={mu} z={z:.4f}",
                    error=residual,
                    limit=math.nan,
                )
            )
    return cases


def _variance_cases(max_photons: int, dim_margin: int) -> list[CheckCase]:
    offsets = [j * math.pi / 4.0 + 0.35 for j in range(8)]
    cases = []
    for n in _photon_grid(max_photons):
        for chi in (0.0, 0.1):
            # phi0 puts the empty interferometer on the operating point,
            # where the balanced closed form is exact
            phi0 = 2.0 * math.pi / chi if chi > 0.0 else 0.0
            for offset in offsets:
                got = _evolved_moments(n, chi, phi0, phi0, offset, dim_margin).mean_m2
                want = balanced_second_moment(float(n), offset)
                cases.append(
                    CheckCase(
                        section="variance",
                        label=f"N={n} chi={chi} off={offset:.4f}",
                        error=relative_error(got, want),
                        limit=math.nan,
                    )
                )
    return cases


def _gaussian_cases(seed: int) -> tuple[list[CheckCase], list[CheckCase]]:
    """Quadrature cases (relative-tolerance) and Monte Carlo cases (3 se)."""
    quad_cases = []
    mc_cases = []
    for sigma in (0.1, 0.3, 0.5):
        # full exact mean under a random common phase: the sigma dependence
        # must be exactly the factor exp(-sigma^2/2)
        def averaged(phis: np.ndarray) -> np.ndarray:
            return np.array(
                [signal_mean_exact(9.0, 0.01, 0.3, 0.32, float(p)) for p in phis]
            )

        got = gauss_hermite_phase(averaged, sigma)
        want = math.exp(-0.5 * sigma * sigma) * signal_mean_exact(9.0, 0.01, 0.3, 0.32)
        quad_cases.append(
            CheckCase(
                section="gaussian",
                label=f"quadrature sigma={sigma}",
                error=relative_error(got, want),
                limit=math.nan,
            )
        )
    for idx, sigma in enumerate((0.1, 0.3)):
        est, se = monte_carlo_phase(
            lambda phi: np.sin(phi + 0.6), sigma, MC_SAMPLES, seed + idx
        )
        want = math.exp(-0.5 * sigma * sigma) * math.sin(0.6)
        mc_cases.append(
            CheckCase(
                section="gaussian-mc",
                label=f"mc sin sigma={sigma}",
                error=abs(est - want) / se,
                limit=MC_SIGMA_BAND,
            )
        )
        est, se = monte_carlo_phase(
            lambda phi: np.cos(2.0 * phi), sigma, MC_SAMPLES, seed + 100 + idx
        )
        want = math.exp(-2.0 * sigma * sigma)
        mc_cases.append(
            CheckCase(
                section="gaussian-mc",
                label=f"mc cos2 sigma={sigma}",
                error=abs(est - want) / se,
                limit=MC_SIGMA_BAND,
            )
        )
    return quad_cases, mc_cases


def _noise_cases(max_photons: int, dim_margin: int) -> list[CheckCase]:
    n = min(16, max_photons) if max_photons > 0 else 0
    chi = 0.1
    phi0 = 2.0 * math.pi / chi
    base = _evolved_moments(n, chi, phi0, phi0, 0.0, dim_margin)
    cases = []
    for eta in (0.5, 1.0):
        for sigma in (0.0, 0.05, 0.2):
            for nt in (0.0, 2.0):
                noisy = noisy_moments(
                    base, NoiseSpec(efficiency=eta, phase_sigma=sigma, thermal_photons=nt)
                )
                want = signal_variance(float(n), eta, sigma, nt, exact=True)
                cases.append(
                    CheckCase(
                        section="noise",
                        label=f"N={n} eta={eta} sigma={sigma} nt={nt}",
                        error=relative_error(noisy.mean_m2, want),
                        limit=math.nan,
                    )
                )
    return cases


def run_crosscheck(
    max_photons: int = 25,
    tolerance: float = 1e-9,
    seed: int = 42,
    extra_cases: int = 0,
    dim_margin: int = 0,
) -> CrossCheckReport:
    """Run the whole suite; tolerance applies to every non-Monte-Carlo case."""
    if max_photons < 0:
        raise ValueError(f"max_photons must be >= 0, got {max_photons}")
    if tolerance < 0.0:
        raise ValueError(f"tolerance must be >= 0, got {tolerance!r}")
    if dim_margin < 0:
        raise ValueError(f"dim_margin must be >= 0, got {dim_margin}")

    rng = np.random.default_rng(seed)
    cases: list[CheckCase] = []
    cases += _mean_cases(max_photons, dim_margin)
    if extra_cases:
        cases += _extra_mean_cases(max_photons, dim_margin, extra_cases, rng)
    cases += _identity_cases(max_photons)
    cases += _variance_cases(max_photons, dim_margin)
    quad, mc = _gaussian_cases(seed)
    cases += quad
    cases += _noise_cases(max_photons, dim_margin)

    resolved = [
        c if not math.isnan(c.limit) else CheckCase(c.section, c.label, c.error, tolerance)
        for c in cases
    ]
    resolved += mc
    return CrossCheckReport(cases=tuple(resolved), tolerance=tolerance, seed=seed)
