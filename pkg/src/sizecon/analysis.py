"""Size-consistency regression, accuracy horizon, and classical references.

The regression works on heteroscedastic (x, y, stddev) points with
precision weights 1/stddev^2; its slope against total qubit count, in
kcal/mol per qubit, is the size-consistency error. The horizon converts
that slope into how many qubits (and subsystems) fit inside chemical
accuracy. Classical reference curves come from the exact two-level
subsystem parameters: full CI is N-independent per subsystem, while the
singles-plus-doubles truncation is rebuilt per N from its (N+1)-dimensional
configuration matrix and loses correlation per subsystem as N grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .units import CHEMICAL_ACCURACY_KCAL, HARTREE_TO_KCAL_PER_MOL


@dataclass(frozen=True)
class RegressionResult:
    slope: float          # kcal/mol per qubit
    intercept: float      # kcal/mol
    slope_stderr: float   # kcal/mol per qubit
    points: tuple[tuple[float, float, float], ...]   # (x, y, weight)


def wls_fit(points: Sequence[tuple[float, float, float]]) -> RegressionResult:
    """Weighted least-squares line through (x, y, sample_stddev) points.

    Weights are 1/stddev^2; slope and intercept minimize the weighted
    squared residuals via the closed-form normal equations. The slope
    standard error uses the weighted residual variance with n-2 degrees of
    freedom (0 for an exactly interpolating two-point fit).
    """
    if len(points) < 2:
        raise ValueError(f"need at least 2 points, got {len(points)}")
    x = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    stddev = np.array([p[2] for p in points], dtype=float)
    if np.any(stddev <= 0):
        raise ValueError("every point needs a positive stddev")
    if np.ptp(x) == 0:
        raise ValueError("all x values identical; slope undefined")
    w = 1.0 / stddev**2
    x_bar = float(np.sum(w * x) / np.sum(w))
    y_bar = float(np.sum(w * y) / np.sum(w))
    sxx = float(np.sum(w * (x - x_bar) ** 2))
    sxy = float(np.sum(w * (x - x_bar) * (y - y_bar)))
    slope = sxy / sxx
    intercept = y_bar - slope * x_bar
    residuals = y - intercept - slope * x
    dof = len(points) - 2
    if dof > 0:
        sigma2 = float(np.sum(w * residuals**2)) / dof
        stderr = math.sqrt(sigma2 / sxx)
    else:
        stderr = 0.0
    return RegressionResult(
        slope=slope,
        intercept=intercept,
        slope_stderr=stderr,
        points=tuple((float(a), float(b), float(c)) for a, b, c in zip(x, y, w)),
    )


@dataclass(frozen=True)
class Horizon:
    """How far chemical accuracy stretches for a given slope."""

    n_qubit: int
    n_h2: int
    unbounded: bool = False

    def __post_init__(self) -> None:
        if self.n_qubit < 0 or self.n_h2 < 0:
            raise ValueError("horizon counts must be non-negative")


def horizon(delta: float, qubits_per_h2: int) -> Horizon:
    """Largest qubit and subsystem counts within 1 kcal/mol at slope delta.

    ``n_qubit = floor(1 / |delta|)`` and ``n_h2 = floor(n_qubit / width)``;
    a zero slope reports the unbounded sentinel.
    """
    if not math.isfinite(delta):
        raise ValueError(f"slope must be finite, got {delta}")
    if qubits_per_h2 < 1:
        raise ValueError("qubits_per_h2 must be >= 1")
    if delta == 0.0:
        return Horizon(n_qubit=0, n_h2=0, unbounded=True)
    n_qubit = math.floor(CHEMICAL_ACCURACY_KCAL / abs(delta))
    return Horizon(n_qubit=n_qubit, n_h2=n_qubit // qubits_per_h2)


@dataclass(frozen=True)
class SubsystemLevels:
    """Exact two-determinant parameters of one subsystem (hartree)."""

    e_hf: float       # <reference|H|reference>
    e_double: float   # <double|H|double>
    coupling: float   # <reference|H|double>

    @classmethod
    def from_single_qubit_terms(cls, g0: float, g1: float, g2: float) -> "SubsystemLevels":
        """From the I/Z/X coefficients of the single-qubit representation."""
        return cls(e_hf=g0 + g1, e_double=g0 - g1, coupling=g2)

    @property
    def fci_energy(self) -> float:
        mean = 0.5 * (self.e_hf + self.e_double)
        gap = 0.5 * (self.e_hf - self.e_double)
        return mean - math.hypot(gap, self.coupling)

    @property
    def fci_double_population(self) -> float:
        """|double amplitude|^2 of the subsystem ground state; N-independent."""
        vec = _ground_vector(
            np.array([[self.e_hf, self.coupling], [self.coupling, self.e_double]])
        )
        return float(vec[1] ** 2)


def _ground_vector(mat: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(mat)
    vec = vecs[:, 0]
    if vec[0] < 0:
        vec = -vec
    return vec


@dataclass(frozen=True)
class CisdReference:
    """Singles-plus-doubles truncation of N non-interacting subsystems."""

    n_subsystems: int
    energy: float                    # hartree, total
    correlation_per_h2: float        # hartree
    double_population_per_h2: float


def cisd_reference(levels: SubsystemLevels, n_subsystems: int) -> CisdReference:
    """Exact ground state of the truncated configuration space at size N.

    The basis is the reference plus one double excitation per subsystem:
    an (N+1) x (N+1) matrix whose off-diagonal couples the reference to each
    single-subsystem double. Higher simultaneous excitations are exactly
    what the truncation omits, so the correlation recovered per subsystem
    decays with N.
    """
    if n_subsystems < 1:
        raise ValueError("need at least one subsystem")
    n = n_subsystems
    mat = np.zeros((n + 1, n + 1))
    mat[0, 0] = n * levels.e_hf
    for i in range(1, n + 1):
        mat[i, i] = (n - 1) * levels.e_hf + levels.e_double
        mat[0, i] = mat[i, 0] = levels.coupling
    vec = _ground_vector(mat)
    energy = float(vec @ mat @ vec)
    double_pop = float(np.sum(vec[1:] ** 2)) / n
    return CisdReference(
        n_subsystems=n,
        energy=energy,
        correlation_per_h2=(energy - n * levels.e_hf) / n,
        double_population_per_h2=double_pop,
    )


@dataclass(frozen=True)
class ErrorStat:
    n_subsystems: int
    mean_error_kcal: float
    std_kcal: float
    n_samples: int


def error_stats(
    samples: Iterable[tuple[int, float]], e_fci: float, e_hf: float
) -> tuple[dict[int, ErrorStat], float]:
    """Per-N mean and stddev of (energy-per-subsystem - FCI), in kcal/mol.

    ``samples`` holds (n_subsystems, energy_per_h2_hartree) pairs; the
    second return value is the mean-field reference line (e_hf - e_fci)
    in kcal/mol.
    """
    by_n: dict[int, list[float]] = {}
    for n, energy in samples:
        by_n.setdefault(int(n), []).append(
            (energy - e_fci) * HARTREE_TO_KCAL_PER_MOL
        )
    if not by_n:
        raise ValueError("no samples provided")
    stats = {}
    for n in sorted(by_n):
        values = np.array(by_n[n])
        std = float(values.std(ddof=1)) if len(values) > 1 else 0.0
        stats[n] = ErrorStat(
            n_subsystems=n,
            mean_error_kcal=float(values.mean()),
            std_kcal=std,
            n_samples=len(values),
        )
    hf_gap = (e_hf - e_fci) * HARTREE_TO_KCAL_PER_MOL
    return stats, hf_gap
