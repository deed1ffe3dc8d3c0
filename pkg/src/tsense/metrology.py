"""Classical and quantum Fisher information for coupling estimation.

The classical Fisher information of a measurement with outcome
probabilities P(x|theta) is sum_x P'(x)^2 / P(x).  Outcomes whose
probability has a structural quadratic zero (P and P' both below 1e-14)
contribute their analytic limit 2 P'' instead, which is what makes the
theta -> 0 values exact rather than evaluated at a small offset.

Measurement schemes are outcome partitions of the measured mode's
number basis: full number resolution, the binary check {|n><n|, rest},
and the four-outcome sequential partition
{|n>, |n-1>+|n+1>, |n-2>+|n+2>, rest} standing in for a two-shot
qubit-coupling readout.  Coarser partitions never gain information, so
F_binary <= F_s0 <= F_pnr pointwise.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from . import dynamics
from .errors import ConfigurationError, UndefinedBoundError
from .ladder import FockConfig, InteractionKind, build_ladder, validate_config
from .probes import CoherentProduct, Probe, PureFock, decompose

ZERO_PROB = 1e-14


@dataclass(frozen=True)
class FullPNR:
    """Full number-resolving readout of the measured mode."""


@dataclass(frozen=True)
class BinaryFock:
    """Two-outcome check against the reference occupation n."""

    n: int


@dataclass(frozen=True)
class SequentialS0:
    """Four-outcome partition around n; negative occupations drop out."""

    n: int


MeasurementScheme = Union[FullPNR, BinaryFock, SequentialS0]


def outcome_partition(scheme: MeasurementScheme, n_outcomes: int) -> list[list[int]]:
    """Occupation groups for a scheme over occupations 0..n_outcomes-1."""
    occs = range(n_outcomes)
    if isinstance(scheme, FullPNR):
        return [[m] for m in occs]
    if isinstance(scheme, BinaryFock):
        return [[scheme.n], [m for m in occs if m != scheme.n]]
    if isinstance(scheme, SequentialS0):
        n = scheme.n
        shells = [[n], [n - 1, n + 1], [n - 2, n + 2]]
        groups = [[m for m in shell if 0 <= m < n_outcomes] for shell in shells]
        used = {m for g in groups for m in g}
        groups.append([m for m in occs if m not in used])
        return groups
    raise TypeError(f"unknown scheme {type(scheme).__name__}")


@dataclass(frozen=True)
class SensitivityProfile:
    """Fisher information on a coupling grid, with its zero-coupling limits."""

    kind: InteractionKind
    probe: Probe
    scheme: MeasurementScheme
    time: float
    mode: int
    couplings: np.ndarray
    fisher: np.ndarray
    f_zero: float
    qfi_zero: Optional[float]


class PreparedProbe:
    """Probe decomposed and diagonalized once, reusable across couplings."""

    def __init__(self, probe: Probe, kind: InteractionKind, mode: int = 0):
        self.probe = probe
        self.kind = kind
        self.mode = mode
        parts = decompose(probe, kind).components
        self.weights = [c.weight for c in parts]
        self.spectra = [dynamics.diagonalize(c.ladder) for c in parts]
        self.psi0s = [c.amplitudes for c in parts]
        self.occs = [
            np.array([cfg[mode] for cfg in c.ladder.basis]) for c in parts
        ]
        self.n_outcomes = int(max(o.max() for o in self.occs)) + 1

    def distributions(self, coupling: float, time: float):
        """Aggregated P, P', P'' over the measured occupation."""
        P = np.zeros(self.n_outcomes)
        dP = np.zeros(self.n_outcomes)
        d2P = np.zeros(self.n_outcomes)
        params = dynamics.EvolutionParams(coupling=coupling, time=time)
        for w, spec, psi0, occ in zip(
            self.weights, self.spectra, self.psi0s, self.occs
        ):
            amps = dynamics.evolve_vector(spec, psi0, params)
            c, dc, d2c = amps.amps, amps.damps, amps.d2amps
            P[occ] += w * (np.abs(c) ** 2)
            dP[occ] += w * 2.0 * np.real(np.conj(c) * dc)
            d2P[occ] += w * (2.0 * np.real(np.conj(c) * d2c) + 2.0 * np.abs(dc) ** 2)
        return P, dP, d2P

    def fisher(self, scheme: MeasurementScheme, coupling: float, time: float) -> float:
        P, dP, d2P = self.distributions(coupling, time)
        total = 0.0
        for group in outcome_partition(scheme, self.n_outcomes):
            p = sum(P[m] for m in group)
            dp = sum(dP[m] for m in group)
            d2p = sum(d2P[m] for m in group)
            total += _fisher_term(p, dp, d2p)
        return total


def _fisher_term(p: float, dp: float, d2p: float) -> float:
    if p < ZERO_PROB and abs(dp) < ZERO_PROB:
        return 2.0 * d2p if d2p >= ZERO_PROB else 0.0
    return dp * dp / p


def fisher(
    probe: Probe,
    kind: InteractionKind,
    scheme: MeasurementScheme,
    params: dynamics.EvolutionParams,
    mode: int = 0,
) -> float:
    """Classical Fisher information of one probe/scheme at one coupling."""
    return PreparedProbe(probe, kind, mode).fisher(
        scheme, params.coupling, params.time
    )


def fisher_limit_closed_form(
    config: FockConfig, kind: InteractionKind, t: float = 1.0
) -> float:
    """Zero-coupling Fisher limit of a pure Fock probe, in closed form."""
    validate_config(kind, config)
    if kind is InteractionKind.I:
        na, nb, nc = config.occupations
        return 4.0 * t * t * (na * (nb + 1) * (nc + 1) + (na + 1) * nb * nc)
    na, nb = config.occupations
    return 4.0 * t * t * (nb * (nb - 1) * (na + 1) + (nb + 1) * (nb + 2) * na)


def qfi_variance(config: FockConfig, kind: InteractionKind, t: float = 1.0) -> float:
    """Quantum Fisher information 4 t^2 Var(G) computed on the ladder.

    For a Fock rung <G> vanishes (G is strictly off-diagonal) and <G^2>
    is the sum of the squared matrix elements to the two neighbors.
    """
    ladder = build_ladder(kind, config)
    r = ladder.root_index
    g2 = 0.0
    if r > 0:
        g2 += float(ladder.offdiag[r - 1]) ** 2
    if r < ladder.d - 1:
        g2 += float(ladder.offdiag[r]) ** 2
    return 4.0 * t * t * g2


def qfi_coherent(
    alphas: tuple[complex, ...], kind: InteractionKind, t: float = 1.0
) -> float:
    """Quantum Fisher information of a product coherent probe (closed form)."""
    n = [abs(a) ** 2 for a in alphas]
    if kind is InteractionKind.I:
        if len(n) != 3:
            raise UndefinedBoundError("interaction I needs three amplitudes")
        na, nb, nc = n
        return 4.0 * t * t * (na * nb + na * nc + nb * nc + na)
    if len(n) != 2:
        raise UndefinedBoundError("interaction II needs two amplitudes")
    na, nb = n
    return 4.0 * t * t * (nb * nb + 3.0 * na * nb + 2.0 * na)


def cramer_rao(f: float, trials: int) -> float:
    """Cramer-Rao bound on the estimation error for the given trial count."""
    if trials < 1:
        raise UndefinedBoundError(f"trials must be >= 1, got {trials}")
    if f <= 0.0:
        raise UndefinedBoundError("Fisher information must be positive")
    return 1.0 / math.sqrt(trials * f)


def scan(
    probe: Probe,
    kind: InteractionKind,
    scheme: MeasurementScheme,
    t: float = 1.0,
    theta_max: float = 1.0,
    steps: int = 401,
    mode: int = 0,
    workers: int = 1,
) -> SensitivityProfile:
    """Fisher information on a uniform coupling grid [0, theta_max]."""
    if theta_max <= 0:
        raise ConfigurationError(f"theta_max must be positive, got {theta_max}")
    if steps < 2:
        raise ConfigurationError(f"steps must be >= 2, got {steps}")
    prepared = PreparedProbe(probe, kind, mode)
    grid = np.linspace(0.0, theta_max, steps)
    values = _map_ordered(
        lambda th: prepared.fisher(scheme, th, t), list(grid), workers
    )
    f_zero = values[0]
    qfi_zero: Optional[float] = None
    if isinstance(probe, PureFock):
        qfi_zero = fisher_limit_closed_form(FockConfig(probe.occupations), kind, t)
    elif isinstance(probe, CoherentProduct):
        qfi_zero = qfi_coherent(probe.alphas, kind, t)
    return SensitivityProfile(
        kind=kind,
        probe=probe,
        scheme=scheme,
        time=t,
        mode=mode,
        couplings=grid,
        fisher=np.array(values),
        f_zero=f_zero,
        qfi_zero=qfi_zero,
    )


def _map_ordered(fn: Callable, xs: list, workers: int) -> list:
    if workers <= 1:
        return [fn(x) for x in xs]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, xs))


def dynamic_range(profile: SensitivityProfile, rel_tol: float = 1e-4) -> Optional[float]:
    """Coupling at the first local minimum of F, or None if none exists.

    Grid detection uses a relative noise floor so that profiles that are
    mathematically constant (every partition informationally complete)
    do not report rounding wiggles as minima.  The bracketed minimum is
    refined by golden-section search on the continuous F.
    """
    f = profile.fisher
    th = profile.couplings
    if len(f) < 3:
        return None
    idx = None
    for i in range(1, len(f) - 1):
        floor = 1e-9 * (1.0 + abs(f[i]))
        if f[i] <= f[i - 1] + floor and f[i] < f[i + 1] - floor:
            idx = i
            break
    if idx is None:
        return None
    prepared = PreparedProbe(profile.probe, profile.kind, profile.mode)
    return _golden_min(
        lambda x: prepared.fisher(profile.scheme, x, profile.time),
        th[idx - 1],
        th[idx + 1],
        rel_tol,
    )


def _golden_min(fn: Callable[[float], float], a: float, b: float, rel_tol: float) -> float:
    ratio = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - ratio * (b - a)
    d = a + ratio * (b - a)
    fc, fd = fn(c), fn(d)
    while (b - a) > rel_tol * max(abs(a) + abs(b), 1e-12):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - ratio * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + ratio * (b - a)
            fd = fn(d)
    return 0.5 * (a + b)


def dynamic_range_formula(
    config: FockConfig, kind: InteractionKind, t: float = 1.0
) -> Optional[float]:
    """Rough first-minimum location sqrt(prefactor / F(0)).

    The prefactor is 16 for interaction I probes with at most two
    excited modes and 24 for fully excited interaction-I probes and for
    interaction II.  Returns None for inert probes (F(0) = 0).
    """
    f0 = fisher_limit_closed_form(config, kind, t)
    if f0 <= 0.0:
        return None
    if kind is InteractionKind.I and sum(n > 0 for n in config.occupations) < 3:
        prefactor = 16.0
    else:
        prefactor = 24.0
    return math.sqrt(prefactor / f0)
