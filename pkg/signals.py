"""Synthetic test signals: sums of cosines, the inverse chirp and seeded white noise."""

import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

import config
from errors import InvalidParameterError

SYNTH_KINDS = ('sum_of_cosines', 'inverse_chirp', 'white_noise')


@dataclass
class Signal:
    """Real-valued samples with an optional sample rate in Hz."""
    samples: np.ndarray
    sample_rate: Optional[float] = None

    def __len__(self) -> int:
        return int(self.samples.shape[0])


@dataclass
class SynthesisSpec:
    kind: str
    periods: List[int] = field(default_factory=lambda: list(config.HIDDEN_PERIODS))
    n_len: int = config.SYNTH_LENGTH
    a: float = config.CHIRP_A
    t0: float = config.CHIRP_T0
    t1: float = config.CHIRP_T1
    dt: float = config.CHIRP_DT
    seed: int = config.NOISE_SEED


def _check_length(n_len) -> int:
    if isinstance(n_len, bool) or int(n_len) != n_len or n_len < 1:
        raise InvalidParameterError(f"Signal length must be an integer >= 1, got {n_len!r}")
    return int(n_len)


def sum_of_cosines(gamma, n_len: int) -> np.ndarray:
    """x[n] = sum over q in gamma of cos(2 pi n / q), n = 0..N-1."""
    n_len = _check_length(n_len)
    periods = sorted(int(q) for q in gamma)
    if not periods:
        raise InvalidParameterError("Period set is empty")
    if periods[0] < 1:
        raise InvalidParameterError(f"Periods must be >= 1, got {periods[0]}")
    n = np.arange(n_len, dtype=np.int64)
    x = np.zeros(n_len)
    for q in periods:
        x += np.cos(2 * np.pi * (n % q) / q)
    return x


def inverse_chirp(a: float, t0: float, t1: float, dt: float) -> np.ndarray:
    """
    Samples of sin(1 / (a t)) at t = t0, t0 + dt, ...

    The last grid point is kept if it lies within dt/2 of t1.
    """
    if not a > 0:
        raise InvalidParameterError(f"Chirp constant a must be > 0, got {a}")
    if not t0 > 0:
        raise InvalidParameterError(f"Chirp start time must be > 0 (singular at t = 0), got {t0}")
    if not t1 > t0:
        raise InvalidParameterError(f"Chirp end time must exceed start time, got [{t0}, {t1}]")
    if not dt > 0:
        raise InvalidParameterError(f"Sample step must be > 0, got {dt}")
    count = int(math.floor((t1 - t0) / dt + 0.5)) + 1
    t = t0 + dt * np.arange(count)
    return np.sin(1.0 / (a * t))


def chirp_period(a: float, t, dt: float):
    """Instantaneous period of the inverse chirp in samples: 2 pi a t^2 / dt."""
    return 2 * np.pi * a * np.asarray(t, dtype=float) ** 2 / dt


def white_noise(n_len: int, seed: int) -> np.ndarray:
    """Standard-normal samples from numpy's PCG64 generator; equal seeds give equal vectors."""
    n_len = _check_length(n_len)
    rng = np.random.default_rng(int(seed))
    return rng.standard_normal(n_len)


def synthesize(spec: SynthesisSpec) -> Signal:
    if spec.kind == 'sum_of_cosines':
        return Signal(sum_of_cosines(spec.periods, spec.n_len))
    if spec.kind == 'inverse_chirp':
        return Signal(inverse_chirp(spec.a, spec.t0, spec.t1, spec.dt), sample_rate=1.0 / spec.dt)
    if spec.kind == 'white_noise':
        return Signal(white_noise(spec.n_len, spec.seed))
    raise InvalidParameterError(f"Unknown signal kind {spec.kind!r}; expected one of {SYNTH_KINDS}")
