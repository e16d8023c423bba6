"""
Stage 1 of the pursuit: periodic-energy estimation and dominant-period selection.

The energy of the period-q part of a signal is estimated from its linear
autocorrelation, then the energies of the proper divisors of q are peeled off
to leave the energy of the exactly-period-q component. The periodicity metric
(N + q) / (2q) * ||x_q||^2 ranks the candidate periods.
"""

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import signal

from errors import InvalidParameterError, NoPeriodicContentError
from ramanujan import proper_divisors

logger = logging.getLogger(__name__)


@dataclass
class PeriodEnergyTable:
    """
    Per-period energies of one signal for q = 1..max_q.

    Arrays have length max_q + 1 and are indexed by the period itself;
    entry 0 is unused and always 0.
    """
    max_q: int
    n_len: int
    est_energies: np.ndarray
    energies: np.ndarray
    metrics: np.ndarray

    def to_frame(self) -> pd.DataFrame:
        periods = np.arange(1, self.max_q + 1)
        return pd.DataFrame(
            {
                'est_energy': self.est_energies[1:],
                'energy': self.energies[1:],
                'metric': self.metrics[1:],
            },
            index=pd.Index(periods, name='q'),
        )


def as_signal(x) -> np.ndarray:
    """Validate x as a non-empty, one-dimensional, finite real signal."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise InvalidParameterError(f"Signal must be one-dimensional, got shape {x.shape}")
    if x.size == 0:
        raise InvalidParameterError("Signal is empty")
    if not np.isfinite(x).all():
        bad = int(np.flatnonzero(~np.isfinite(x))[0])
        raise InvalidParameterError(f"Signal has a non-finite sample at index {bad}: {x[bad]}")
    return x


def check_max_period(max_q, n_len: int) -> int:
    if isinstance(max_q, bool) or int(max_q) != max_q:
        raise InvalidParameterError(f"Maximum period must be an integer, got {max_q!r}")
    max_q = int(max_q)
    if not 1 <= max_q <= n_len:
        raise InvalidParameterError(f"Maximum period must satisfy 1 <= Q <= N={n_len}, got Q={max_q}")
    return max_q


def autocorrelation(x) -> np.ndarray:
    """Linear, un-normalized autocorrelation phi(k) = sum_n x[n] x[n+k] for k = 0..N-1."""
    x = as_signal(x)
    full = signal.correlate(x, x, mode='full', method='auto')
    return full[x.size - 1:]


def periodicity_metric(energy: float, q: int, n_len: int) -> float:
    return (n_len + q) / (2.0 * q) * energy


def periodic_energy_estimate(x, q: int, acf: np.ndarray = None) -> float:
    """
    Estimated energy of the period-q part of x from its autocorrelation.

    (q/N) * (phi(0) + 2 * sum_{l=1}^{M-1} phi(l q)), M = floor(N/q), clamped at 0.
    Pass a precomputed autocorrelation to avoid recomputing it per period.
    """
    x = as_signal(x)
    n_len = x.size
    if isinstance(q, bool) or int(q) != q or not 1 <= q <= n_len:
        raise InvalidParameterError(f"Period must satisfy 1 <= q <= N={n_len}, got {q!r}")
    q = int(q)
    if acf is None:
        acf = autocorrelation(x)
    lags = q * np.arange(1, n_len // q)
    estimate = q / n_len * (acf[0] + 2.0 * acf[lags].sum())
    return max(0.0, float(estimate))


def exact_periodic_energies(x, max_q: int) -> PeriodEnergyTable:
    """Energies ||x_q||^2 for q = 1..Q via the divisor recursion over the estimates."""
    x = as_signal(x)
    n_len = x.size
    max_q = check_max_period(max_q, n_len)
    acf = autocorrelation(x)

    est = np.zeros(max_q + 1)
    energies = np.zeros(max_q + 1)
    metrics = np.zeros(max_q + 1)
    for q in range(1, max_q + 1):
        est[q] = periodic_energy_estimate(x, q, acf)
        # increasing q: every proper divisor is already final
        remainder = est[q] - sum(energies[p] for p in proper_divisors(q))
        energies[q] = max(0.0, remainder)
        metrics[q] = periodicity_metric(energies[q], q, n_len)

    return PeriodEnergyTable(max_q=max_q, n_len=n_len, est_energies=est, energies=energies, metrics=metrics)


def dominant_period(table: PeriodEnergyTable) -> int:
    """Period with the largest metric; ties go to the smaller period."""
    scores = table.metrics[1:]
    if scores.size == 0 or not np.any(scores > 0):
        raise NoPeriodicContentError("No periodic energy left for q in [1, %d]" % table.max_q)
    q_star = int(np.argmax(scores)) + 1
    logger.debug(f"Dominant period {q_star} (metric {scores[q_star - 1]:.6g})")
    return q_star
