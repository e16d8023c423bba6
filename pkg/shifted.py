"""
Shifted CSMP: the pursuit run independently in a sliding rectangular window.

Every window of W samples is decomposed on its own and its periodic spectrum
becomes one row of a time-period plane, much like the columns of a spectrogram.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, NamedTuple, Optional

import numpy as np
import pandas as pd
from tqdm import tqdm

import config
from csmp import csmp, periodic_spectrum
from errors import InvalidParameterError
from periodicity import as_signal

logger = logging.getLogger(__name__)


class TrackPoint(NamedTuple):
    window_center: int
    period: int
    empty: bool


@dataclass
class TimePeriodPlane:
    """
    Strength per (window, period) cell.

    cells has shape (n_windows, max_q); column q - 1 holds period q.
    """
    window_size: int
    hop: int
    max_q: int
    cells: np.ndarray
    window_centers: np.ndarray
    iters_per_window: int = config.DEFAULT_WINDOW_ITERS
    sample_rate: Optional[float] = None

    @property
    def n_windows(self) -> int:
        return int(self.cells.shape[0])

    def to_frame(self) -> pd.DataFrame:
        """Long format (window_center, q, strength) with zero cells left out."""
        w_idx, q_idx = np.nonzero(self.cells)
        return pd.DataFrame(
            {
                'window_center': self.window_centers[w_idx].astype(int),
                'q': (q_idx + 1).astype(int),
                'strength': self.cells[w_idx, q_idx],
            },
            columns=['window_center', 'q', 'strength'],
        )


def _check_positive_int(value, name: str) -> int:
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise InvalidParameterError(f"{name} must be an integer >= 1, got {value!r}")
    return int(value)


def shifted_csmp(x, max_q: int = None, window: int = None, hop: int = None,
                 iters_per_window: int = None, workers: int = None, progress: bool = None,
                 sample_rate: float = None) -> TimePeriodPlane:
    """Run csmp on every window start 0, H, 2H, ... with W + start <= N."""
    x = as_signal(x)
    n_len = x.size
    max_q = _check_positive_int(config.DEFAULT_MAX_PERIOD if max_q is None else max_q, "Maximum period")
    if window is None:
        raise InvalidParameterError("Window size W is required")
    window = _check_positive_int(window, "Window size")
    if window <= max_q:
        raise InvalidParameterError(
            f"Window size must exceed the maximum period (W > Q), got W={window}, Q={max_q}"
        )
    if n_len < window:
        raise InvalidParameterError(f"Signal length {n_len} is shorter than the window size {window}")
    if hop is None:
        hop = max(1, int(window * config.DEFAULT_HOP_FRACTION))
    hop = _check_positive_int(hop, "Hop")
    iters = _check_positive_int(config.DEFAULT_WINDOW_ITERS if iters_per_window is None else iters_per_window,
                                "Iterations per window")
    workers = _check_positive_int(config.WINDOW_WORKERS if workers is None else workers, "Workers")
    show = config.SHOW_PROGRESS if progress is None else progress

    starts = list(range(0, n_len - window + 1, hop))
    logger.debug(f"Shifted pursuit: N={n_len} W={window} H={hop} Q={max_q} windows={len(starts)}")

    def analyse(start: int) -> np.ndarray:
        d = csmp(x[start:start + window], max_q=max_q, max_iter=iters, tol=0.0, tol_mode='absolute')
        row = np.zeros(max_q)
        for q, strength in periodic_spectrum(d).strengths.items():
            row[q - 1] = strength
        return row

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(tqdm(pool.map(analyse, starts), total=len(starts), disable=not show, desc="windows"))
    else:
        rows = [analyse(s) for s in tqdm(starts, disable=not show, desc="windows")]

    return TimePeriodPlane(
        window_size=window,
        hop=hop,
        max_q=max_q,
        cells=np.vstack(rows),
        window_centers=np.asarray(starts, dtype=int) + window // 2,
        iters_per_window=iters,
        sample_rate=sample_rate,
    )


def dominant_track(plane: TimePeriodPlane) -> List[TrackPoint]:
    """Per-window strongest period; empty windows report period 1 and are flagged."""
    track = []
    for center, row in zip(plane.window_centers, plane.cells):
        empty = not np.any(row > 0)
        period = 1 if empty else int(np.argmax(row)) + 1
        track.append(TrackPoint(int(center), period, empty))
    return track


def pitch_track(plane: TimePeriodPlane, sample_rate: float = None) -> pd.DataFrame:
    """Dominant track in physical units: window time, period in seconds and pitch in Hz."""
    rate = plane.sample_rate if sample_rate is None else sample_rate
    if rate is None or not rate > 0:
        raise InvalidParameterError("A positive sample rate is required for a pitch track")
    track = dominant_track(plane)
    frame = pd.DataFrame(track, columns=['window_center', 'period', 'empty'])
    frame['time_s'] = frame['window_center'] / rate
    frame['period_s'] = frame['period'] / rate
    frame['frequency_hz'] = np.where(frame['empty'], 0.0, rate / frame['period'])
    return frame
