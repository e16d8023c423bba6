"""
Ramanujan Fourier Transform baseline.

Projects the signal onto the unit-normalized periodic extension of each Ramanujan
sum c_q and reports the squared coefficient as the strength of period q. c_q is a
single direction of the phi(q)-dimensional subspace S_q, so this captures only
part of each periodic component.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
import pandas as pd

from periodicity import as_signal, check_max_period
from ramanujan import ramanujan_sum


@dataclass
class RftSpectrum:
    strengths: Dict[int, float] = field(default_factory=dict)
    max_q: Optional[int] = None

    def total(self) -> float:
        return float(sum(self.strengths.values()))

    def to_frame(self) -> pd.DataFrame:
        periods = sorted(self.strengths)
        return pd.DataFrame({'q': periods, 'strength': [self.strengths[q] for q in periods]},
                            columns=['q', 'strength'])


def ramanujan_template(q: int, n_len: int) -> np.ndarray:
    """c_q extended periodically to n_len samples and scaled to unit norm."""
    one_period = np.array([ramanujan_sum(q, n) for n in range(q)])
    template = np.resize(one_period, n_len)
    return template / np.linalg.norm(template)


def rft_spectrum(x, max_q: int) -> RftSpectrum:
    x = as_signal(x)
    max_q = check_max_period(max_q, x.size)
    strengths = {}
    for q in range(1, max_q + 1):
        coef = float(np.dot(x, ramanujan_template(q, x.size)))
        strengths[q] = coef * coef
    return RftSpectrum(strengths=strengths, max_q=max_q)
