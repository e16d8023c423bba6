"""
Conjugate subspace matching pursuit.

Each iteration picks the dominant hidden period of the current residual with the
periodicity metric (Stage 1), then the conjugate pair of that period with the
largest projection coefficient (Stage 2), and removes that projection from the
residual. Only the M_q atoms of the chosen period are ever built.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

import config
from errors import InvalidParameterError, NoPeriodicContentError
from periodicity import as_signal, check_max_period, dominant_period, exact_periodic_energies
from ramanujan import pair_count
from subspace import Component, make_atom, project

logger = logging.getLogger(__name__)

TOL_MODES = ('relative', 'absolute')


@dataclass(frozen=True)
class DecompositionParams:
    max_q: int
    max_iter: int
    tol: float
    tol_mode: str = 'relative'


@dataclass
class Decomposition:
    """Result of one pursuit: extracted components, final residual and the energy trace."""
    components: List[Component]
    residual: np.ndarray
    residual_energy_trace: List[float]
    input_energy: float
    params: DecompositionParams

    @property
    def n_len(self) -> int:
        return int(self.residual.shape[0])

    @property
    def residual_energy(self) -> float:
        return float(np.dot(self.residual, self.residual))

    def to_frame(self) -> pd.DataFrame:
        """One row per iteration."""
        rates = error_rate_trace(self)
        rows = []
        for l, (comp, res_energy, rate) in enumerate(zip(self.components, self.residual_energy_trace, rates), start=1):
            rows.append({
                'iteration': l,
                'q': comp.atom.q,
                'i': comp.atom.i,
                'k': comp.atom.k,
                'alpha_real': comp.alpha.real,
                'alpha_imag': comp.alpha.imag,
                'abs_alpha': abs(comp.alpha),
                'energy': comp.energy,
                'nominal_energy': comp.nominal_energy,
                'residual_energy': res_energy,
                'error_rate': rate,
            })
        columns = ['iteration', 'q', 'i', 'k', 'alpha_real', 'alpha_imag', 'abs_alpha',
                   'energy', 'nominal_energy', 'residual_energy', 'error_rate']
        return pd.DataFrame(rows, columns=columns)


@dataclass
class PeriodicSpectrum:
    """Aggregated energy per period q; periods without components are absent."""
    strengths: Dict[int, float] = field(default_factory=dict)
    max_q: Optional[int] = None

    def total(self) -> float:
        return float(sum(self.strengths.values()))

    def to_frame(self) -> pd.DataFrame:
        periods = sorted(self.strengths)
        return pd.DataFrame({'q': periods, 'strength': [self.strengths[q] for q in periods]},
                            columns=['q', 'strength'])


def _resolve_params(n_len, max_q, max_iter, tol, tol_mode) -> DecompositionParams:
    max_q = config.DEFAULT_MAX_PERIOD if max_q is None else max_q
    max_iter = config.DEFAULT_MAX_ITER if max_iter is None else max_iter
    tol = config.DEFAULT_TOL if tol is None else tol
    tol_mode = config.DEFAULT_TOL_MODE if tol_mode is None else tol_mode

    max_q = check_max_period(max_q, n_len)
    if isinstance(max_iter, bool) or int(max_iter) != max_iter or max_iter < 1:
        raise InvalidParameterError(f"Iteration count must be an integer >= 1, got {max_iter!r}")
    tol = float(tol)
    if not tol >= 0:
        raise InvalidParameterError(f"Tolerance must be >= 0, got {tol}")
    if tol_mode not in TOL_MODES:
        raise InvalidParameterError(f"Tolerance mode must be one of {TOL_MODES}, got {tol_mode!r}")
    return DecompositionParams(max_q=max_q, max_iter=int(max_iter), tol=tol, tol_mode=tol_mode)


def _converged(residual_energy: float, input_energy: float, params: DecompositionParams) -> bool:
    if residual_energy <= config.RESIDUAL_FLOOR * input_energy:
        return True
    if params.tol_mode == 'absolute':
        return np.sqrt(residual_energy) <= params.tol
    return residual_energy <= params.tol * input_energy


def dominant_pair(residual: np.ndarray, q: int) -> Component:
    """Stage 2: the conjugate pair of period q with the largest |alpha|; ties go to the smaller index."""
    n_len = residual.shape[0]
    best = None
    for i in range(1, pair_count(q) + 1):
        candidate = project(residual, make_atom(q, i, n_len))
        if best is None or abs(candidate.alpha) > abs(best.alpha):
            best = candidate
    return best


def csmp(x, max_q: int = None, max_iter: int = None, tol: float = None, tol_mode: str = None) -> Decomposition:
    """
    Decompose x into at most max_iter periodic components with periods up to max_q.

    Stops after max_iter iterations, once the residual meets the tolerance
    (relative: ||r||^2 / ||x||^2 <= tol; absolute: ||r||_2 <= tol), or when
    Stage 1 finds no periodic energy left.
    """
    x = as_signal(x)
    params = _resolve_params(x.size, max_q, max_iter, tol, tol_mode)
    input_energy = float(np.dot(x, x))
    residual = x.copy()
    components: List[Component] = []
    trace: List[float] = []

    if input_energy == 0.0 or _converged(input_energy, input_energy, params):
        return Decomposition(components, residual, trace, input_energy, params)

    for l in range(1, params.max_iter + 1):
        table = exact_periodic_energies(residual, params.max_q)
        try:
            q_l = dominant_period(table)
        except NoPeriodicContentError:
            logger.debug(f"Iteration {l}: no periodic content left, stopping")
            break

        component = dominant_pair(residual, q_l)
        residual = residual - component.extracted
        residual_energy = float(np.dot(residual, residual))
        components.append(component)
        trace.append(residual_energy)
        logger.debug(
            f"Iteration {l}: q={q_l} i={component.atom.i} |alpha|={abs(component.alpha):.6g} "
            f"residual={residual_energy:.6g}"
        )

        if _converged(residual_energy, input_energy, params):
            break

    return Decomposition(components, residual, trace, input_energy, params)


def periodic_spectrum(d: Decomposition) -> PeriodicSpectrum:
    strengths: Dict[int, float] = {}
    for comp in d.components:
        strengths[comp.atom.q] = strengths.get(comp.atom.q, 0.0) + comp.energy
    return PeriodicSpectrum(strengths=dict(sorted(strengths.items())), max_q=d.params.max_q)


def reconstruct(d: Decomposition) -> np.ndarray:
    """Sum of all extracted vectors; reconstruct(d) + d.residual reproduces the input."""
    total = np.zeros(d.n_len)
    for comp in d.components:
        total += comp.vector()
    return total


def period_components(d: Decomposition) -> Dict[int, np.ndarray]:
    """Per-period signal parts x_q, so that the input equals sum(x_q) + residual."""
    parts: Dict[int, np.ndarray] = {}
    for comp in d.components:
        q = comp.atom.q
        if q not in parts:
            parts[q] = np.zeros(d.n_len)
        parts[q] += comp.vector()
    return dict(sorted(parts.items()))


def error_rate_trace(d: Decomposition) -> List[float]:
    """Relative residual energy ||r_l||^2 / ||x||^2 after each iteration."""
    if d.input_energy == 0.0:
        return [0.0] * len(d.residual_energy_trace)
    return [energy / d.input_energy for energy in d.residual_energy_trace]
