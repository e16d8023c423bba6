import sys
from pathlib import Path

import numpy as np
import pandas as pd

# Ensure repository root is on sys.path so imports work when running this script directly
REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

import config  # now resolvable

from baseline_rft import rft_spectrum
from csmp import csmp, error_rate_trace, period_components, periodic_spectrum
from signals import sum_of_cosines, white_noise

# Two short periods plus two long ones sharing almost the same frequency
APPROXIMATION_PERIODS = [7, 10, 151, 163]


def hidden_period_table(gamma, n_len: int, max_q: int = 100, max_iter: int = 20) -> pd.DataFrame:
    """Per-period strengths of the pursuit and of the RFT next to the energy of each planted cosine.

    Columns: q, reference, csmp, part_energy, rft, csmp_share
    part_energy is ||x_q||^2 of the summed period-q part; it differs from csmp
    when the atoms picked for period q are not orthogonal.
    Rows: every planted period and every period the pursuit reports.
    """
    x = sum_of_cosines(gamma, n_len)
    d = csmp(x, max_q=max_q, max_iter=max_iter)
    pursuit = periodic_spectrum(d)
    parts = period_components(d)
    rft = rft_spectrum(x, max_q)

    rows = []
    for q in sorted(set(gamma) | set(pursuit.strengths)):
        part = sum_of_cosines([q], n_len) if q in gamma else np.zeros(n_len)
        rows.append({
            'q': q,
            'reference': float(np.dot(part, part)),
            'csmp': pursuit.strengths.get(q, 0.0),
            'part_energy': float(np.dot(parts[q], parts[q])) if q in parts else 0.0,
            'rft': rft.strengths.get(q, 0.0),
        })
    table = pd.DataFrame(rows, columns=['q', 'reference', 'csmp', 'part_energy', 'rft'])
    total = pursuit.total()
    table['csmp_share'] = (table['csmp'] / total).round(4) if total > 0 else 0.0
    return table


def approximation_traces(gamma, n_len: int, max_qs, max_iter: int) -> pd.DataFrame:
    """Error-rate trace per maximum period, one column each, padded with the last value on early stops."""
    x = sum_of_cosines(gamma, n_len)
    frame = pd.DataFrame({'iteration': np.arange(1, max_iter + 1)})
    for max_q in max_qs:
        trace = error_rate_trace(csmp(x, max_q=max_q, max_iter=max_iter))
        padded = trace + [trace[-1] if trace else 1.0] * (max_iter - len(trace))
        frame[f'error_rate_q{max_q}'] = padded
    return frame


def noise_versus_periodic(n_len: int = 4000, max_q: int = 300, max_iter: int = 200) -> pd.DataFrame:
    periodic = error_rate_trace(csmp(sum_of_cosines(config.HIDDEN_PERIODS, n_len), max_q=max_q, max_iter=max_iter))
    noise = error_rate_trace(csmp(white_noise(n_len, config.NOISE_SEED), max_q=max_q, max_iter=max_iter))
    frame = pd.DataFrame({'iteration': np.arange(1, max_iter + 1)})
    frame['periodic'] = periodic + [periodic[-1] if periodic else 1.0] * (max_iter - len(periodic))
    frame['white_noise'] = noise + [noise[-1] if noise else 1.0] * (max_iter - len(noise))
    return frame


def main():
    out_dir = Path('.')
    gamma = list(config.HIDDEN_PERIODS)

    for n_len in (650, config.SYNTH_LENGTH):
        table = hidden_period_table(gamma, n_len)
        table.to_csv(out_dir / f'hidden_periods_n{n_len}.csv', index=False)
        found = sorted(int(q) for q in table.loc[table['csmp_share'] >= 0.05, 'q'])
        missing = sorted(set(gamma) - set(found))
        print(f'=== Hidden periods, N = {n_len} ===')
        print(f"Planted: {gamma} | Found (>= 5% of energy): {found} | Missing: {missing or 'none'}")
        print(table.to_string(index=False))
        print()

    traces = approximation_traces(APPROXIMATION_PERIODS, 400, (20, 400), 200)
    traces.to_csv(out_dir / 'approximation_traces.csv', index=False)
    print('=== Approximation, periods 7, 10, 151, 163 (N = 400) ===')
    for column in traces.columns[1:]:
        print(f"{column}: final error rate {traces[column].iloc[-1]:.3e}")

    versus = noise_versus_periodic()
    versus.to_csv(out_dir / 'noise_versus_periodic.csv', index=False)
    print('\n=== Periodic signal vs white noise (N = 4000, Q = 300) ===')
    print(f"periodic after 100 iterations: {versus['periodic'].iloc[99]:.3e}")
    print(f"white noise after 200 iterations: {versus['white_noise'].iloc[-1]:.3e}")
    print("\n[written] hidden_periods_n650.csv, hidden_periods_n1950.csv, approximation_traces.csv, "
          "noise_versus_periodic.csv")


if __name__ == '__main__':
    main()
