#!/usr/bin/env python3
"""
Signal ingestion, result files and the `csmp` command line.

Commands:
    synth      write a synthetic signal (sum of cosines, inverse chirp, white noise)
    spectrum   write the Stage-1 periodic energy table of a signal
    decompose  run the pursuit and write its periodic spectrum and error-rate trace
    track      run the shifted pursuit and write the time-period plane and dominant track
    baseline   write the Ramanujan Fourier Transform strengths

CSV outputs start with `# key=value` lines recording the parameters of the run.
"""

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from scipy.io import wavfile

import config
from baseline_rft import rft_spectrum
from csmp import Decomposition, PeriodicSpectrum, csmp, error_rate_trace, periodic_spectrum, reconstruct
from errors import CsmpError, InvalidParameterError, SignalIOError
from periodicity import exact_periodic_energies
from shifted import TimePeriodPlane, TrackPoint, dominant_track, pitch_track, shifted_csmp
from signals import SYNTH_KINDS, Signal, SynthesisSpec, synthesize

logger = logging.getLogger(__name__)

COMMANDS = ('synth', 'spectrum', 'decompose', 'track', 'baseline')
INPUT_FORMATS = ('csv', 'wav')
OUTPUT_FORMATS = ('csv', 'json')


def format_float(value: float) -> str:
    """Round to config.FLOAT_DIGITS significant digits; 2.0 is written as '2.0'."""
    return repr(float(f"{float(value):.{config.FLOAT_DIGITS}g}"))


def _round(value: float) -> float:
    return float(f"{float(value):.{config.FLOAT_DIGITS}g}")


# --------------------------------------------------------------------------- reading

def _parse_metadata(line: str, metadata: Dict[str, str]):
    body = line.lstrip('#').strip()
    if '=' in body:
        key, value = body.split('=', 1)
        metadata[key.strip()] = value.strip()


def _read_csv_samples(path: Path):
    samples = []
    metadata: Dict[str, str] = {}
    header_seen = False
    try:
        with open(path, 'r', encoding='utf-8') as f:
            for lineno, raw in enumerate(f, start=1):
                line = raw.strip()
                if not line:
                    continue
                if line.startswith('#'):
                    _parse_metadata(line, metadata)
                    continue
                try:
                    value = float(line)
                except ValueError:
                    if samples or header_seen:
                        raise SignalIOError(f"{path}:{lineno}: malformed sample {line!r}")
                    header_seen = True
                    continue
                if not math.isfinite(value):
                    raise SignalIOError(f"{path}:{lineno}: non-finite sample {line!r}")
                samples.append(value)
    except UnicodeDecodeError as e:
        raise SignalIOError(f"{path}: not a text CSV file ({e})")
    return np.asarray(samples, dtype=float), metadata


def read_signal(path, fmt: str = None) -> Signal:
    """
    Load a signal from CSV (one sample per line, optional header) or 16-bit PCM WAV.

    WAV samples are scaled by 1/32768; multichannel files keep the first channel.
    """
    path = Path(path)
    fmt = fmt or ('wav' if path.suffix.lower() == '.wav' else 'csv')
    if fmt not in INPUT_FORMATS:
        raise InvalidParameterError(f"Unsupported input format {fmt!r}; expected one of {INPUT_FORMATS}")
    if not path.exists():
        raise SignalIOError(f"Input file not found: {path}")

    if fmt == 'csv':
        samples, metadata = _read_csv_samples(path)
        if samples.size == 0:
            raise SignalIOError(f"{path}: no samples found")
        rate = metadata.get('sample_rate')
        return Signal(samples, sample_rate=float(rate) if rate not in (None, '', 'None') else None)

    try:
        rate, data = wavfile.read(path)
    except (ValueError, OSError) as e:
        raise SignalIOError(f"{path}: cannot read WAV file ({e})")
    if data.dtype != np.int16:
        raise SignalIOError(f"{path}: unsupported WAV encoding {data.dtype}; only 16-bit PCM is accepted")
    if data.ndim == 2:
        data = data[:, 0]
    if data.size == 0:
        raise SignalIOError(f"{path}: no samples found")
    return Signal(data.astype(float) / 32768.0, sample_rate=float(rate))


# --------------------------------------------------------------------------- writing

def _metadata_header(meta: Optional[Dict]) -> str:
    if not meta:
        return ''
    return ''.join(f"# {key}={value}\n" for key, value in meta.items())


def _write_text(path, text: str):
    path = Path(path)
    try:
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
    except OSError as e:
        raise SignalIOError(f"Cannot write {path}: {e}")


def _frame_to_csv(frame: pd.DataFrame, float_columns: List[str], meta: Optional[Dict]) -> str:
    frame = frame.copy()
    for column in float_columns:
        frame[column] = frame[column].map(format_float).astype(object)
    return _metadata_header(meta) + frame.to_csv(index=False, lineterminator='\n')


def _frame_records(frame: pd.DataFrame, float_columns: List[str]) -> List[Dict]:
    records = []
    for row in frame.to_dict(orient='records'):
        record = {}
        for key, value in row.items():
            if key in float_columns:
                record[key] = _round(value)
            elif isinstance(value, (bool, np.bool_)):
                record[key] = bool(value)
            else:
                record[key] = int(value) if isinstance(value, (int, np.integer)) else value
        records.append(record)
    return records


def _write_json(payload: Dict, path):
    _write_text(path, json.dumps(payload, indent=2) + '\n')


def _check_format(fmt: str) -> str:
    fmt = fmt or config.DEFAULT_OUTPUT_FORMAT
    if fmt not in OUTPUT_FORMATS:
        raise InvalidParameterError(f"Unsupported output format {fmt!r}; expected one of {OUTPUT_FORMATS}")
    return fmt


def write_samples(values, path, fmt: str = None, meta: Dict = None, name: str = 'x'):
    """One sample per line under a single-column header."""
    fmt = _check_format(fmt)
    values = np.asarray(values, dtype=float)
    if fmt == 'json':
        _write_json({'params': meta or {}, name: [_round(v) for v in values]}, path)
        return
    lines = ''.join(format_float(v) + '\n' for v in values)
    _write_text(path, _metadata_header(meta) + f"{name}\n" + lines)


def write_signal(signal: Signal, path, fmt: str = None, meta: Dict = None):
    meta = dict(meta or {})
    meta['sample_rate'] = signal.sample_rate
    meta['n_len'] = len(signal)
    write_samples(signal.samples, path, fmt, meta, name='x')


def write_spectrum(spectrum, path, fmt: str = None, meta: Dict = None):
    """Periodic (or RFT) spectrum as `q,strength` rows sorted by q."""
    fmt = _check_format(fmt)
    frame = spectrum.to_frame()
    if fmt == 'json':
        _write_json({
            'max_q': spectrum.max_q,
            'params': meta or {},
            'strengths': _frame_records(frame, ['strength']),
        }, path)
        return
    _write_text(path, _frame_to_csv(frame, ['strength'], meta))


def read_spectrum(path) -> PeriodicSpectrum:
    path = Path(path)
    try:
        if path.suffix.lower() == '.json':
            payload = json.loads(path.read_text(encoding='utf-8'))
            strengths = {int(r['q']): float(r['strength']) for r in payload['strengths']}
            return PeriodicSpectrum(strengths=strengths, max_q=payload.get('max_q'))
        frame = pd.read_csv(path, comment='#')
    except (OSError, ValueError, KeyError) as e:
        raise SignalIOError(f"Cannot read spectrum {path}: {e}")
    strengths = {int(q): float(s) for q, s in zip(frame['q'], frame['strength'])}
    return PeriodicSpectrum(strengths=strengths)


def write_trace(d: Decomposition, path, fmt: str = None, meta: Dict = None):
    """Per-iteration choices and the error-rate trace of a decomposition."""
    fmt = _check_format(fmt)
    frame = d.to_frame()[['iteration', 'q', 'i', 'k', 'abs_alpha', 'energy', 'residual_energy', 'error_rate']]
    float_columns = ['abs_alpha', 'energy', 'residual_energy', 'error_rate']
    if fmt == 'json':
        _write_json({
            'params': meta or {},
            'input_energy': _round(d.input_energy),
            'iterations': _frame_records(frame, float_columns),
        }, path)
        return
    _write_text(path, _frame_to_csv(frame, float_columns, meta))


def read_trace(path) -> pd.DataFrame:
    path = Path(path)
    try:
        if path.suffix.lower() == '.json':
            payload = json.loads(path.read_text(encoding='utf-8'))
            return pd.DataFrame(payload['iterations'])
        return pd.read_csv(path, comment='#')
    except (OSError, ValueError, KeyError) as e:
        raise SignalIOError(f"Cannot read trace {path}: {e}")


def _plane_metadata(plane: TimePeriodPlane, meta: Optional[Dict]) -> Dict:
    merged = dict(meta or {})
    merged.update({
        'window_size': plane.window_size,
        'hop': plane.hop,
        'max_q': plane.max_q,
        'n_windows': plane.n_windows,
        'first_center': int(plane.window_centers[0]) if plane.n_windows else 0,
        'sample_rate': plane.sample_rate,
    })
    return merged


def write_plane(plane: TimePeriodPlane, path, fmt: str = None, meta: Dict = None):
    """Time-period plane as sparse `window_center,q,strength` rows."""
    fmt = _check_format(fmt)
    frame = plane.to_frame()
    if fmt == 'json':
        w_idx, _ = np.nonzero(plane.cells)
        cells = _frame_records(frame, ['strength'])
        for record, w in zip(cells, w_idx):
            record['window'] = int(w)
        _write_json({
            'window_size': plane.window_size,
            'hop': plane.hop,
            'max_q': plane.max_q,
            'sample_rate': plane.sample_rate,
            'params': meta or {},
            'window_centers': [int(c) for c in plane.window_centers],
            'cells': cells,
        }, path)
        return
    _write_text(path, _frame_to_csv(frame, ['strength'], _plane_metadata(plane, meta)))


def read_plane(path) -> TimePeriodPlane:
    """Rebuild a plane written by write_plane (CSV or JSON)."""
    path = Path(path)
    try:
        if path.suffix.lower() == '.json':
            payload = json.loads(path.read_text(encoding='utf-8'))
            centers = np.asarray(payload['window_centers'], dtype=int)
            cells = np.zeros((centers.size, int(payload['max_q'])))
            for record in payload['cells']:
                cells[record['window'], record['q'] - 1] = record['strength']
            return TimePeriodPlane(window_size=int(payload['window_size']), hop=int(payload['hop']),
                                   max_q=int(payload['max_q']), cells=cells, window_centers=centers,
                                   sample_rate=payload.get('sample_rate'))
        metadata = _read_csv_metadata(path)
        frame = pd.read_csv(path, comment='#')
        hop = int(metadata['hop'])
        n_windows = int(metadata['n_windows'])
        centers = int(metadata['first_center']) + hop * np.arange(n_windows)
        cells = np.zeros((n_windows, int(metadata['max_q'])))
        for center, q, strength in zip(frame['window_center'], frame['q'], frame['strength']):
            cells[(int(center) - centers[0]) // hop, int(q) - 1] = float(strength)
        rate = metadata.get('sample_rate')
        return TimePeriodPlane(window_size=int(metadata['window_size']), hop=hop, max_q=int(metadata['max_q']),
                               cells=cells, window_centers=centers,
                               sample_rate=float(rate) if rate not in (None, '', 'None') else None)
    except (OSError, ValueError, KeyError) as e:
        raise SignalIOError(f"Cannot read plane {path}: {e}")


def _read_csv_metadata(path: Path) -> Dict[str, str]:
    metadata: Dict[str, str] = {}
    with open(path, 'r', encoding='utf-8') as f:
        for line in f:
            if line.startswith('#'):
                _parse_metadata(line, metadata)
    return metadata


def write_track(track: List[TrackPoint], path, fmt: str = None, meta: Dict = None, plane: TimePeriodPlane = None):
    """Dominant period per window, with time and pitch columns when the sample rate is known."""
    fmt = _check_format(fmt)
    float_columns = []
    if plane is not None and plane.sample_rate:
        frame = pitch_track(plane)
        float_columns = ['time_s', 'period_s', 'frequency_hz']
    else:
        frame = pd.DataFrame(track, columns=['window_center', 'period', 'empty'])
    if fmt == 'json':
        _write_json({'params': meta or {}, 'track': _frame_records(frame, float_columns)}, path)
        return
    _write_text(path, _frame_to_csv(frame, float_columns, meta))


# --------------------------------------------------------------------------- running

@dataclass
class RunConfig:
    """Everything one CLI invocation needs."""
    command: str
    input: Optional[str] = None
    input_format: Optional[str] = None
    synth: SynthesisSpec = field(default_factory=lambda: SynthesisSpec(kind='sum_of_cosines'))
    max_q: int = config.DEFAULT_MAX_PERIOD
    max_iter: int = config.DEFAULT_MAX_ITER
    tol: float = config.DEFAULT_TOL
    tol_mode: str = config.DEFAULT_TOL_MODE
    window: Optional[int] = None
    hop: Optional[int] = None
    window_iters: int = config.DEFAULT_WINDOW_ITERS
    output: Optional[str] = None
    output_format: str = config.DEFAULT_OUTPUT_FORMAT
    seed: int = config.NOISE_SEED
    residual: bool = False
    workers: int = config.WINDOW_WORKERS

    def validate(self):
        if self.command not in COMMANDS:
            raise InvalidParameterError(f"Unknown command {self.command!r}; expected one of {COMMANDS}")
        if self.output_format not in OUTPUT_FORMATS:
            raise InvalidParameterError(f"Output format must be one of {OUTPUT_FORMATS}")
        if self.command == 'synth':
            if self.synth.kind not in SYNTH_KINDS:
                raise InvalidParameterError(f"Signal kind must be one of {SYNTH_KINDS}, got {self.synth.kind!r}")
            return
        if not self.input:
            raise InvalidParameterError(f"Command {self.command!r} needs --input")
        if self.input_format is not None and self.input_format not in INPUT_FORMATS:
            raise InvalidParameterError(f"Input format must be one of {INPUT_FORMATS}")
        if self.max_q < 1:
            raise InvalidParameterError(f"Maximum period must be >= 1, got {self.max_q}")
        if self.command == 'decompose':
            if self.max_iter < 1:
                raise InvalidParameterError(f"Iteration count must be >= 1, got {self.max_iter}")
            if self.tol < 0:
                raise InvalidParameterError(f"Tolerance must be >= 0, got {self.tol}")
        if self.command == 'track':
            if self.window is None:
                raise InvalidParameterError("Command 'track' needs --window")
            if self.window <= self.max_q:
                raise InvalidParameterError(
                    f"Window size must exceed the maximum period (W > Q), got W={self.window}, Q={self.max_q}"
                )
            if self.hop is not None and self.hop < 1:
                raise InvalidParameterError(f"Hop must be >= 1, got {self.hop}")
            if self.window_iters < 1:
                raise InvalidParameterError(f"Iterations per window must be >= 1, got {self.window_iters}")
            if self.workers < 1:
                raise InvalidParameterError(f"Workers must be >= 1, got {self.workers}")

    def output_path(self, default_name: str) -> Path:
        path = Path(self.output) if self.output else Path(default_name)
        if self.output_format == 'json' and path.suffix.lower() != '.json':
            path = path.with_suffix('.json')
        return path

    def companion_path(self, default_name: str, tag: str) -> Path:
        """Secondary output next to the main one, e.g. run.csv -> run_trace.csv."""
        if not self.output:
            return self.output_path(default_name)
        main = self.output_path(default_name)
        return main.with_name(f"{main.stem}_{tag}{main.suffix}")


def _status(message: str):
    if config.SHOW_PROGRESS:
        print(message)


def _run_synth(cfg: RunConfig):
    spec = cfg.synth
    spec.seed = cfg.seed
    signal = synthesize(spec)
    meta = {'command': 'synth', 'kind': spec.kind}
    if spec.kind == 'sum_of_cosines':
        meta['periods'] = ' '.join(str(q) for q in sorted(spec.periods))
    elif spec.kind == 'inverse_chirp':
        meta.update({'a': spec.a, 't0': spec.t0, 't1': spec.t1, 'dt': spec.dt})
    else:
        meta['seed'] = spec.seed
    path = cfg.output_path(config.SIGNAL_FILE)
    write_signal(signal, path, cfg.output_format, meta)
    _status(f"✅ Wrote {len(signal)} samples to {path}")


def _run_spectrum(cfg: RunConfig, signal: Signal, meta: Dict):
    table = exact_periodic_energies(signal.samples, cfg.max_q)
    frame = table.to_frame().reset_index()
    float_columns = ['est_energy', 'energy', 'metric']
    path = cfg.output_path(config.SPECTRUM_FILE)
    if cfg.output_format == 'json':
        _write_json({'max_q': table.max_q, 'params': meta, 'periods': _frame_records(frame, float_columns)}, path)
    else:
        _write_text(path, _frame_to_csv(frame, float_columns, meta))
    _status(f"✅ Wrote periodic energy table (Q={table.max_q}) to {path}")


def _run_decompose(cfg: RunConfig, signal: Signal, meta: Dict):
    meta.update({'max_iter': cfg.max_iter, 'tol': cfg.tol, 'tol_mode': cfg.tol_mode})
    d = csmp(signal.samples, max_q=cfg.max_q, max_iter=cfg.max_iter, tol=cfg.tol, tol_mode=cfg.tol_mode)
    spectrum_path = cfg.output_path(config.SPECTRUM_FILE)
    write_spectrum(periodic_spectrum(d), spectrum_path, cfg.output_format, meta)
    trace_path = cfg.companion_path(config.TRACE_FILE, 'trace')
    write_trace(d, trace_path, cfg.output_format, meta)
    rates = error_rate_trace(d)
    final = rates[-1] if rates else 0.0
    _status(f"✅ {len(d.components)} components, final error rate {final:.3e}")
    _status(f"✅ Wrote {spectrum_path} and {trace_path}")
    if cfg.residual:
        residual_path = cfg.companion_path(config.RESIDUAL_FILE, 'residual')
        recon_path = cfg.companion_path(config.RECONSTRUCTION_FILE, 'reconstruction')
        write_samples(d.residual, residual_path, cfg.output_format, meta, name='residual')
        write_samples(reconstruct(d), recon_path, cfg.output_format, meta, name='reconstruction')
        _status(f"✅ Wrote {residual_path} and {recon_path}")


def _run_track(cfg: RunConfig, signal: Signal, meta: Dict):
    plane = shifted_csmp(signal.samples, max_q=cfg.max_q, window=cfg.window, hop=cfg.hop,
                         iters_per_window=cfg.window_iters, workers=cfg.workers,
                         sample_rate=signal.sample_rate)
    meta.update({'window_iters': plane.iters_per_window})
    plane_path = cfg.output_path(config.PLANE_FILE)
    write_plane(plane, plane_path, cfg.output_format, meta)
    track_path = cfg.companion_path(config.TRACK_FILE, 'track')
    write_track(dominant_track(plane), track_path, cfg.output_format, meta, plane=plane)
    _status(f"✅ Tracked {plane.n_windows} windows; wrote {plane_path} and {track_path}")


def _run_baseline(cfg: RunConfig, signal: Signal, meta: Dict):
    spectrum = rft_spectrum(signal.samples, cfg.max_q)
    path = cfg.output_path(config.SPECTRUM_FILE)
    write_spectrum(spectrum, path, cfg.output_format, meta)
    _status(f"✅ Wrote RFT strengths (Q={spectrum.max_q}) to {path}")


def run(cfg: RunConfig) -> int:
    """Execute one command; 0 on success, 2/3/4 for parameter, I/O and numerical failures."""
    try:
        cfg.validate()
        if cfg.command == 'synth':
            _run_synth(cfg)
            return 0
        signal = read_signal(cfg.input, cfg.input_format)
        meta = {'command': cfg.command, 'input': cfg.input, 'n_len': len(signal), 'max_q': cfg.max_q}
        if cfg.command == 'track':
            meta.update({'window': cfg.window, 'hop': cfg.hop})
        handlers = {
            'spectrum': _run_spectrum,
            'decompose': _run_decompose,
            'track': _run_track,
            'baseline': _run_baseline,
        }
        handlers[cfg.command](cfg, signal, meta)
        return 0
    except CsmpError as e:
        print(f"❌ {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"❌ I/O error: {e}", file=sys.stderr)
        return SignalIOError.exit_code


def _periods(text: str) -> List[int]:
    try:
        return [int(p) for p in text.replace(',', ' ').split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='csmp', description="Hidden-period decomposition of real signals")
    sub = parser.add_subparsers(dest='command', required=True)

    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument('--output', '-o', default=None, help="Output file (default from config.py)")
        p.add_argument('--json', action='store_true', help="Write JSON instead of CSV")
        p.add_argument('--seed', type=int, default=config.NOISE_SEED)
        if name == 'synth':
            p.add_argument('--kind', choices=SYNTH_KINDS, default='sum_of_cosines')
            p.add_argument('--periods', type=_periods, default=list(config.HIDDEN_PERIODS))
            p.add_argument('--length', '-N', type=int, default=config.SYNTH_LENGTH)
            p.add_argument('--chirp-a', type=float, default=config.CHIRP_A)
            p.add_argument('--t0', type=float, default=config.CHIRP_T0)
            p.add_argument('--t1', type=float, default=config.CHIRP_T1)
            p.add_argument('--dt', type=float, default=config.CHIRP_DT)
            continue
        p.add_argument('--input', '-i', required=True)
        p.add_argument('--format', choices=INPUT_FORMATS, default=None, help="Input format (default from suffix)")
        p.add_argument('--max-period', '-Q', type=int, default=config.DEFAULT_MAX_PERIOD)
        if name == 'decompose':
            p.add_argument('--iters', '-L', type=int, default=config.DEFAULT_MAX_ITER)
            p.add_argument('--tol', type=float, default=config.DEFAULT_TOL)
            p.add_argument('--absolute-tol', action='store_true', help="Treat --tol as an absolute residual norm")
            p.add_argument('--residual', action='store_true', help="Also write residual and reconstruction")
        if name == 'track':
            p.add_argument('--window', '-W', type=int, required=True)
            p.add_argument('--hop', '-H', type=int, default=None)
            p.add_argument('--window-iters', type=int, default=config.DEFAULT_WINDOW_ITERS)
            p.add_argument('--workers', type=int, default=config.WINDOW_WORKERS)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command, output=args.output,
                    output_format='json' if args.json else 'csv', seed=args.seed)
    if args.command == 'synth':
        cfg.synth = SynthesisSpec(kind=args.kind, periods=args.periods, n_len=args.length,
                                  a=args.chirp_a, t0=args.t0, t1=args.t1, dt=args.dt, seed=args.seed)
        return cfg
    cfg.input = args.input
    cfg.input_format = args.format
    cfg.max_q = args.max_period
    if args.command == 'decompose':
        cfg.max_iter = args.iters
        cfg.tol = args.tol
        cfg.tol_mode = 'absolute' if args.absolute_tol else 'relative'
        cfg.residual = args.residual
    if args.command == 'track':
        cfg.window = args.window
        cfg.hop = args.hop
        cfg.window_iters = args.window_iters
        cfg.workers = args.workers
    return cfg


def main(argv=None) -> int:
    logging.basicConfig(
        level=logging.DEBUG if config.DEBUG_MODE else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    args = build_parser().parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
