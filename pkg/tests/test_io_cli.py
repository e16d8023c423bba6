"""Signal ingestion, result files and the command line."""

import json

import numpy as np
import pytest
from scipy.io import wavfile

import io_cli
from csmp import PeriodicSpectrum, csmp
from errors import NumericalGuardError, SignalIOError
from io_cli import (
    RunConfig,
    format_float,
    main,
    read_plane,
    read_signal,
    read_spectrum,
    read_trace,
    run,
    write_plane,
    write_samples,
    write_signal,
    write_spectrum,
    write_trace,
)
from shifted import TimePeriodPlane, dominant_track
from signals import Signal, SynthesisSpec, synthesize
from subspace import make_atom


def _data_lines(path):
    return [line for line in path.read_text().splitlines() if not line.startswith('#')]


def test_format_float():
    assert format_float(2.0) == '2.0'
    assert format_float(1 / 3) == '0.333333333'
    assert format_float(1e-20) == '1e-20'
    assert format_float(975) == '975.0'


def test_read_csv(tmp_path):
    path = tmp_path / 'x.csv'
    path.write_text("1.0\n-1.0\n0.5\n")
    assert np.array_equal(read_signal(path).samples, [1.0, -1.0, 0.5])


def test_read_csv_with_header_and_comments(tmp_path):
    path = tmp_path / 'x.csv'
    path.write_text("# sample_rate=8000\nx\n\n1\n2\n")
    signal = read_signal(path)
    assert np.array_equal(signal.samples, [1.0, 2.0])
    assert signal.sample_rate == 8000.0


def test_read_csv_malformed_line_reports_line_number(tmp_path):
    path = tmp_path / 'x.csv'
    path.write_text("1.0\n2.0\nabc\n")
    with pytest.raises(SignalIOError, match=":3:"):
        read_signal(path)


def test_read_csv_rejects_non_finite_samples(tmp_path):
    path = tmp_path / 'x.csv'
    path.write_text("x\n1.0\nnan\n-1.0\n")
    with pytest.raises(SignalIOError, match=":3:"):
        read_signal(path)
    path.write_text("1.0\n-inf\n")
    with pytest.raises(SignalIOError, match=":2:"):
        read_signal(path)


def test_run_non_finite_input_is_io_error(tmp_path):
    path = tmp_path / 'x.csv'
    path.write_text("1.0\nnan\n-1.0\n" * 20)
    code = run(RunConfig(command='decompose', input=str(path), max_q=3, output=str(tmp_path / 'd.csv')))
    assert code == 3
    assert not (tmp_path / 'd.csv').exists()


def test_read_csv_errors(tmp_path):
    empty = tmp_path / 'empty.csv'
    empty.write_text("")
    with pytest.raises(SignalIOError):
        read_signal(empty)
    with pytest.raises(SignalIOError):
        read_signal(tmp_path / 'missing.csv')


def test_read_wav_scaling(tmp_path):
    path = tmp_path / 'square.wav'
    data = np.array([32767, -32767] * 8, dtype=np.int16)
    wavfile.write(path, 8000, data)
    signal = read_signal(path)
    assert signal.sample_rate == 8000.0
    assert np.allclose(signal.samples, np.tile([32767 / 32768, -32767 / 32768], 8))


def test_read_wav_first_channel(tmp_path):
    path = tmp_path / 'stereo.wav'
    data = np.column_stack([np.arange(10), -np.arange(10)]).astype(np.int16)
    wavfile.write(path, 16000, data)
    assert np.allclose(read_signal(path).samples, np.arange(10) / 32768)


def test_read_wav_rejects_float_encoding(tmp_path):
    path = tmp_path / 'float.wav'
    wavfile.write(path, 8000, np.zeros(10, dtype=np.float32))
    with pytest.raises(SignalIOError, match="16-bit"):
        read_signal(path)


def test_signal_round_trip(tmp_path):
    signal = synthesize(SynthesisSpec(kind='inverse_chirp'))
    path = tmp_path / 'chirp.csv'
    write_signal(signal, path)
    back = read_signal(path)
    assert np.allclose(back.samples, signal.samples, atol=1e-6)
    assert back.sample_rate == pytest.approx(100.0)


def test_write_spectrum_csv(tmp_path):
    path = tmp_path / 'spectrum.csv'
    write_spectrum(PeriodicSpectrum(strengths={5: 2.0}), path)
    assert path.read_text() == "q,strength\n5,2.0\n"


def test_write_empty_spectrum(tmp_path):
    path = tmp_path / 'spectrum.csv'
    write_spectrum(PeriodicSpectrum(), path, meta={'max_q': 10})
    assert path.read_text() == "# max_q=10\nq,strength\n"


def test_write_spectrum_json(tmp_path):
    path = tmp_path / 'spectrum.json'
    write_spectrum(PeriodicSpectrum(strengths={12: 1.5, 5: 2.0}, max_q=20), path, fmt='json', meta={'seed': 0})
    payload = json.loads(path.read_text())
    assert payload['max_q'] == 20
    assert payload['params'] == {'seed': 0}
    assert payload['strengths'] == [{'q': 5, 'strength': 2.0}, {'q': 12, 'strength': 1.5}]


def test_spectrum_round_trip(tmp_path):
    spectrum = PeriodicSpectrum(strengths={5: 974.99999, 57: 1 / 3, 85: 12.5}, max_q=100)
    for name in ('s.csv', 's.json'):
        path = tmp_path / name
        write_spectrum(spectrum, path, fmt='json' if name.endswith('json') else 'csv')
        back = read_spectrum(path)
        assert sorted(back.strengths) == [5, 57, 85]
        for q, value in spectrum.strengths.items():
            assert back.strengths[q] == pytest.approx(value, rel=1e-8)


def test_write_plane_empty_and_single_cell(tmp_path):
    empty = TimePeriodPlane(window_size=30, hop=10, max_q=4, cells=np.zeros((1, 4)), window_centers=np.array([15]))
    path = tmp_path / 'empty.csv'
    write_plane(empty, path)
    assert _data_lines(path) == ['window_center,q,strength']

    cells = np.zeros((1, 4))
    cells[0, 2] = 0.25
    single = TimePeriodPlane(window_size=30, hop=10, max_q=4, cells=cells, window_centers=np.array([15]))
    path = tmp_path / 'single.csv'
    write_plane(single, path)
    assert _data_lines(path) == ['window_center,q,strength', '15,3,0.25']


def test_plane_round_trip_keeps_track(tmp_path):
    cells = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [2.0, 0.0, 3.0]])
    plane = TimePeriodPlane(window_size=12, hop=4, max_q=3, cells=cells, window_centers=np.array([6, 10, 14]),
                            sample_rate=50.0)
    for name, fmt in (('p.csv', 'csv'), ('p.json', 'json')):
        path = tmp_path / name
        write_plane(plane, path, fmt=fmt)
        back = read_plane(path)
        assert np.allclose(back.cells, plane.cells)
        assert list(back.window_centers) == [6, 10, 14]
        assert back.sample_rate == 50.0
        assert dominant_track(back) == dominant_track(plane)


def test_unwritable_path(tmp_path):
    with pytest.raises(SignalIOError):
        write_samples([1.0], tmp_path / 'missing_dir' / 'x.csv')


def _one_atom_file(tmp_path):
    x = 2 * make_atom(5, 1, 650).vector().real
    path = tmp_path / 'atom.csv'
    write_signal(Signal(x), path)
    return path


def test_run_decompose_one_atom(tmp_path):
    source = _one_atom_file(tmp_path)
    out = tmp_path / 'result.csv'
    code = run(RunConfig(command='decompose', input=str(source), max_q=10, max_iter=20, output=str(out),
                         residual=True))
    assert code == 0
    assert _data_lines(out)[0] == 'q,strength'
    assert [line.split(',')[0] for line in _data_lines(out)[1:]] == ['5']
    trace = _data_lines(tmp_path / 'result_trace.csv')
    header = trace[0].split(',')
    final = float(trace[-1].split(',')[header.index('error_rate')])
    assert final < 1e-12
    assert (tmp_path / 'result_residual.csv').exists()
    assert (tmp_path / 'result_reconstruction.csv').exists()


def test_run_rejects_small_window(tmp_path, capsys):
    source = _one_atom_file(tmp_path)
    code = run(RunConfig(command='track', input=str(source), max_q=100, window=50, output=str(tmp_path / 'p.csv')))
    assert code == 2
    assert "W > Q" in capsys.readouterr().err


def test_run_missing_input_is_io_error(tmp_path):
    code = run(RunConfig(command='spectrum', input=str(tmp_path / 'nope.csv'), output=str(tmp_path / 's.csv')))
    assert code == 3


def test_run_numerical_guard_exit_code(tmp_path, monkeypatch):
    def tripped(*args, **kwargs):
        raise NumericalGuardError("degenerate pair")

    monkeypatch.setattr(io_cli, 'csmp', tripped)
    source = _one_atom_file(tmp_path)
    code = run(RunConfig(command='decompose', input=str(source), max_q=10, output=str(tmp_path / 'r.csv')))
    assert code == 4


def test_run_requires_input():
    assert run(RunConfig(command='baseline')) == 2


def test_spectrum_and_baseline_commands(tmp_path):
    source = _one_atom_file(tmp_path)
    out = tmp_path / 'energies.csv'
    assert run(RunConfig(command='spectrum', input=str(source), max_q=10, output=str(out))) == 0
    assert _data_lines(out)[0] == 'q,est_energy,energy,metric'
    assert len(_data_lines(out)) == 11

    out = tmp_path / 'rft.json'
    assert run(RunConfig(command='baseline', input=str(source), max_q=10, output=str(out),
                         output_format='json')) == 0
    payload = json.loads(out.read_text())
    assert [entry['q'] for entry in payload['strengths']] == list(range(1, 11))
    assert payload['params']['command'] == 'baseline'


def test_main_synth_and_track(tmp_path):
    signal_path = tmp_path / 'chirp.csv'
    assert main(['synth', '--kind', 'inverse_chirp', '--output', str(signal_path)]) == 0
    plane_path = tmp_path / 'plane.csv'
    assert main(['track', '--input', str(signal_path), '-Q', '40', '-W', '80', '-H', '40',
                 '--window-iters', '3', '--output', str(plane_path)]) == 0
    track_lines = _data_lines(tmp_path / 'plane_track.csv')
    assert track_lines[0] == 'window_center,period,empty,time_s,period_s,frequency_hz'
    assert len(track_lines) == 1 + (801 - 80) // 40 + 1


def test_main_periods_flag(tmp_path):
    path = tmp_path / 'x.csv'
    assert main(['synth', '--periods', '5,12', '--length', '60', '--output', str(path)]) == 0
    assert np.allclose(read_signal(path).samples, np.cos(2 * np.pi * np.arange(60) / 5)
                       + np.cos(2 * np.pi * np.arange(60) / 12), atol=1e-8)


def test_main_rejects_unknown_command():
    with pytest.raises(SystemExit) as exc:
        main(['transform'])
    assert exc.value.code == 2


def test_outputs_are_byte_identical(tmp_path):
    def run_all(folder):
        folder.mkdir()
        signal = folder / 'noise.csv'
        main(['synth', '--kind', 'white_noise', '--length', '300', '--seed', '11', '--output', str(signal)])
        main(['decompose', '--input', str(signal), '-Q', '20', '-L', '8', '--output', str(folder / 'd.csv')])
        main(['decompose', '--input', str(signal), '-Q', '20', '-L', '8', '--json',
              '--output', str(folder / 'd.json')])
        main(['track', '--input', str(signal), '-Q', '10', '-W', '60', '--output', str(folder / 't.csv')])
        main(['spectrum', '--input', str(signal), '-Q', '20', '--output', str(folder / 's.csv')])
        main(['baseline', '--input', str(signal), '-Q', '20', '--json', '--output', str(folder / 'b.json')])
        outputs = {p.name: p.read_bytes() for p in sorted(folder.iterdir()) if p.name != 'noise.csv'}
        return outputs, (folder / 'noise.csv').read_bytes()

    first_outputs, first_signal = run_all(tmp_path / 'a')
    second_outputs, second_signal = run_all(tmp_path / 'b')
    assert first_signal == second_signal
    assert set(first_outputs) == {'d.csv', 'd_trace.csv', 'd.json', 'd_trace.json', 't.csv', 't_track.csv',
                                  's.csv', 'b.json'}
    for name, content in first_outputs.items():
        # the input path is recorded in the metadata header
        assert content.replace(b'/a/', b'/b/') == second_outputs[name]


def test_trace_round_trip(tmp_path):
    n = np.arange(60)
    d = csmp(np.cos(2 * np.pi * n / 5) + np.cos(2 * np.pi * n / 12), max_q=20, max_iter=5)
    for name, fmt in (('t.csv', 'csv'), ('t.json', 'json')):
        path = tmp_path / name
        write_trace(d, path, fmt=fmt, meta={'max_q': 20})
        back = read_trace(path)
        assert list(back['q']) == [c.q for c in d.components]
        assert np.allclose(back['error_rate'], d.to_frame()['error_rate'], rtol=1e-8, atol=1e-15)


def test_read_trace_missing_file(tmp_path):
    with pytest.raises(SignalIOError):
        read_trace(tmp_path / 'none.csv')
