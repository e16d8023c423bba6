"""
Conjugate-subspace atoms and the exact projection of a real signal onto them.

An atom g[n] = exp(j n w) / sqrt(N), w = 2 pi k / q, together with its conjugate
spans a two-dimensional conjugate subspace (one-dimensional and real for q <= 2).
The projection of a real x onto span{g, conj(g)} is 2 Re(alpha g) with

    alpha = (<x, g> - conj(c) <x, conj(g)>) / (1 - |c|^2),   c = <g, conj(g)> = sum g^2

where <a, b> = sum a[n] conj(b[n]).
"""

import math
from dataclasses import dataclass, field

import numpy as np

import config
from errors import InvalidParameterError, NumericalGuardError
from ramanujan import coprime_residues, pair_residue


@dataclass(frozen=True)
class Atom:
    """One conjugate-pair basis descriptor g(w_{q,i}) for signals of length n_len."""
    q: int
    i: int
    k: int
    n_len: int
    omega: float
    norm_const: float
    self_corr: complex
    is_real: bool

    def vector(self) -> np.ndarray:
        return atom_vector(self)


@dataclass
class Component:
    """One extracted projection: the atom, its complex coefficient and the exact energy."""
    atom: Atom
    alpha: complex
    energy: float
    nominal_energy: float
    extracted: np.ndarray = field(default=None, repr=False, compare=False)

    @property
    def q(self) -> int:
        return self.atom.q

    def vector(self) -> np.ndarray:
        """The extracted real vector 2 Re(alpha g) (alpha g for real atoms)."""
        if self.extracted is not None:
            return self.extracted
        g = atom_vector(self.atom)
        if self.atom.is_real:
            return self.alpha.real * g.real
        return 2.0 * (self.alpha * g).real


def _self_correlation(q: int, k: int, n_len: int) -> complex:
    """(1/N) sum_n exp(j 2 n w) via the geometric sum, with exact zero/one cases."""
    step = (2 * k) % q
    if step == 0:
        return complex(1.0)
    end = (2 * k * n_len) % q
    if end == 0:
        return complex(0.0)
    numerator = 1.0 - np.exp(2j * np.pi * end / q)
    denominator = 1.0 - np.exp(2j * np.pi * step / q)
    return complex(numerator / denominator / n_len)


def make_atom(q: int, i: int, n_len: int) -> Atom:
    """Build the i-th conjugate-pair atom of period q for signals of length n_len."""
    k = pair_residue(q, i)
    q, i = int(q), int(i)
    if isinstance(n_len, bool) or int(n_len) != n_len or n_len < 1:
        raise InvalidParameterError(f"Signal length must be a positive integer, got {n_len!r}")
    n_len = int(n_len)
    return Atom(
        q=q,
        i=i,
        k=k,
        n_len=n_len,
        omega=2 * math.pi * k / q,
        norm_const=1.0 / math.sqrt(n_len),
        self_corr=_self_correlation(q, k, n_len),
        is_real=q <= 2,
    )


def _exponential(q: int, k: int, n_len: int) -> np.ndarray:
    n = np.arange(n_len, dtype=np.int64)
    return np.exp(2j * np.pi * ((k * n) % q) / q)


def atom_vector(atom: Atom) -> np.ndarray:
    """Unit-norm complex vector norm_const * exp(j n omega), n = 0..N-1."""
    if atom.is_real:
        n = np.arange(atom.n_len, dtype=np.int64)
        signs = np.where((atom.k * n) % atom.q == 0, 1.0, -1.0)
        return (atom.norm_const * signs).astype(complex)
    return atom.norm_const * _exponential(atom.q, atom.k, atom.n_len)


def project(x, atom: Atom) -> Component:
    """Orthogonal projection of the real signal x onto the conjugate subspace of atom."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != atom.n_len:
        raise InvalidParameterError(
            f"Signal length {x.shape} does not match atom length {atom.n_len}"
        )
    g = atom_vector(atom)

    if atom.is_real:
        alpha = float(np.dot(x, g.real))
        extracted = alpha * g.real
        nominal = alpha * alpha
        alpha = complex(alpha)
    else:
        c = atom.self_corr
        denom = 1.0 - abs(c) ** 2
        if denom < config.SELF_CORR_GUARD:
            raise NumericalGuardError(
                f"Degenerate conjugate pair q={atom.q}, i={atom.i}, N={atom.n_len}: 1-|c|^2={denom:.3e}"
            )
        b = np.vdot(g, x)  # <x, g>; <x, conj(g)> = conj(b) for real x
        alpha = complex((b - np.conj(c) * np.conj(b)) / denom)
        extracted = 2.0 * (alpha * g).real
        nominal = 2.0 * abs(alpha) ** 2

    energy = float(np.dot(extracted, extracted))
    return Component(atom=atom, alpha=alpha, energy=energy, nominal_energy=nominal, extracted=extracted)


def subspace_projection_energy(x, q: int) -> float:
    """Energy of the least-squares projection of x onto the whole Ramanujan subspace S_q."""
    x = np.asarray(x, dtype=float)
    n_len = x.shape[0]
    columns = np.column_stack([_exponential(q, k, n_len) for k in coprime_residues(q)])
    coef, *_ = np.linalg.lstsq(columns, x.astype(complex), rcond=None)
    projected = columns @ coef
    return float(np.vdot(projected, projected).real)
