"""
Number-theoretic building blocks for Ramanujan subspaces.

Totients, coprime residues, Ramanujan sums and the conjugate pairing of the
residues of a period. Also the bookkeeping of the (never materialized)
conjugate-subspace dictionary: its size and the stacking index of each pair.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, List, NamedTuple, Tuple

import numpy as np

import config
from errors import InvalidParameterError, NumericalGuardError


class ConjugatePair(NamedTuple):
    """One conjugate pair (k_i, q - k_i) of the residues of a period."""
    index: int
    k: int
    partner: int
    is_real: bool


class DictionaryEntry(NamedTuple):
    m: int
    q: int
    i: int
    k: int


@dataclass(frozen=True)
class PeriodStructure:
    """Residue structure of one period q."""
    q: int
    residues: List[int] = field(default_factory=list)
    totient: int = 0
    pair_count: int = 0


def _check_period(q) -> int:
    if isinstance(q, bool) or int(q) != q:
        raise InvalidParameterError(f"Period must be an integer, got {q!r}")
    q = int(q)
    if q < 1:
        raise InvalidParameterError(f"Period must be >= 1, got {q}")
    return q


@lru_cache(maxsize=None)
def _factorize(q: int) -> Tuple[Tuple[int, int], ...]:
    """Trial-division factorization as ((prime, exponent), ...)."""
    factors: Dict[int, int] = {}
    n = q
    p = 2
    while p * p <= n:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return tuple(sorted(factors.items()))


@lru_cache(maxsize=None)
def _totient(q: int) -> int:
    result = q
    for p, _ in _factorize(q):
        result -= result // p
    return result


def euler_totient(q: int) -> int:
    """Count of integers in [1, q] coprime with q (phi(1) = 1)."""
    return _totient(_check_period(q))


@lru_cache(maxsize=4096)
def _residues(q: int) -> Tuple[int, ...]:
    return tuple(k for k in range(1, q + 1) if math.gcd(k, q) == 1)


def coprime_residues(q: int) -> List[int]:
    """
    Sorted residues k in [1, q] with gcd(k, q) = 1.

    q = 1 gives [1] (the DC frequency 2*pi) and q = 2 gives [1] (frequency pi).
    """
    return list(_residues(_check_period(q)))


def ramanujan_sum(q: int, n: int) -> float:
    """c_q(n): sum of exp(j 2 pi k n / q) over the residues k coprime with q."""
    q = _check_period(q)
    residues = np.asarray(_residues(q), dtype=np.int64)
    # reduce k*n mod q first so the phases stay exact for large n
    phases = 2 * np.pi * ((residues * (int(n) % q)) % q) / q
    total = np.exp(1j * phases).sum()
    if abs(total.imag) > config.IMAG_TOLERANCE * max(1, len(residues)):
        raise NumericalGuardError(f"Ramanujan sum c_{q}({n}) has imaginary residue {total.imag:.3e}")
    value = float(total.real)
    nearest = round(value)
    if abs(value - nearest) < config.IMAG_TOLERANCE * max(1, len(residues)):
        return float(nearest)
    return value


def pair_count(q: int) -> int:
    """M_q: number of conjugate pairs of period q."""
    q = _check_period(q)
    if q <= 2:
        return 1
    return _totient(q) // 2


def conjugate_pairs(q: int) -> List[ConjugatePair]:
    """The M_q pairs (k_i, q - k_i), k_i < q/2; q <= 2 yields one self-paired real entry."""
    q = _check_period(q)
    if q <= 2:
        return [ConjugatePair(1, 1, 1, True)]
    lower = [k for k in _residues(q) if 2 * k < q]
    return [ConjugatePair(i, k, q - k, False) for i, k in enumerate(lower, start=1)]


def pair_residue(q: int, i: int) -> int:
    """Residue k_i of the i-th conjugate pair of period q."""
    q = _check_period(q)
    m_q = pair_count(q)
    if isinstance(i, bool) or int(i) != i or not 1 <= i <= m_q:
        raise InvalidParameterError(f"Pair index must be in [1, {m_q}] for q={q}, got {i!r}")
    return conjugate_pairs(q)[int(i) - 1].k


def period_structure(q: int) -> PeriodStructure:
    q = _check_period(q)
    return PeriodStructure(
        q=q,
        residues=list(_residues(q)),
        totient=_totient(q),
        pair_count=pair_count(q),
    )


@lru_cache(maxsize=None)
def _proper_divisors(q: int) -> Tuple[int, ...]:
    small = [d for d in range(1, math.isqrt(q) + 1) if q % d == 0]
    divisors = set(small) | {q // d for d in small}
    divisors.discard(q)
    return tuple(sorted(divisors))


def proper_divisors(q: int) -> List[int]:
    """All divisors of q except q itself (1 included for q > 1)."""
    return list(_proper_divisors(_check_period(q)))


def ramanujan_dictionary_size(max_q: int) -> int:
    """Columns of the full Ramanujan dictionary: sum of phi(q) for q <= Q."""
    max_q = _check_period(max_q)
    return sum(_totient(q) for q in range(1, max_q + 1))


def ccs_dictionary_size(max_q: int) -> int:
    """Number of conjugate subspaces up to Q: 2 + sum of phi(q)/2 for 3 <= q <= Q."""
    max_q = _check_period(max_q)
    return sum(pair_count(q) for q in range(1, max_q + 1))


def atom_index(q: int, i: int) -> int:
    """Stacking index m = sum_{p<q} M_p + i of pair (q, i) in the virtual dictionary."""
    pair_residue(q, i)
    offset = sum(pair_count(p) for p in range(1, q))
    return offset + int(i)


def iter_dictionary(max_q: int) -> Iterator[DictionaryEntry]:
    """Walk the virtual dictionary in stacking order; nothing is materialized."""
    max_q = _check_period(max_q)
    m = 0
    for q in range(1, max_q + 1):
        for pair in conjugate_pairs(q):
            m += 1
            yield DictionaryEntry(m, q, pair.index, pair.k)
