"""Coding-gain and lattice-structure analysis.

The normalized minimum determinant of a code with lattice scale c over a
constellation of energy E is

    delta_min = min |det(S_i - S_j)|^2 * (c^2 / E)^(n_t)

and by linearity the search runs over difference vectors whose entries come
from the per-symbol difference set (9 values for 4-QAM/4-HEX), not over
codeword pairs.  Exhaustive search is feasible for the 4x4 codes at 4-QAM;
for the taller codes we use the single-symbol witness (difference 2 in one
slot) plus a seeded random sweep.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codes import HEX, CodeError, encode_real, generator_matrix
from .fields import OMEGA

EXHAUSTIVE = "exhaustive"
SAMPLED = "sampled"
TARGETED = "targeted"


class SearchTooLargeError(CodeError):
    pass


@dataclass
class MinDetResult:
    delta_min: float
    unnorm_min: float
    achieving_diff: tuple
    pairs_scanned: int
    mode: str


@dataclass
class QuantizationReport:
    samples: int
    zero_cases: int
    max_integer_deviation: float
    min_unnorm_detsq: float
    divisor: int
    divisor_violations: int


def _diff_values(constellation):
    """Symbol differences as lattice pairs, ordered so index reversal = negation."""
    side = constellation.side
    dlev = list(range(-2 * side + 2, 2 * side - 1, 2))
    pairs = [(a, b) for a in dlev for b in dlev]
    return pairs


def _norm_factor(desc, constellation):
    return (desc.lattice_norm ** 2 / constellation.energy) ** desc.n_t


def _det_batch(mats):
    """Batched determinants; 4x4 is expanded by complementary 2x2 minors."""
    if mats.shape[-1] != 4:
        return np.linalg.det(mats)
    a = mats

    def m2(r0, r1, c0, c1):
        return a[..., r0, c0] * a[..., r1, c1] - a[..., r0, c1] * a[..., r1, c0]

    return (m2(0, 1, 0, 1) * m2(2, 3, 2, 3) - m2(0, 1, 0, 2) * m2(2, 3, 1, 3)
            + m2(0, 1, 0, 3) * m2(2, 3, 1, 2) + m2(0, 1, 1, 2) * m2(2, 3, 0, 3)
            - m2(0, 1, 1, 3) * m2(2, 3, 0, 2) + m2(0, 1, 2, 3) * m2(2, 3, 0, 1))


def _coords_to_unit(kind):
    return OMEGA if kind == HEX else 1j


def _detsq_of_coords(desc, coords):
    mats = encode_real(desc, coords)
    return np.abs(_det_batch(mats)) ** 2


def min_det_exhaustive(desc, constellation, cap=100_000_000, chunk=1 << 18):
    """Global minimum |det|^2 over all nonzero codeword differences.

    Enumerates difference vectors by mixed-radix index; the +-symmetry halves
    the work because index reversal negates the vector.  Ties go to the
    lexicographically smallest index.  Raises SearchTooLargeError when the
    difference space exceeds ``cap``.
    """
    pairs = _diff_values(constellation)
    d = len(pairs)
    k = desc.k
    total = d ** k
    if total > cap:
        raise SearchTooLargeError(
            f"{desc.id}: {d}^{k} = {total} difference vectors exceeds cap {cap}")
    half = (total - 1) // 2  # index half-1 .. 0 mirrors half+1 .. total-1; center is zero
    pa = np.array([p[0] for p in pairs], dtype=float)
    pb = np.array([p[1] for p in pairs], dtype=float)
    pows = d ** np.arange(k - 1, -1, -1, dtype=np.int64)

    best = math.inf
    best_n = -1
    scanned = 0
    for start in range(0, half, chunk):
        idx = np.arange(start, min(start + chunk, half), dtype=np.int64)
        digits = (idx[:, None] // pows[None, :]) % d
        coords = np.empty((len(idx), 2 * k))
        coords[:, 0::2] = pa[digits]
        coords[:, 1::2] = pb[digits]
        detsq = _detsq_of_coords(desc, coords)
        j = int(np.argmin(detsq))
        if detsq[j] < best:
            best = float(detsq[j])
            best_n = int(idx[j])
        scanned += len(idx)

    digits = (best_n // pows) % d
    unit = _coords_to_unit(desc.constellation_kind)
    diff = tuple(complex(pa[t]) + unit * pb[t] for t in digits)
    return MinDetResult(best * _norm_factor(desc, constellation), best, diff,
                        scanned, EXHAUSTIVE)


def min_det_targeted(desc, constellation):
    """Upper-bound witness: difference 2 in a single symbol slot (all slots tried)."""
    k = desc.k
    best = math.inf
    best_p = -1
    for p in range(k):
        coords = np.zeros((1, 2 * k))
        coords[0, 2 * p] = 2.0
        detsq = float(_detsq_of_coords(desc, coords)[0])
        if detsq < best:
            best = detsq
            best_p = p
    diff = [0j] * k
    diff[best_p] = 2.0 + 0j
    return MinDetResult(best * _norm_factor(desc, constellation), best,
                        tuple(diff), k, TARGETED)


def min_det_sampled(desc, constellation, n_samples, seed=0, chunk=1 << 16):
    """Minimum over seeded random nonzero difference vectors (a confidence sweep:
    by the lattice argument it can never fall below the true minimum)."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    pairs = _diff_values(constellation)
    d = len(pairs)
    k = desc.k
    pa = np.array([p[0] for p in pairs], dtype=float)
    pb = np.array([p[1] for p in pairs], dtype=float)
    zero_digit = (d - 1) // 2
    rng = np.random.default_rng(seed)

    best = math.inf
    best_digits = None
    done = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        digits = rng.integers(0, d, size=(m, k))
        allzero = np.all(digits == zero_digit, axis=1)
        while np.any(allzero):
            digits[allzero] = rng.integers(0, d, size=(int(allzero.sum()), k))
            allzero = np.all(digits == zero_digit, axis=1)
        coords = np.empty((m, 2 * k))
        coords[:, 0::2] = pa[digits]
        coords[:, 1::2] = pb[digits]
        detsq = _detsq_of_coords(desc, coords)
        j = int(np.argmin(detsq))
        if detsq[j] < best:
            best = float(detsq[j])
            best_digits = digits[j].copy()
        done += m

    unit = _coords_to_unit(desc.constellation_kind)
    diff = tuple(complex(pa[t]) + unit * pb[t] for t in best_digits)
    return MinDetResult(best * _norm_factor(desc, constellation), best, diff,
                        done, SAMPLED)


def det_quantization_check(desc, n_samples, box, seed=0, rel_tol=1e-6, chunk=1 << 15):
    """Draw integer-lattice symbol vectors in [-box, box]^2 per symbol and check
    that every unnormalized |det|^2 sits on the integer grid prescribed by the
    code: within ``rel_tol`` (relative) of a multiple of the divisor, and at
    least the divisor whenever nonzero."""
    if box < 1:
        raise ValueError("box must be >= 1")
    div = desc.unnorm_mindet_divisor or 1
    rng = np.random.default_rng(seed)
    k = desc.k
    zero_cases = 0
    violations = 0
    max_dev = 0.0
    min_nonzero = math.inf
    done = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        coords = rng.integers(-box, box + 1, size=(m, 2 * k)).astype(float)
        detsq = _detsq_of_coords(desc, coords)
        iszero = np.all(coords == 0.0, axis=1)
        zero_cases += int(iszero.sum())
        live = detsq[~iszero]
        if live.size:
            q = np.round(live / div)
            dev = np.abs(live - q * div) / np.maximum(1.0, live)
            max_dev = max(max_dev, float(dev.max()))
            violations += int(np.sum((dev > rel_tol) | (q < 1)))
            min_nonzero = min(min_nonzero, float(live.min()))
        done += m
    return QuantizationReport(done, zero_cases, max_dev, min_nonzero, div, violations)


def cubic_shaping_check(desc, rel_tol=1e-9):
    """Column-orthogonality of the real generator: GtG must be lambda*I."""
    g = generator_matrix(desc)
    gram = g.T @ g
    diag = np.diag(gram)
    lam = float(diag.mean())
    off = gram - np.diag(diag)
    max_off = float(np.abs(off).max())
    ok = max_off < rel_tol * lam and float(np.abs(diag - lam).max()) <= rel_tol * lam
    return {"scaled_orthogonal": bool(ok), "lambda": lam, "max_offdiag": max_off}


def group_separability(desc):
    """Largest cross-Gram |W_i W_j^H + W_j W_i^H| over pairs of inner real
    symbols in different groups; zero means the per-group metric terms never
    couple, whatever the channel."""
    inner = desc.groups.inner
    w = desc.weights
    max_cross = 0.0
    for gi in range(len(inner)):
        for gj in range(gi + 1, len(inner)):
            for a in inner[gi]:
                for b in inner[gj]:
                    cross = w[a] @ w[b].conj().T + w[b] @ w[a].conj().T
                    max_cross = max(max_cross, float(np.linalg.norm(cross)))
    return {"groups": inner, "max_cross": max_cross}
