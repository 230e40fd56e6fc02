"""Maximum-likelihood decoding: exhaustive search and the conditional fast decoder.

The metric is ||Y - sqrt(rho) H S||^2 over normalized codewords S.  The fast
decoder enumerates the outer block (the symbols feeding the subdiagonal of the
staircase, or the second layer of the punctured codes), forms the conditional
residual Y' = Y - sqrt(rho) H S(outer), and minimizes each declared inner
group independently; within a group every lattice coordinate but the last is
enumerated and the last is found by quadratic minimization and rounding to
the PAM grid (hard-limiting), clamped to the constellation edge.  Both
decoders break exact metric ties toward the lexicographically smallest symbol
index vector in their own enumeration order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codes import CodeError, encode_real, from_real_coords, pam_levels

_TINY = 1e-300


class DimensionError(CodeError):
    pass


class NoGroupsError(CodeError):
    pass


class SearchTooLargeError(CodeError):
    pass


@dataclass
class DecodeResult:
    symbols: tuple
    metric: float
    metric_evals: int
    group_solves: int


def _check_dims(desc, y, h):
    y = np.asarray(y, dtype=complex)
    h = np.asarray(h, dtype=complex)
    if y.ndim != 2 or h.ndim != 2 or h.shape[1] != desc.n_t or y.shape[1] != desc.T \
            or y.shape[0] != h.shape[0]:
        raise DimensionError(
            f"{desc.id}: Y must be n_r x {desc.T} and H must be n_r x {desc.n_t}")
    return y, h


def ml_metric(desc, constellation, y, h, rho, s):
    """||Y - sqrt(rho) H S(s)||^2 with S the normalized codeword of s."""
    y, h = _check_dims(desc, y, h)
    from .codes import encode
    cw = encode(desc, s, normalized=True, constellation=constellation)
    r = y - math.sqrt(rho) * (h @ cw)
    return float(np.sum(np.abs(r) ** 2))


def _metric_batch(desc, constellation, coords, y, h, rho):
    cw = encode_real(desc, coords, normalized=True, energy=constellation.energy)
    r = y[None] - math.sqrt(rho) * np.einsum("ri,bit->brt", h, cw)
    return np.sum(np.abs(r) ** 2, axis=(1, 2)).real


def ml_exhaustive(desc, constellation, y, h, rho, cap=100_000_000, chunk=1 << 16):
    """Global minimum over all M^k symbol vectors (chunked, lexicographic order)."""
    y, h = _check_dims(desc, y, h)
    m = constellation.m
    k = desc.k
    total = m ** k
    if total > cap:
        raise SearchTooLargeError(f"{desc.id}: M^k = {total} exceeds cap {cap}")
    pts = np.asarray(constellation.points)
    from .codes import to_real_coords
    ppairs = to_real_coords(desc.constellation_kind, pts.reshape(-1, 1)).reshape(m, 2)
    pows = m ** np.arange(k - 1, -1, -1, dtype=np.int64)
    yf = y.reshape(-1)
    hw = np.einsum("ri,kit->krt", h, desc.weights).reshape(2 * k, -1) \
        * desc.scale(constellation.energy)

    best = math.inf
    best_n = -1
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = (idx[:, None] // pows[None, :]) % m
        coords = ppairs[digits].reshape(len(idx), 2 * k)
        r = yf[None, :] - math.sqrt(rho) * (coords @ hw)
        met = np.sum((r * r.conj()).real, axis=1)
        j = int(np.argmin(met))
        if met[j] < best:
            best = float(met[j])
            best_n = int(idx[j])

    digits = (best_n // pows) % m
    symbols = tuple(complex(pts[t]) for t in digits)
    metric = ml_metric(desc, constellation, y, h, rho, symbols)
    return DecodeResult(symbols, metric, total, 0)


def _mixed_radix(start, stop, base, width):
    idx = np.arange(start, stop, dtype=np.int64)
    pows = base ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return (idx[:, None] // pows[None, :]) % base


def ml_fast(desc, constellation, y, h, rho, hard_limit=True):
    """Conditional group decoder; attains the exhaustive minimum metric."""
    y, h = _check_dims(desc, y, h)
    coords, metrics, evals, solves = _ml_fast_batch(
        desc, constellation, y[None], h[None], rho, hard_limit)
    symbols = tuple(from_real_coords(desc.constellation_kind, coords[0]))
    return DecodeResult(symbols, float(metrics[0]), evals, solves)


def _ml_fast_batch(desc, constellation, ys, hs, rho, hard_limit=True,
                   combo_chunk=64, outer_cap=1 << 21):
    """Vectorized fast decoding of a batch of instances.

    Returns (real coords (B, 2k), metrics (B,), metric_evals, group_solves)
    where the counts are per instance.
    """
    if desc.groups is None or not desc.groups.inner:
        raise NoGroupsError(f"{desc.id}: no decoding groups declared")
    m = constellation.m
    side = constellation.side
    levels = np.array(pam_levels(side), dtype=float)
    pts = np.asarray(constellation.points)
    from .codes import to_real_coords
    ppairs = to_real_coords(desc.constellation_kind, pts.reshape(-1, 1)).reshape(m, 2)

    b = ys.shape[0]
    k = desc.k
    scale = desc.scale(constellation.energy)
    sq = math.sqrt(rho)
    hw = np.einsum("bri,kit->bkrt", hs, desc.weights).reshape(b, 2 * k, -1) * scale
    yf = ys.reshape(b, -1)

    outer = desc.groups.outer
    n_out = len(outer)
    mo = m ** n_out
    if mo > outer_cap:
        raise SearchTooLargeError(f"{desc.id}: outer enumeration M^{n_out} = {mo} too large")
    out_digits = _mixed_radix(0, mo, m, n_out)
    out_coords = ppairs[out_digits].reshape(mo, 2 * n_out)
    idx_out = [c for p in outer for c in (2 * p, 2 * p + 1)]

    hs_out = np.einsum("oc,bcf->bof", out_coords, hw[:, idx_out])
    yp = yf[:, None, :] - sq * hs_out           # (B, Mo, F)
    base = np.sum((yp * yp.conj()).real, axis=2)  # (B, Mo)

    total = base.copy()
    picks = []   # per group: (enum_coords, combo digits per (B, Mo), hl values or None)
    evals_per_instance = mo
    for g in desc.groups.inner:
        enum = g if not hard_limit else g[:-1]
        hl = g[-1] if hard_limit else None
        c_total = side ** len(enum)
        evals_per_instance += mo * c_total

        if hl is not None:
            w = hw[:, hl]                        # (B, F)
            wn = np.sum((w * w.conj()).real, axis=1)  # (B,)
            safe_wn = np.maximum(wn, _TINY)

        best_val = None
        best_arg = np.zeros((b, mo), dtype=np.int64)
        best_hlv = np.zeros((b, mo)) if hl is not None else None
        for c0 in range(0, c_total, combo_chunk):
            cc = min(combo_chunk, c_total - c0)
            digits = _mixed_radix(c0, c0 + cc, side, len(enum)) if enum else \
                np.zeros((1, 0), dtype=np.int64)
            vals = levels[digits]                # (cc, L-1)
            if enum:
                hv = np.einsum("cl,blf->bcf", vals, hw[:, list(enum)])
                z = yp[:, None, :, :] - sq * hv[:, :, None, :]   # (B, cc, Mo, F)
            else:
                z = yp[:, None, :, :]
            zz = np.sum((z * z.conj()).real, axis=3)             # (B, cc, Mo)
            if hl is not None:
                re = np.einsum("bcmf,bf->bcm", z, w.conj()).real
                xstar = re / (sq * safe_wn[:, None, None])
                ix = np.clip(np.round((xstar + side - 1.0) / 2.0), 0, side - 1)
                val = 2.0 * ix - (side - 1.0)
                cand = zz - 2.0 * sq * val * re + rho * (val * val) * wn[:, None, None]
            else:
                cand = zz
                val = None
            cmin = np.min(cand, axis=1)
            carg = np.argmin(cand, axis=1)
            if best_val is None:
                best_val = cmin
                best_arg = carg + c0
                if hl is not None:
                    best_hlv = np.take_along_axis(val, carg[:, None, :], axis=1)[:, 0, :]
            else:
                better = cmin < best_val
                best_val = np.where(better, cmin, best_val)
                best_arg = np.where(better, carg + c0, best_arg)
                if hl is not None:
                    hlv = np.take_along_axis(val, carg[:, None, :], axis=1)[:, 0, :]
                    best_hlv = np.where(better, hlv, best_hlv)
        total += best_val - base
        picks.append((enum, best_arg, best_hlv))

    best_outer = np.argmin(total, axis=1)        # (B,)
    coords = np.zeros((b, 2 * k))
    for bi in range(b):
        oid = int(best_outer[bi])
        for t, p in enumerate(outer):
            a_, b_ = ppairs[out_digits[oid, t]]
            coords[bi, 2 * p] = a_
            coords[bi, 2 * p + 1] = b_
        for (enum, best_arg, best_hlv), g in zip(picks, desc.groups.inner):
            cid = int(best_arg[bi, oid])
            if enum:
                digs = []
                v = cid
                for _ in range(len(enum)):
                    digs.append(v % side)
                    v //= side
                digs.reverse()
                for coord, dg in zip(enum, digs):
                    coords[bi, coord] = levels[dg]
            if best_hlv is not None:
                coords[bi, g[-1]] = best_hlv[bi, oid]

    metrics = _metric_batch_from_coords(desc, constellation, coords, ys, hs, rho)
    solves = mo * len(desc.groups.inner)
    return coords, metrics, evals_per_instance, solves


def _metric_batch_from_coords(desc, constellation, coords, ys, hs, rho):
    cw = encode_real(desc, coords, normalized=True, energy=constellation.energy)
    r = ys - math.sqrt(rho) * np.einsum("bri,bit->brt", hs, cw)
    return np.sum(np.abs(r) ** 2, axis=(1, 2))
