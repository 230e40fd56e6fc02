"""Quasi-static Rayleigh Monte Carlo: Y = sqrt(rho) H S + N, codeword error rate.

Randomness policy: all draws come from numpy's PCG64 uniform stream through an
explicit Box-Muller transform (recorded in the report as the rng scheme), so
results are reproducible across library versions.  Trials are partitioned into
fixed-size blocks; block b of SNR point s uses the substream seeded by
(seed, s, b), so reports are bit-identical regardless of how many workers run
the blocks.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .codes import encode_real, to_real_coords
from .decoder import _ml_fast_batch, ml_exhaustive

RNG_SCHEME = "box-muller(pcg64)"

FAST = "fast"
EXHAUSTIVE = "exhaustive"


def std_normal(rng, shape):
    """Standard normals via Box-Muller on the uniform stream (version-stable)."""
    total = int(np.prod(shape)) if shape else 1
    m = (total + 1) // 2
    u1 = 1.0 - rng.random(m)  # (0, 1]
    u2 = rng.random(m)
    r = np.sqrt(-2.0 * np.log(u1))
    z = np.concatenate([r * np.cos(2.0 * np.pi * u2), r * np.sin(2.0 * np.pi * u2)])
    return z[:total].reshape(shape)


def complex_gaussian(rng, shape):
    """i.i.d. circularly symmetric CN(0, 1) entries."""
    g = std_normal(rng, (2,) + tuple(shape))
    return (g[0] + 1j * g[1]) / math.sqrt(2.0)


def sample_channel(rng, n_r, n_t):
    return complex_gaussian(rng, (n_r, n_t))


@dataclass
class SnrPoint:
    snr_db: float
    rho: float
    trials: int
    errors: int
    cer: float
    mean_metric_evals: float


@dataclass
class SimulationReport:
    code: str
    constellation: str
    decoder: str
    hard_limit: bool
    seed: int
    rng_scheme: str
    rows: list = field(default_factory=list)
    wall_seconds: float = 0.0


def _decode_block(desc, constellation, ys, hs, rho, decoder, hard_limit):
    if decoder == FAST:
        coords, _, evals, _ = _ml_fast_batch(desc, constellation, ys, hs, rho, hard_limit)
        return coords, evals * ys.shape[0]
    coords = np.zeros((ys.shape[0], 2 * desc.k))
    evals = 0
    for i in range(ys.shape[0]):
        res = ml_exhaustive(desc, constellation, ys[i], hs[i], rho)
        coords[i] = to_real_coords(desc.constellation_kind,
                                   np.asarray(res.symbols)).reshape(-1)
        evals += res.metric_evals
    return coords, evals


def _run_block(desc, constellation, rho, seed, snr_index, block_index, nb,
               decoder, hard_limit, n_r, noise_scale):
    rng = np.random.default_rng((seed, snr_index, block_index))
    m = constellation.m
    k = desc.k
    pts = np.asarray(constellation.points)
    ppairs = to_real_coords(desc.constellation_kind, pts.reshape(-1, 1)).reshape(m, 2)

    sym_idx = np.floor(rng.random((nb, k)) * m).astype(np.int64)
    sym_idx[sym_idx == m] = m - 1  # guard the boundary of the uniform draw
    hs = complex_gaussian(rng, (nb, n_r, desc.n_t))
    ns = complex_gaussian(rng, (nb, n_r, desc.T)) * noise_scale

    coords = ppairs[sym_idx].reshape(nb, 2 * k)
    cw = encode_real(desc, coords, normalized=True, energy=constellation.energy)
    ys = math.sqrt(rho) * np.einsum("bri,bit->brt", hs, cw) + ns

    decoded, evals = _decode_block(desc, constellation, ys, hs, rho, decoder, hard_limit)
    errors = int(np.sum(np.any(np.abs(decoded - coords) > 1e-6, axis=1)))
    return errors, evals


def simulate_cer(desc, constellation, snr_db_list, trials, seed, decoder=FAST,
                 hard_limit=True, n_r=2, block_size=64, threads=1, noise_scale=1.0):
    """Codeword-error-rate sweep; a trial errs iff any decoded symbol differs.

    ``noise_scale`` exists as a test hook (0 turns the channel noiseless).
    Deterministic given (seed, config) and independent of ``threads``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    t0 = time.monotonic()
    report = SimulationReport(
        code=desc.id,
        constellation=f"{constellation.m}-{constellation.kind}",
        decoder=decoder,
        hard_limit=bool(hard_limit),
        seed=seed,
        rng_scheme=RNG_SCHEME,
    )
    for si, snr_db in enumerate(snr_db_list):
        rho = 10.0 ** (snr_db / 10.0)
        blocks = []
        off = 0
        bi = 0
        while off < trials:
            nb = min(block_size, trials - off)
            blocks.append((bi, nb))
            off += nb
            bi += 1

        def work(item):
            bidx, nb = item
            return _run_block(desc, constellation, rho, seed, si, bidx, nb,
                              decoder, hard_limit, n_r, noise_scale)

        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(work, blocks))
        else:
            results = [work(item) for item in blocks]

        errors = sum(r[0] for r in results)
        evals = sum(r[1] for r in results)
        report.rows.append(SnrPoint(
            snr_db=float(snr_db), rho=rho, trials=trials, errors=errors,
            cer=errors / trials, mean_metric_evals=evals / trials))
    report.wall_seconds = time.monotonic() - t0
    return report


CSV_HEADER = "code,constellation,decoder,snr_db,trials,errors,cer,mean_metric_evals,seed"


def report_to_csv(report):
    lines = [CSV_HEADER]
    for row in report.rows:
        lines.append(",".join([
            report.code,
            report.constellation,
            report.decoder,
            f"{row.snr_db:.10g}",
            str(row.trials),
            str(row.errors),
            f"{row.cer:.10g}",
            f"{row.mean_metric_evals:.10g}",
            str(report.seed),
        ]))
    return "\n".join(lines) + "\n"
