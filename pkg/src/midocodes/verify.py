"""Self-contained invariant suites behind the ``verify`` CLI subcommand.

Each check returns (name, ok, detail); a code passes when every check holds.
The checks mirror the library's contracts: descriptor geometry, encoder
linearity and block structure, energy normalization, group separability,
shaping, decoder agreement, and the exact-arithmetic laws of the underlying
tower (automorphism orders, norm closure, non-norm condition, one-sided
inverses).
"""

from __future__ import annotations

import math
import random

import numpy as np

from .algebra import (BimoduleElem, block_codeword_exact, block_inverse,
                      det_in_l_delta, grid_embed, nonnorm_sweep, random_alg_elem,
                      right_inverse)
from .analysis import cubic_shaping_check, group_separability
from .codes import (build_code, conjugate_basis_matrix, encode, layered_mask,
                    make_constellation, rate, staircase_mask, to_real_coords)
from .decoder import ml_exhaustive, ml_fast, ml_metric
from .fields import make_field

EXPECT_CUBIC = {"s4x2": True, "s8x2": True, "s6x2": False, "s12x2": False}


def trace_metric(desc, constellation, y, h, rho, s):
    """ML metric via the quadratic-form expansion (independent of ml_metric)."""
    scale = desc.scale(constellation.energy)
    k = desc.k
    abar = desc.weights[0::2] * scale
    achk = desc.weights[1::2] * scale
    coords = to_real_coords(desc.constellation_kind, np.asarray(s, dtype=complex))
    sb, sc = coords[0::2], coords[1::2]

    def trh(m1, m2):
        return np.trace(h @ m1 @ m2.conj().T @ h.conj().T)

    metric = float(np.trace(y @ y.conj().T).real)
    lin = sum(sb[i] * np.trace(h @ abar[i] @ y.conj().T)
              + sc[i] * np.trace(h @ achk[i] @ y.conj().T) for i in range(k))
    metric -= 2.0 * math.sqrt(rho) * lin.real
    quad = 0.0
    for i in range(k):
        quad += float(trh(abar[i], abar[i]).real) * sb[i] ** 2
        quad += float(trh(achk[i], achk[i]).real) * sc[i] ** 2
    for i in range(k):
        for j in range(i + 1, k):
            quad += float((trh(abar[i], abar[j]) + trh(abar[j], abar[i])).real) * sb[i] * sb[j]
            quad += float((trh(achk[i], achk[j]) + trh(achk[j], achk[i])).real) * sc[i] * sc[j]
    for i in range(k):
        for j in range(k):
            quad += float((trh(abar[i], achk[j]) + trh(achk[j], abar[i])).real) * sb[i] * sc[j]
    return metric + rho * quad


def _rand_instance(desc, const, rng, rho, noiseless=False):
    pts = np.array(const.points)
    s = pts[rng.integers(0, const.m, size=desc.k)]
    h = (rng.normal(size=(2, desc.n_t)) + 1j * rng.normal(size=(2, desc.n_t))) / math.sqrt(2)
    cw = encode(desc, s, normalized=True, constellation=const)
    n = 0.0 if noiseless else \
        (rng.normal(size=(2, desc.T)) + 1j * rng.normal(size=(2, desc.T))) / math.sqrt(2)
    y = math.sqrt(rho) * (h @ cw) + n
    return s, h, y


def verify_code(cid, deep=True):
    """Run the invariant suite for one code id; returns a list of check rows."""
    checks = []
    desc = build_code(cid)
    const = make_constellation(desc.constellation_kind, 4)
    rng = np.random.default_rng(20240 + desc.n_t)
    pts = np.array(const.points)

    r = rate(desc)
    checks.append(("dimensions-and-rate",
                   desc.k == 2 * desc.n_t and desc.T == desc.n_t and r == 2,
                   f"k={desc.k}, T={desc.T}, rate={r}"))

    ok = True
    for _ in range(20):
        s1 = pts[rng.integers(0, const.m, size=desc.k)]
        s2 = pts[rng.integers(0, const.m, size=desc.k)]
        lhs = encode(desc, s1) + encode(desc, s2)
        rhs = encode(desc, s1 + s2)
        ok &= bool(np.abs(lhs - rhs).max() < 1e-12)
    checks.append(("encode-linearity", ok, "additive on 20 random pairs"))

    if desc.block_n:
        n = desc.block_n
        mask = staircase_mask(n)
        s = pts[rng.integers(0, const.m, size=desc.k)]
        cw = encode(desc, s)
        worst = 0.0
        for br in range(n):
            for bc in range(n):
                if not mask[br, bc]:
                    worst = max(worst, float(np.abs(cw[2 * br:2 * br + 2,
                                                       2 * bc:2 * bc + 2]).max()))
        checks.append(("staircase-zero-blocks", worst < 1e-12, f"max |entry| = {worst:.2e}"))

        ctx = make_field(desc.tower)
        rmat = conjugate_basis_matrix(ctx, desc.basis)
        z10 = sum(s[desc.n_t + j] * rmat[n - 1][j] for j in range(n))
        z11 = sum(s[desc.n_t + n + j] * rmat[n - 1][j] for j in range(n))
        gm = ctx.gamma_m.embed()
        expect = gm * np.array([[z10, -np.conj(z11)], [z11, np.conj(z10)]])
        err = float(np.abs(cw[0:2, 2 * n - 2:2 * n] - expect).max())
        checks.append(("gamma-corner", err < 1e-12, f"max err = {err:.2e}"))
    elif desc.tower:
        n = desc.n_t
        mask = layered_mask(n, 2)
        s = pts[rng.integers(0, const.m, size=desc.k)]
        cw = encode(desc, s)
        worst = float(np.abs(cw[~mask]).max()) if (~mask).any() else 0.0
        checks.append(("layered-zero-cells", worst < 1e-12, f"max |entry| = {worst:.2e}"))

    draws = 100_000 if deep else 10_000
    idx = rng.integers(0, const.m, size=(draws, desc.k))
    cw = encode(desc, pts[idx], normalized=True, constellation=const)
    en = float((np.abs(cw) ** 2).sum(axis=(1, 2)).mean())
    cols = (np.abs(cw) ** 2).sum(axis=1).mean(axis=0)
    ok = 0.98 * desc.T <= en <= 1.02 * desc.T and \
        bool(cols.min() >= 0.98 and cols.max() <= 1.02)
    checks.append(("energy-normalization", ok,
                   f"mean={en:.4f} (T={desc.T}), columns in [{cols.min():.4f}, {cols.max():.4f}]"))

    sep = group_separability(desc)
    checks.append(("group-separability", sep["max_cross"] < 1e-12,
                   f"max cross-Gram = {sep['max_cross']:.2e}"))

    if desc.id in EXPECT_CUBIC:
        sh = cubic_shaping_check(desc)
        checks.append(("cubic-shaping", sh["scaled_orthogonal"] == EXPECT_CUBIC[desc.id],
                       f"scaled_orthogonal={sh['scaled_orthogonal']}"))

    rho = 10.0
    ok = True
    worst = 0.0
    for _ in range(2):
        s, h, y = _rand_instance(desc, const, rng, rho)
        m1 = ml_metric(desc, const, y, h, rho, s)
        m2 = trace_metric(desc, const, y, h, rho, s)
        worst = max(worst, abs(m1 - m2) / (1.0 + m1))
        ok &= abs(m1 - m2) <= 1e-9 * (1.0 + m1)
    checks.append(("metric-trace-expansion", ok, f"worst rel gap = {worst:.2e}"))

    if const.m ** desc.k <= 70000:
        ok = True
        worst = 0.0
        for _ in range(3):
            s, h, y = _rand_instance(desc, const, rng, rho)
            re = ml_exhaustive(desc, const, y, h, rho)
            rf = ml_fast(desc, const, y, h, rho)
            worst = max(worst, abs(re.metric - rf.metric))
            ok &= abs(re.metric - rf.metric) <= 1e-9 * (1.0 + re.metric)
        checks.append(("fast-equals-exhaustive", ok, f"worst gap = {worst:.2e}"))
    else:
        from .decoder import SearchTooLargeError
        try:
            ok = True
            for _ in range(3):
                s, h, y = _rand_instance(desc, const, rng, rho, noiseless=True)
                rf = ml_fast(desc, const, y, h, rho)
                ok &= bool(np.abs(np.asarray(rf.symbols) - s).max() < 1e-9)
            checks.append(("fast-noiseless-recovery", ok, "3 noiseless instances"))
        except SearchTooLargeError:
            # the outer enumeration is beyond desk scale for this code; the
            # decoder refusing it is the contract
            checks.append(("fast-decoder-cap", True, "outer enumeration capped"))

    if desc.tower:
        checks.extend(verify_tower(desc.tower, deep=deep))
    return checks


def verify_tower(fid, deep=True):
    """Exact-arithmetic invariants of the underlying field tower and algebra."""
    checks = []
    ctx = make_field(fid)
    prng = random.Random(917)
    n = ctx.n

    def rand_k():
        return ctx.from_pairs([(prng.randint(-4, 4), prng.randint(-4, 4)) for _ in range(n)])

    count = 200 if deep else 50
    ok_t = ok_s = ok_c = ok_e = ok_n = True
    for _ in range(count):
        a = rand_k()
        b = rand_k()
        cur = a
        for _ in range(n):
            cur = cur.tau()
        ok_t &= cur == a
        ok_s &= a.sigma().sigma() == a
        ok_c &= a.tau().sigma() == a.sigma().tau()
        prod = (a * b).embed()
        ok_e &= abs(prod - a.embed() * b.embed()) <= 1e-9 * (1.0 + abs(prod))
        try:
            a.relative_norm()
        except Exception:
            ok_n = False
    checks.append((f"{fid}:tau-order-{n}", ok_t, "tau^n = id exactly"))
    checks.append((f"{fid}:sigma-involution", ok_s, "sigma^2 = id exactly"))
    checks.append((f"{fid}:sigma-tau-commute", ok_c, "exact"))
    checks.append((f"{fid}:embedding-multiplicative", ok_e, "within 1e-9 relative"))
    checks.append((f"{fid}:norm-closure", ok_n, "norm lands in L exactly"))

    rep = nonnorm_sweep(ctx, 300 if deep else 100, 3, seed=5)
    checks.append((f"{fid}:non-norm", rep["violations"] == 0,
                   f"{rep['tested']} exact samples, {rep['violations']} violations"))

    one = BimoduleElem.one(ctx)
    cnt = 25 if deep else 8
    ok = True
    for _ in range(cnt):
        a0 = random_alg_elem(ctx, prng, 2)
        a1 = random_alg_elem(ctx, prng, 2)
        if a0.is_zero() and a1.is_zero():
            continue
        ok &= BimoduleElem.from_pair(a0, a1) * right_inverse(a0, a1) == one
    checks.append((f"{fid}:right-inverse", ok, f"{cnt} exact products equal 1"))

    cnt = 10 if deep else 4
    ok_b = ok_d = True
    worst_b = worst_d = 0.0
    for _ in range(cnt):
        a0 = random_alg_elem(ctx, prng, 2)
        a1 = random_alg_elem(ctx, prng, 2)
        if a0.is_zero() and a1.is_zero():
            continue
        m = grid_embed(block_codeword_exact(ctx, a0, a1))
        minv = block_inverse(a0, a1)
        err = float(np.abs(m @ minv - np.eye(2 * n)).max())
        worst_b = max(worst_b, err)
        ok_b &= err < 1e-9
        delta, dmag = det_in_l_delta(ctx, a0, a1)
        worst_d = max(worst_d, delta / (1.0 + dmag))
        ok_d &= delta < 1e-9 * (1.0 + dmag)
    checks.append((f"{fid}:block-inverse", ok_b, f"worst |M Minv - I| = {worst_b:.2e}"))
    checks.append((f"{fid}:det-fixed-by-tau", ok_d, f"worst rel delta = {worst_d:.2e}"))
    return checks
