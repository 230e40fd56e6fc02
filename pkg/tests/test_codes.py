import json
import math

import numpy as np
import pytest

from midocodes.codes import (CODE_IDS, CodeError, DecodingGroups, HEX, QAM,
                             build_code, conjugate_basis_matrix, descriptor_json,
                             encode, from_real_coords, generator_matrix,
                             layered_mask, make_constellation, pam_levels,
                             perfect_codeword, rate, sr_decompose_check,
                             staircase_mask, to_real_coords, CodeDescriptor)
from midocodes.fields import make_field


def test_constellations():
    q4 = make_constellation(QAM, 4)
    assert len(q4.points) == 4 and abs(q4.energy - 2.0) < 1e-12
    h4 = make_constellation(HEX, 4)
    assert len(h4.points) == 4 and abs(h4.energy - 2.0) < 1e-12
    q16 = make_constellation(QAM, 16)
    assert len(q16.points) == 16 and abs(q16.energy - 10.0) < 1e-12
    assert pam_levels(4) == (-3, -1, 1, 3)
    with pytest.raises(CodeError):
        make_constellation(QAM, 8)


def test_coordinate_roundtrip():
    rng = np.random.default_rng(5)
    for kind, m in [(QAM, 16), (HEX, 16)]:
        pts = np.array(make_constellation(kind, m).points)
        s = pts[rng.integers(0, m, size=32)]
        coords = to_real_coords(kind, s)
        # lattice coordinates of constellation points are exact PAM integers
        assert np.abs(coords - np.round(coords)).max() < 1e-9
        back = from_real_coords(kind, coords)
        assert np.abs(back - s).max() < 1e-12


def test_dimensions_all_codes():
    sizes = {"s4x2": 4, "s6x2": 6, "s8x2": 8, "s12x2": 12,
             "sr4x2": 4, "perf4-punct": 4, "perf6-punct": 6}
    for cid, nt in sizes.items():
        d = build_code(cid)
        assert d.n_t == nt and d.T == nt and d.k == 2 * nt
        assert d.weights.shape == (4 * nt, nt, nt)
        assert rate(d) == 2
    assert build_code("s12x2").k == 24
    with pytest.raises(CodeError):
        build_code("nope")


def test_generator_rank():
    g4 = generator_matrix(build_code("s4x2"))
    assert np.linalg.matrix_rank(g4, tol=1e-9 * np.linalg.svd(g4, compute_uv=False)[0]) == 16
    g12 = generator_matrix(build_code("s12x2"))
    sv = np.linalg.svd(g12, compute_uv=False)
    assert int((sv > 1e-9 * sv[0]).sum()) == 48


def test_generator_of_zero_weights_is_zero():
    d = build_code("s4x2")
    zero = CodeDescriptor("zero", d.n_t, QAM, np.zeros_like(d.weights), d.norm_den,
                          d.groups)
    assert not generator_matrix(zero).any()


def test_encode_zero_and_single_symbol_diag():
    d = build_code("s4x2")
    assert not encode(d, np.zeros(8, dtype=complex)).any()
    # one unit in the first symbol puts the basis element down the diagonal:
    # diag(alpha, conj alpha, tau(alpha), conj tau(alpha))
    s = np.zeros(8, dtype=complex)
    s[0] = 1.0
    cw = encode(d, s)
    th = (1.0 + math.sqrt(5.0)) / 2.0
    alpha = 1 + 1j * (1 - th)
    alpha_t = 1 + 1j * (1 - (1 - th))
    expect = np.diag([alpha, np.conj(alpha), alpha_t, np.conj(alpha_t)])
    assert np.abs(cw - expect).max() < 1e-12


def test_encode_linearity():
    rng = np.random.default_rng(11)
    for cid in CODE_IDS:
        d = build_code(cid)
        pts = np.array(make_constellation(d.constellation_kind, 4).points)
        for _ in range(20):
            s1 = pts[rng.integers(0, 4, size=d.k)]
            s2 = pts[rng.integers(0, 4, size=d.k)]
            lhs = encode(d, s1) + encode(d, s2)
            assert np.abs(lhs - encode(d, s1 + s2)).max() < 1e-12
        # real homogeneity
        s1 = pts[rng.integers(0, 4, size=d.k)]
        assert np.abs(encode(d, 3.0 * s1) - 3.0 * encode(d, s1)).max() < 1e-12


def test_encode_length_check():
    from midocodes.codes import LengthMismatchError
    with pytest.raises(LengthMismatchError):
        encode(build_code("s4x2"), np.zeros(7, dtype=complex))
    with pytest.raises(CodeError):
        encode(build_code("s4x2"), np.zeros(8, dtype=complex), normalized=True)


def test_staircase_zero_blocks():
    rng = np.random.default_rng(3)
    for cid in ("s4x2", "s6x2", "s8x2", "s12x2"):
        d = build_code(cid)
        n = d.block_n
        mask = staircase_mask(n)
        pts = np.array(make_constellation(d.constellation_kind, 4).points)
        cw = encode(d, pts[rng.integers(0, 4, size=d.k)])
        for br in range(n):
            for bc in range(n):
                blk = cw[2 * br:2 * br + 2, 2 * bc:2 * bc + 2]
                if not mask[br, bc]:
                    assert np.abs(blk).max() < 1e-12
                else:
                    assert np.abs(blk).max() > 0


def test_gamma_corner_against_independent_embedding():
    rng = np.random.default_rng(9)
    for cid in ("s4x2", "s6x2", "s8x2", "s12x2"):
        d = build_code(cid)
        ctx = make_field(d.tower)
        n = ctx.n
        pts = np.array(make_constellation(d.constellation_kind, 4).points)
        s = pts[rng.integers(0, 4, size=d.k)]
        cw = encode(d, s)
        rmat = conjugate_basis_matrix(ctx, d.basis)
        z10 = sum(s[d.n_t + j] * rmat[n - 1][j] for j in range(n))
        z11 = sum(s[d.n_t + n + j] * rmat[n - 1][j] for j in range(n))
        gm = ctx.gamma_m.embed()
        expect = gm * np.array([[z10, -np.conj(z11)], [z11, np.conj(z10)]])
        assert np.abs(cw[0:2, 2 * n - 2:2 * n] - expect).max() < 1e-12 * max(1.0, abs(gm))


def test_s12x2_conjugate_basis_matrix():
    d = build_code("s12x2")
    ctx = make_field("f12x2")
    rmat = conjugate_basis_matrix(ctx, d.basis)
    norms = np.sqrt((np.abs(rmat) ** 2).sum(axis=1))
    assert np.abs(norms - math.sqrt(14.0)).max() < 1e-9
    # reference values (4-decimal truncation of the exact embeddings)
    printed = np.array([
        [1.9498, 1.3019 - 0.8660j, -0.0549 - 0.8660j, -1.7469 - 0.8660j, 1.5636, 0.8677],
        [0.8677, -1.7469 - 0.8660j, 1.3019 - 0.8660j, -0.0549 - 0.8660j, -1.9498, 1.5636],
        [1.5636, -0.0549 - 0.8660j, -1.7469 - 0.8660j, 1.3019 - 0.8660j, -0.8677, -1.9498],
        [-1.9498, 1.3019 - 0.8660j, -0.0549 - 0.8660j, -1.7469 - 0.8660j, -1.5636, -0.8677],
        [-0.8677, -1.7469 - 0.8660j, 1.3019 - 0.8660j, -0.0549 - 0.8660j, 1.9498, -1.5636],
        [-1.5636, -0.0549 - 0.8660j, -1.7469 - 0.8660j, 1.3019 - 0.8660j, 0.8677, 1.9498],
    ])

    def trunc4(v):
        return math.trunc(v * 1e4) / 1e4

    for r in range(6):
        for c in range(6):
            e = rmat[r, c]
            p = printed[r, c]
            assert abs(trunc4(e.real) - p.real) < 1e-12, (r, c, e, p)
            assert abs(trunc4(e.imag) - p.imag) < 1e-12, (r, c, e, p)


def test_energy_normalization_quick():
    rng = np.random.default_rng(21)
    for cid in CODE_IDS:
        d = build_code(cid)
        const = make_constellation(d.constellation_kind, 4)
        pts = np.array(const.points)
        s = pts[rng.integers(0, 4, size=(20000, d.k))]
        cw = encode(d, s, normalized=True, constellation=const)
        en = (np.abs(cw) ** 2).sum(axis=(1, 2)).mean()
        assert 0.98 * d.T <= en <= 1.02 * d.T, cid
        cols = (np.abs(cw) ** 2).sum(axis=1).mean(axis=0)
        assert cols.min() >= 0.98 and cols.max() <= 1.02, cid


def test_sr_decomposition():
    assert sr_decompose_check(np.zeros(8, dtype=complex))["residual"] == 0.0
    s = np.zeros(8, dtype=complex)
    s[0] = 1.0
    assert sr_decompose_check(s)["residual"] < 1e-12
    rng = np.random.default_rng(2)
    for _ in range(100):
        s = (rng.integers(-3, 4, size=8) + 1j * rng.integers(-3, 4, size=8)).astype(complex)
        assert sr_decompose_check(s)["residual"] < 1e-12


def test_perfect_codeword_single_layer_identity():
    ctx = make_field("f8x2")
    cw = perfect_codeword(ctx, [ctx.one()], ctx.lelem(0, 1))
    assert np.abs(cw - np.eye(4)).max() < 1e-12


def test_perfect_codeword_gamma_pattern_2x2():
    ctx = make_field("f4x2")
    a0 = ctx.from_pairs([(1, 2), (0, 1)])
    a1 = ctx.from_pairs([(-1, 0), (2, -1)])
    gamma = ctx.lelem(0, 1)
    cw = perfect_codeword(ctx, [a0, a1], gamma)
    assert abs(cw[0, 1] - gamma.embed() * a1.tau().embed()) < 1e-12
    assert abs(cw[1, 1] - a0.tau().embed()) < 1e-12


def test_perfect_codeword_matches_literal_transcription():
    # independent oracle: write out the 4x4 layered matrix column by column
    ctx = make_field("f8x2")
    rng = np.random.default_rng(8)
    pairs = lambda: [(int(rng.integers(-3, 4)), int(rng.integers(-3, 4)))
                     for _ in range(4)]
    a = [ctx.from_pairs(pairs()) for _ in range(2)]
    gamma = ctx.gamma_m
    got = perfect_codeword(ctx, a, gamma)
    g = gamma.embed()
    taus = []
    cur = list(a) + [ctx.zero(), ctx.zero()]
    for _ in range(4):
        taus.append([e.embed() for e in cur])
        cur = [e.tau() for e in cur]
    expect = np.array([
        [taus[0][0], g * taus[1][3], g * taus[2][2], g * taus[3][1]],
        [taus[0][1], taus[1][0], g * taus[2][3], g * taus[3][2]],
        [taus[0][2], taus[1][1], taus[2][0], g * taus[3][3]],
        [taus[0][3], taus[1][2], taus[2][1], taus[3][0]],
    ])
    assert np.abs(got - expect).max() < 1e-12


def test_layered_zero_cells_punctured():
    rng = np.random.default_rng(4)
    for cid in ("perf4-punct", "perf6-punct"):
        d = build_code(cid)
        mask = layered_mask(d.n_t, 2)
        pts = np.array(make_constellation(d.constellation_kind, 4).points)
        cw = encode(d, pts[rng.integers(0, 4, size=d.k)])
        assert np.abs(cw[~mask]).max() < 1e-12


def test_group_partition_covers_symbols():
    for cid in CODE_IDS:
        d = build_code(cid)
        g = d.groups
        inner = [c for grp in g.inner for c in grp]
        outer = [c for p in g.outer for c in (2 * p, 2 * p + 1)]
        assert sorted(inner + outer) == list(range(2 * d.k))


def test_descriptor_json_schema():
    d = build_code("s6x2")
    obj = json.loads(descriptor_json(d))
    assert obj["id"] == "s6x2"
    assert obj["n_t"] == 6 and obj["T"] == 6 and obj["k"] == 12
    assert abs(obj["lattice_norm"] - 1.0 / math.sqrt(28.0)) < 1e-15
    assert obj["constellation_kind"] == "hex"
    w = obj["weight_matrices"]
    assert len(w) == 2 * d.k
    # T-major: outer index is the column (time slot), entries are [re, im]
    assert len(w[0]) == d.T and len(w[0][0]) == d.n_t and len(w[0][0][0]) == 2
    got = complex(w[0][0][0][0], w[0][0][0][1])
    assert abs(got - d.weights[0, 0, 0]) < 1e-15
    assert obj["groups"]["outer"] == list(d.groups.outer)
    # byte-identical on re-export
    assert descriptor_json(d) == descriptor_json(build_code("s6x2"))
