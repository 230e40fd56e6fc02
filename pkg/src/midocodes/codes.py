"""Concrete rate-2 code constructions for n_t x 2 MIMO.

Seven codes are registered:

  s4x2, s6x2, s8x2, s12x2   staircase codes built from the extension module
                            over the matching tower (see fields/algebra);
  sr4x2                     the rotated 4x2 code with the same algebraic core
                            as s4x2 (quadrant blocks built from rotated QAM);
  perf4-punct, perf6-punct  single-algebra baselines in the classic layered
                            form with only the first two layers carrying
                            symbols (rate 2 by puncturing).

A descriptor materializes the 2k real-symbol weight matrices numerically from
exact field elements, carries the lattice normalization c (codewords scale by
c/sqrt(E) for a constellation of average energy E), the conditional-decoding
group structure, and, where applicable, a handle back to the exact arithmetic
so analyses can re-derive codewords with exact coordinates.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .algebra import AlgElem, block_codeword_exact, grid_embed
from .fields import OMEGA, make_field

QAM = "qam"
HEX = "hex"

CODE_IDS = ("s4x2", "s6x2", "s8x2", "s12x2", "sr4x2", "perf4-punct", "perf6-punct")


class CodeError(ValueError):
    pass


class LengthMismatchError(CodeError):
    pass


# ---------------------------------------------------------------------------
# Constellations
# ---------------------------------------------------------------------------

def pam_levels(m_side):
    """The m-PAM alphabet {-m+1, -m+3, ..., m-1}."""
    return tuple(range(-m_side + 1, m_side, 2))


@dataclass(frozen=True)
class Constellation:
    kind: str
    m: int
    points: tuple
    energy: float

    @property
    def side(self):
        return int(round(math.isqrt(self.m)))


def make_constellation(kind, m):
    """M-QAM {a+ib} or M-HEX {a+wb} with a, b in sqrt(M)-PAM."""
    side = math.isqrt(m)
    if side * side != m or m < 4 or side & (side - 1):
        raise CodeError(f"constellation size must be a power of 4, got {m}")
    unit = OMEGA if kind == HEX else 1j
    pts = tuple(a + unit * b for a in pam_levels(side) for b in pam_levels(side))
    energy = sum(abs(p) ** 2 for p in pts) / m
    return Constellation(kind, m, pts, energy)


def to_real_coords(kind, s):
    """Split complex symbols into their (a, b) lattice coordinates, s = a + unit*b."""
    s = np.asarray(s, dtype=complex)
    if kind == HEX:
        b = s.imag / OMEGA.imag
        a = s.real - b * OMEGA.real
    else:
        a, b = s.real, s.imag
    out = np.empty(s.shape + (2,))
    out[..., 0] = a
    out[..., 1] = b
    return out.reshape(s.shape[:-1] + (-1,))


def from_real_coords(kind, coords):
    """Inverse of to_real_coords: pairs (a, b) back to complex symbols."""
    coords = np.asarray(coords, dtype=float)
    pairs = coords.reshape(coords.shape[:-1] + (-1, 2))
    unit = OMEGA if kind == HEX else 1j
    return pairs[..., 0] + unit * pairs[..., 1]


# ---------------------------------------------------------------------------
# Descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecodingGroups:
    """Conditional-decoding structure: outer complex symbols are enumerated,
    each inner group of real symbols is minimized independently given them."""
    outer: tuple
    inner: tuple


class CodeDescriptor:
    """Immutable bundle of everything needed to encode and analyze one code."""

    def __init__(self, cid, n_t, constellation_kind, weights, norm_den, groups,
                 unnorm_mindet_divisor=None, tower=None, basis=None,
                 exact_builder=None, block_n=None):
        self.id = cid
        self.n_t = n_t
        self.T = n_t
        self.k = 2 * n_t
        self.constellation_kind = constellation_kind
        weights = np.asarray(weights, dtype=complex)
        weights.setflags(write=False)
        self.weights = weights          # (2k, n_t, T), real-symbol order
        self.norm_den = norm_den        # lattice_norm = 1/sqrt(norm_den)
        self.lattice_norm = 1.0 / math.sqrt(norm_den)
        self.groups = groups
        self.unnorm_mindet_divisor = unnorm_mindet_divisor
        self.tower = tower              # field id for the exact arithmetic, if any
        self.basis = basis              # tuple of KElem, if any
        self.exact_builder = exact_builder  # sym pairs -> grid of KElem, if any
        self.block_n = block_n          # staircase block count, if staircase-form

    def __repr__(self):
        return f"CodeDescriptor({self.id}: {self.n_t}x{self.T}, k={self.k})"

    def scale(self, energy):
        """Codeword scale factor c/sqrt(E)."""
        return self.lattice_norm / math.sqrt(energy)


def encode_real(desc, coords, normalized=False, energy=None):
    """Codewords from real symbol coordinates, batched over leading axes."""
    coords = np.asarray(coords, dtype=float)
    if coords.shape[-1] != 2 * desc.k:
        raise LengthMismatchError(
            f"{desc.id}: want {2 * desc.k} real coordinates, got {coords.shape[-1]}")
    s = np.tensordot(coords, desc.weights, axes=([-1], [0]))
    if normalized:
        if energy is None:
            raise CodeError("normalized encoding needs the constellation energy")
        s = s * desc.scale(energy)
    return s


def encode(desc, s, normalized=False, constellation=None):
    """Codeword of a complex symbol vector (length k).

    The map is R-linear in the lattice coordinates of the symbols; when
    ``normalized`` the result is scaled by c/sqrt(E) with E taken from
    ``constellation`` (which must then be supplied).
    """
    s = np.asarray(s, dtype=complex)
    if s.shape[-1] != desc.k:
        raise LengthMismatchError(f"{desc.id}: want {desc.k} symbols, got {s.shape[-1]}")
    energy = constellation.energy if constellation is not None else None
    return encode_real(desc, to_real_coords(desc.constellation_kind, s),
                       normalized=normalized, energy=energy)


def generator_matrix(desc):
    """Real lattice generator: columns are the interleaved-Re/Im column-major
    vectorizations of the weight matrices, one column per real symbol."""
    g = np.empty((2 * desc.n_t * desc.T, 2 * desc.k))
    for t in range(2 * desc.k):
        v = desc.weights[t].T.reshape(-1)  # column-major: stack columns
        g[0::2, t] = v.real
        g[1::2, t] = v.imag
    return g


def rate(desc):
    """Complex symbols per channel use: rank(G) / (2T), rank at 1e-9 of sigma_max."""
    from fractions import Fraction
    g = generator_matrix(desc)
    sv = np.linalg.svd(g, compute_uv=False)
    rank = int(np.sum(sv > 1e-9 * sv[0]))
    return Fraction(rank, 2 * desc.T)


def staircase_mask(n):
    """Boolean n x n block mask of the staircase form (True = occupied)."""
    mask = np.zeros((n, n), dtype=bool)
    for r in range(n):
        mask[r, r] = True
        if r + 1 < n:
            mask[r + 1, r] = True
    mask[0, n - 1] = True
    return mask


def layered_mask(n, layers=2):
    mask = np.zeros((n, n), dtype=bool)
    for r in range(n):
        for c in range(n):
            if (r - c) % n < layers:
                mask[r, c] = True
    return mask


# ---------------------------------------------------------------------------
# Exact ingredient construction
# ---------------------------------------------------------------------------

def _basis_elements(fid):
    ctx = make_field(fid)
    t = ctx.theta()
    if fid == "f4x2":
        alpha = ctx.from_pairs([(1, 1), (0, -1)])  # 1 + i(1 - theta)
        return ctx, (alpha, alpha * t)
    if fid == "f6x2":
        return ctx, (
            ctx.from_pairs([(1, 1), (1, 0), (0, 0)]),     # 1 + w + theta
            ctx.from_pairs([(-1, -2), (0, 0), (0, 1)]),   # -1 - 2w + w theta^2
            ctx.from_pairs([(-1, -2), (1, 1), (1, 1)]),   # -1-2w + (1+w)(theta + theta^2)
        )
    if fid == "f8x2":
        alpha = ctx.from_pairs([(1, -3), (0, 0), (0, 1)])  # 1 - 3i + i theta^2
        th2 = alpha * t
        th3 = alpha * t * (t * t + ctx.scalar(-3))
        th4 = alpha * (ctx.scalar(-1) + (-3) * t + t * t + t * t * t)
        return ctx, (alpha, th2, th3, th4)
    if fid == "f12x2":
        # Conjugate-cosine basis; its embedding matrix row r is the tau^r image
        # of the row of basis values, with row norm sqrt(14).
        tt = t.tau()          # 2cos(5pi/14)
        ttt = tt.tau()        # 2cos(3pi/14)
        w2 = ctx.scalar(ctx.lelem(-1, -1))  # omega^2
        return ctx, (
            t,
            t * t + ctx.scalar(-2) + w2,
            ttt * ttt + ctx.scalar(-2) + w2,
            tt * tt + ctx.scalar(-2) + w2,
            ttt,
            tt,
        )
    raise CodeError(f"no basis for field {fid}")


def conjugate_basis_matrix(ctx, basis):
    """Numeric n x n matrix with entry (r, j) = embed(tau^r(basis_j))."""
    rows = []
    cur = list(basis)
    for _ in range(ctx.n):
        rows.append([e.embed() for e in cur])
        cur = [e.tau() for e in cur]
    return np.array(rows)


def _staircase_grid(ctx, basis, sym_lelems):
    """Exact staircase codeword from k = 4n symbol values in O_L."""
    n = ctx.n
    z = []
    for kk in range(2):
        for half in range(2):
            acc = ctx.zero()
            for j in range(n):
                s = sym_lelems[kk * 2 * n + half * n + j]
                if not s.is_zero():
                    acc = acc + basis[j] * s
            z.append(acc)
    return block_codeword_exact(ctx, AlgElem(z[0], z[1]), AlgElem(z[2], z[3]))


def _layered_grid_exact(ctx, layer_elems, gamma):
    """Exact layered (classic single-algebra) codeword: entry (r, c) is
    tau^c applied to layer (r - c) mod n, with gamma above the diagonal."""
    n = ctx.n
    elems = list(layer_elems) + [ctx.zero()] * (n - len(layer_elems))
    if len(elems) != n:
        raise CodeError(f"at most {n} layers")
    cols = []
    cur = elems
    for _ in range(n):
        cols.append(cur)
        cur = [e.tau() for e in cur]
    grid = [[None] * n for _ in range(n)]
    for r in range(n):
        for c in range(n):
            e = cols[c][(r - c) % n]
            if r < c:
                e = e.scale(gamma)
            grid[r][c] = e
    return grid


def _punctured_grid(ctx, basis, sym_lelems):
    n = ctx.n
    layers = []
    for l in range(2):
        acc = ctx.zero()
        for j in range(n):
            s = sym_lelems[l * n + j]
            if not s.is_zero():
                acc = acc + basis[j] * s
        layers.append(acc)
    return _layered_grid_exact(ctx, layers, ctx.gamma_m)


def perfect_codeword(ctx, layers, gamma):
    """Numeric layered codeword for explicit layer elements (missing layers zero)."""
    return grid_embed(_layered_grid_exact(ctx, layers, gamma))


def _weights_from_exact(ctx, n_t, k, builder):
    one = ctx.lelem(1, 0)
    beta = ctx.lelem(0, 1)
    w = np.zeros((2 * k, n_t, n_t), dtype=complex)
    zero = ctx.lelem(0, 0)
    for p in range(k):
        for part, val in enumerate((one, beta)):
            syms = [zero] * k
            syms[p] = val
            w[2 * p + part] = grid_embed(builder(syms))
    return w


# ---------------------------------------------------------------------------
# The rotated 4x2 code
# ---------------------------------------------------------------------------

def _sr_rotation():
    theta_g = math.atan(2.0) / 2.0
    return complex(math.cos(theta_g), math.sin(theta_g)), theta_g


def _sr_matrix(x):
    """4x4 codeword from the 8 rotated symbols x_i (quadrant block form)."""
    xI = [v.real for v in x]
    xQ = [v.imag for v in x]

    def qblk(i1, i2, q1, q2):
        return np.array([
            [xI[i1] + 1j * xQ[q1], -xI[i2] + 1j * xQ[q2]],
            [xI[i2] + 1j * xQ[q2], xI[i1] - 1j * xQ[q1]],
        ])

    a = qblk(0, 1, 2, 3)
    b = qblk(4, 5, 6, 7)
    c = qblk(6, 7, 4, 5)
    d = qblk(2, 3, 0, 1)
    ph = cmath_exp_ipi4()
    s = np.empty((4, 4), dtype=complex)
    s[:2, :2] = a
    s[:2, 2:] = ph * c
    s[2:, :2] = ph * b
    s[2:, 2:] = d
    return s


def cmath_exp_ipi4():
    return complex(math.sqrt(0.5), math.sqrt(0.5))


def sr_decompose_check(s):
    """Residual of the factorization S = U S' U^H D for the rotated code.

    S is built directly from the quadrant block definition; S' is the
    staircase form over the golden field in the rotated coordinates; U is
    diag[1, 1, e^{i pi/4}, e^{i pi/4}] and D carries sin(theta_g) on the left
    half and -+ i*theta*sin(theta_g) on the right half (the right-half phases
    are forced by matching the two sides entrywise; |det D| = 1/5 as for the
    diagonal of the direct construction).
    """
    s = np.asarray(s, dtype=complex)
    if s.shape != (8,):
        raise LengthMismatchError("rotated 4x2 code takes 8 symbols")
    rot, theta_g = _sr_rotation()
    x = rot * s
    direct = _sr_matrix(x)

    th = (1.0 + math.sqrt(5.0)) / 2.0
    sI = s.real
    sQ = s.imag
    c1 = [-sQ[0] + 1j * sI[2], -sQ[1] + 1j * sI[3], -sQ[4] + 1j * sI[6], -sQ[5] + 1j * sI[7]]
    c2 = [sI[0] + 1j * sQ[2], sI[1] + 1j * sQ[3], sI[4] + 1j * sQ[6], sI[5] + 1j * sQ[7]]
    f = [a + th * b for a, b in zip(c1, c2)]
    ft = [a + (1.0 - th) * b for a, b in zip(c1, c2)]  # tau: theta -> 1 - theta
    fs = [a.conjugate() + th * b.conjugate() for a, b in zip(c1, c2)]
    fst = [a.conjugate() + (1.0 - th) * b.conjugate() for a, b in zip(c1, c2)]

    sp = np.array([
        [f[0], -fs[1], 1j * ft[2], -1j * fst[3]],
        [f[1], fs[0], 1j * ft[3], 1j * fst[2]],
        [f[2], -fs[3], ft[0], -fst[1]],
        [f[3], fs[2], ft[1], fst[0]],
    ])
    ph = cmath_exp_ipi4()
    u = np.diag([1.0, 1.0, ph, ph])
    sg = math.sin(theta_g)
    d = np.diag([sg, sg, -1j * th * sg, 1j * th * sg])
    rebuilt = u @ sp @ u.conj().T @ d
    return {"residual": float(np.max(np.abs(direct - rebuilt)))}


def _sr_weights():
    rot, _ = _sr_rotation()
    w = np.zeros((16, 4, 4), dtype=complex)
    for p in range(8):
        for part, unit in enumerate((1.0, 1j)):
            x = [0j] * 8
            x[p] = rot * unit
            w[2 * p + part] = _sr_matrix(x)
    return w


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

def _build_staircase(cid, fid, kind, norm_den, divisor, qam_groups):
    ctx, basis = _basis_elements(fid)
    n = ctx.n
    n_t = 2 * n
    k = 2 * n_t
    builder = lambda syms: _staircase_grid(ctx, basis, syms)
    weights = _weights_from_exact(ctx, n_t, k, builder)
    outer = tuple(range(n_t, 2 * n_t))
    if qam_groups:
        inner = (
            tuple(2 * p for p in range(0, n)),
            tuple(2 * p + 1 for p in range(0, n)),
            tuple(2 * p for p in range(n, 2 * n)),
            tuple(2 * p + 1 for p in range(n, 2 * n)),
        )
    else:
        g1 = tuple(range(0, 2 * n - 2)) + (2 * n - 1, 2 * n - 2)
        g2 = tuple(v + 2 * n for v in g1)
        inner = (g1, g2)
    groups = DecodingGroups(outer=outer, inner=inner)
    return CodeDescriptor(cid, n_t, kind, weights, norm_den, groups,
                          unnorm_mindet_divisor=divisor, tower=fid, basis=basis,
                          exact_builder=builder, block_n=n)


def _build_punctured(cid, fid, kind, norm_den, divisor):
    ctx, basis = _basis_elements(fid)
    n = ctx.n
    k = 2 * n
    builder = lambda syms: _punctured_grid(ctx, basis, syms)
    weights = _weights_from_exact(ctx, n, k, builder)
    outer = tuple(range(n, 2 * n))
    if kind == QAM:
        inner = (tuple(2 * p for p in range(n)), tuple(2 * p + 1 for p in range(n)))
    else:
        inner = (tuple(range(0, 2 * n - 2)) + (2 * n - 1, 2 * n - 2),)
    groups = DecodingGroups(outer=outer, inner=inner)
    return CodeDescriptor(cid, n, kind, weights, norm_den, groups,
                          unnorm_mindet_divisor=divisor, tower=fid, basis=basis,
                          exact_builder=builder, block_n=None)


def _build_sr():
    groups = DecodingGroups(outer=(4, 5, 6, 7),
                            inner=((0, 1), (2, 3), (4, 5), (6, 7)))
    return CodeDescriptor("sr4x2", 4, QAM, _sr_weights(), 4, groups,
                          unnorm_mindet_divisor=None, tower=None, basis=None,
                          exact_builder=None, block_n=None)


_BUILDERS = {
    "s4x2": lambda: _build_staircase("s4x2", "f4x2", QAM, 20, 25, True),
    "s6x2": lambda: _build_staircase("s6x2", "f6x2", HEX, 28, 49, False),
    "s8x2": lambda: _build_staircase("s8x2", "f8x2", QAM, 60, 2025, True),
    "s12x2": lambda: _build_staircase("s12x2", "f12x2", HEX, 56, 1, False),
    "sr4x2": _build_sr,
    "perf4-punct": lambda: _build_punctured("perf4-punct", "f8x2", QAM, 30, 45),
    "perf6-punct": lambda: _build_punctured("perf6-punct", "f12x2", HEX, 28, 1),
}

_DESC_CACHE = {}


def build_code(cid):
    """Descriptor for one of CODE_IDS (cached; descriptors are immutable)."""
    key = cid.lower()
    if key not in _BUILDERS:
        raise CodeError(f"unknown code id {cid!r}; known: {CODE_IDS}")
    if key not in _DESC_CACHE:
        _DESC_CACHE[key] = _BUILDERS[key]()
    return _DESC_CACHE[key]


def descriptor_json(desc):
    """Stable JSON export of a descriptor (weights in T-major [re, im] pairs)."""
    obj = {
        "id": desc.id,
        "n_t": desc.n_t,
        "T": desc.T,
        "k": desc.k,
        "lattice_norm": desc.lattice_norm,
        "constellation_kind": desc.constellation_kind,
        "weight_matrices": [
            [[[float(desc.weights[t, r, c].real), float(desc.weights[t, r, c].imag)]
              for r in range(desc.n_t)] for c in range(desc.T)]
            for t in range(2 * desc.k)
        ],
        "groups": {"outer": list(desc.groups.outer),
                   "inner": [list(g) for g in desc.groups.inner]},
    }
    return json.dumps(obj, indent=None, separators=(",", ":"))
