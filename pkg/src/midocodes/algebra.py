"""The quaternion-like division algebra over each tower and its extension module.

On top of K = L(theta) sits A = K + j*K with the twisted product

    a * j = j * sigma(a),      j^2 = -1,

a subalgebra of Hamilton's quaternions (sigma is complex conjugation under the
embedding, theta is real).  On top of A sits the rank-n right module M with
basis 1, e, e^2, ..., e^(n-1) over A and rules

    A * e = e * T(A),          e^n = gamma_m,

where T applies tau componentwise (T(a + j b) = tau(a) + j tau(b)) and gamma_m
is a unit of L.  Because gamma_m is not fixed by sigma it is not central in A,
so the wrap-around e^n = gamma_m acts by LEFT multiplication with gamma_m;
M is nonassociative, yet every A0 + e*A1 has a unique right inverse as long as
the product A * T(A) * ... * T^{n-1}(A) never equals gamma_m.  This module
implements the exact product, the right inverse by back-substitution, the
2n x 2n block matrix representation and its closed-form inverse, and the
randomized exact non-norm sweep.
"""

from __future__ import annotations

import math
import random

import numpy as np

from .fields import ClosureError, FieldError, KElem


class SingularInputError(FieldError):
    """Both components zero where an invertible element is required."""


class AlgElem:
    """x + j*y with x, y in K."""

    __slots__ = ("x", "y")

    def __init__(self, x: KElem, y: KElem):
        if x.ctx is not y.ctx:
            raise FieldError("components from different contexts")
        self.x = x
        self.y = y

    @property
    def ctx(self):
        return self.x.ctx

    @classmethod
    def zero(cls, ctx):
        return cls(ctx.zero(), ctx.zero())

    @classmethod
    def one(cls, ctx):
        return cls(ctx.one(), ctx.zero())

    @classmethod
    def j(cls, ctx):
        return cls(ctx.zero(), ctx.one())

    @classmethod
    def from_scalar(cls, ctx, l):
        return cls(ctx.scalar(l), ctx.zero())

    def __add__(self, other):
        return AlgElem(self.x + other.x, self.y + other.y)

    def __sub__(self, other):
        return AlgElem(self.x - other.x, self.y - other.y)

    def __neg__(self):
        return AlgElem(-self.x, -self.y)

    def __mul__(self, other):
        # (a + j b)(c + j d) = (ac - sigma(b) d) + j (bc + sigma(a) d)
        a, b = self.x, self.y
        c, d = other.x, other.y
        return AlgElem(a * c - b.sigma() * d, b * c + a.sigma() * d)

    def tau(self):
        """Componentwise tau (the twist T; a ring automorphism of A)."""
        return AlgElem(self.x.tau(), self.y.tau())

    def left_scale(self, u: KElem):
        """Left multiplication by u in K: u(a + j b) = ua + j sigma(u) b."""
        return AlgElem(u * self.x, u.sigma() * self.y)

    def reduced_norm(self):
        """a sigma(a) + b sigma(b); central (fixed by sigma), zero only at zero."""
        a, b = self.x, self.y
        return a * a.sigma() + b * b.sigma()

    def inverse(self):
        """(a + j b)^(-1) = (sigma(a) - j b) / (a sigma(a) + b sigma(b))."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero algebra element")
        ninv = self.reduced_norm().inverse()
        return AlgElem(self.x.sigma() * ninv, -(self.y * ninv))

    def is_zero(self):
        return self.x.is_zero() and self.y.is_zero()

    def __eq__(self, other):
        return isinstance(other, AlgElem) and self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def matrix(self):
        """2x2 matrix representation over K: [[a, -sigma(b)], [b, sigma(a)]]."""
        a, b = self.x, self.y
        return ((a, -b.sigma()), (b, a.sigma()))

    def embed_matrix(self):
        return np.array([[e.embed() for e in row] for row in self.matrix()])

    def __repr__(self):
        return f"Alg({self.x!r} + j*{self.y!r})"


class BimoduleElem:
    """B0 + e*B1 + ... + e^(n-1)*B_{n-1} with parts in A."""

    __slots__ = ("parts",)

    def __init__(self, parts):
        parts = tuple(parts)
        n = parts[0].ctx.n
        if len(parts) != n:
            raise FieldError(f"need exactly {n} parts")
        self.parts = parts

    @property
    def ctx(self):
        return self.parts[0].ctx

    @classmethod
    def from_pair(cls, a0: AlgElem, a1: AlgElem):
        ctx = a0.ctx
        rest = [AlgElem.zero(ctx) for _ in range(ctx.n - 2)]
        return cls([a0, a1] + rest)

    @classmethod
    def one(cls, ctx):
        return cls([AlgElem.one(ctx)] + [AlgElem.zero(ctx) for _ in range(ctx.n - 1)])

    def __add__(self, other):
        return BimoduleElem([p + q for p, q in zip(self.parts, other.parts)])

    def __mul__(self, other):
        """Exact product; e^a X e^b Y = e^(a+b) T^b(X) Y, wrap hits gamma_m on the left."""
        ctx = self.ctx
        n = ctx.n
        gam = ctx.scalar(ctx.gamma_m)
        out = [AlgElem.zero(ctx) for _ in range(n)]
        for a, xa in enumerate(self.parts):
            if xa.is_zero():
                continue
            for b, yb in enumerate(other.parts):
                if yb.is_zero():
                    continue
                term = xa
                for _ in range(b):
                    term = term.tau()
                term = term * yb
                t = a + b
                if t >= n:
                    t -= n
                    term = term.left_scale(gam)
                out[t] = out[t] + term
        return BimoduleElem(out)

    def is_zero(self):
        return all(p.is_zero() for p in self.parts)

    def __eq__(self, other):
        return isinstance(other, BimoduleElem) and all(
            p == q for p, q in zip(self.parts, other.parts))

    def __repr__(self):
        return "Bimodule(" + ", ".join(repr(p) for p in self.parts) + ")"


def _clear_denominators(a: AlgElem):
    """Smallest positive rational c with c*a integer-coordinate; returns (c*a, c)."""
    from fractions import Fraction
    dens = [Fraction(v).denominator for v in a.x.c + a.y.c]
    c = 1
    for d in dens:
        c = c * d // math.gcd(c, d)
    if c == 1:
        return a, 1
    return AlgElem(a.x * c, a.y * c), c


def _scaled_inverse(e: AlgElem, s):
    """Inverse of e/s as a scaled pair (E, s') with E integer-coordinate.

    Uses (a + j b)^(-1) = (sigma(a) - j b) * cof(nu) / N(nu) with
    nu = a sigma(a) + b sigma(b) and cof the product of the tau-conjugates of
    nu, so that the only division is by the rational norm N(nu).
    """
    from fractions import Fraction
    ctx = e.ctx
    if e.is_zero():
        raise ZeroDivisionError("inverse of zero algebra element")
    nu = e.reduced_norm()
    cof = ctx.one()
    cur = nu
    for _ in range(ctx.n - 1):
        cur = cur.tau()
        cof = cof * cur
    rat = nu * cof  # rational constant N_{K/Q(theta)}-style norm
    if any(v != 0 for v in rat.c[1:]):
        raise ClosureError(f"{ctx.id}: norm of a sigma-fixed element left Q")
    r = rat.c[0]
    einv = AlgElem(e.x.sigma() * cof, -(e.y * cof))
    return einv, Fraction(r) / Fraction(s)


def right_inverse(a0: AlgElem, a1: AlgElem) -> BimoduleElem:
    """The unique B with (A0 + e*A1) * B = 1, by back-substitution.

    With A0' = A0 A1^(-1) and B'_k = T^k(A1) B_k the defining equations collapse
    to B'_{n-1} = [(-1)^(n-1) prod_k T^k(A0') + gamma_m]^(-1) followed by the
    walk-down B'_{r-1} = -T^r(A0') B'_r, and B_k = [T^k(A1)]^(-1) B'_k.
    A1 = 0 degenerates to the quaternion inverse of A0 in the constant slot.

    Internally every element is kept integer-coordinate with a separate
    rational scale so the exact arithmetic stays on plain integers.
    """
    from fractions import Fraction
    ctx = a0.ctx
    n = ctx.n
    if a1.is_zero():
        if a0.is_zero():
            raise SingularInputError("right inverse of zero")
        parts = [AlgElem.zero(ctx) for _ in range(n)]
        parts[0] = a0.inverse()
        return BimoduleElem(parts)

    e0, c0 = _clear_denominators(a0)
    e1, c1 = _clear_denominators(a1)
    # (A0 + e A1) = (1/c)(E0 + e E1) for the common scale c below, so the
    # inverse of the original element is c times the inverse computed here.
    c = c0 * c1 // math.gcd(c0, c1)
    e0 = AlgElem(e0.x * (c // c0), e0.y * (c // c0))
    e1 = AlgElem(e1.x * (c // c1), e1.y * (c // c1))

    inv1, s1 = _scaled_inverse(e1, 1)
    p0 = e0 * inv1          # E part of A0' = A0 A1^(-1)
    s0 = s1                 # common scale of every twist of A0'

    twists = [p0]
    for _ in range(n - 1):
        twists.append(twists[-1].tau())

    prod = twists[0]
    for t in twists[1:]:
        prod = prod * t
    if (n - 1) % 2 == 1:
        prod = -prod
    sp = Fraction(s0) ** n
    # prod/sp + gamma_m = (q*prod + p*gamma)/p with sp = p/q
    p_, q_ = sp.numerator, sp.denominator
    gam_elem = AlgElem.from_scalar(ctx, ctx.gamma_m)
    ex = AlgElem(prod.x * q_, prod.y * q_) + AlgElem(gam_elem.x * p_, gam_elem.y * p_)

    bp = [None] * n
    bp[n - 1] = _scaled_inverse(ex, p_)
    for r in range(n - 1, 0, -1):
        e_prev = -(twists[r] * bp[r][0])
        bp[r - 1] = (e_prev, s0 * bp[r][1])

    e1_tw = e1
    parts = []
    for i in range(n):
        itw, stw = _scaled_inverse(e1_tw, 1)
        e_part = itw * bp[i][0]
        scale = Fraction(c) / (stw * bp[i][1])
        parts.append(AlgElem(e_part.x * scale, e_part.y * scale))
        e1_tw = e1_tw.tau()
    return BimoduleElem(parts)


def nonnorm_sweep(ctx, samples, bound, seed=0):
    """Randomized exact check that A * T(A) * ... * T^{n-1}(A) != gamma_m.

    Draws algebra elements with integer coordinates in [-bound, bound]
    (the zero element is skipped) and compares the full twisted product with
    gamma_m by exact coordinate equality.  Returns {"tested", "violations"}.
    """
    if samples < 1 or bound < 1:
        raise ValueError("samples and bound must be >= 1")
    rng = random.Random(seed)
    n = ctx.n
    gamma_elem = AlgElem.from_scalar(ctx, ctx.gamma_m)
    tested = 0
    violations = 0
    width = 2 * n  # flat coords per K element
    while tested < samples:
        xc = [rng.randint(-bound, bound) for _ in range(width)]
        yc = [rng.randint(-bound, bound) for _ in range(width)]
        if all(v == 0 for v in xc) and all(v == 0 for v in yc):
            continue
        a = AlgElem(KElem(ctx, xc), KElem(ctx, yc))
        prod = a
        cur = a
        for _ in range(n - 1):
            cur = cur.tau()
            prod = prod * cur
        if prod == gamma_elem:
            violations += 1
        tested += 1
    return {"tested": tested, "violations": violations}


# ---------------------------------------------------------------------------
# 2x2 matrices over K (matrix representations of algebra elements) and the
# 2n x 2n block matrix of a module element A0 + e*A1.
# ---------------------------------------------------------------------------

def kmat_mul(p, q):
    return tuple(
        tuple(sum((p[r][t] * q[t][c] for t in range(1, len(q))),
                  p[r][0] * q[0][c]) for c in range(len(q[0])))
        for r in range(len(p)))


def kmat_tau(p):
    return tuple(tuple(e.tau() for e in row) for row in p)


def kmat_scale(p, u: KElem):
    return tuple(tuple(u * e for e in row) for row in p)


def kmat_neg(p):
    return tuple(tuple(-e for e in row) for row in p)


def kmat_add(p, q):
    return tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(p, q))


def kmat_inv2(p):
    """Inverse of a 2x2 matrix over K by adjugate / determinant."""
    (a, b), (c, d) = p
    det = a * d - b * c
    if det.is_zero():
        raise ZeroDivisionError("singular 2x2 matrix over K")
    dinv = det.inverse()
    return ((d * dinv, -(b * dinv)), (-(c * dinv), a * dinv))


def kmat_embed(p):
    return np.array([[e.embed() for e in row] for row in p])


def block_codeword_exact(ctx, a0: AlgElem, a1: AlgElem):
    """The 2n x 2n staircase matrix of A0 + e*A1 as a grid of K elements.

    Diagonal blocks T^r(A0), subdiagonal blocks T^r(A1), and gamma_m T^{n-1}(A1)
    in the top-right corner; every other block is zero.
    """
    n = ctx.n
    zero = ctx.zero()
    grid = [[zero for _ in range(2 * n)] for _ in range(2 * n)]
    gam = ctx.scalar(ctx.gamma_m)

    def put(br, bc, mat):
        for r in range(2):
            for c in range(2):
                grid[2 * br + r][2 * bc + c] = mat[r][c]

    m0 = a0.matrix()
    m1 = a1.matrix()
    for r in range(n):
        put(r, r, m0)
        if r < n - 1:
            put(r + 1, r, m1)
        m0 = kmat_tau(m0)
        if r < n - 1:
            m1 = kmat_tau(m1)
    put(0, n - 1, kmat_scale(m1, gam))  # m1 now carries n-1 twists
    return grid


def grid_tau(grid):
    return [[e.tau() for e in row] for row in grid]


def grid_embed(grid):
    return np.array([[e.embed() for e in row] for row in grid])


def block_inverse(a0: AlgElem, a1: AlgElem):
    """Numeric inverse of the staircase matrix, assembled from the closed form.

    The building blocks B_i come from exact 2x2 arithmetic over K (twisted
    products of A0 A1^(-1), one matrix inversion, and per-column twists); the
    assembled 2n x 2n matrix is returned embedded as complex floats.  Raises
    SingularInputError when both inputs are zero.
    """
    ctx = a0.ctx
    n = ctx.n
    if a1.is_zero():
        if a0.is_zero():
            raise SingularInputError("block inverse of the zero element")
        blocks = []
        m = a0.inverse().matrix()
        for _ in range(n):
            blocks.append(m)
            m = kmat_tau(m)
        out = np.zeros((2 * n, 2 * n), dtype=complex)
        for r in range(n):
            out[2 * r: 2 * r + 2, 2 * r: 2 * r + 2] = kmat_embed(blocks[r])
        return out

    gam = ctx.scalar(ctx.gamma_m)
    m_a0p = kmat_mul(a0.matrix(), kmat_inv2(a1.matrix()))
    twists = [m_a0p]
    for _ in range(n - 1):
        twists.append(kmat_tau(twists[-1]))

    prod = twists[0]
    for t in twists[1:]:
        prod = kmat_mul(prod, t)
    if (n - 1) % 2 == 1:
        prod = kmat_neg(prod)
    ident = ((ctx.one(), ctx.zero()), (ctx.zero(), ctx.one()))
    bp = [None] * n
    bp[n - 1] = kmat_inv2(kmat_add(prod, kmat_scale(ident, gam)))
    for k in range(2, n + 1):
        pk = None
        for i in range(n - k + 1, n):
            pk = twists[i] if pk is None else kmat_mul(pk, twists[i])
        term = bp[n - 1] if pk is None else kmat_mul(pk, bp[n - 1])
        if (k - 1) % 2 == 1:
            term = kmat_neg(term)
        bp[n - k] = term

    m_a1 = a1.matrix()
    b = []
    for i in range(n):
        b.append(kmat_mul(kmat_inv2(m_a1), bp[i]))
        m_a1 = kmat_tau(m_a1)

    out = np.zeros((2 * n, 2 * n), dtype=complex)
    for br in range(n):
        for bc in range(n):
            blk = b[(br - bc) % n]
            for _ in range(bc):
                blk = kmat_tau(blk)
            if br < bc:
                blk = kmat_scale(blk, gam)
            out[2 * br: 2 * br + 2, 2 * bc: 2 * bc + 2] = kmat_embed(blk)
    return out


def det_in_l_delta(ctx, a0: AlgElem, a1: AlgElem):
    """|det(tau(M)) - det(M)| for the staircase matrix M, via coordinate tracking.

    The determinant lies in L, so applying tau entrywise must not move it;
    returns (delta, |det|) computed numerically after exact tau.
    """
    grid = block_codeword_exact(ctx, a0, a1)
    d = np.linalg.det(grid_embed(grid))
    dt = np.linalg.det(grid_embed(grid_tau(grid)))
    return abs(dt - d), abs(d)


def random_alg_elem(ctx, rng, bound):
    width = 2 * ctx.n
    return AlgElem(
        KElem(ctx, [rng.randint(-bound, bound) for _ in range(width)]),
        KElem(ctx, [rng.randint(-bound, bound) for _ in range(width)]),
    )
