"""Exact arithmetic in the number-field towers behind the code constructions.

Every code lives over a tower Q < L < K where L is Q(i) (QAM lattice) or
Q(omega) (HEX lattice, omega a primitive cube root of unity) and K = L(theta)
for a real algebraic integer theta of degree n over L.  Elements are kept as
exact rational coordinates so that norm, automorphism, and non-norm checks are
genuine equality tests; floating point enters only through ``embed``.

The four registered towers:

  f4x2   L = Q(i),     theta = (1+sqrt 5)/2,    n = 2   (golden field)
  f6x2   L = Q(omega), theta = 2cos(2pi/7),     n = 3
  f8x2   L = Q(i),     theta = 2cos(2pi/15),    n = 4
  f12x2  L = Q(omega), theta = 2cos(pi/14),     n = 6

tau generates Gal(K/L) (it moves theta among its conjugates and fixes L),
sigma is complex conjugation on L-coefficients (i -> -i, omega -> omega^2)
and fixes theta.  gamma_m is the distinguished unit of L used by the code
construction on top of this tower.
"""

from __future__ import annotations

import math
from fractions import Fraction

GAUSS = "gauss"
EISEN = "eisen"

OMEGA = complex(-0.5, math.sqrt(3.0) / 2.0)

_EMBED_TOL = 1e-9


class FieldError(ValueError):
    pass


class ClosureError(FieldError):
    """A computation left the subfield it was supposed to land in."""


def _div(x, y):
    """Exact rational division (never float)."""
    q = Fraction(x) / Fraction(y)
    return int(q) if q.denominator == 1 else q


class LElem:
    """a + i*b (Gaussian) or a + omega*b (Eisenstein), a and b rational."""

    __slots__ = ("a", "b", "eis")

    def __init__(self, a, b, eis):
        self.a = a
        self.b = b
        self.eis = eis

    def __add__(self, other):
        return LElem(self.a + other.a, self.b + other.b, self.eis)

    def __sub__(self, other):
        return LElem(self.a - other.a, self.b - other.b, self.eis)

    def __neg__(self):
        return LElem(-self.a, -self.b, self.eis)

    def __mul__(self, other):
        if isinstance(other, LElem):
            ar, ai, br, bi = self.a, self.b, other.a, other.b
            re = ar * br - ai * bi
            im = ar * bi + ai * br
            if self.eis:
                im -= ai * bi  # omega^2 = -1 - omega
            return LElem(re, im, self.eis)
        return LElem(self.a * other, self.b * other, self.eis)  # rational scalar

    __rmul__ = __mul__

    def conj(self):
        if self.eis:
            return LElem(self.a - self.b, -self.b, self.eis)
        return LElem(self.a, -self.b, self.eis)

    def norm(self):
        """Rational norm a^2 + b^2 (Gaussian) or a^2 - a*b + b^2 (Eisenstein)."""
        if self.eis:
            return self.a * self.a - self.a * self.b + self.b * self.b
        return self.a * self.a + self.b * self.b

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in L")
        c = self.conj()
        return LElem(_div(c.a, n), _div(c.b, n), self.eis)

    def is_zero(self):
        return self.a == 0 and self.b == 0

    def __eq__(self, other):
        return (isinstance(other, LElem) and self.eis == other.eis
                and self.a == other.a and self.b == other.b)

    def __hash__(self):
        return hash((self.a, self.b, self.eis))

    def embed(self):
        unit = OMEGA if self.eis else 1j
        return complex(float(self.a)) + unit * float(self.b)

    def __repr__(self):
        unit = "w" if self.eis else "i"
        return f"({self.a}+{unit}*{self.b})"


def _poly_mul_mod(p, q, red, n):
    """Product of integer coefficient vectors of length n, reduced mod minpoly."""
    conv = [0] * (2 * n - 1)
    for i, pi in enumerate(p):
        if pi == 0:
            continue
        for j, qj in enumerate(q):
            if qj:
                conv[i + j] += pi * qj
    out = conv[:n]
    for k in range(2 * n - 2, n - 1, -1):
        ck = conv[k]
        if ck:
            rk = red[k]
            for i in range(n):
                if rk[i]:
                    out[i] += ck * rk[i]
    return out


class KElem:
    """Element of K = L(theta) in the power basis {1, theta, ..., theta^(n-1)}.

    Coordinates are stored flat as (a0, b0, a1, b1, ...) with coefficient j
    equal to a_j + unit*b_j; this keeps the hot multiply loop on plain ints.
    """

    __slots__ = ("ctx", "c")

    def __init__(self, ctx, c):
        self.ctx = ctx
        self.c = tuple(c)

    # -- construction helpers -------------------------------------------------
    def coeff(self, j):
        return LElem(self.c[2 * j], self.c[2 * j + 1], self.ctx.eis)

    def coeffs(self):
        return [self.coeff(j) for j in range(self.ctx.n)]

    # -- ring operations ------------------------------------------------------
    def _same(self, other):
        if self.ctx is not other.ctx:
            raise FieldError("mixing elements from different field contexts")

    def __add__(self, other):
        self._same(other)
        return KElem(self.ctx, [x + y for x, y in zip(self.c, other.c)])

    def __sub__(self, other):
        self._same(other)
        return KElem(self.ctx, [x - y for x, y in zip(self.c, other.c)])

    def __neg__(self):
        return KElem(self.ctx, [-x for x in self.c])

    def __mul__(self, other):
        if isinstance(other, KElem):
            self._same(other)
            return self.ctx._mul(self, other)
        if isinstance(other, LElem):
            return self.scale(other)
        return KElem(self.ctx, [x * other for x in self.c])  # rational scalar

    __rmul__ = __mul__

    def scale(self, l):
        """Multiply by an element of L."""
        ctx = self.ctx
        eis = ctx.eis
        ar, ai = l.a, l.b
        out = []
        for j in range(ctx.n):
            br, bi = self.c[2 * j], self.c[2 * j + 1]
            re = ar * br - ai * bi
            im = ar * bi + ai * br
            if eis:
                im -= ai * bi
            out.append(re)
            out.append(im)
        return KElem(ctx, out)

    def tau(self):
        return self.ctx.tau(self)

    def sigma(self):
        return self.ctx.sigma(self)

    def relative_norm(self):
        return self.ctx.relative_norm(self)

    def inverse(self):
        return self.ctx.inv(self)

    def is_zero(self):
        return all(x == 0 for x in self.c)

    def __eq__(self, other):
        return (isinstance(other, KElem) and self.ctx is other.ctx
                and all(x == y for x, y in zip(self.c, other.c)))

    def __hash__(self):
        return hash((id(self.ctx),) + self.c)

    def embed(self):
        return self.ctx.embed(self)

    def __repr__(self):
        return "K[" + ", ".join(repr(self.coeff(j)) for j in range(self.ctx.n)) + "]"


class FieldContext:
    """Arithmetic context for one tower K = L(theta).

    Holds the minimal polynomial of theta over Q, the action of the cyclic
    generator tau on theta, gamma_m, and the numeric embedding of theta and
    its conjugates.  All tables used by the element operations (power
    reduction rows, the matrix of tau) are precomputed with integer entries.
    """

    def __init__(self, fid, eis, minpoly, tau_theta, gamma_m_ab, theta_embed):
        self.id = fid
        self.eis = eis
        self.minpoly = tuple(minpoly)          # low -> high, monic
        self.n = len(minpoly) - 1
        n = self.n
        if minpoly[-1] != 1:
            raise FieldError("minimal polynomial must be monic")

        # theta^k for k = n .. 2n-2 as integer rows over the power basis
        red = {}
        red[n] = [-c for c in minpoly[:n]]
        for k in range(n + 1, 2 * n - 1):
            prev = red[k - 1]
            nxt = [0] + prev[: n - 1]
            top = prev[n - 1]
            red[k] = [nxt[i] + top * red[n][i] for i in range(n)]
        self._red = red

        # matrix of tau: column k holds the coordinates of tau(theta)^k
        tt = list(tau_theta) + [0] * (n - len(tau_theta))
        cols = [[1] + [0] * (n - 1)]
        cur = [1] + [0] * (n - 1)
        for _ in range(n - 1):
            cur = _poly_mul_mod(cur, tt, red, n)
            cols.append(cur)
        self._tau_cols = cols
        self.tau_theta = tuple(tt)

        self.gamma_m = LElem(gamma_m_ab[0], gamma_m_ab[1], eis)
        self.theta_embed = float(theta_embed)

        # numeric conjugates: tau^k(theta) obtained by iterating the tau rule
        embeds = [self.theta_embed]
        for _ in range(n - 1):
            x = embeds[-1]
            embeds.append(sum(float(tc) * x ** j for j, tc in enumerate(tt)))
        self.conjugate_embeds = tuple(embeds)

        self._validate()

    # -- sanity of the defining data -------------------------------------
    def _minpoly_at(self, x):
        return sum(float(c) * x ** j for j, c in enumerate(self.minpoly))

    def _validate(self):
        scale = max(abs(float(c)) for c in self.minpoly)
        for x in self.conjugate_embeds:
            if abs(self._minpoly_at(x)) > _EMBED_TOL * scale * max(1.0, abs(x)) ** self.n:
                raise FieldError(f"{self.id}: conjugate {x} is not a root of the minimal polynomial")
        th = self.theta()
        cur = th
        for _ in range(self.n):
            cur = cur.tau()
        if cur != th:
            raise FieldError(f"{self.id}: tau does not have order {self.n}")

    # -- element constructors ---------------------------------------------
    def zero(self):
        return KElem(self, (0,) * (2 * self.n))

    def one(self):
        return KElem(self, (1,) + (0,) * (2 * self.n - 1))

    def theta(self):
        c = [0] * (2 * self.n)
        c[2] = 1
        return KElem(self, c)

    def lelem(self, a, b=0):
        return LElem(a, b, self.eis)

    def scalar(self, l):
        """Embed an LElem (or rational) as a constant of K."""
        if not isinstance(l, LElem):
            l = LElem(l, 0, self.eis)
        c = [0] * (2 * self.n)
        c[0], c[1] = l.a, l.b
        return KElem(self, c)

    def from_pairs(self, pairs):
        """Build an element from [(a0, b0), (a1, b1), ...] coefficient pairs."""
        c = []
        for a, b in pairs:
            c.append(a)
            c.append(b)
        c += [0] * (2 * self.n - len(c))
        return KElem(self, c)

    # -- core operations ----------------------------------------------------
    def _mul(self, x, y):
        n = self.n
        eis = self.eis
        xc, yc = x.c, y.c
        conv = [0] * (2 * (2 * n - 1))
        for i in range(n):
            ar, ai = xc[2 * i], xc[2 * i + 1]
            if ar == 0 and ai == 0:
                continue
            for j in range(n):
                br, bi = yc[2 * j], yc[2 * j + 1]
                if br == 0 and bi == 0:
                    continue
                t = i + j
                re = ar * br - ai * bi
                im = ar * bi + ai * br
                if eis:
                    im -= ai * bi
                conv[2 * t] += re
                conv[2 * t + 1] += im
        out = conv[: 2 * n]
        for k in range(n, 2 * n - 1):
            cr, ci = conv[2 * k], conv[2 * k + 1]
            if cr == 0 and ci == 0:
                continue
            rk = self._red[k]
            for i in range(n):
                m = rk[i]
                if m:
                    out[2 * i] += cr * m
                    out[2 * i + 1] += ci * m
        return KElem(self, out)

    def tau(self, x):
        """Apply the Galois generator of K/L: L-linear, theta -> tau(theta)."""
        n = self.n
        cols = self._tau_cols
        out = [0] * (2 * n)
        for k in range(n):
            ar, ai = x.c[2 * k], x.c[2 * k + 1]
            if ar == 0 and ai == 0:
                continue
            col = cols[k]
            for i in range(n):
                m = col[i]
                if m:
                    out[2 * i] += ar * m
                    out[2 * i + 1] += ai * m
        return KElem(self, out)

    def sigma(self, x):
        """Conjugate the L-coefficients (i -> -i, omega -> omega^2); fixes theta."""
        n = self.n
        out = list(x.c)
        if self.eis:
            for j in range(n):
                out[2 * j] = out[2 * j] - out[2 * j + 1]
                out[2 * j + 1] = -out[2 * j + 1]
        else:
            for j in range(n):
                out[2 * j + 1] = -out[2 * j + 1]
        return KElem(self, out)

    def relative_norm(self, x):
        """prod_{k=0}^{n-1} tau^k(x), which must land in L exactly."""
        acc = x
        cur = x
        for _ in range(self.n - 1):
            cur = self.tau(cur)
            acc = self._mul(acc, cur)
        for v in acc.c[2:]:
            if v != 0:
                raise ClosureError(f"{self.id}: relative norm left theta terms: {acc!r}")
        return LElem(acc.c[0], acc.c[1], self.eis)

    def inv(self, x):
        """Inverse in K via the cofactor product / relative norm."""
        if x.is_zero():
            raise ZeroDivisionError("inverse of zero in K")
        cof = self.one()
        cur = x
        for _ in range(self.n - 1):
            cur = self.tau(cur)
            cof = self._mul(cof, cur)
        nrm = self._mul(x, cof)  # constant of K equal to the relative norm
        for v in nrm.c[2:]:
            if v != 0:
                raise ClosureError(f"{self.id}: norm not in L during inversion")
        return cof.scale(LElem(nrm.c[0], nrm.c[1], self.eis).inverse())

    def embed(self, x):
        unit = OMEGA if self.eis else 1j
        th = self.theta_embed
        acc = 0j
        for j in range(self.n - 1, -1, -1):
            lj = complex(float(x.c[2 * j])) + unit * float(x.c[2 * j + 1])
            acc = acc * th + lj
        return acc


_REGISTRY = {}


def _register(fid, **kw):
    _REGISTRY[fid] = kw


# x^2 - x - 1,           tau: theta -> 1 - theta            (golden ratio)
_register("f4x2", eis=False, minpoly=(-1, -1, 1), tau_theta=(1, -1),
          gamma_m_ab=(0, 1), theta_embed=(1.0 + math.sqrt(5.0)) / 2.0)
# x^3 + x^2 - 2x - 1,    tau: theta -> theta^2 - 2          (2cos(2pi/7))
_register("f6x2", eis=True, minpoly=(-1, -2, 1, 1), tau_theta=(-2, 0, 1),
          gamma_m_ab=(0, 1), theta_embed=2.0 * math.cos(2.0 * math.pi / 7.0))
# x^4 - x^3 - 4x^2 + 4x + 1, tau: theta -> theta^2 - 2      (2cos(2pi/15))
_register("f8x2", eis=False, minpoly=(1, 4, -4, -1, 1), tau_theta=(-2, 0, 1),
          gamma_m_ab=(0, 1), theta_embed=2.0 * math.cos(2.0 * math.pi / 15.0))
# x^6 - 7x^4 + 14x^2 - 7, tau: theta -> theta^5 - 5theta^3 + 5theta
# (2cos(pi/14); the rule is the angle-quintupling identity, the conjugate
#  2cos(5pi/14) generates the degree-6 cyclic Galois group)
_register("f12x2", eis=True, minpoly=(-7, 0, 14, 0, -7, 0, 1),
          tau_theta=(0, 5, 0, -5, 0, 1), gamma_m_ab=(0, -1),
          theta_embed=2.0 * math.cos(math.pi / 14.0))

FIELD_IDS = tuple(_REGISTRY)

_CACHE = {}


def make_field(fid):
    """Return the (cached, immutable) field context for one of FIELD_IDS."""
    fid = fid.lower()
    if fid not in _REGISTRY:
        raise FieldError(f"unknown field id {fid!r}; known: {FIELD_IDS}")
    if fid not in _CACHE:
        _CACHE[fid] = FieldContext(fid, **_REGISTRY[fid])
    return _CACHE[fid]
