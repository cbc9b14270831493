"""Exact arithmetic in cyclotomic fields Q(zeta_N) and matrices over them.

Elements live in the power basis modulo the N-th cyclotomic polynomial,
stored as an integer coefficient vector over a common denominator.  Complex
conjugation is zeta -> zeta^-1.  Square roots of positive rationals are
constructed from Gauss sums so that real-structure normalizations stay
exact.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from math import gcd, isqrt

_PHI_CACHE = {}
_POW_CACHE = {}


def cyclotomic_polynomial(N):
    """Integer coefficient tuple of Phi_N, low degree first."""
    if N in _PHI_CACHE:
        return _PHI_CACHE[N]
    # x^N - 1 divided by the product of Phi_d over proper divisors d | N
    num = [0] * (N + 1)
    num[0] = -1
    num[N] = 1
    for d in range(1, N):
        if N % d == 0:
            phi_d = cyclotomic_polynomial(d)
            num = _polydiv_exact(num, phi_d)
    _PHI_CACHE[N] = tuple(num)
    return _PHI_CACHE[N]


def _polydiv_exact(num, den):
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k]
        if c % den[dd] != 0:
            raise ArithmeticError("non-exact division")
        q = c // den[dd]
        out[k - dd] = q
        for j in range(dd + 1):
            num[k - dd + j] -= q * den[j]
    assert all(x == 0 for x in num)
    return out


def _powers(N):
    """x^k mod Phi_N for all k in [0, N), as integer tuples of length deg."""
    if N in _POW_CACHE:
        return _POW_CACHE[N]
    phi = cyclotomic_polynomial(N)
    d = len(phi) - 1
    pows = []
    cur = [1] + [0] * (d - 1)
    for _ in range(N):
        pows.append(tuple(cur))
        # multiply by x and reduce
        nxt = [0] + cur[:]
        if nxt[d]:
            c = nxt[d]
            nxt = [nxt[j] - c * phi[j] for j in range(d)] + [0]
        cur = nxt[:d]
    _POW_CACHE[N] = pows
    return pows


def _degree(N):
    return len(cyclotomic_polynomial(N)) - 1


class Cyc:
    """An element of Q(zeta_N): integer vector over a common denominator."""

    __slots__ = ("N", "num", "den")

    def __init__(self, N, num, den=1, reduce=True):
        self.N = N
        if den < 0:
            num = tuple(-x for x in num)
            den = -den
        if reduce:
            g = den
            for x in num:
                g = gcd(g, x)
                if g == 1:
                    break
            if g > 1:
                num = tuple(x // g for x in num)
                den //= g
        self.num = tuple(num)
        self.den = den

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, N):
        return cls(N, (0,) * _degree(N), 1, reduce=False)

    @classmethod
    def one(cls, N):
        return cls(N, (1,) + (0,) * (_degree(N) - 1), 1, reduce=False)

    @classmethod
    def zeta(cls, N, k=1):
        return cls(N, _powers(N)[k % N], 1, reduce=False)

    @classmethod
    def from_rational(cls, N, r):
        r = Fraction(r)
        d = _degree(N)
        return cls(N, (r.numerator,) + (0,) * (d - 1), r.denominator)

    # -- predicates --------------------------------------------------------

    def is_zero(self):
        return all(x == 0 for x in self.num)

    def is_rational(self):
        return all(x == 0 for x in self.num[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("not rational")
        return Fraction(self.num[0], self.den)

    def root_of_unity_exponent(self):
        """k with self = zeta_N^k, or None."""
        if self.den != 1:
            return None
        pows = _powers(self.N)
        for k in range(self.N):
            if self.num == pows[k]:
                return k
        return None

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Cyc):
            if other.N != self.N:
                raise ValueError("conductor mismatch; promote first")
            return other
        return Cyc.from_rational(self.N, other)

    def __add__(self, other):
        o = self._coerce(other)
        da, db = self.den, o.den
        num = tuple(x * db + y * da for x, y in zip(self.num, o.num))
        return Cyc(self.N, num, da * db)

    __radd__ = __add__

    def __neg__(self):
        return Cyc(self.N, tuple(-x for x in self.num), self.den, reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + self._coerce(other)

    def __mul__(self, other):
        o = self._coerce(other)
        a, b = self.num, o.num
        d = len(a)
        conv = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        phi = cyclotomic_polynomial(self.N)
        for k in range(2 * d - 2, d - 1, -1):
            c = conv[k]
            if c:
                conv[k] = 0
                for j in range(d):
                    conv[k - d + j] -= c * phi[j]
        return Cyc(self.N, tuple(conv[:d]), self.den * o.den)

    __rmul__ = __mul__

    def inv(self):
        """Multiplicative inverse via extended Euclid modulo Phi_N."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic")
        phi = [Fraction(c) for c in cyclotomic_polynomial(self.N)]
        a = [Fraction(x, self.den) for x in self.num]
        # extended gcd of a and phi in Q[x]
        r0, r1 = phi, a
        s0, s1 = [Fraction(0)], [Fraction(1)]
        t0, t1 = [Fraction(1)], [Fraction(0)]

        def deg(f):
            dd = len(f) - 1
            while dd >= 0 and f[dd] == 0:
                dd -= 1
            return dd

        def sub_scaled(f, g, c, shift):
            out = list(f)
            while len(out) < len(g) + shift:
                out.append(Fraction(0))
            for i, gi in enumerate(g):
                out[i + shift] -= c * gi
            return out

        while deg(r1) > 0:
            d0, d1 = deg(r0), deg(r1)
            if d0 < d1:
                r0, r1 = r1, r0
                s0, s1 = s1, s0
                continue
            c = r0[d0] / r1[d1]
            r0 = sub_scaled(r0, r1, c, d0 - d1)
            s0 = sub_scaled(s0, s1, c, d0 - d1)
            if deg(r0) < deg(r1):
                r0, r1 = r1, r0
                s0, s1 = s1, s0
        if deg(r1) != 0:
            raise ZeroDivisionError("element not invertible (zero divisor?)")
        c = r1[0]
        coeffs = [(si / c) for si in s1]
        dd = _degree(self.N)
        coeffs = coeffs[:dd] + [Fraction(0)] * max(0, dd - len(coeffs))
        den = 1
        for f in coeffs:
            den = den * f.denominator // gcd(den, f.denominator)
        num = tuple(int(f * den) for f in coeffs)
        out = Cyc(self.N, num, den)
        assert (out * self) == Cyc.one(self.N)
        return out

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __pow__(self, e):
        if e < 0:
            return self.inv() ** (-e)
        out = Cyc.one(self.N)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def conj(self):
        """Complex conjugation zeta -> zeta^-1."""
        pows = _powers(self.N)
        d = _degree(self.N)
        acc = [0] * d
        for i, ci in enumerate(self.num):
            if ci:
                basis = pows[(self.N - i) % self.N]
                for j in range(d):
                    acc[j] += ci * basis[j]
        return Cyc(self.N, tuple(acc), self.den)

    def promote(self, M):
        """Embed into Q(zeta_M) for N | M via zeta_N = zeta_M^(M/N)."""
        if M == self.N:
            return self
        if M % self.N != 0:
            raise ValueError("target conductor must be a multiple")
        step = M // self.N
        pows = _powers(M)
        d = _degree(M)
        acc = [0] * d
        for i, ci in enumerate(self.num):
            if ci:
                basis = pows[(i * step) % M]
                for j in range(d):
                    acc[j] += ci * basis[j]
        return Cyc(M, tuple(acc), self.den)

    def galois(self, t):
        """The automorphism zeta -> zeta^t (t coprime to N)."""
        if gcd(t, self.N) != 1:
            raise ValueError("galois exponent must be a unit mod N")
        pows = _powers(self.N)
        d = _degree(self.N)
        acc = [0] * d
        for i, ci in enumerate(self.num):
            if ci:
                basis = pows[(i * t) % self.N]
                for j in range(d):
                    acc[j] += ci * basis[j]
        return Cyc(self.N, tuple(acc), self.den)

    # -- comparisons, hashing, display -------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyc.from_rational(self.N, other)
        if not isinstance(other, Cyc):
            return NotImplemented
        if other.N != self.N:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.N, self.num, self.den))

    def __repr__(self):
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.num):
            if c:
                base = "1" if i == 0 else (f"z{self.N}" if i == 1 else f"z{self.N}^{i}")
                terms.append(f"{c}*{base}" if i else f"{c}")
        s = " + ".join(terms)
        return s if self.den == 1 else f"({s})/{self.den}"

    def to_complex(self):
        z = cmath.exp(2j * cmath.pi / self.N)
        return sum(c * z ** i for i, c in enumerate(self.num)) / self.den

    def to_json(self):
        return {"N": self.N, "num": list(self.num), "den": self.den}

    @classmethod
    def from_json(cls, data):
        return cls(data["N"], data["num"], data["den"])


def common_conductor(*values):
    N = 1
    for v in values:
        N = N * v.N // gcd(N, v.N)
    return N


def sign_of_real(x: Cyc):
    """Sign of a real cyclotomic number: exact zero test, then a float
    evaluation (values in scope are far from zero once nonzero)."""
    if not (x - x.conj()).is_zero():
        raise ValueError("sign of a non-real value")
    if x.is_zero():
        return 0
    val = x.to_complex().real
    assert abs(val) > 1e-9, "float sign margin too small; value suspiciously near zero"
    return 1 if val > 0 else -1


def _squarefree_decompose(m):
    """m = s * t^2 with s squarefree; returns (s, t)."""
    s, t = 1, 1
    d = 2
    while d * d <= m:
        e = 0
        while m % d == 0:
            m //= d
            e += 1
        if e:
            t *= d ** (e // 2)
            if e % 2:
                s *= d
        d += 1
    s *= m
    return s, t


def sqrt_rational(r):
    """(conductor, value) with value^2 = r exactly, for rational r > 0.

    Built from Gauss sums: sqrt(2) = z8 + z8^-1 and, for odd prime p,
    sum_x (x|p) zeta_p^x equals sqrt(p) or i sqrt(p) according to
    p mod 4.
    """
    r = Fraction(r)
    if r <= 0:
        raise ValueError("need a positive rational")
    m = r.numerator * r.denominator  # sqrt(r) = sqrt(m) / denominator
    s, t = _squarefree_decompose(m)
    if s == 1:
        return 1, Cyc.from_rational(1, Fraction(t, r.denominator))
    # conductor needed for sqrt of squarefree s
    N = 1
    for p in _prime_factors(s):
        if p == 2:
            N = _lcm(N, 8)
        elif p % 4 == 1:
            N = _lcm(N, p)
        else:
            N = _lcm(N, 4 * p)
    out = Cyc.from_rational(N, Fraction(t, r.denominator))
    for p in _prime_factors(s):
        out = out * _sqrt_prime(p, N)
    assert (out * out) == Cyc.from_rational(N, r)
    return N, out


def _lcm(a, b):
    return a * b // gcd(a, b)


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _sqrt_prime(p, N):
    if p == 2:
        z = Cyc.zeta(N, N // 8)
        return z + z.conj()
    g = Cyc.zero(N)
    step = N // p
    for x in range(1, p):
        g = g + _legendre(x, p) * Cyc.zeta(N, (x * step) % N)
    if p % 4 == 1:
        return g
    # g = i sqrt(p): divide by i = zeta_4
    i_unit = Cyc.zeta(N, N // 4)
    return g * i_unit.inv()


# ---------------------------------------------------------------------------
# matrices over Q(zeta_N)
# ---------------------------------------------------------------------------

class CycMatrix:
    """Dense small matrix over one cyclotomic field, with zero-skipping."""

    __slots__ = ("N", "rows", "shape")

    def __init__(self, N, rows):
        self.N = N
        self.rows = [list(r) for r in rows]
        self.shape = (len(self.rows), len(self.rows[0]) if self.rows else 0)

    @classmethod
    def zeros(cls, N, m, n):
        z = Cyc.zero(N)
        return cls(N, [[z] * n for _ in range(m)])

    @classmethod
    def identity(cls, N, n):
        z, o = Cyc.zero(N), Cyc.one(N)
        return cls(N, [[o if i == j else z for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]

    def __setitem__(self, ij, v):
        self.rows[ij[0]][ij[1]] = v

    def __matmul__(self, other):
        m, k = self.shape
        k2, n = other.shape
        assert k == k2
        z = Cyc.zero(self.N)
        out = [[z] * n for _ in range(m)]
        for i in range(m):
            arow = self.rows[i]
            orow = out[i]
            for t in range(k):
                a = arow[t]
                if a.is_zero():
                    continue
                brow = other.rows[t]
                for j in range(n):
                    b = brow[j]
                    if not b.is_zero():
                        orow[j] = orow[j] + a * b
        return CycMatrix(self.N, out)

    def __add__(self, other):
        m, n = self.shape
        return CycMatrix(self.N, [[self.rows[i][j] + other.rows[i][j]
                                   for j in range(n)] for i in range(m)])

    def __sub__(self, other):
        m, n = self.shape
        return CycMatrix(self.N, [[self.rows[i][j] - other.rows[i][j]
                                   for j in range(n)] for i in range(m)])

    def scale(self, c):
        m, n = self.shape
        return CycMatrix(self.N, [[c * self.rows[i][j] for j in range(n)]
                                  for i in range(m)])

    def conj(self):
        m, n = self.shape
        return CycMatrix(self.N, [[self.rows[i][j].conj() for j in range(n)]
                                  for i in range(m)])

    def transpose(self):
        m, n = self.shape
        return CycMatrix(self.N, [[self.rows[i][j] for i in range(m)]
                                  for j in range(n)])

    def trace(self):
        out = Cyc.zero(self.N)
        for i in range(min(self.shape)):
            out = out + self.rows[i][i]
        return out

    def promote(self, M):
        m, n = self.shape
        return CycMatrix(M, [[self.rows[i][j].promote(M) for j in range(n)]
                             for i in range(m)])

    def is_zero(self):
        return all(x.is_zero() for row in self.rows for x in row)

    def __eq__(self, other):
        if not isinstance(other, CycMatrix):
            return NotImplemented
        return self.N == other.N and self.shape == other.shape and \
            all(a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    def __repr__(self):
        return f"CycMatrix({self.shape[0]}x{self.shape[1]}, N={self.N})"

    def first_nonzero(self):
        """(i, j, value) in row-major order, or None."""
        for i, row in enumerate(self.rows):
            for j, v in enumerate(row):
                if not v.is_zero():
                    return i, j, v
        return None

    def is_scalar(self):
        n = self.shape[0]
        if self.shape[0] != self.shape[1]:
            return None
        c = self.rows[0][0]
        for i in range(n):
            for j in range(n):
                if i == j:
                    if not (self.rows[i][j] == c):
                        return None
                elif not self.rows[i][j].is_zero():
                    return None
        return c

    def inverse(self):
        n = self.shape[0]
        assert self.shape[0] == self.shape[1]
        N = self.N
        aug = [[self.rows[i][j] for j in range(n)] +
               [Cyc.one(N) if i == j else Cyc.zero(N) for j in range(n)]
               for i in range(n)]
        r = 0
        for c in range(n):
            piv = None
            for i in range(r, n):
                if not aug[i][c].is_zero():
                    piv = i
                    break
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            aug[r], aug[piv] = aug[piv], aug[r]
            inv = aug[r][c].inv()
            aug[r] = [inv * x for x in aug[r]]
            for i in range(n):
                if i != r and not aug[i][c].is_zero():
                    f = aug[i][c]
                    aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
            r += 1
        return CycMatrix(N, [row[n:] for row in aug])

    def rref(self):
        """(reduced row echelon form, pivot columns)."""
        m, n = self.shape
        rows = [list(r) for r in self.rows]
        pivots = []
        r = 0
        for c in range(n):
            piv = None
            for i in range(r, m):
                if not rows[i][c].is_zero():
                    piv = i
                    break
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = rows[r][c].inv()
            rows[r] = [inv * x for x in rows[r]]
            for i in range(m):
                if i != r and not rows[i][c].is_zero():
                    f = rows[i][c]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
            r += 1
            pivots.append(c)
            if r == m:
                break
        return CycMatrix(self.N, rows), pivots

    def rank(self):
        return len(self.rref()[1])

    def kernel_basis(self):
        """Basis vectors (as lists of Cyc) of the right kernel."""
        m, n = self.shape
        R, pivots = self.rref()
        free = [c for c in range(n) if c not in pivots]
        basis = []
        for f in free:
            v = [Cyc.zero(self.N) for _ in range(n)]
            v[f] = Cyc.one(self.N)
            for i, c in enumerate(pivots):
                v[c] = -R.rows[i][f]
            basis.append(v)
        return basis

    def column_space_basis(self):
        """Independent columns of self, as a list of column vectors."""
        R, pivots = self.transpose().rref()
        # row space of transpose = column space; return echelon rows
        return [R.rows[i] for i in range(len(pivots))]

    def to_json(self):
        return {"N": self.N, "shape": list(self.shape),
                "entries": [[x.to_json() for x in row] for row in self.rows]}


def mat_from_rows(N, rows):
    return CycMatrix(N, rows)
