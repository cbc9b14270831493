"""Exact arithmetic over F_p and F_{p^m}, plus the mod-p linear algebra used everywhere else.

Prime-field scalars are plain ints in [0, p); extension-field scalars are
coefficient tuples in a fixed power basis.  The defining polynomial of
F_{p^m} is the lexicographically least monic irreducible of degree m over
F_p, so serialized coefficient vectors mean the same thing in every run.
"""

from __future__ import annotations

from itertools import product

import numpy as np

MAX_MODULUS = 1 << 16


class DomainError(ValueError):
    """Raised for out-of-domain inputs (zero inversion, bad subfield, ...)."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _check_prime(p):
    if not is_prime(p):
        raise DomainError(f"modulus {p} is not prime")
    if p > MAX_MODULUS:
        raise DomainError(f"modulus {p} exceeds supported bound {MAX_MODULUS}")


# ---------------------------------------------------------------------------
# prime field F_p
# ---------------------------------------------------------------------------

class Fp:
    """The prime field F_p; elements are ints reduced mod p."""

    def __init__(self, p: int):
        _check_prime(p)
        self.p = p
        self._inv = None

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise DomainError("inversion of zero")
        if self._inv is None:
            # table-based inversion; moduli are small by construction
            self._inv = [0] * self.p
            for x in range(1, self.p):
                self._inv[x] = pow(x, self.p - 2, self.p)
        return self._inv[a]

    def pow(self, a, e):
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def elements(self):
        return range(self.p)

    def __repr__(self):
        return f"Fp({self.p})"

    def __eq__(self, other):
        return isinstance(other, Fp) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))


# ---------------------------------------------------------------------------
# extension field F_{p^m}
# ---------------------------------------------------------------------------

def _poly_mul_mod(a, b, modpoly, p):
    m = len(modpoly) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce by monic modpoly
    for k in range(len(prod) - 1, m - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for j in range(m):
                prod[k - m + j] = (prod[k - m + j] - c * modpoly[j]) % p
    out = prod[:m]
    out += [0] * (m - len(out))
    return tuple(out)


def _is_irreducible(coeffs, p):
    """Irreducibility of a monic poly over F_p by the x^{p^d} gcd criterion."""
    m = len(coeffs) - 1
    if m == 1:
        return True

    def poly_mod(a):
        a = list(a)
        for k in range(len(a) - 1, m - 1, -1):
            c = a[k]
            if c:
                a[k] = 0
                for j in range(m):
                    a[k - m + j] = (a[k - m + j] - c * coeffs[j]) % p
        return a[:m]

    def poly_pow_x(e):
        # x^e mod coeffs
        result = [1] + [0] * (m - 1)
        base = ([0, 1] + [0] * (m - 2))[:m] if m >= 2 else poly_mod([0, 1])
        while e:
            if e & 1:
                full = [0] * (2 * m - 1)
                for i, ai in enumerate(result):
                    if ai:
                        for j, bj in enumerate(base):
                            full[i + j] = (full[i + j] + ai * bj) % p
                result = poly_mod(full)
            e >>= 1
            if e:
                full = [0] * (2 * m - 1)
                for i, ai in enumerate(base):
                    if ai:
                        for j, bj in enumerate(base):
                            full[i + j] = (full[i + j] + ai * bj) % p
                base = poly_mod(full)
        return result

    def poly_gcd(a, b):
        a, b = list(a), list(b)
        inv = Fp(p)

        def deg(f):
            d = len(f) - 1
            while d >= 0 and f[d] == 0:
                d -= 1
            return d

        while deg(b) >= 0:
            da, db = deg(a), deg(b)
            if da < db:
                a, b = b, a
                continue
            c = a[da] * inv.inv(b[db]) % p
            for j in range(db + 1):
                a[da - db + j] = (a[da - db + j] - c * b[j]) % p
        return a

    # f irreducible iff x^{p^m} = x mod f and gcd(x^{p^{m/r}} - x, f) = 1
    # for every prime r | m.
    xq = poly_pow_x(p ** m)
    xq[1] = (xq[1] - 1) % p
    if any(xq):
        return False
    r = 2
    mm = m
    primes = set()
    while mm > 1:
        while mm % r == 0:
            primes.add(r)
            mm //= r
        r += 1
    for r in primes:
        g = poly_pow_x(p ** (m // r))
        g[1] = (g[1] - 1) % p
        g = poly_gcd(list(coeffs), g)
        d = max((i for i, c in enumerate(g) if c), default=-1)
        if d != 0:
            return False
    return True


_DEFINING_POLY_CACHE = {}


def defining_polynomial(p: int, m: int):
    """Lexicographically least monic irreducible of degree m over F_p.

    The coefficient tuple (c_0, ..., c_{m-1}, 1) is fixed per (p, m) for
    the whole process so serialized field elements are stable.
    """
    key = (p, m)
    if key in _DEFINING_POLY_CACHE:
        return _DEFINING_POLY_CACHE[key]
    _check_prime(p)
    if m == 1:
        poly = (0, 1)
    else:
        poly = None
        for lower in product(range(p), repeat=m):
            cand = tuple(lower) + (1,)
            if _is_irreducible(cand, p):
                poly = cand
                break
        assert poly is not None
    _DEFINING_POLY_CACHE[key] = poly
    return poly


class Fq:
    """The field F_{p^m} in the fixed power basis of defining_polynomial(p, m).

    Elements are length-m tuples of ints mod p.
    """

    def __init__(self, p: int, m: int):
        _check_prime(p)
        if m < 1:
            raise DomainError("extension degree must be >= 1")
        if p ** m > MAX_MODULUS:
            raise DomainError(f"field size {p}^{m} exceeds bound {MAX_MODULUS}")
        self.p = p
        self.m = m
        self.q = p ** m
        self.modpoly = defining_polynomial(p, m)
        self.zero = (0,) * m
        self.one = (1,) + (0,) * (m - 1)
        self.gen = ((0, 1) + (0,) * (m - 2))[:m] if m > 1 else (1,)

    def element(self, coeffs):
        coeffs = tuple(c % self.p for c in coeffs)
        if len(coeffs) != self.m:
            raise DomainError("wrong coefficient length")
        return coeffs

    def from_int(self, n):
        """Base-p digits of n as an element (a bijection [0, q) -> F_q)."""
        digits = []
        for _ in range(self.m):
            digits.append(n % self.p)
            n //= self.p
        return tuple(digits)

    def to_int(self, a):
        n = 0
        for c in reversed(a):
            n = n * self.p + c
        return n

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        return _poly_mul_mod(a, b, self.modpoly, self.p)

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def inv(self, a):
        if a == self.zero:
            raise DomainError("inversion of zero")
        # multiplicative group has order q - 1
        return self.pow(a, self.q - 2)

    def frobenius(self, a, k=1):
        """a^(p^k)."""
        return self.pow(a, self.p ** k)

    def elements(self):
        return (self.from_int(n) for n in range(self.q))

    def __repr__(self):
        return f"Fq({self.p}, {self.m})"

    def __eq__(self, other):
        return isinstance(other, Fq) and (other.p, other.m) == (self.p, self.m)

    def __hash__(self):
        return hash(("Fq", self.p, self.m))


_SUBFIELD_EMBED_CACHE = {}


def subfield_embedding(field: Fq, d: int):
    """The embedding F_{p^d} -> F_{p^m} (d | m), as a dict on elements.

    The image of the subfield generator is the first root, in from_int
    order, of the subfield's defining polynomial inside the big field.
    """
    p, m = field.p, field.m
    if m % d != 0:
        raise DomainError(f"subfield degree {d} does not divide {m}")
    key = (p, m, d)
    if key in _SUBFIELD_EMBED_CACHE:
        return _SUBFIELD_EMBED_CACHE[key]
    sub = Fq(p, d)
    if d == m:
        table = {a: a for a in sub.elements()}
    else:
        modpoly = sub.modpoly
        root = None
        for n in range(field.q):
            a = field.from_int(n)
            acc = field.zero
            apow = field.one
            for c in modpoly:
                if c:
                    acc = field.add(acc, tuple((c * x) % p for x in apow))
                apow = field.mul(apow, a)
            if acc == field.zero:
                root = a
                break
        assert root is not None, "subfield root must exist"
        table = {}
        for a in sub.elements():
            acc = field.zero
            rpow = field.one
            for c in a:
                if c:
                    acc = field.add(acc, tuple((c * x) % p for x in rpow))
                rpow = field.mul(rpow, root)
            table[a] = acc
    _SUBFIELD_EMBED_CACHE[key] = table
    return table


def norm_trace(field: Fq, x, to_subfield_degree: int):
    """Norm and trace of x down to F_{p^d}, returned as subfield elements.

    Norm is the product of the Galois conjugates x^(p^{d*i}), trace their
    sum, for i = 0 .. m/d - 1.
    """
    d = to_subfield_degree
    p, m = field.p, field.m
    if m % d != 0:
        raise DomainError(f"subfield degree {d} does not divide {m}")
    r = m // d
    norm = field.one
    trace = field.zero
    conj = x
    for _ in range(r):
        norm = field.mul(norm, conj)
        trace = field.add(trace, conj)
        conj = field.frobenius(conj, d)
    # both are fixed by frobenius^d, hence land in the subfield
    embed = subfield_embedding(field, d)
    back = {img: a for a, img in embed.items()}
    return back[norm], back[trace]


# ---------------------------------------------------------------------------
# linear algebra over F_p
# ---------------------------------------------------------------------------

def fp_matrix(p, rows):
    A = np.array(rows, dtype=np.int64) % p
    return A


def _row_reduce(A, p):
    """Row echelon form mod p; returns (R, pivots)."""
    R = A.copy() % p
    rows, cols = R.shape
    pivots = []
    r = 0
    ctx = Fp(p)
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if R[i, c] % p:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = (R[r] * ctx.inv(int(R[r, c]))) % p
        for i in range(rows):
            if i != r and R[i, c] % p:
                R[i] = (R[i] - R[i, c] * R[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R % p, pivots


def solve_linear(A, b, p):
    """Solve A x = b over F_p.

    Returns (solution | None, rank, kernel_basis).  An inconsistent system
    is reported with solution None, never raised.
    """
    A = np.atleast_2d(np.array(A, dtype=np.int64)) % p
    rows, cols = A.shape
    b = np.array(b, dtype=np.int64) % p
    if b.shape != (rows,):
        raise DomainError("dimension mismatch")
    aug = np.concatenate([A, b.reshape(-1, 1)], axis=1)
    R, pivots = _row_reduce(aug, p)
    rank_aug = len(pivots)
    Ronly, apivots = _row_reduce(A, p)
    rank = len(apivots)
    # kernel basis from the echelon form of A
    free = [c for c in range(cols) if c not in apivots]
    kernel = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(apivots):
            v[c] = (-Ronly[i, f]) % p
        kernel.append(v % p)
    if cols in pivots:
        return None, rank, kernel  # inconsistent
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = R[i, cols]
    # substitute to be safe
    assert np.all((A @ x) % p == b % p)
    return x % p, rank, kernel


def matrix_rank(A, p):
    A = np.atleast_2d(np.array(A, dtype=np.int64)) % p
    _, pivots = _row_reduce(A, p)
    return len(pivots)


def invert_matrix(A, p):
    A = np.array(A, dtype=np.int64) % p
    n = A.shape[0]
    if A.shape != (n, n):
        raise DomainError("not square")
    aug = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
    R, pivots = _row_reduce(aug, p)
    if pivots[:n] != list(range(n)):
        raise DomainError("matrix not invertible")
    return R[:, n:] % p


# ---------------------------------------------------------------------------
# JSON encoding
# ---------------------------------------------------------------------------

def fp_to_json(a):
    return int(a)


def fq_to_json(a):
    return [int(c) for c in a]


def matrix_to_json(A):
    return [[int(x) for x in row] for row in np.atleast_2d(A)]
