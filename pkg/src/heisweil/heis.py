"""Heisenberg F_p-groups P = V#_B: the set F_p x V with
(a, v)(b, w) = (a + b + B(v, w), v + w).

The group always travels with its defining bilinear form B; all downstream
constructions (splittings, central automorphisms, Weil linearization) are
phrased on this model.  For p = 2 the squaring map induces the quadratic
form Q_P(v) = B(v, v) on V = P/Z(P), and its split/nonsplit class is the
positive/negative type of the group.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from . import forms
from .forms import BilinearForm, QuadraticForm
from .gf import DomainError, is_prime
from .groups import FinGroup, find_isomorphism


class HeisenbergGroup:
    def __init__(self, p, B: BilinearForm):
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
        if B.p != p:
            raise DomainError("form characteristic mismatch")
        if B.dim % 2 != 0:
            raise DomainError("V must be even-dimensional")
        self.p = p
        self.B = B
        self.n = B.dim // 2
        self.omega = forms.associated_alternating(B)
        if self.n > 0 and not self.omega.is_nondegenerate():
            kernel = self.omega.radical()
            raise DomainError(
                f"associated alternating form is degenerate; kernel vector {kernel[0].tolist()}")
        self.Q = forms.QuadraticForm.from_bilinear_diagonal(B) if p == 2 else None
        self._fingroup = None
        self._type = None

    # -- element arithmetic: elements are (a, v) with v a tuple -------------

    @property
    def identity(self):
        return (0, (0,) * (2 * self.n))

    def element(self, a, v):
        return (a % self.p, tuple(x % self.p for x in v))

    def mul(self, x, y):
        a, v = x
        b, w = y
        return ((a + b + self.B(v, w)) % self.p,
                tuple((vi + wi) % self.p for vi, wi in zip(v, w)))

    def inv(self, x):
        a, v = x
        return ((self.B(v, v) - a) % self.p, tuple((-vi) % self.p for vi in v))

    def power(self, x, k):
        out = self.identity
        base = x
        if k < 0:
            base = self.inv(x)
            k = -k
        while k:
            if k & 1:
                out = self.mul(out, base)
            k >>= 1
            base = self.mul(base, base)
        return out

    def elements(self):
        for a in range(self.p):
            for v in product(range(self.p), repeat=2 * self.n):
                yield (a, v)

    @property
    def order(self):
        return self.p ** (2 * self.n + 1)

    def center(self):
        return [(a, (0,) * (2 * self.n)) for a in range(self.p)]

    def to_fingroup(self) -> FinGroup:
        if self._fingroup is None:
            if self.order > 4096:
                raise DomainError("group too large to materialize as a table")
            elems = list(self.elements())
            self._fingroup = FinGroup.from_mul(elems, self.mul,
                                               name=f"Heis(p={self.p},n={self.n})")
        return self._fingroup

    # -- induced forms and classification -----------------------------------

    def induced_forms(self):
        """(omega_P, Q_P or None), computed from commutators and squares of
        lifts, not from the cached B-derived forms (cross-checked against
        them)."""
        dim = 2 * self.n
        basis = [tuple(1 if k == i else 0 for k in range(dim)) for i in range(dim)]
        gram = np.zeros((dim, dim), dtype=np.int64)
        for i in range(dim):
            for j in range(dim):
                x = (0, basis[i])
                y = (0, basis[j])
                comm = self.mul(self.mul(x, y), self.mul(self.inv(x), self.inv(y)))
                assert comm[1] == (0,) * dim
                gram[i, j] = comm[0]
        omega_P = BilinearForm(self.p, gram)
        assert omega_P == self.omega, "omega_P from commutators must equal G - G^T"
        if self.p != 2:
            return omega_P, None

        def sq_val(spec):
            v = [0] * dim
            if isinstance(spec, tuple):
                v[spec[0]] = 1
                v[spec[1]] = 1
            else:
                v[spec] = 1
            return self.power((0, tuple(v)), 2)[0]

        Q_P = QuadraticForm.from_values(2, dim, sq_val)
        assert Q_P == self.Q, "Q_P from squares must equal v -> B(v, v)"
        return omega_P, Q_P

    def classify(self):
        """'odd' for p odd; 'positive'/'negative' from the class of Q_P."""
        if self._type is None:
            if self.p != 2:
                self._type = "odd"
            elif self.n == 0:
                self._type = "positive"
            else:
                cls = forms.classify(self.Q)
                assert cls.kind in ("split", "nonsplit")
                self._type = "positive" if cls.kind == "split" else "negative"
        return self._type

    def is_isomorphic(self, other: "HeisenbergGroup"):
        return (self.p, self.n, self.classify()) == \
            (other.p, other.n, other.classify())

    def isomorphism_oracle(self, other: "HeisenbergGroup"):
        """Exhaustive abstract-isomorphism test (orders <= 32)."""
        return find_isomorphism(self.to_fingroup(), other.to_fingroup()) is not None

    # -- splittings ----------------------------------------------------------

    def splitting(self, W):
        """Subgroup of P projecting bijectively onto span(W), or an error.

        W is a list of independent vectors.  It must be isotropic: for
        Q_P when p = 2, for omega_P when p is odd; the error carries a
        witness vector.
        """
        W = [tuple(int(x) % self.p for x in w) for w in W]
        if not W:
            return [self.identity]
        span = _span(W, self.p)
        if self.p == 2:
            for v in span:
                if v != (0,) * (2 * self.n) and self.Q(v) != 0:
                    raise DomainError(f"W is not isotropic: Q_P{v} = {self.Q(np.array(v))}")
        else:
            for i, u in enumerate(W):
                for w in W[i + 1:]:
                    if self.omega(u, w) != 0:
                        raise DomainError(f"W is not isotropic: omega_P({u},{w}) != 0")
        # closure of the canonical basis lifts; isotropy makes this a
        # subgroup of order p^k with bijective projection
        lift = {self.identity}
        frontier = [self.identity]
        gens = [(0, w) for w in W]
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in lift:
                        lift.add(y)
                        new.append(y)
            frontier = new
        assert len(lift) == len(span), "lift must project bijectively"
        projections = {x[1] for x in lift}
        assert projections == set(span)
        return sorted(lift)

    def preimage_subgroup(self, V0):
        """All (a, v) with v in span(V0) (the preimage of a subspace)."""
        span = _span([tuple(int(x) % self.p for x in w) for w in V0], self.p)
        return sorted((a, v) for a in range(self.p) for v in span)

    def __repr__(self):
        return f"HeisenbergGroup(p={self.p}, n={self.n}, type={self.classify()})"

    def to_json(self):
        return {"p": self.p, "n": self.n, "gram": self.B.gram.tolist(),
                "type": self.classify()}

    @classmethod
    def from_json(cls, data):
        return cls(data["p"], BilinearForm(data["p"], data["gram"]))


def _span(vectors, p):
    dim = len(vectors[0]) if vectors else 0
    span = {(0,) * dim}
    for v in vectors:
        new = set(span)
        for s in span:
            acc = s
            for _ in range(1, p):
                acc = tuple((a + b) % p for a, b in zip(acc, v))
                new.add(acc)
        span = new
    return sorted(span)


def build(p, B: BilinearForm) -> HeisenbergGroup:
    return HeisenbergGroup(p, B)


def standard_model(p, n, type_tag) -> HeisenbergGroup:
    """The standard models: B = omega/2 for odd p ('odd' type); for p = 2
    the hyperbolic-pair form ('positive') or its corner-modified variant
    ('negative')."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p == 2 and type_tag not in ("positive", "negative"):
        raise DomainError("p = 2 requires type positive or negative")
    if p != 2 and type_tag != "odd":
        raise DomainError("odd p admits only the odd type")
    dim = 2 * n
    if n == 0:
        return HeisenbergGroup(p, BilinearForm(p, np.zeros((0, 0), dtype=np.int64)))
    if p != 2:
        # B = omega / 2 in the standard symplectic basis
        half = (p + 1) // 2  # 1/2 mod p
        gram = (forms.standard_symplectic_gram(p, n) * half) % p
        return HeisenbergGroup(p, BilinearForm(p, gram))
    gram = np.zeros((dim, dim), dtype=np.int64)
    for d in range(n):
        gram[2 * d, 2 * d + 1] = 1
    if type_tag == "negative":
        gram[dim - 2, dim - 2] = 1
        gram[dim - 1, dim - 1] = 1
    P = HeisenbergGroup(2, BilinearForm(2, gram))
    assert P.classify() == type_tag
    return P


def central_product(P1: HeisenbergGroup, P2: HeisenbergGroup) -> HeisenbergGroup:
    """P1 o P2, renormalized as a single V#_B on the orthogonal sum."""
    if P1.p != P2.p:
        raise DomainError("central product requires equal characteristic")
    if P1.n == 0:
        return P2
    if P2.n == 0:
        return P1
    d1, d2 = 2 * P1.n, 2 * P2.n
    gram = np.zeros((d1 + d2, d1 + d2), dtype=np.int64)
    gram[:d1, :d1] = P1.B.gram
    gram[d1:, d1:] = P2.B.gram
    return HeisenbergGroup(P1.p, BilinearForm(P1.p, gram))
