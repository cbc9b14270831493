"""Bilinear, alternating, symmetric and quadratic forms over F_p.

Quadratic forms in characteristic 2 are kept as (upper, diag) data rather
than as a bilinear representative: the polar map Q -> B_Q kills exactly the
diagonal forms, and this storage makes that kernel explicit.  Witt indices
are computed by backtracking over isotropic flags, which doubles as an
independent check on zero-count classification.
"""

from __future__ import annotations

from itertools import product

import numpy as np

from .gf import DomainError, Fp, invert_matrix, matrix_rank, solve_linear

ENUMERATION_DIM_BOUND = 24
WITT_DIM_BOUND = 12


class ResourceError(RuntimeError):
    """Raised when an enumeration bound is exceeded."""


class BilinearForm:
    """A bilinear form B on F_p^dim given by its Gram matrix B(e_i, e_j)."""

    def __init__(self, p, gram):
        self.p = p
        self.gram = np.array(gram, dtype=np.int64) % p
        if self.gram.ndim != 2 or self.gram.shape[0] != self.gram.shape[1]:
            raise DomainError("gram matrix must be square")
        self.dim = self.gram.shape[0]

    def __call__(self, v, w):
        v = np.asarray(v, dtype=np.int64)
        w = np.asarray(w, dtype=np.int64)
        return int(v @ self.gram @ w) % self.p

    def is_alternating(self):
        if np.any(self.gram.diagonal() % self.p):
            return False
        return np.array_equal((self.gram + self.gram.T) % self.p,
                              np.zeros_like(self.gram))

    def is_symmetric(self):
        return np.array_equal(self.gram % self.p, self.gram.T % self.p)

    def is_nondegenerate(self):
        return matrix_rank(self.gram, self.p) == self.dim

    def radical(self):
        """Basis of {v : B(v, w) = 0 for all w}."""
        _, _, kernel = solve_linear(self.gram.T, np.zeros(self.dim, dtype=np.int64), self.p)
        return kernel

    def pullback(self, M):
        """The form (v, w) -> B(Mv, Mw)."""
        M = np.array(M, dtype=np.int64) % self.p
        return BilinearForm(self.p, (M.T @ self.gram @ M) % self.p)

    def __eq__(self, other):
        return (isinstance(other, BilinearForm) and other.p == self.p
                and np.array_equal(other.gram % self.p, self.gram % self.p))

    def __repr__(self):
        return f"BilinearForm(p={self.p}, gram={self.gram.tolist()})"

    def to_json(self):
        return {"p": self.p, "dim": self.dim, "gram": self.gram.tolist()}

    @classmethod
    def from_json(cls, data):
        return cls(data["p"], data["gram"])


class QuadraticForm:
    """Q(v) = sum_i diag_i v_i^2 + sum_{i<j} upper_ij v_i v_j over F_p."""

    def __init__(self, p, upper, diag):
        self.p = p
        self.upper = np.array(upper, dtype=np.int64) % p
        self.diag = np.array(diag, dtype=np.int64) % p
        self.dim = len(self.diag)
        if self.upper.shape != (self.dim, self.dim):
            raise DomainError("upper table has wrong shape")
        if np.any(np.tril(self.upper)):
            raise DomainError("upper table must be strictly upper triangular")

    @classmethod
    def from_values(cls, p, dim, value_fn):
        """Recover (upper, diag) from evaluations on e_i and e_i + e_j."""
        diag = [value_fn(i) for i in range(dim)]
        upper = np.zeros((dim, dim), dtype=np.int64)
        for i in range(dim):
            for j in range(i + 1, dim):
                upper[i, j] = (value_fn((i, j)) - diag[i] - diag[j]) % p
        return cls(p, upper, diag)

    @classmethod
    def from_bilinear_diagonal(cls, B: BilinearForm):
        """The squaring form v -> B(v, v)."""
        p = B.p
        upper = np.triu(B.gram + B.gram.T, k=1) % p
        return cls(p, upper, B.gram.diagonal() % p)

    def __call__(self, v):
        v = np.asarray(v, dtype=np.int64) % self.p
        val = int(v @ np.diag(self.diag) @ v) + int(v @ self.upper @ v)
        # note: v @ diag @ v = sum diag_i v_i^2, v @ upper @ v hits i<j once
        return val % self.p

    def pullback(self, M):
        """The form v -> Q(Mv)."""
        M = np.array(M, dtype=np.int64) % self.p
        p, dim = self.p, self.dim

        def val(spec):
            if isinstance(spec, tuple):
                v = np.zeros(dim, dtype=np.int64)
                v[spec[0]] = 1
                v[spec[1]] = 1
            else:
                v = np.zeros(dim, dtype=np.int64)
                v[spec] = 1
            return self((M @ v) % p)

        return QuadraticForm.from_values(p, dim, val)

    def __eq__(self, other):
        return (isinstance(other, QuadraticForm) and other.p == self.p
                and np.array_equal(other.upper % self.p, self.upper % self.p)
                and np.array_equal(other.diag % self.p, self.diag % self.p))

    def __repr__(self):
        return (f"QuadraticForm(p={self.p}, upper={self.upper.tolist()}, "
                f"diag={self.diag.tolist()})")

    def to_json(self):
        return {"p": self.p, "dim": self.dim,
                "upper": self.upper.tolist(), "diag": self.diag.tolist()}

    @classmethod
    def from_json(cls, data):
        return cls(data["p"], data["upper"], data["diag"])


class FormClass:
    def __init__(self, kind, witt_index):
        assert kind in ("split", "nonsplit", "degenerate")
        self.kind = kind
        self.witt_index = witt_index

    def __eq__(self, other):
        return (isinstance(other, FormClass) and other.kind == self.kind
                and other.witt_index == self.witt_index)

    def __repr__(self):
        return f"FormClass({self.kind!r}, witt_index={self.witt_index})"

    def to_json(self):
        return {"kind": self.kind, "witt_index": self.witt_index}


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def associated_alternating(B: BilinearForm) -> BilinearForm:
    """omega_B(v, w) = B(v, w) - B(w, v); alternating in every characteristic."""
    return BilinearForm(B.p, (B.gram - B.gram.T) % B.p)


def polar_form(Q: QuadraticForm) -> BilinearForm:
    """B_Q(v, w) = Q(v+w) - Q(v) - Q(w); symmetric, alternating when p = 2."""
    p = Q.p
    gram = (Q.upper + Q.upper.T + 2 * np.diag(Q.diag)) % p
    return BilinearForm(p, gram)


def _all_vectors(p, dim):
    for tup in product(range(p), repeat=dim):
        yield np.array(tup, dtype=np.int64)


def count_zeros(Q: QuadraticForm) -> int:
    """|{v : Q(v) = 0}| by full enumeration."""
    if Q.dim > ENUMERATION_DIM_BOUND:
        raise ResourceError(f"dim {Q.dim} exceeds enumeration bound")
    p, dim = Q.p, Q.dim
    # vectorized evaluation over all p^dim vectors
    vecs = np.array(list(product(range(p), repeat=dim)), dtype=np.int64)
    quad = (vecs * vecs) @ Q.diag % p
    cross = np.einsum("vi,ij,vj->v", vecs, Q.upper, vecs) % p
    return int(np.count_nonzero((quad + cross) % p == 0))


def _witt_index_backtrack(Q: QuadraticForm, B: BilinearForm, cap=None) -> int:
    """Dimension of a maximal totally isotropic subspace, by backtracking.

    Basis vectors are chosen in strictly increasing lexicographic order
    (every subspace has such a basis), which prunes the flag search to one
    ordering per subspace.  Search short-circuits once the cap is hit.
    """
    p, dim = Q.p, Q.dim
    if dim > WITT_DIM_BOUND:
        raise ResourceError(f"dim {dim} exceeds Witt-index search bound")
    if cap is None:
        cap = dim // 2
    vectors = [tuple(v) for v in _all_vectors(p, dim) if np.any(v)]
    isotropic = [v for v in vectors if Q(np.array(v)) == 0]

    best = [0]

    def extend(basis, span, candidates):
        best[0] = max(best[0], len(basis))
        if best[0] >= cap:
            return True
        for idx, v in enumerate(candidates):
            if v in span:
                continue
            va = np.array(v, dtype=np.int64)
            if any(B(va, np.array(b)) != 0 for b in basis):
                continue
            new_span = set(span)
            for s in span:
                sv = np.array(s, dtype=np.int64)
                for c in range(1, p):
                    new_span.add(tuple((sv + c * va) % p))
            if extend(basis + [v], new_span, candidates[idx + 1:]):
                return True
        return False

    zero = tuple([0] * dim)
    extend([], {zero}, isotropic)
    return best[0]


def classify(Q: QuadraticForm) -> FormClass:
    """Split/nonsplit/degenerate with Witt index, via polar rank then search."""
    if Q.dim % 2 != 0:
        raise DomainError("classification requires even dimension")
    B = polar_form(Q)
    n = Q.dim // 2
    if matrix_rank(B.gram, Q.p) < Q.dim:
        # degenerate polar form; for p = 2 also catch Q vanishing on the radical
        return FormClass("degenerate", _witt_index_backtrack(Q, B))
    witt = _witt_index_backtrack(Q, B)
    assert witt in (n, n - 1), f"nondegenerate even form has witt n or n-1, got {witt}"
    return FormClass("split" if witt == n else "nonsplit", witt)


def standard_split_form(p, n) -> QuadraticForm:
    """Q = x_1 x_2 + x_3 x_4 + ... on F_p^{2n} (hyperbolic pairing of coordinates)."""
    dim = 2 * n
    upper = np.zeros((dim, dim), dtype=np.int64)
    for d in range(n):
        upper[2 * d, 2 * d + 1] = 1
    return QuadraticForm(p, upper, [0] * dim)


def norm_form_f4() -> QuadraticForm:
    """x^2 + xy + y^2: the norm form of F_4/F_2 in the basis {1, gen}."""
    upper = np.zeros((2, 2), dtype=np.int64)
    upper[0, 1] = 1
    return QuadraticForm(2, upper, [1, 1])


def standard_nonsplit_form(p, n) -> QuadraticForm:
    """Hyperbolic planes plus an anisotropic plane; Witt index n - 1 (p = 2)."""
    if p != 2:
        raise DomainError("standard nonsplit model implemented for p = 2")
    dim = 2 * n
    upper = np.zeros((dim, dim), dtype=np.int64)
    diag = [0] * dim
    for d in range(n - 1):
        upper[2 * d, 2 * d + 1] = 1
    upper[dim - 2, dim - 1] = 1
    diag[dim - 2] = 1
    diag[dim - 1] = 1
    return QuadraticForm(p, upper, diag)


def trace_norm_form(m: int) -> QuadraticForm:
    """The F_2-quadratic form y -> Tr_{F_q/F_2}(Nm_{F_{q^2}/F_q}(y)), q = 2^m.

    Realized on F_{q^2} viewed as F_2^{2m} in its power basis; the whole
    computation stays inside F_{q^2}: the norm is y^(q+1) and the trace of
    a Frobenius-fixed element is a sum of its 2-power conjugates, which is
    0 or 1.
    """
    from .gf import Fq

    field = Fq(2, 2 * m)
    q = 2 ** m
    dim = 2 * m

    def q_of_vec(coeffs):
        y = tuple(coeffs)
        nm = field.pow(y, q + 1)
        tr = field.zero
        conj = nm
        for _ in range(m):
            tr = field.add(tr, conj)
            conj = field.mul(conj, conj)
        assert tr in (field.zero, field.one)
        return 0 if tr == field.zero else 1

    def val(spec):
        v = [0] * dim
        if isinstance(spec, tuple):
            v[spec[0]] = 1
            v[spec[1]] = 1
        else:
            v[spec] = 1
        return q_of_vec(v)

    return QuadraticForm.from_values(2, dim, val)


def find_polarization(form):
    """Split V into (Vplus, V0, Vminus) bases.

    For a nondegenerate alternating form: hyperbolic pairs, V0 = 0.  For a
    nondegenerate quadratic form: Witt decomposition; V0 = 0 when split,
    an anisotropic plane when nonsplit.  Ties break toward the
    lexicographically least isotropic vector, so output is deterministic.
    """
    if isinstance(form, BilinearForm):
        if not form.is_alternating():
            raise DomainError("bilinear polarization input must be alternating")
        if not form.is_nondegenerate():
            raise DomainError("degenerate form has no polarization")
        return _polarize_alternating(form)
    if isinstance(form, QuadraticForm):
        B = polar_form(form)
        if matrix_rank(B.gram, form.p) < form.dim:
            raise DomainError("degenerate form has no polarization")
        return _polarize_quadratic(form, B)
    raise DomainError("unsupported form type")


def _complement_basis(p, dim, constraints):
    """Basis of the joint kernel of the given covectors."""
    if not constraints:
        return [np.eye(dim, dtype=np.int64)[i] for i in range(dim)]
    A = np.array(constraints, dtype=np.int64) % p
    _, _, kernel = solve_linear(A, np.zeros(len(constraints), dtype=np.int64), p)
    return kernel


def _polarize_alternating(omega: BilinearForm):
    p = omega.p
    plus, minus = [], []
    constraints = []
    basis = [np.eye(omega.dim, dtype=np.int64)[i] for i in range(omega.dim)]
    while basis:
        # basis spans the orthogonal complement of all pairs found so far
        sub = basis
        x = None
        for coeffs in sorted(product(range(p), repeat=len(sub))):
            if not any(coeffs):
                continue
            v = sum(c * b for c, b in zip(coeffs, sub)) % p
            if np.any(v):
                x = v
                break
        if x is None:
            break
        y = None
        for coeffs in sorted(product(range(p), repeat=len(sub))):
            w = sum(c * b for c, b in zip(coeffs, sub)) % p
            if omega(x, w) != 0:
                y = (w * Fp(p).inv(omega(x, w))) % p
                break
        assert y is not None, "nondegenerate form pairs every vector"
        plus.append(x % p)
        minus.append(y % p)
        constraints.append((omega.gram @ x) % p)
        constraints.append((omega.gram @ y) % p)
        basis = _complement_basis(p, omega.dim, constraints)
        if len(plus) * 2 == omega.dim:
            break
    return plus, [], minus


def _polarize_quadratic(Q: QuadraticForm, B: BilinearForm):
    p = Q.p
    plus, minus = [], []
    constraints = []
    current = [np.eye(Q.dim, dtype=np.int64)[i] for i in range(Q.dim)]

    while True:
        k = len(current)
        if k == 0:
            return plus, [], minus
        # lexicographically least isotropic vector in the current space
        x = None
        for coeffs in sorted(product(range(p), repeat=k)):
            if not any(coeffs):
                continue
            v = sum(c * b for c, b in zip(coeffs, current)) % p
            if Q(v) == 0:
                x = v
                break
        if x is None:
            # anisotropic leftover: this is V0
            return plus, current, minus
        y = None
        for coeffs in sorted(product(range(p), repeat=k)):
            w = sum(c * b for c, b in zip(coeffs, current)) % p
            if B(x, w) != 0:
                y = (w * Fp(p).inv(B(x, w))) % p
                break
        assert y is not None
        # adjust y to be isotropic: Q(y + c x) = Q(y) + c B(x,y) + c^2 Q(x)
        c = (-Q(y) * Fp(p).inv(B(x, y))) % p
        y = (y + c * x) % p
        assert Q(y) == 0 and B(x, y) != 0
        y = (y * Fp(p).inv(B(x, y))) % p
        plus.append(x)
        minus.append(y)
        constraints.append((B.gram @ x) % p)
        constraints.append((B.gram @ y) % p)
        current = _complement_basis(p, Q.dim, constraints)


def symplectic_basis(omega: BilinearForm):
    """Basis-change M with M^T G M the standard block form antidiag(1, -1) pairs.

    Standard form: omega(f_{2i}, f_{2i+1}) = 1 in the new basis.
    """
    if not omega.is_alternating():
        raise DomainError("symplectic basis needs an alternating form")
    if omega.dim % 2 or not omega.is_nondegenerate():
        raise DomainError("symplectic basis needs nondegenerate even-dim form")
    plus, _, minus = _polarize_alternating(omega)
    cols = []
    for x, y in zip(plus, minus):
        cols.append(x)
        cols.append(y)
    M = np.array(cols, dtype=np.int64).T % omega.p
    assert matrix_rank(M, omega.p) == omega.dim
    return M


def standard_symplectic_gram(p, n):
    dim = 2 * n
    G = np.zeros((dim, dim), dtype=np.int64)
    for d in range(n):
        G[2 * d, 2 * d + 1] = 1
        G[2 * d + 1, 2 * d] = (-1) % p
    return G
