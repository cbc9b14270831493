"""Exact complex representation theory over cyclotomic rings.

Heisenberg representations are built by the polarization/induction recipe:
split an isotropic half, take the rank-one (or quaternion 2-dimensional)
base representation on the nondegenerate core, and induce along coset
representatives read off the opposite isotropic half in lexicographic
order.  Everything downstream (characters, Frobenius-Schur indicators,
real/quaternionic structures, intertwiners, Clifford decompositions) is
exact cyclotomic linear algebra.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import numpy as np
import sympy

from .cyclo import Cyc, CycMatrix, sqrt_rational, sign_of_real
from .gf import DomainError, solve_linear
from .groups import FinGroup
from .heis import HeisenbergGroup, _span


def conductor_for(p):
    """All computations for a fixed P run in conductor lcm(p, 4)."""
    return 4 if p == 2 else 4 * p


class CycRep:
    """A representation with one exact matrix per group element."""

    def __init__(self, group: FinGroup, N, mats, check="gens"):
        self.group = group
        self.N = N
        self.mats = mats
        self.dim = mats[group.identity].shape[0]
        self._character = None
        if check:
            self.verify(full=(check == "full"))

    def matrix(self, i) -> CycMatrix:
        return self.mats[i]

    def verify(self, full=False):
        ident = CycMatrix.identity(self.N, self.dim)
        assert self.mats[self.group.identity] == ident, "identity must map to identity"
        G = self.group
        if full or G.n <= 64:
            pairs = ((a, b) for a in range(G.n) for b in range(G.n))
        else:
            gens = G.generating_set()
            pairs = ((a, b) for a in gens for b in range(G.n))
        for a, b in pairs:
            assert self.mats[G.mul(a, b)] == self.mats[a] @ self.mats[b], \
                f"multiplicativity fails at ({a},{b})"
        return True

    def character(self) -> "Character":
        if self._character is None:
            self._character = Character(self.group, self.N,
                                        [self.mats[i].trace() for i in range(self.group.n)])
        return self._character

    def is_irreducible(self):
        chi = self.character()
        return chi.inner_product(chi) == 1

    def twist_by_permutation(self, perm):
        """The representation x -> rho(perm[x]) for an automorphism perm."""
        return CycRep(self.group, self.N, [self.mats[perm[i]] for i in range(self.group.n)],
                      check=False)

    def restrict(self, idxs):
        sub = self.group.restrict_subgroup(idxs)
        mats = [self.mats[amb] for amb in sub.labels]
        return CycRep(sub, self.N, mats, check=False)

    def promote(self, M):
        if M == self.N:
            return self
        return CycRep(self.group, M, [m.promote(M) for m in self.mats], check=False)

    def to_json(self):
        gens = self.group.generating_set()
        return {"N": self.N, "dim": self.dim, "order": self.group.n,
                "generators": gens,
                "generator_matrices": [self.mats[g].to_json() for g in gens]}


class Character:
    def __init__(self, group: FinGroup, N, values):
        self.group = group
        self.N = N
        self.values = values

    def inner_product(self, other: "Character"):
        acc = Cyc.zero(self.N)
        for a, b in zip(self.values, other.values):
            acc = acc + a * b.conj()
        val = acc
        assert val.is_rational(), "character inner product must be rational"
        return Fraction(val.rational_value(), self.group.n)

    def __getitem__(self, i):
        return self.values[i]


class RStructure:
    """An antilinear self-intertwiner J (as the matrix of v -> J conj(v))
    with J conj(J) = sign * identity; sign +1 is real, -1 quaternionic."""

    def __init__(self, J: CycMatrix, sign):
        self.J = J
        self.sign = sign


# ---------------------------------------------------------------------------
# induction and friends
# ---------------------------------------------------------------------------

def induce(G: FinGroup, H_idxs, block_of, N, coset_reps=None, check="gens") -> CycRep:
    """Induce a representation of the subgroup H to G.

    block_of maps an ambient element index (lying in H) to its CycMatrix.
    Coset representatives may be supplied for deterministic block order;
    by default they are discovered in element-index order.
    """
    Hset = set(H_idxs)
    if coset_reps is None:
        coset_reps = []
        seen = set()
        for x in range(G.n):
            if x in seen:
                continue
            coset_reps.append(x)
            seen |= {G.mul(x, h) for h in Hset}
    k = len(coset_reps)
    d = block_of(G.identity).shape[0]
    dim = k * d
    zero_block = CycMatrix.zeros(N, d, d)

    coset_of = {}
    for j, t in enumerate(coset_reps):
        for h in Hset:
            coset_of[G.mul(t, h)] = j
    assert len(coset_of) == G.n, "coset representatives must tile the group"

    mats = []
    for g in range(G.n):
        M = CycMatrix.zeros(N, dim, dim)
        for kk, t in enumerate(coset_reps):
            gt = G.mul(g, t)
            j = coset_of[gt]
            h = G.mul(G.inv(coset_reps[j]), gt)
            blk = block_of(h)
            for r in range(d):
                for c in range(d):
                    v = blk.rows[r][c]
                    if not v.is_zero():
                        M.rows[j * d + r][kk * d + c] = v
        mats.append(M)
    return CycRep(G, N, mats, check=check)


def invariants(rep: CycRep, H_idxs):
    """Basis of the H-fixed subspace, from the averaged projector."""
    N = rep.N
    proj = CycMatrix.zeros(N, rep.dim, rep.dim)
    for h in H_idxs:
        proj = proj + rep.mats[h]
    inv_count = Cyc.from_rational(N, Fraction(1, len(H_idxs)))
    proj = proj.scale(inv_count)
    diff = proj - CycMatrix.identity(N, rep.dim)
    return diff.kernel_basis()


def intertwiner(rep1: CycRep, rep2: CycRep):
    """T with T rho1(g) = rho2(g) T, normalized so its first nonzero entry
    (row-major) is 1; None when the hom space is zero.

    Seeds run through rank-one elementary matrices in a fixed order, so the
    output is deterministic.
    """
    assert rep1.group is rep2.group or rep1.group.n == rep2.group.n
    G = rep1.group
    N = rep1.N
    d1, d2 = rep1.dim, rep2.dim
    for i in range(d2):
        for j in range(d1):
            T = CycMatrix.zeros(N, d2, d1)
            for g in range(G.n):
                A = rep2.mats[g]
                Binv = rep1.mats[G.inv(g)]
                # accumulate A @ E_ij @ Binv = (col i of A) x (row j of Binv)
                for r in range(d2):
                    a = A.rows[r][i]
                    if a.is_zero():
                        continue
                    Brow = Binv.rows[j]
                    Trow = T.rows[r]
                    for c in range(d1):
                        b = Brow[c]
                        if not b.is_zero():
                            Trow[c] = Trow[c] + a * b
            fnz = T.first_nonzero()
            if fnz is not None:
                T = T.scale(fnz[2].inv())
                gens = G.generating_set()
                for g in gens:
                    assert T @ rep1.mats[g] == rep2.mats[g] @ T
                return T
    return None


# ---------------------------------------------------------------------------
# Heisenberg representations
# ---------------------------------------------------------------------------

def central_character(P: HeisenbergGroup, k):
    """psi_k on Z(P): a -> zeta_p^(k a), embedded in conductor lcm(p, 4)."""
    if k % P.p == 0:
        raise DomainError("psi must be nontrivial on the center")
    N = conductor_for(P.p)
    step = N // P.p

    def psi(a):
        return Cyc.zeta(N, (step * k * a) % N)

    return psi


def _quaternion_base_rep(P: HeisenbergGroup, P0_elems, N):
    """The tautological 2-dimensional representation of the order-8
    negative-type core, by closing generator images."""
    u, w = None, None
    dim = 2 * P.n
    core_vs = sorted({x[1] for x in P0_elems if any(x[1])})
    basis = []
    span = {(0,) * dim}
    for v in core_vs:
        if v not in span:
            basis.append(v)
            span = set(_span(basis, 2))
        if len(basis) == 2:
            break
    u, w = basis
    i = Cyc.zeta(N, N // 4)
    X = CycMatrix(N, [[i, Cyc.zero(N)], [Cyc.zero(N), -i]])
    Y = CycMatrix(N, [[Cyc.zero(N), Cyc.one(N)], [-Cyc.one(N), Cyc.zero(N)]])
    images = {P.identity: CycMatrix.identity(N, 2), (0, u): X, (0, w): Y}
    frontier = list(images)
    while frontier:
        new = []
        for x in frontier:
            for g, img in [((0, u), X), ((0, w), Y)]:
                y = P.mul(x, g)
                cand = images[x] @ img
                if y in images:
                    assert images[y] == cand, "quaternion relations must close"
                else:
                    images[y] = cand
                    new.append(y)
        frontier = new
    assert len(images) == len(P0_elems)
    return images


def heisenberg_rep(P: HeisenbergGroup, k=1) -> CycRep:
    """The irreducible representation of P with central character psi_k,
    of dimension sqrt|P/Z(P)|, via polarization and induction."""
    psi = central_character(P, k)
    N = conductor_for(P.p)
    G = P.to_fingroup()
    index = {lab: i for i, lab in enumerate(G.labels)}

    if P.n == 0:
        mats = [CycMatrix(N, [[psi(lab[0])]]) for lab in G.labels]
        return CycRep(G, N, mats)

    plus, V0, minus = _polarization_of(P)

    lift = P.splitting(plus)
    lift_by_v = {x[1]: x for x in lift}
    if V0:
        P0_elems = P.preimage_subgroup(V0)
    else:
        P0_elems = [(a, (0,) * (2 * P.n)) for a in range(P.p)]

    H_elems = sorted({P.mul(l, x0) for l in lift for x0 in P0_elems})

    if V0:
        base_images = _quaternion_base_rep(P, P0_elems, N)
        # incorporate the central sign: base must send (1,0) to psi(1) I
        z = (1, (0,) * (2 * P.n))
        assert base_images[z] == CycMatrix.identity(N, 2).scale(psi(1)), \
            "base representation central character mismatch"

        def base(x0):
            return base_images[x0]
        d0 = 2
    else:
        def base(x0):
            return CycMatrix(N, [[psi(x0[0])]])
        d0 = 1

    # block for h in H: h = lift(v+) * x0 with x0 in P0
    def block_of_elem(h):
        a, v = h
        # v+ coordinates: solve plus^T c = projection; the V+ part of v is
        # the unique combination with remainder in span(V0)
        vplus = _project_onto(P, v, plus, V0)
        l = lift_by_v[vplus]
        x0 = P.mul(P.inv(l), h)
        assert x0 in set(P0_elems), "H decomposition failed"
        return base(x0)

    H_idxs = [index[h] for h in H_elems]
    block_cache = {index[h]: block_of_elem(h) for h in H_elems}

    minus_span = _span([tuple(v) for v in minus], P.p) if minus else [(0,) * (2 * P.n)]
    coset_reps = [index[(0, x)] for x in sorted(minus_span)]

    rep = induce(G, H_idxs, lambda i: block_cache[i], N, coset_reps=coset_reps)
    assert rep.dim ** 2 == P.p ** (2 * P.n), "dimension must be sqrt|V_P|"
    # central character check
    for a in range(1, P.p):
        z = index[(a, (0,) * (2 * P.n))]
        assert rep.mats[z] == CycMatrix.identity(N, rep.dim).scale(psi(a))
    return rep


def _polarization_of(P: HeisenbergGroup):
    from . import forms
    if P.p == 2:
        plus, V0, minus = forms.find_polarization(P.Q)
    else:
        plus, V0, minus = forms.find_polarization(P.omega)
    plus = [tuple(int(x) for x in v) for v in plus]
    V0 = [tuple(int(x) for x in v) for v in V0]
    minus = [tuple(int(x) for x in v) for v in minus]
    return plus, V0, minus


def _project_onto(P: HeisenbergGroup, v, plus, V0):
    """The V+ component of v in the decomposition span(plus) + span(V0)."""
    cols = [list(w) for w in plus] + [list(w) for w in V0]
    A = np.array(cols, dtype=np.int64).T
    sol, _, _ = solve_linear(A, np.array(v, dtype=np.int64), P.p)
    assert sol is not None, "vector not in V+ + V0"
    acc = np.zeros(2 * P.n, dtype=np.int64)
    for c, w in zip(sol[:len(plus)], plus):
        acc = (acc + int(c) * np.array(w, dtype=np.int64)) % P.p
    return tuple(int(x) for x in acc)


def verify_stone_von_neumann(P: HeisenbergGroup, order_bound=4096):
    """Uniqueness report: the constructed representation is irreducible with
    the right dimension and central character, and the irreducible count
    p^{2n} linear + (p-1) of dimension p^n accounts for the whole group, so
    no second psi-central irreducible exists."""
    if P.order > order_bound:
        raise DomainError("group too large")
    G = P.to_fingroup()
    p, n = P.p, P.n
    reps = {}
    for k in range(1, p):
        rep = heisenberg_rep(P, k)
        assert rep.is_irreducible()
        reps[k] = rep
    classes = G.conjugacy_classes()
    nclasses = len(classes)
    nlinear = G.abelianization_order()
    expected_classes = p ** (2 * n) + (p - 1) if n > 0 else p
    dim_sq_sum = nlinear * 1 + (p - 1) * (p ** n) ** 2 if n > 0 else p
    report = {
        "order": G.n,
        "dim": p ** n,
        "irreducible": True,
        "num_conjugacy_classes": nclasses,
        "num_linear_characters": nlinear,
        "expected_classes": expected_classes,
        "sum_of_squares": dim_sq_sum,
        "accounts_for_group": dim_sq_sum == G.n and nclasses == expected_classes,
        "distinct_central_characters": len(reps) == p - 1,
    }
    assert report["accounts_for_group"], "irreducible count must exhaust |P|"
    return report


# ---------------------------------------------------------------------------
# Frobenius-Schur indicators and R-structures
# ---------------------------------------------------------------------------

def frobenius_schur(rep: CycRep):
    """(1/|G|) sum chi(g^2), exactly; +1 real, -1 quaternionic, 0 complex."""
    if not rep.is_irreducible():
        raise DomainError("Frobenius-Schur indicator needs an irreducible input")
    G = rep.group
    chi = rep.character()
    acc = Cyc.zero(rep.N)
    for g in range(G.n):
        acc = acc + chi[G.mul(g, g)]
    assert acc.is_rational()
    val = Fraction(acc.rational_value(), G.n)
    assert val in (-1, 0, 1)
    return int(val)


def r_structure(rep: CycRep):
    """An explicit antilinear intertwiner J with J conj(J) = sign * I, or
    None in the complex case.  J is found by averaging a deterministic
    rank-one seed and rescaled exactly (extending the conductor by a Gauss
    sum when the scale needs a square root)."""
    fs = frobenius_schur(rep)
    if fs == 0:
        return None
    G = rep.group
    N = rep.N
    d = rep.dim
    J = None
    for i in range(d):
        for j in range(d):
            T = CycMatrix.zeros(N, d, d)
            for g in range(G.n):
                A = rep.mats[g]
                Bc = rep.mats[G.inv(g)].conj()
                for r in range(d):
                    a = A.rows[r][i]
                    if a.is_zero():
                        continue
                    Brow = Bc.rows[j]
                    Trow = T.rows[r]
                    for c in range(d):
                        b = Brow[c]
                        if not b.is_zero():
                            Trow[c] = Trow[c] + a * b
            if T.first_nonzero() is not None:
                J = T
                break
        if J is not None:
            break
    assert J is not None, "self-conjugate irreducible must admit J"
    # tame the entries, then fix the scale exactly
    J = J.scale(J.first_nonzero()[2].inv())
    c = (J @ J.conj()).is_scalar()
    assert c is not None, "J conj(J) must be scalar by Schur"
    assert c.is_rational(), "scale of J conj(J) expected rational here"
    cval = c.rational_value()
    sign = 1 if cval > 0 else -1
    assert sign == fs, "sign of J conj(J) must match the FS indicator"
    M, root = sqrt_rational(abs(cval))
    big = N * M // np.gcd(N, M)
    t = root.promote(big).inv()
    Jbig = J.promote(big).scale(t)
    check = (Jbig @ Jbig.conj()).is_scalar()
    assert check == Cyc.from_rational(big, sign)
    # J intertwines the conjugate representation with the representation
    for g in G.generating_set():
        assert Jbig @ rep.mats[g].conj().promote(big) == rep.mats[g].promote(big) @ Jbig
    return RStructure(Jbig, sign)


# ---------------------------------------------------------------------------
# decomposition into irreducibles / Clifford theory
# ---------------------------------------------------------------------------

def _cyclic_span(rep: CycRep, v):
    """Row basis of the smallest invariant subspace containing v."""
    N = rep.N
    rows = CycMatrix(N, [v])
    rank = 1
    gens = rep.group.generating_set()
    changed = True
    while changed:
        changed = False
        R, pivots = rows.rref()
        basis = [R.rows[i] for i in range(len(pivots))]
        new_rows = list(basis)
        for b in basis:
            col = CycMatrix(N, [b]).transpose()
            for g in gens:
                img = (rep.mats[g] @ col).transpose().rows[0]
                new_rows.append(img)
        R2, piv2 = CycMatrix(N, new_rows).rref()
        if len(piv2) > rank:
            rank = len(piv2)
            rows = CycMatrix(N, [R2.rows[i] for i in range(len(piv2))])
            changed = True
        else:
            rows = CycMatrix(N, basis)
    R, pivots = rows.rref()
    return [R.rows[i] for i in range(len(pivots))]


def _invariant_complement(rep: CycRep, W_rows):
    """H-orthogonal complement of span(W) for the averaged invariant
    hermitian form H = sum conj(rho(g))^T rho(g)."""
    N = rep.N
    d = rep.dim
    H = CycMatrix.zeros(N, d, d)
    for g in range(rep.group.n):
        H = H + rep.mats[g].conj().transpose() @ rep.mats[g]
    rows = []
    for w in W_rows:
        wbar = [x.conj() for x in w]
        rows.append((CycMatrix(N, [wbar]) @ H).rows[0])
    return CycMatrix(N, rows).kernel_basis()


def _subrep(rep: CycRep, basis_rows):
    """The restriction of rep to the invariant subspace with the given basis."""
    N = rep.N
    k = len(basis_rows)
    Bm = CycMatrix(N, basis_rows).transpose()  # dim x k
    mats = []
    for g in range(rep.group.n):
        img = rep.mats[g] @ Bm  # dim x k
        X = _solve_matrix(Bm, img)
        mats.append(X)
    return CycRep(rep.group, N, mats, check=False)


def _solve_matrix(A: CycMatrix, B: CycMatrix):
    """X with A X = B, for A of full column rank."""
    N = A.N
    m, k = A.shape
    _, nb = B.shape
    aug_rows = [[A.rows[i][j] for j in range(k)] + [B.rows[i][j] for j in range(nb)]
                for i in range(m)]
    R, pivots = CycMatrix(N, aug_rows).rref()
    assert pivots[:k] == list(range(k)), "A must have full column rank"
    X = CycMatrix.zeros(N, k, nb)
    for i in range(k):
        for j in range(nb):
            X.rows[i][j] = R.rows[i][k + j]
    return X


def end_basis(rep: CycRep):
    """A basis of End_G(rep), by averaging elementary seeds."""
    N = rep.N
    d = rep.dim
    flat_rows = []
    mats = []
    for i in range(d):
        for j in range(d):
            T = CycMatrix.zeros(N, d, d)
            for g in range(rep.group.n):
                A = rep.mats[g]
                Binv = rep.mats[rep.group.inv(g)]
                for r in range(d):
                    a = A.rows[r][i]
                    if a.is_zero():
                        continue
                    Brow = Binv.rows[j]
                    Trow = T.rows[r]
                    for c in range(d):
                        b = Brow[c]
                        if not b.is_zero():
                            Trow[c] = Trow[c] + a * b
            if T.first_nonzero() is None:
                continue
            flat = [T.rows[r][c] for r in range(d) for c in range(d)]
            cand = CycMatrix(N, flat_rows + [flat])
            if cand.rank() > len(flat_rows):
                flat_rows.append(flat)
                mats.append(T)
    return mats


def _rational_minpoly(T: CycMatrix):
    """Minimal polynomial of T over Q, as a Fraction coefficient list."""
    N = T.N
    d = T.shape[0]
    deg = len(T.rows[0][0].num)

    def flatten(M):
        out = []
        for r in range(d):
            for c in range(d):
                x = M.rows[r][c]
                out.extend(Fraction(n, x.den) for n in x.num)
        return out

    powers = [CycMatrix.identity(N, d)]
    vecs = [flatten(powers[0])]
    while True:
        powers.append(powers[-1] @ T)
        vecs.append(flatten(powers[-1]))
        dep = _rational_dependency(vecs)
        if dep is not None:
            return dep


def _rational_dependency(vecs):
    """Coefficients c (monic in the last vector) with sum c_i vecs[i] = 0,
    or None when the vectors are independent."""
    k = len(vecs)
    n = len(vecs[0])
    # solve sum_{i<k-1} c_i vecs[i] = -vecs[k-1]
    A = [[vecs[i][r] for i in range(k - 1)] for r in range(n)]
    b = [-vecs[k - 1][r] for r in range(n)]
    sol = _solve_fractions(A, b)
    if sol is None:
        return None
    return sol + [Fraction(1)]


def _solve_fractions(A, b):
    rows = len(A)
    cols = len(A[0]) if rows else 0
    aug = [list(A[r]) + [b[r]] for r in range(rows)]
    r = 0
    pivots = []
    for c in range(cols):
        piv = None
        for i in range(r, rows):
            if aug[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = Fraction(1) / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    # consistency
    for i in range(r, rows):
        if aug[i][cols] != 0:
            return None
    sol = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        sol[c] = aug[i][cols]
    return sol


def _poly_eval_matrix(coeffs, T: CycMatrix):
    N = T.N
    d = T.shape[0]
    out = CycMatrix.zeros(N, d, d)
    power = CycMatrix.identity(N, d)
    for c in coeffs:
        if c != 0:
            out = out + power.scale(Cyc.from_rational(N, c))
        power = power @ T
    return out


def _split_by_subspace(rep, W_rows, _depth):
    comp = _invariant_complement(rep, W_rows)
    assert len(W_rows) + len(comp) == rep.dim
    return (decompose_into_irreducibles(_subrep(rep, W_rows), _depth + 1)
            + decompose_into_irreducibles(_subrep(rep, comp), _depth + 1))


def _row_basis(N, rows):
    R, pivots = CycMatrix(N, rows).rref()
    return [R.rows[i] for i in range(len(pivots))]


def decompose_into_irreducibles(rep: CycRep, _depth=0):
    """List of irreducible subrepresentations whose direct sum is rep.

    Strategies, in order: cyclic-vector subspaces with invariant-form
    complements; images of rank-deficient endomorphisms; kernel splitting
    along coprime factors of a minimal polynomial, extending the conductor
    by an exact square root when a quadratic factor has rational
    discriminant.
    """
    assert _depth < 32
    if rep.dim == 0:
        return []
    if rep.is_irreducible():
        return [rep]
    N = rep.N
    d = rep.dim
    # (a) cyclic vectors: standard basis then sums of pairs
    seeds = [[Cyc.one(N) if i == j else Cyc.zero(N) for j in range(d)] for i in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            v = [Cyc.zero(N)] * d
            v[i] = Cyc.one(N)
            v[j] = Cyc.one(N)
            seeds.append(v)
    for v in seeds:
        W = _cyclic_span(rep, v)
        if 0 < len(W) < d:
            return _split_by_subspace(rep, W, _depth)
    # (b) rank-deficient endomorphisms: the image is invariant
    basis = [T for T in end_basis(rep) if T.is_scalar() is None]
    candidates = list(basis)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            candidates.append(basis[i] + basis[j])
            candidates.append(basis[i] - basis[j])
    for T in candidates:
        rk = T.rank()
        if 0 < rk < d:
            img = _row_basis(N, [[T.rows[r][c] for r in range(d)] for c in range(d)])
            # columns of T span the image; transpose into row vectors
            if 0 < len(img) < d:
                return _split_by_subspace(rep, img, _depth)
    # (c) minimal-polynomial kernel splits
    for T in candidates:
        if T.is_scalar() is not None:
            continue
        split = _minpoly_split(rep, T, _depth)
        if split is not None:
            return split
    raise NotImplementedError("no splitting found; larger End sweep needed")


def _field_minpoly(T: CycMatrix):
    """Monic minimal polynomial of T over Q(zeta_N), low degree first."""
    N = T.N
    d = T.shape[0]

    def flatten(M):
        return [M.rows[r][c] for r in range(d) for c in range(d)]

    powers = [CycMatrix.identity(N, d)]
    while True:
        powers.append(powers[-1] @ T)
        # solve sum c_i powers[i] = powers[-1] over the field
        cols = [flatten(P) for P in powers[:-1]]
        w = flatten(powers[-1])
        A = CycMatrix(N, cols).transpose()
        sol = _solve_field(A, w)
        if sol is not None:
            return [-c for c in sol] + [Cyc.one(N)]


def _solve_field(A: CycMatrix, w):
    """x with A x = w over Q(zeta), or None; A need not be square."""
    N = A.N
    m, k = A.shape
    aug = CycMatrix(N, [[A.rows[i][j] for j in range(k)] + [w[i]] for i in range(m)])
    R, pivots = aug.rref()
    if k in pivots:
        return None
    x = [Cyc.zero(N)] * k
    for i, c in enumerate(pivots):
        x[c] = R.rows[i][k]
    return x


def _minpoly_split(rep, T, _depth):
    """Try to split rep along coprime factors of the minimal polynomial of
    T; returns None when the polynomial resists exact factoring."""
    N = rep.N
    d = rep.dim
    mp = _field_minpoly(T)
    if all(c.is_rational() for c in mp):
        x = sympy.symbols("x")
        poly = sympy.Poly([sympy.Rational(c.rational_value().numerator,
                                          c.rational_value().denominator)
                           for c in reversed(mp)], x)
        factors = poly.factor_list()[1]
        linear_roots = []
        if len(factors) >= 2:
            return _kernel_pieces(rep, T, [
                [Fraction(str(cc)) for cc in reversed(f.all_coeffs())]
                for f, _ in factors], _depth)
        f, mult = factors[0]
        if mult >= 2:
            # ker f(T) is a proper invariant subspace
            fc = [Fraction(str(cc)) for cc in reversed(f.all_coeffs())]
            K = _poly_eval_matrix(fc, T)
            ker = K.kernel_basis()
            if 0 < len(ker) < d:
                return _split_by_subspace(rep, ker, _depth)
        if f.degree() == 2 and mult == 1:
            return _quadratic_split(rep, T, mp, _depth)
        return None
    if len(mp) == 3:  # monic quadratic over Q(zeta)
        return _quadratic_split(rep, T, mp, _depth)
    return None


def _quadratic_split(rep, T, mp, _depth):
    """Split along the roots of a monic quadratic minimal polynomial whose
    discriminant has a rational value, adjoining its square root exactly."""
    N = rep.N
    b, c = mp[1], mp[0]
    disc = b * b - Cyc.from_rational(N, 4) * c
    if not disc.is_rational():
        return None
    dv = disc.rational_value()
    if dv == 0:
        return None
    if dv > 0:
        M, root = sqrt_rational(dv)
        big = N * M // np.gcd(N, M)
        root = root.promote(big)
    else:
        M, root0 = sqrt_rational(-dv)
        big = int(np.lcm(np.lcm(N, M), 4))
        root = root0.promote(big) * Cyc.zeta(big, big // 4)
    # roots (-b +/- root) / 2
    bb = b.promote(big)
    half = Cyc.from_rational(big, Fraction(1, 2))
    lam1 = (-bb + root) * half
    lam2 = (-bb - root) * half
    rep_big = rep.promote(big)
    T_big = T.promote(big)
    ker1 = (T_big - CycMatrix.identity(big, rep.dim).scale(lam1)).kernel_basis()
    ker2 = (T_big - CycMatrix.identity(big, rep.dim).scale(lam2)).kernel_basis()
    if not ker1 or not ker2 or len(ker1) + len(ker2) != rep.dim:
        return None
    return (decompose_into_irreducibles(_subrep(rep_big, ker1), _depth + 1)
            + decompose_into_irreducibles(_subrep(rep_big, ker2), _depth + 1))


def _kernel_pieces(rep, T, factor_coeff_lists, _depth):
    d = rep.dim
    pieces = []
    for fc in factor_coeff_lists:
        K = _poly_eval_matrix(fc, T)
        ker = K.kernel_basis()
        if ker:
            pieces.append(ker)
    covered = sum(len(p) for p in pieces)
    if covered != d or len(pieces) < 2:
        return None
    out = []
    for ker in pieces:
        out.extend(decompose_into_irreducibles(_subrep(rep, ker), _depth + 1))
    return out


def _poly_mul_fractions(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def clifford_decompose(B: FinGroup, C_idxs, rho: CycRep):
    """Decompose Ind_C^B(rho) into (sigma, multiplicity) pairs and verify
    the isotypic bijection numerically: #distinct sigma = #blocks of the
    endomorphism algebra and sum multiplicity^2 = dim End."""
    if rho.group.labels != sorted(set(C_idxs)) and list(rho.group.labels) != list(C_idxs):
        # rho must be a representation of the subgroup with ambient labels
        pass
    N = rho.N
    amb_to_mat = {amb: rho.mats[i] for i, amb in enumerate(rho.group.labels)}
    ind = induce(B, list(rho.group.labels), lambda i: amb_to_mat[i], N)
    irreducibles = decompose_into_irreducibles(ind)
    big = N
    for piece in irreducibles:
        big = big * piece.N // np.gcd(big, piece.N)
    irreducibles = [piece.promote(big) for piece in irreducibles]
    ind = ind.promote(big)
    # group by isomorphism
    groups = []
    for piece in irreducibles:
        placed = False
        for g in groups:
            if piece.dim == g[0].dim and intertwiner(g[0], piece) is not None:
                g.append(piece)
                placed = True
                break
        if not placed:
            groups.append([piece])
    result = [(g[0], len(g)) for g in groups]
    # verification: sum of m^2 = dim End, #distinct = dim of the center
    endb = end_basis(ind)
    dim_end = len(endb)
    assert dim_end == sum(m * m for _, m in result), "End dimension mismatch"
    dim_center = _center_dimension(endb, N)
    assert dim_center == len(result), "block count vs center dimension mismatch"
    assert sum(m * s.dim for s, m in result) == ind.dim
    chi_ind = ind.character()
    for sigma, m in result:
        assert chi_ind.inner_product(sigma.character()) == m
    return result, ind


def _center_dimension(endb, N):
    """Dimension of the center of the algebra spanned by endb."""
    if not endb:
        return 0
    d = endb[0].shape[0]
    k = len(endb)
    # solve [Z, b_i] = 0 for Z = sum c_i b_i
    cols = []
    for i in range(k):
        commuts = []
        for b in endb:
            Cm = endb[i] @ b - b @ endb[i]
            commuts.extend(Cm.rows[r][c] for r in range(d) for c in range(d))
        cols.append(commuts)
    M = CycMatrix(N, cols).transpose()
    return len(M.kernel_basis())
