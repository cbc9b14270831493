"""Linearization of projective Weil representations.

A subgroup A of Aut_Z(P) acts on the Heisenberg representation through
intertwiners T_a, unique up to scalar; the deviation c(a,b) = T_a T_b / T_ab
is a 2-cocycle.  Linearizing means rescaling the T_a into an honest
representation: solved here by exact coboundary search over roots of unity,
by explicit induction over a polarization stabilizer, or (odd p, canonical
symplectic section) by pinning generator scalars through element orders.
Real and quaternionic refinements rescale against the antilinear structure
J of the Heisenberg representation, where the remaining freedom is exactly
the order-two character group.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .autz import (AutZGroup, CentralAutomorphism, identity_automorphism,
                   orth_sympl_group, section_odd, stabilizer_membership)
from .cyclo import Cyc, CycMatrix, sqrt_rational
from .gf import DomainError
from .groups import Cocycle2, FinGroup, coboundary_solve, iterated_semidirect
from .heis import HeisenbergGroup
from .reps import (CycRep, conductor_for, frobenius_schur, heisenberg_rep,
                   intertwiner, r_structure)


class ProjectiveWeil:
    """Intertwiner table and cocycle for A acting on the Heisenberg
    representation omega_psi."""

    def __init__(self, P, k, A_group, autos, omega, T, cocycle, mu_modulus,
                 nonunit_values=None):
        self.P = P
        self.k = k
        self.A = A_group
        self.autos = autos
        self.omega = omega
        self.T = T
        self.cocycle = cocycle
        self.mu_modulus = mu_modulus
        self.nonunit_values = nonunit_values or []


class WeilLinearization:
    def __init__(self, P, k, A_group, autos, omega, mats_A, flavor, N,
                 character_orbit_size=None):
        self.P = P
        self.k = k
        self.A = A_group
        self.autos = autos
        self.omega = omega
        self.mats_A = mats_A
        self.flavor = flavor
        self.N = N
        self.character_orbit_size = character_orbit_size

    def rep_of_A(self) -> CycRep:
        return CycRep(self.A, self.N, self.mats_A, check="full")

    def assembled(self):
        """The representation of A x| P on label pairs (x, a), with
        restriction to P equal to omega_psi entry-exact."""
        G = self.P.to_fingroup()
        lab_index = {lab: i for i, lab in enumerate(G.labels)}

        def act(a_idx, p_idx):
            return lab_index[self.autos[a_idx].apply(G.labels[p_idx])]

        prod = iterated_semidirect([G, self.A], {(0, 1): act}, name="AxP")
        omega = self.omega.promote(self.N)
        mats = []
        for (x, a) in prod.labels:
            mats.append(omega.mats[x] @ self.mats_A[a])
        return CycRep(prod, self.N, mats, check="gens"), prod


def _close_automorphisms(P, autos):
    """Close a list of central automorphisms under composition and build the
    FinGroup; returns (group, auto_list_in_label_order)."""
    ident = identity_automorphism(P)
    elems = [ident]
    index = {ident: 0}
    frontier = [ident]
    while frontier:
        new = []
        for f in frontier:
            for g in autos:
                h = f.compose(g)
                if h not in index:
                    index[h] = len(elems)
                    elems.append(h)
                    new.append(h)
        frontier = new
        if len(elems) > 2048:
            raise DomainError("automorphism subgroup exceeds bound 2048")
    A = FinGroup.from_mul(elems, lambda f, g: f.compose(g), name="A")
    return A, elems


def projective_weil(P: HeisenbergGroup, autos, k=1) -> ProjectiveWeil:
    """Intertwiners T_a and the cocycle c(a, b) with T_a T_b = c(a, b) T_ab,
    with values checked to be roots of unity of order dividing
    mu_modulus = lcm(exp A, 2p, 4).

    Normalization is deterministic: leading entry set to 1, then a unitary
    rescale by the exact square root of the (rational) scalar T T*, so that
    cocycle values stay on the unit circle.  Values outside mu_modulus are
    collected in nonunit_values; the cocycle table is built only when that
    list is empty.
    """
    A, elems = _close_automorphisms(P, autos)
    omega = heisenberg_rep(P, k)
    G = P.to_fingroup()
    lab_index = {lab: i for i, lab in enumerate(G.labels)}

    T = []
    big = omega.N
    for f in elems:
        perm = [lab_index[f.apply(lab)] for lab in G.labels]
        twisted = omega.twist_by_permutation(perm)
        Tf = intertwiner(omega, twisted)
        assert Tf is not None, "Stone-von Neumann guarantees an intertwiner"
        lam = (Tf @ Tf.conj().transpose()).is_scalar()
        assert lam is not None, "T T* must be scalar by Schur"
        if lam.is_rational() and lam.rational_value() != 1:
            M, root = sqrt_rational(lam.rational_value())
            nn = int(np.lcm(Tf.N, M))
            Tf = Tf.promote(nn).scale(root.promote(nn).inv())
        T.append(Tf)
        big = int(np.lcm(big, Tf.N))

    exp_A = A.exponent()
    floor_modulus = int(np.lcm.reduce([exp_A, 2 * P.p, 4]))
    big = int(np.lcm(big, floor_modulus))
    T = [t.promote(big) for t in T]
    exponents = np.zeros((A.n, A.n), dtype=np.int64)
    nonunit = []
    mu_modulus = floor_modulus
    for a in range(A.n):
        for b in range(A.n):
            ab = A.mul(a, b)
            scalar = _proportionality_scalar(T[a], T[b], T[ab])
            e = scalar.root_of_unity_exponent()
            if e is None:
                nonunit.append((a, b, scalar))
            else:
                exponents[a, b] = e
                order = big // int(np.gcd(e, big)) if e else 1
                mu_modulus = int(np.lcm(mu_modulus, order))
    cocycle = None
    if not nonunit:
        assert big % mu_modulus == 0
        values = (exponents // (big // mu_modulus)) % mu_modulus
        assert np.all((exponents * mu_modulus) % big == 0), \
            "every value must lie in mu_modulus"
        cocycle = Cocycle2(A, mu_modulus, values)
    return ProjectiveWeil(P, k, A, elems, omega.promote(big), T, cocycle,
                          mu_modulus, nonunit_values=nonunit)


def _proportionality_scalar(Ta, Tb, Tab):
    """c with Ta @ Tb = c * Tab; both sides intertwine the same pair, so
    Schur makes them proportional; one row is checked exactly."""
    i, j, lead = Tab.first_nonzero()
    d = Ta.shape[0]
    row_val = Cyc.zero(Ta.N)
    # (Ta @ Tb)[i, j]
    for t in range(d):
        a = Ta.rows[i][t]
        if not a.is_zero():
            b = Tb.rows[t][j]
            if not b.is_zero():
                row_val = row_val + a * b
    c = row_val * lead.inv()
    # exact spot-check on the full row i
    for col in range(d):
        acc = Cyc.zero(Ta.N)
        for t in range(d):
            a = Ta.rows[i][t]
            if not a.is_zero():
                b = Tb.rows[t][col]
                if not b.is_zero():
                    acc = acc + a * b
        assert acc == c * Tab.rows[i][col]
    return c


def linearize(pw: ProjectiveWeil):
    """Rescale the intertwiners into a representation of A by solving the
    coboundary system over mu_N, retrying over mu_{N * exp(A)} (a coboundary
    of a mu_N-cocycle may need the larger group; insolvability there
    certifies a genuinely nontrivial complex obstruction).

    Returns a WeilLinearization or a dict obstruction certificate.
    """
    if pw.nonunit_values:
        raise DomainError(
            "cocycle values leave the root-of-unity group under leading-one "
            "normalization; use the explicit odd-p model (gerardin_weil) "
            f"for this subgroup: first offending pair {pw.nonunit_values[0][:2]}")
    A = pw.A
    m = pw.mu_modulus
    b, report = coboundary_solve(pw.cocycle)
    used_modulus = m
    if b is None:
        m2 = m * A.exponent()
        scaled = Cocycle2(A, m2, (pw.cocycle.values * (m2 // m)) % m2, check=False)
        b2, report2 = coboundary_solve(scaled)
        if b2 is None:
            return {
                "obstruction": True,
                "mu_modulus": m,
                "certificate": report,
                "extended_modulus": m2,
                "extended_certificate": report2,
            }
        b, used_modulus = b2, m2
    N = pw.omega.N
    big = int(np.lcm(N, used_modulus))
    omega = pw.omega.promote(big)
    mats = []
    for a in range(A.n):
        phase = Cyc.zeta(big, (-int(b[a]) * (big // used_modulus)) % big)
        mats.append(pw.T[a].promote(big).scale(phase))
    flavor = _flavor_of(pw.P)
    lin = WeilLinearization(pw.P, pw.k, A, pw.autos, omega, mats, flavor, big)
    # exactness: restriction to A is multiplicative
    lin.rep_of_A()
    return lin


def _flavor_of(P):
    if P.p != 2:
        return "complex"
    return "real" if P.classify() == "positive" else "quaternionic"


# ---------------------------------------------------------------------------
# constructive extension over a polarization stabilizer
# ---------------------------------------------------------------------------

def linearize_via_polarization(P: HeisenbergGroup, autos, lift_elems,
                               P0_elems, k=1):
    """Extend omega_psi to A x| P for A inside the polarization stabilizer,
    by inducing the base representation inflated from the core.

    The A-part acts by permutation-and-phase matrices on the coset space;
    the restriction to P is entry-exact equal to the Heisenberg
    representation built from the same polarization data.
    """
    for f in autos:
        if not stabilizer_membership(f, lift_elems, P0_elems):
            raise DomainError(f"automorphism outside the stabilizer: {f.to_json()}")
    A, elems = _close_automorphisms(P, autos)
    for f in elems:
        if not stabilizer_membership(f, lift_elems, P0_elems):
            raise DomainError("closure left the stabilizer; input not a subgroup of it")

    from .reps import _polarization_of, _quaternion_base_rep
    from .heis import _span

    N = conductor_for(P.p)
    G = P.to_fingroup()
    lab_index = {lab: i for i, lab in enumerate(G.labels)}

    def act(a_idx, p_idx):
        return lab_index[elems[a_idx].apply(G.labels[p_idx])]

    prod = iterated_semidirect([G, A], {(0, 1): act}, name="AxP")
    prod_index = {lab: i for i, lab in enumerate(prod.labels)}

    # subgroup H = (lift x P0) x| A inside the product
    H_P = sorted({P.mul(l, x0) for l in lift_elems for x0 in P0_elems})
    H_idx = [prod_index[(lab_index[h], a)] for h in H_P for a in range(A.n)]

    lift_set = set(lift_elems)
    if len(P0_elems) > P.p:
        base_images = _quaternion_base_rep(P, P0_elems, N)
        d0 = 2
    else:
        base_images = None
        d0 = 1
    psi_step = N // P.p

    def base_of(x0):
        if base_images is not None:
            return base_images[x0]
        return CycMatrix(N, [[Cyc.zeta(N, (psi_step * k * x0[0]) % N)]])

    P0_set = set(P0_elems)

    def pi_of(prod_idx):
        x_idx, a = prod.labels[prod_idx]
        h = G.labels[x_idx]
        # h = l * x0 with l in the lift, x0 in P0
        for l in lift_set:
            x0 = P.mul(P.inv(l), h)
            if x0 in P0_set:
                return base_of(x0)
        raise AssertionError("element not in lift * P0")

    # coset representatives ((0, x-), 1) in lexicographic order on V-
    if P.p == 2:
        plus, V0, minus = _polarization_of(P)
    else:
        plus, V0, minus = _polarization_of(P)
    minus_span = _span([tuple(v) for v in minus], P.p) if minus else [(0,) * (2 * P.n)]
    coset_reps = [prod_index[(lab_index[(0, x)], A.identity)] for x in sorted(minus_span)]

    from .reps import induce
    big_rep = induce(prod, H_idx, pi_of, N, coset_reps=coset_reps)

    # restriction to P must equal the Heisenberg representation entry-exact
    omega = heisenberg_rep(P, k)
    for x_idx in range(G.n):
        assert big_rep.mats[prod_index[(x_idx, A.identity)]] == omega.mats[x_idx], \
            "restriction to P must be the Heisenberg representation, exactly"
    mats_A = [big_rep.mats[prod_index[(lab_index[P.identity], a)]] for a in range(A.n)]
    flavor = _flavor_of(P)
    lin = WeilLinearization(P, k, A, elems, omega, mats_A, flavor, N)
    lin.rep_of_A()
    return lin


# ---------------------------------------------------------------------------
# real / quaternionic refinement (p = 2)
# ---------------------------------------------------------------------------

def r_linearize(P: HeisenbergGroup, lin: WeilLinearization):
    """Adjust a complex linearization so every matrix commutes with the
    antilinear structure J of omega_psi; the remaining freedom is the group
    of order <= 2 characters of A, whose size is reported.

    Returns (WeilLinearization, report)."""
    if P.p != 2:
        raise DomainError("R-linearization applies to p = 2 only")
    A = lin.A
    rs = r_structure(lin.omega if lin.omega.N >= 4 else lin.omega.promote(4))
    big = int(np.lcm(lin.N, rs.J.N))
    J = rs.J.promote(big)
    Jinv = J.inverse()
    mats = [m.promote(big) for m in lin.mats_A]
    omega = lin.omega.promote(big)

    # gamma(a): J conj(T_a) J^-1 = gamma(a) T_a; a character of A
    gamma = []
    for a in range(A.n):
        U = J @ mats[a].conj() @ Jinv
        i, j, lead = mats[a].first_nonzero()
        g = U.rows[i][j] * lead.inv()
        assert U == mats[a].scale(g), "J-twist must be a scalar multiple"
        gamma.append(g)
    # gamma kills commutators; solve beta^2 = gamma in the character group
    derived = A.derived_subgroup()
    for d in derived:
        assert gamma[d] == Cyc.one(big), "gamma must kill the derived subgroup"
    Q, proj = A.quotient(derived)
    gens, orders, coords = Q.abelian_decomposition()
    # exponents of gamma on the generators
    gamma_exp = []
    for g, d in zip(gens, orders):
        a = next(x for x in range(A.n) if proj[x] == g)
        e = gamma[a].root_of_unity_exponent()
        assert e is not None and (e * d) % big == 0
        gamma_exp.append((e * d // big) % d)
    beta_exp = []
    for e, d in zip(gamma_exp, orders):
        sol = next((m for m in range(d) if (2 * m - e) % d == 0), None)
        if sol is None:
            return None, {"r_obstruction": True,
                          "detail": "gamma is not a square in the character group"}
        beta_exp.append(sol)
    # beta as a character of A
    def beta_of(a):
        tup = coords[proj[a]]
        e = Fraction(0)
        for c, m, d in zip(tup, beta_exp, orders):
            e += Fraction(c * m, d)
        e = e % 1
        num = int(e * big)
        assert Fraction(num, big) == e
        return Cyc.zeta(big, num)

    new_mats = [mats[a].scale(beta_of(a)) for a in range(A.n)]
    for a in range(A.n):
        assert J @ new_mats[a].conj() @ Jinv == new_mats[a], \
            "adjusted matrices must commute with J"
    n_order2 = 1
    for d in orders:
        n_order2 *= 2 if d % 2 == 0 else 1
    flavor = "real" if rs.sign == 1 else "quaternionic"
    out = WeilLinearization(P, lin.k, A, lin.autos, omega, new_mats, flavor,
                            big, character_orbit_size=n_order2)
    out.rep_of_A()
    report = {
        "flavor": flavor,
        "num_r_linearizations": n_order2,
        "unique": n_order2 == 1,
        "order2_characters": n_order2,
    }
    return out, report


# ---------------------------------------------------------------------------
# the odd-p model over the canonical symplectic section
# ---------------------------------------------------------------------------

def _rational_nth_root_exact(r, n):
    """The positive rational n-th root of a positive rational, or None."""
    def iroot(m):
        if m == 0:
            return 0
        x = round(m ** (1.0 / n))
        for cand in (x - 1, x, x + 1):
            if cand >= 0 and cand ** n == m:
                return cand
        return None

    a = iroot(r.numerator)
    b = iroot(r.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)


def _root_of_scalar(s: Cyc, order):
    """Some beta with beta^order = s, exactly.

    Handles the scalars the symplectic generators produce: write
    s conj(s) = m with m a rational whose order-th root t is rational; then
    beta = sqrt(t) * phi^(1/order) with phi = s / sqrt(t)^order a root of
    unity, taken in a conductor extended by a Gauss sum."""
    e = s.root_of_unity_exponent()
    if e is not None:
        return _unity_root(s.N, e, order)
    m = s * s.conj()
    if m.is_rational():
        t = _rational_nth_root_exact(m.rational_value(), order)
        if t is not None:
            M, kappa = sqrt_rational(t)
            big = int(np.lcm(s.N, M))
            phi = s.promote(big) * kappa.promote(big).inv() ** order
            e = phi.root_of_unity_exponent()
            if e is not None:
                root = _unity_root(big, e, order)
                c = root.N
                beta = kappa.promote(c) * root
                assert beta ** order == s.promote(c)
                return beta
    raise DomainError(f"no exact {order}-th root implemented for {s!r}")


def _unity_root(N, e, order):
    """An order-th root of zeta_N^e at the smallest workable conductor."""
    if e == 0:
        return Cyc.one(N)
    o_phi = N // int(np.gcd(e, N))
    c = int(np.lcm(N, order * o_phi))
    target = (e * (c // N)) % c
    for e2 in range(c):
        if (e2 * order) % c == target:
            return Cyc.zeta(c, e2)
    # fall back to the crude conductor
    return Cyc.zeta(N * order, e)


def gerardin_weil(p, n, A_matrices=None, k=1):
    """The Weil representation of (a subgroup of) Sp over the canonical
    section on the B = omega/2 model, built exactly: generator intertwiners
    are pinned by their element orders and the result is closed and
    verified.  Returns (WeilLinearization, count of linearizations)."""
    if p == 2:
        raise DomainError("the canonical symplectic section needs odd p")
    from .heis import standard_model
    P = standard_model(p, n, "odd")
    Ms = orth_sympl_group(P) if A_matrices is None else _matrix_closure(P, A_matrices)
    autos = [section_odd(P, M) for M in Ms]
    A, elems = _close_automorphisms(P, autos)
    assert A.n == len(Ms), "the section is a homomorphism"

    omega = heisenberg_rep(P, k)
    G = P.to_fingroup()
    lab_index = {lab: i for i, lab in enumerate(G.labels)}
    Tcache = {}

    def raw_T(a_idx):
        if a_idx not in Tcache:
            f = elems[a_idx]
            perm = [lab_index[f.apply(lab)] for lab in G.labels]
            twisted = omega.twist_by_permutation(perm)
            Tf = intertwiner(omega, twisted)
            Tcache[a_idx] = Tf
        return Tcache[a_idx]

    gens = _preferred_generators(A, elems, P)
    # pin each generator scalar through its element order
    candidates = []
    big = omega.N
    for g in gens:
        Tg = raw_T(g)
        o = A.element_order(g)
        power = Tg
        for _ in range(o - 1):
            power = power @ Tg
        s = power.is_scalar()
        assert s is not None
        beta0 = _root_of_scalar(s.inv(), o)
        big = int(np.lcm(big, beta0.N * o))
        candidates.append((g, o, beta0))

    omega_big = omega.promote(big)
    choice_sets = []
    for g, o, beta0 in candidates:
        b = beta0.promote(big)
        choice_sets.append([(g, b * Cyc.zeta(big, (big // o) * j)) for j in range(o)])

    from itertools import product as iproduct
    lin_mats = None
    for combo in iproduct(*choice_sets):
        images = {A.identity: CycMatrix.identity(big, omega.dim)}
        for g, beta in combo:
            images[g] = raw_T(g).promote(big).scale(beta)
        ok = _close_images(A, images)
        if ok:
            lin_mats = images
            break
    assert lin_mats is not None, "a linearization over the section must exist"
    mats = [lin_mats[a] for a in range(A.n)]
    # verify the intertwining property on generators
    for g in gens:
        f = elems[g]
        for x in G.generating_set():
            xi = G.labels[x]
            lhs = mats[g] @ omega_big.mats[x]
            rhs = omega_big.mats[lab_index[f.apply(xi)]] @ mats[g]
            assert lhs == rhs, "linearized matrices must intertwine the action"
    lin = WeilLinearization(P, k, A, elems, omega_big, mats, "complex", big)
    lin.rep_of_A()
    count = A.abelianization_order()
    return lin, count


def _preferred_generators(A: FinGroup, elems, P):
    """Generators whose intertwiner powers give tractable scalars: the
    Fourier-type element [[0,-1],[1,0]] (rational-magnitude power) and the
    lower unipotent [[1,0],[1,1]] (stabilizes the polarization the
    Heisenberg model uses, so its power is a root of unity).  They generate
    SL_2; otherwise fall back to the greedy set."""
    if P.n == 1:
        p = P.p
        S = np.array([[0, p - 1], [1, 0]], dtype=np.int64)
        L = np.array([[1, 0], [1, 1]], dtype=np.int64)
        idxs = []
        for target in (S, L):
            for i, f in enumerate(elems):
                if np.array_equal(f.M % p, target % p):
                    idxs.append(i)
                    break
        if len(idxs) == 2 and len(A.subgroup_closure(idxs)) == A.n:
            return idxs
    return A.generating_set()


def _matrix_closure(P, mats):
    seen = {}
    out = []
    frontier = [np.array(M, dtype=np.int64) % P.p for M in mats]
    ident = np.eye(2 * P.n, dtype=np.int64)
    frontier.append(ident)
    for M in frontier:
        key = tuple(map(tuple, M))
        if key not in seen:
            seen[key] = True
            out.append(M)
    i = 0
    while i < len(out):
        for g in list(out):
            Mg = (out[i] @ g) % P.p
            key = tuple(map(tuple, Mg))
            if key not in seen:
                seen[key] = True
                out.append(Mg)
        i += 1
    return out


def _close_images(A: FinGroup, images):
    """BFS-extend generator images to the whole group; False on conflict."""
    frontier = [a for a in images]
    gens = [a for a in images if a != A.identity]
    gen_imgs = {a: images[a] for a in gens}
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                ag = A.mul(a, g)
                cand = images[a] @ gen_imgs[g]
                if ag in images:
                    if not (images[ag] == cand):
                        return False
                else:
                    images[ag] = cand
                    new.append(ag)
        frontier = new
    if len(images) != A.n:
        return False
    # consistency on generator pairs from the other side
    for a in range(A.n):
        for g in gens:
            if not (images[A.mul(g, a)] == gen_imgs[g] @ images[a]):
                return False
    return True


def count_linearizations(P: HeisenbergGroup, autos, k=1):
    """Number of (Heisenberg-)Weil representations on A x| P for the given
    subgroup: all linear characters for the complex flavor, order <= 2
    characters for real/quaternionic."""
    A, elems = _close_automorphisms(P, autos)
    if P.p != 2:
        return A.abelianization_order()
    Q, _ = A.quotient(A.derived_subgroup())
    _, orders, _ = Q.abelian_decomposition()
    out = 1
    for d in orders:
        out *= 2 if d % 2 == 0 else 1
    return out


# ---------------------------------------------------------------------------
# uniqueness of special isomorphisms (odd p)
# ---------------------------------------------------------------------------

class SymplecticTarget:
    """The group Sp(V) x| V# on the B = omega/2 model, with decoding maps."""

    def __init__(self, p, n):
        from .heis import standard_model
        self.P = standard_model(p, n, "odd")
        self.Pfin = self.P.to_fingroup()
        Ms = orth_sympl_group(self.P)
        keys = [tuple(map(tuple, M)) for M in Ms]
        kindex = {kp: i for i, kp in enumerate(keys)}
        self.sp_matrices = Ms
        self.SpFin = FinGroup.from_mul(
            keys,
            lambda a, b: tuple(map(tuple, (np.array(a) @ np.array(b)) % p)),
            name=f"Sp_{2*n}(F_{p})")
        lab_index = {lab: i for i, lab in enumerate(self.Pfin.labels)}

        def act(m_idx, p_idx):
            a, v = self.Pfin.labels[p_idx]
            M = np.array(keys[m_idx], dtype=np.int64)
            return lab_index[(a, tuple(int(t) for t in (M @ np.array(v)) % p))]

        self.group = iterated_semidirect([self.Pfin, self.SpFin],
                                         {(0, 1): act}, name="SpxV#")
        self.index = {lab: i for i, lab in enumerate(self.group.labels)}

    def element(self, heis_elem, sp_matrix):
        p_idx = self.Pfin.labels.index(heis_elem)
        m_idx = self.SpFin.labels.index(tuple(map(tuple, np.array(sp_matrix) % self.P.p)))
        return self.index[(p_idx, m_idx)]

    def decode(self, idx):
        p_idx, m_idx = self.group.labels[idx]
        return self.Pfin.labels[p_idx], self.SpFin.labels[m_idx]


def special_iso_uniqueness_check(P: HeisenbergGroup, A_group, autos,
                                 f1, f2, target: SymplecticTarget):
    """Given two homomorphisms A x| P -> Sp x| V# (as index maps on the
    iterated-semidirect labellings) whose A-restrictions factor through the
    symplectic projection and whose P-restrictions are special
    isomorphisms, find h in P with f2 = conj_{f1(h)} o f1.  Violated
    hypotheses are reported before any search."""
    if P.p == 2:
        raise DomainError("special isomorphisms concern odd p")
    G = P.to_fingroup()
    lab_index = {lab: i for i, lab in enumerate(G.labels)}

    def act(a_idx, p_idx):
        return lab_index[autos[a_idx].apply(G.labels[p_idx])]

    prod = iterated_semidirect([G, A_group], {(0, 1): act}, name="AxP")
    prod_index = {lab: i for i, lab in enumerate(prod.labels)}
    tgt = target.group

    for f in (f1, f2):
        for x_idx in range(G.n):
            src = G.labels[x_idx]
            heis_part, sp_part = target.decode(f[prod_index[(x_idx, A_group.identity)]])
            sp_ident = tuple(map(tuple, np.eye(2 * P.n, dtype=np.int64)))
            if sp_part != sp_ident or heis_part[1] != src[1]:
                return {"error": "restriction to P is not a special isomorphism",
                        "witness": src}
    for a in range(A_group.n):
        heis_part, _ = target.decode(f1[prod_index[(lab_index[P.identity], a)]])
        if heis_part[1] != (0,) * (2 * P.n):
            return {"error": "restriction to A does not factor through Sp x 1",
                    "witness": a}

    for h_lab in G.labels:
        h_idx = prod_index[(lab_index[h_lab], A_group.identity)]
        fh = f1[h_idx]
        ok = True
        for x in range(prod.n):
            lhs = f2[x]
            rhs = tgt.mul(tgt.mul(fh, f1[x]), tgt.inv(fh))
            if lhs != rhs:
                ok = False
                break
        if ok:
            return {"h": h_lab}
    return {"error": "no conjugating element found (hypothesis violation)"}


def linearization_ratio_character(lin1: WeilLinearization, lin2: WeilLinearization):
    """The scalar ratio a -> T'_a T_a^{-1} between two linearizations of the
    same projective data; verified scalar and multiplicative."""
    A = lin1.A
    big = int(np.lcm(lin1.N, lin2.N))
    ratios = []
    for a in range(A.n):
        M1 = lin1.mats_A[a].promote(big)
        M2 = lin2.mats_A[a].promote(big)
        i, j, lead = M1.first_nonzero()
        c = M2.rows[i][j] * lead.inv()
        assert M2 == M1.scale(c), "linearizations must differ by scalars"
        ratios.append(c)
    for a in range(A.n):
        for b in range(A.n):
            assert ratios[A.mul(a, b)] == ratios[a] * ratios[b], \
                "the ratio must be a character"
    return ratios
