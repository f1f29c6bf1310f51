"""Maurer-Cartan solvers, gauge orbits, and the brute-force lift oracle.

Conventions.  A Maurer-Cartan element of the cochain dg-algebra valued in a
test ring A solves d(xi) + xi.xi = 0; these biject with lifts of the
representation via x -> rho(x) + xi(x).  The minimal solver uses the signed
equation sum_n (-1)^{n(n+1)/2} m_n(xi,..,xi) = 0.  The stepwise lift
recursion solves d(sigma_n) = sum_j sigma_j . sigma_{n-j}, whose solution
chains correspond to Maurer-Cartan elements under sigma -> -sigma.

All elements with coefficients are arrays over F_p with a trailing axis for
the test-ring basis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import fp
from .cochain import Cochain, CochainComplex
from .transfer import AInfStructure, Retract

ENUM_CAP = 1 << 22


class CapExceeded(RuntimeError):
    pass


class RingError(ValueError):
    pass


@dataclass
class TestRing:
    """Artinian local F_p-algebra in an adapted basis (basis[0] = unit).

    maximal[k] marks basis vectors spanning the maximal ideal; the span must
    be a nilpotent two-sided ideal with one-dimensional quotient.
    """
    __test__ = False  # not a pytest collectable despite the name
    p: int
    dim: int
    names: list
    mult: np.ndarray            # dim^3 structure constants
    maximal: list
    commutative: bool = True
    nilpotency: int = field(default=0)

    def __post_init__(self):
        p = self.p
        c = np.mod(np.asarray(self.mult, dtype=np.int64), p)
        if c.shape != (self.dim, self.dim, self.dim):
            raise RingError("test ring constants must be dim^3")
        self.mult = c
        lhs = np.mod(np.einsum("abx,xcy->abcy", c, c), p)
        rhs = np.mod(np.einsum("bcx,axy->abcy", c, c), p)
        if (lhs != rhs).any():
            raise RingError("test ring multiplication is not associative")
        ident = np.eye(self.dim, dtype=np.int64)
        if not ((c[0] == ident).all() and (c[:, 0] == ident).all()):
            raise RingError("basis[0] is not a two-sided unit")
        if self.maximal[0] or not all(self.maximal[1:]):
            raise RingError("adapted basis required: maximal = basis[1:]")
        mx = [k for k in range(self.dim) if self.maximal[k]]
        if c[np.ix_(mx, range(self.dim))][:, :, 0].any() or \
           c[np.ix_(range(self.dim), mx)][:, :, 0].any():
            raise RingError("maximal span is not an ideal")
        if self.commutative and (c != c.transpose(1, 0, 2)).any():
            raise RingError("ring declared commutative but is not")
        # nilpotency by powering the maximal ideal
        span = np.eye(self.dim, dtype=np.int64)[mx]
        nu = 1
        while span.size and nu <= self.dim + 1:
            prods = np.mod(np.einsum("ax,by,xyz->abz",
                                     span, np.eye(self.dim, dtype=np.int64)[mx], c), p)
            prods = prods.reshape(-1, self.dim)
            red, piv, rk = fp.rref(prods, self.p)
            span = red[:rk]
            nu += 1
            if rk == 0:
                break
        else:
            if span.size:
                raise RingError("maximal ideal is not nilpotent")
        self.nilpotency = nu
        self.m_idx = mx

    @property
    def m_dim(self):
        return self.dim - 1

    def mul_vec(self, a, b):
        return np.mod(np.einsum("...x,...y,xyz->...z", a, b, self.mult), self.p)


def eps_ring(p: int, n: int) -> TestRing:
    """F_p[e]/(e^{n+1})."""
    dim = n + 1
    c = np.zeros((dim, dim, dim), dtype=np.int64)
    for a in range(dim):
        for b in range(dim):
            if a + b < dim:
                c[a, b, a + b] = 1
    return TestRing(p=p, dim=dim, names=["1"] + ["e^%d" % k for k in range(1, dim)],
                    mult=c, maximal=[False] + [True] * n)


def square_zero_ring(p: int, k: int = 2) -> TestRing:
    """F_p[x_1..x_k]/(x_i x_j): the split square-zero extension."""
    dim = k + 1
    c = np.zeros((dim, dim, dim), dtype=np.int64)
    c[0, :, :] = np.eye(dim, dtype=np.int64)
    c[:, 0, :] = np.eye(dim, dtype=np.int64)
    return TestRing(p=p, dim=dim, names=["1"] + ["x%d" % i for i in range(1, dim)],
                    mult=c, maximal=[False] + [True] * k)


def ring_from_doc(doc: dict, p: int) -> TestRing:
    return TestRing(p=p, dim=int(doc["dim"]),
                    names=doc.get("names") or ["b%d" % k for k in range(int(doc["dim"]))],
                    mult=np.asarray(doc["constants"], dtype=np.int64),
                    maximal=[False] + [True] * (int(doc["dim"]) - 1),
                    commutative=bool(doc.get("commutative", True)))


@dataclass
class MCElement:
    coords: np.ndarray          # (space dim, ring dim)
    minimal: bool               # H^1 coordinates if True, else C^1

    def key(self) -> bytes:
        return np.ascontiguousarray(self.coords).tobytes()


# --------------------------------------------------------------------------
# A-coefficient cochain algebra
# --------------------------------------------------------------------------

def d_with_ring(complex: CochainComplex, x: np.ndarray, n: int, ring: TestRing):
    return np.mod(complex.dmat[n] @ x, complex.p)

def cup_with_ring(complex: CochainComplex, x, m, y, n, ring: TestRing):
    """Cup product of A-valued cochains; x: (dim_m, dA), y: (dim_n, dA)."""
    d = complex.d
    xm = np.zeros((complex.n_tuples(m), d * d, ring.dim), dtype=np.int64)
    xm[:, complex.coord_order, :] = x.reshape(complex.n_tuples(m), d * d, ring.dim)
    ym = np.zeros((complex.n_tuples(n), d * d, ring.dim), dtype=np.int64)
    ym[:, complex.coord_order, :] = y.reshape(complex.n_tuples(n), d * d, ring.dim)
    xm = xm.reshape(-1, d, d, ring.dim)
    ym = ym.reshape(-1, d, d, ring.dim)
    prod = np.mod(np.einsum("aijx,bjky,xyz->abikz", xm, ym, ring.mult), complex.p)
    t = prod.shape[0] * prod.shape[1]
    flat = prod.reshape(t, d * d, ring.dim)[:, complex.coord_order, :]
    return flat.reshape(t * d * d, ring.dim)


def mc_residual_dg(complex: CochainComplex, xi: np.ndarray, ring: TestRing):
    return np.mod(d_with_ring(complex, xi, 1, ring)
                  + cup_with_ring(complex, xi, 1, xi, 1, ring), complex.p)


# --------------------------------------------------------------------------
# A-valued matrices (for lifts)
# --------------------------------------------------------------------------

def _amat_mul(x, y, ring: TestRing, p: int):
    return np.mod(np.einsum("...ijx,...jky,xyz->...ikz", x, y, ring.mult), p)


def _amat_eye(d: int, ring: TestRing):
    m = np.zeros((d, d, ring.dim), dtype=np.int64)
    m[np.arange(d), np.arange(d), 0] = 1
    return m


def _amat_inv_unipotent(x, ring: TestRing, p: int):
    """Inverse of x = 1 + n with n in M_d(m_A), by a Neumann series."""
    d = x.shape[0]
    one = _amat_eye(d, ring)
    n = np.mod(x - one, p)
    acc, term = one.copy(), one.copy()
    for _ in range(ring.nilpotency + 1):
        term = np.mod(-_amat_mul(term, n, ring, p), p)
        if not term.any():
            break
        acc = np.mod(acc + term, p)
    return acc


def _enumerate_m_matrices(d: int, ring: TestRing, p: int, cap: int):
    """All X in M_d(m_A), shape (count, d, d, dimA)."""
    slots = d * d * ring.m_dim
    count = p ** slots
    if count > cap:
        raise CapExceeded(
            "generator enumeration needs %d candidates (cap %d)" % (count, cap))
    grids = np.array(list(itertools.product(range(p), repeat=slots)), dtype=np.int64)
    out = np.zeros((count, d, d, ring.dim), dtype=np.int64)
    out[..., 1:] = grids.reshape(count, d, d, ring.m_dim)
    return out


def lift_to_mc(complex: CochainComplex, lift_mats: np.ndarray, ring: TestRing) -> MCElement:
    """xi(g) = rho_A(g) - rho(g), flattened to C^1 (x) A coordinates."""
    rep = complex.rep
    rho0 = np.zeros((complex.n_elems, complex.d, complex.d, ring.dim), dtype=np.int64)
    rho0[..., 0] = rep.matrices
    xi = np.mod(lift_mats - rho0, complex.p)
    flat = xi.reshape(complex.n_elems, complex.d * complex.d, ring.dim)
    flat = flat[:, complex.coord_order, :]
    return MCElement(coords=flat.reshape(complex.dim(1), ring.dim), minimal=False)


def mc_to_lift(complex: CochainComplex, el: MCElement, ring: TestRing) -> np.ndarray:
    d = complex.d
    x = np.zeros((complex.n_elems, d * d, ring.dim), dtype=np.int64)
    x[:, complex.coord_order, :] = el.coords.reshape(complex.n_elems, d * d, ring.dim)
    x = x.reshape(complex.n_elems, d, d, ring.dim)
    x[..., 0] = np.mod(x[..., 0] + complex.rep.matrices, complex.p)
    return x


def _propagate_and_check(group, gen_mats, ring: TestRing, p: int):
    """Extend generator lifts along words; return all-element lifts or None."""
    d = gen_mats[0].shape[0]
    full = np.zeros((group.order, d, d, ring.dim), dtype=np.int64)
    for g in range(group.order):
        m = _amat_eye(d, ring)
        for gi in group.words[g]:
            m = _amat_mul(m, gen_mats[gi], ring, p)
        full[g] = m
    prod = np.mod(np.einsum("aijx,bjky,xyz->abikz", full, full, ring.mult), p)
    if (prod != full[group.table]).any():
        return None
    return full


def enumerate_mc_dg(complex: CochainComplex, ring: TestRing,
                    mode: str = "auto", cap: int = ENUM_CAP):
    """All solutions of d(xi) + xi.xi = 0 in C^1 (x) m_A.

    mode "full" enumerates the whole coefficient space; "generators"
    enumerates lifts of generator matrices and filters by the Cayley table
    (group complexes only).  "auto" picks by size.
    """
    p = complex.p
    full_count = p ** (complex.dim(1) * ring.m_dim)
    if mode == "auto":
        mode = "full" if full_count <= min(cap, 1 << 16) else "generators"
    if mode == "full":
        if full_count > cap:
            raise CapExceeded(
                "full enumeration needs %d candidates (cap %d); "
                "use generator mode" % (full_count, cap))
        sols = []
        slots = complex.dim(1) * ring.m_dim
        for assign in itertools.product(range(p), repeat=slots):
            xi = np.zeros((complex.dim(1), ring.dim), dtype=np.int64)
            xi[:, 1:] = np.asarray(assign, dtype=np.int64).reshape(complex.dim(1), ring.m_dim)
            if not mc_residual_dg(complex, xi, ring).any():
                sols.append(MCElement(coords=xi, minimal=False))
        return sols

    if complex.kind != "group":
        raise CapExceeded("generator mode requires a group complex")
    group = complex.rep.source
    d = complex.d
    cands = _enumerate_m_matrices(d, ring, p, cap)
    rho = complex.rep.matrices
    per_gen = []
    for gi, g in enumerate(group.generators):
        base = np.zeros_like(cands)
        base[..., 0] = rho[g]
        mats = np.mod(base + cands, p)
        k = group.element_order(g)
        power = mats
        for _ in range(k - 1):
            power = np.mod(np.einsum("nijx,njky,xyz->nikz", power, mats, ring.mult), p)
        ident = _amat_eye(d, ring)
        ok = (power == ident[None]).all(axis=(1, 2, 3))
        per_gen.append(mats[ok])
    total = 1
    for mats in per_gen:
        total *= len(mats)
    if total > cap:
        raise CapExceeded("generator mode needs %d combinations (cap %d)" % (total, cap))
    sols = []
    for combo in itertools.product(*[range(len(m)) for m in per_gen]):
        gen_mats = [per_gen[k][i] for k, i in enumerate(combo)]
        full = _propagate_and_check(group, gen_mats, ring, p)
        if full is not None:
            sols.append(lift_to_mc(complex, full, ring))
    return sols


def _scalar_conjugates(complex: CochainComplex, el: MCElement, ring: TestRing):
    """Images of el under conjugation by residual block scalars (F_p^r)^x."""
    p = complex.p
    r = complex.r
    blocks = complex.basis_blocks(1)
    out = []
    for lam in itertools.product(range(1, p), repeat=r):
        scale = np.array([lam[i] * fp.inv_mod(lam[j], p) % p for (i, j) in blocks],
                         dtype=np.int64)
        out.append(np.mod(el.coords * scale[:, None], p))
    return out


def gauge_classes_dg(complex: CochainComplex, ring: TestRing, solutions,
                     deformation: bool = True, verify: bool = False):
    """Orbits of the augmented gauge action on MC solutions.

    Generators gamma = lambda e_b (x) a over the C^0 basis and the maximal
    ideal basis generate the unipotent gauge group; deformation classes also
    conjugate by residual block scalars.  Returns a list of orbits (each a
    list of MCElements), deterministic in the order solutions were given.
    """
    p = complex.p
    sol_map = {s.key(): s for s in solutions}
    gauge_gens = []
    for b in range(complex.dim(0)):
        for a in ring.m_idx:
            for lam in range(1, p):
                gamma = np.zeros((complex.dim(0), ring.dim), dtype=np.int64)
                gamma[b, a] = lam
                gauge_gens.append(gamma)

    def apply_gauge(xi, gamma):
        dg = d_with_ring(complex, gamma, 0, ring)
        bracket = np.mod(cup_with_ring(complex, xi, 1, gamma, 0, ring)
                         - cup_with_ring(complex, gamma, 0, xi, 1, ring) + dg, p)
        # (1 - gamma)^{-1} as a Neumann series in C^0 (x) A
        inv = np.zeros((complex.dim(0), ring.dim), dtype=np.int64)
        unit = complex.unit_cochain().coords
        inv[:, 0] = unit
        term = inv.copy()
        for _ in range(ring.nilpotency + 1):
            term = cup_with_ring(complex, term, 0, gamma, 0, ring)
            if not term.any():
                break
            inv = np.mod(inv + term, p)
        return np.mod(xi - cup_with_ring(complex, inv, 0, bracket, 1, ring), p)

    unseen = dict(sol_map)
    orbits = []
    for s in solutions:
        if s.key() not in unseen:
            continue
        orbit = []
        frontier = [s.coords]
        del unseen[s.key()]
        orbit.append(s)
        while frontier:
            cur = frontier.pop()
            images = [apply_gauge(cur, g) for g in gauge_gens]
            if deformation:
                images.extend(_scalar_conjugates(
                    complex, MCElement(cur, False), ring))
            for img in images:
                if verify and mc_residual_dg(complex, img, ring).any():
                    raise AssertionError("gauge image fails the MC equation")
                k = np.ascontiguousarray(img).tobytes()
                if k in unseen:
                    el = unseen.pop(k)
                    orbit.append(el)
                    frontier.append(img)
        orbits.append(orbit)
    return orbits


# --------------------------------------------------------------------------
# minimal (transferred) Maurer-Cartan
# --------------------------------------------------------------------------

def hmc_sign(n: int) -> int:
    return (-1) ** (n * (n + 1) // 2)


def mc_residual_minimal(ainf: AInfStructure, xi: np.ndarray, ring: TestRing):
    """sum_n (-1)^{n(n+1)/2} m_n^A(xi..xi) in H^2 (x) A."""
    p = ainf.p
    out = np.zeros((ainf.h2_dim, ring.dim), dtype=np.int64)
    for key, vec in ainf.m_table.items():
        if not all(e[0] == 1 for e in key):
            continue
        if not vec.any():
            continue
        prod = xi[key[0][1]]
        for e in key[1:]:
            prod = ring.mul_vec(prod, xi[e[1]])
        if not prod.any():
            continue
        out = np.mod(out + hmc_sign(len(key)) * np.outer(vec, prod), p)
    return out


def solve_mc_minimal(ainf: AInfStructure, ring: TestRing,
                     mode: str = "auto", cap: int = ENUM_CAP):
    """All xi in H^1 (x) m_A with vanishing signed product sum.

    Arity truncation must reach the nilpotency degree of m_A minus one;
    otherwise the computation refuses rather than silently truncating.
    """
    if ring.nilpotency - 1 > ainf.n_max:
        raise RingError(
            "truncation arity %d too small for nilpotency degree %d"
            % (ainf.n_max, ring.nilpotency))
    p = ainf.p
    h1 = ainf.h1_dim
    count = p ** (h1 * ring.m_dim)
    if mode == "auto":
        mode = "full" if count <= cap else "graded"
    if mode == "full":
        if count > cap:
            raise CapExceeded("minimal enumeration needs %d candidates" % count)
        sols = []
        for assign in itertools.product(range(p), repeat=h1 * ring.m_dim):
            xi = np.zeros((h1, ring.dim), dtype=np.int64)
            xi[:, 1:] = np.asarray(assign, dtype=np.int64).reshape(h1, ring.m_dim)
            if not mc_residual_minimal(ainf, xi, ring).any():
                sols.append(MCElement(coords=xi, minimal=True))
        return sols
    return _solve_mc_minimal_graded(ainf, ring)


def _solve_mc_minimal_graded(ainf: AInfStructure, ring: TestRing):
    """Degreewise solver for principal eps-graded rings F_p[e]/(e^{n+1}).

    The residual at order e^m depends only on coefficients below m, so valid
    prefixes are extended level by level.
    """
    exp = _eps_exponents(ring)
    n = ring.m_dim
    p = ainf.p
    h1 = ainf.h1_dim
    sols = []

    def residual_ok(xi, upto):
        res = mc_residual_minimal(ainf, xi, ring)
        cols = [k for k in range(ring.dim) if exp[k] <= upto]
        return not res[:, cols].any()

    def rec(xi, level):
        if level > n:
            sols.append(MCElement(coords=xi.copy(), minimal=True))
            return
        col = exp.index(level)
        for assign in itertools.product(range(p), repeat=h1):
            xi[:, col] = assign
            if residual_ok(xi, level + 1):
                rec(xi, level + 1)
        xi[:, col] = 0

    rec(np.zeros((h1, ring.dim), dtype=np.int64), 1)
    return sols


def _eps_exponents(ring: TestRing):
    """basis index -> e-adic level, for rings built by eps_ring."""
    exp = [0] * ring.dim
    for k in range(1, ring.dim):
        name = ring.names[k]
        if not name.startswith("e^"):
            raise RingError("graded solving supported for eps rings only")
        exp[k] = int(name[2:])
    return exp


def minimal_gauge_class_count(ainf: AInfStructure, ring: TestRing, solutions):
    """Deformation-class count for minimal MC solutions.

    Strict gauge on a connected minimal structure is conjugation by
    1 + diagonal scalars; over r points the residual (F_p^r)^x also acts on
    blocks.  For r = 1 both actions are central and the count is len(solutions).
    """
    p = ainf.p
    r = ainf.r
    if r == 1:
        return len(solutions)
    blocks = ainf.h1_blocks
    unseen = {s.key(): s for s in solutions}
    count = 0
    for s in solutions:
        if s.key() not in unseen:
            continue
        count += 1
        frontier = [s.coords]
        del unseen[s.key()]
        while frontier:
            cur = frontier.pop()
            images = []
            # strict diagonal units 1 + a, a in m_A per point
            for i_pt in range(r):
                for a in ring.m_idx:
                    for lam in range(1, p):
                        u = np.zeros(ring.dim, dtype=np.int64)
                        u[0] = 1
                        u[a] = lam
                        uinv = _ring_inv_unit(u, ring)
                        img = cur.copy()
                        for t, (i, j) in enumerate(blocks):
                            v = cur[t]
                            if i == i_pt:
                                v = ring.mul_vec(u, v)
                            if j == i_pt:
                                v = ring.mul_vec(v, uinv)
                            img[t] = v
                        images.append(np.mod(img, p))
            for lam in itertools.product(range(1, p), repeat=r):
                scale = np.array([lam[i] * fp.inv_mod(lam[j], p) % p
                                  for (i, j) in blocks], dtype=np.int64)
                images.append(np.mod(cur * scale[:, None], p))
            for img in images:
                k = np.ascontiguousarray(img).tobytes()
                if k in unseen:
                    del unseen[k]
                    frontier.append(img)
    return count


def _ring_inv_unit(u, ring: TestRing):
    """Inverse of a unit with residue 1."""
    p = ring.p
    one = np.zeros(ring.dim, dtype=np.int64)
    one[0] = 1
    n = np.mod(u - one, p)
    acc, term = one.copy(), one.copy()
    for _ in range(ring.nilpotency + 1):
        term = np.mod(-ring.mul_vec(term, n), p)
        if not term.any():
            break
        acc = np.mod(acc + term, p)
    return acc


# --------------------------------------------------------------------------
# oracle over generator images
# --------------------------------------------------------------------------

def oracle_lift_classes(rep, ring: TestRing, cap: int = ENUM_CAP):
    """Enumerate homomorphisms G -> GL_d(A) reducing to rho, then classify.

    Returns {"solutions", "strict_classes", "deformation_classes",
    "representatives"}; classes are counted by BFS orbits under conjugation
    by 1 + M_d(m_A) (strict) plus residual block scalars (deformation).
    """
    if not rep.is_group:
        raise RingError("oracle operates on group representations")
    group = rep.source
    p = rep.p
    d = rep.total_dim
    cands = _enumerate_m_matrices(d, ring, p, cap)
    per_gen = []
    for g in rep.source.generators:
        base = np.zeros_like(cands)
        base[..., 0] = rep.matrices[g]
        mats = np.mod(base + cands, p)
        k = group.element_order(g)
        power = mats
        for _ in range(k - 1):
            power = np.mod(np.einsum("nijx,njky,xyz->nikz", power, mats, ring.mult), p)
        ok = (power == _amat_eye(d, ring)[None]).all(axis=(1, 2, 3))
        per_gen.append(mats[ok])
    total = 1
    for m in per_gen:
        total *= len(m)
    if total > cap:
        raise CapExceeded("oracle needs %d combinations (cap %d)" % (total, cap))
    sols = []
    for combo in itertools.product(*[range(len(m)) for m in per_gen]):
        gen_mats = [per_gen[k][i] for k, i in enumerate(combo)]
        full = _propagate_and_check(group, gen_mats, ring, p)
        if full is not None:
            sols.append(np.stack(gen_mats))
    strict = _matrix_orbits(sols, rep, ring, scalars=False)
    deform = _matrix_orbits(sols, rep, ring, scalars=True)
    return {
        "solutions": len(sols),
        "strict_classes": len(strict),
        "deformation_classes": len(deform),
        "representatives": [orb[0] for orb in deform],
    }


def _matrix_orbits(sols, rep, ring: TestRing, scalars: bool):
    p = rep.p
    d = rep.total_dim
    slices = rep.block_slices()
    keys = {np.ascontiguousarray(s).tobytes(): s for s in sols}
    conj_gens = []
    for u in range(d):
        for v in range(d):
            for a in ring.m_idx:
                for lam in range(1, p):
                    g = _amat_eye(d, ring)
                    g[u, v, a] = (g[u, v, a] + lam) % p
                    conj_gens.append(g)
    scalar_gens = []
    if scalars:
        for lam in itertools.product(range(1, p), repeat=rep.r):
            s = np.zeros((d, d, ring.dim), dtype=np.int64)
            si = np.zeros((d, d, ring.dim), dtype=np.int64)
            for i, sl in enumerate(slices):
                for k in range(sl.start, sl.stop):
                    s[k, k, 0] = lam[i]
                    si[k, k, 0] = fp.inv_mod(lam[i], p)
            scalar_gens.append((s, si))
    orbits = []
    unseen = dict(keys)
    for s in sols:
        k0 = np.ascontiguousarray(s).tobytes()
        if k0 not in unseen:
            continue
        orbit = [s]
        del unseen[k0]
        frontier = [s]
        while frontier:
            cur = frontier.pop()
            images = []
            for g in conj_gens:
                ginv = _amat_inv_unipotent(g, ring, p)
                img = np.stack([
                    _amat_mul(_amat_mul(g, cur[i], ring, p), ginv, ring, p)
                    for i in range(cur.shape[0])])
                images.append(img)
            for s_mat, si_mat in scalar_gens:
                img = np.stack([
                    _amat_mul(_amat_mul(s_mat, cur[i], ring, p), si_mat, ring, p)
                    for i in range(cur.shape[0])])
                images.append(img)
            for img in images:
                k = np.ascontiguousarray(img).tobytes()
                if k in unseen:
                    del unseen[k]
                    orbit.append(img)
                    frontier.append(img)
        orbits.append(orbit)
    return orbits


# --------------------------------------------------------------------------
# stepwise lift extension
# --------------------------------------------------------------------------

def extend_lift(complex: CochainComplex, retract: Retract, sigmas):
    """Solve d(sigma_n) = sum_{j<n} sigma_j . sigma_{n-j} for the next term.

    sigmas = [sigma_1 .. sigma_{n-1}] as degree-1 cochains, assumed (and
    verified) to satisfy the recursion below n.  Returns
    ("extended", particular, z1_basis) or ("obstructed", class_coords).
    """
    p = complex.p
    n = len(sigmas) + 1
    for i in range(1, n):
        rhs_i = np.zeros(complex.dim(2), dtype=np.int64)
        for j in range(1, i):
            rhs_i = np.mod(rhs_i + complex.cup(sigmas[j - 1], sigmas[i - j - 1]).coords, p)
        if not (complex.d_apply(sigmas[i - 1]).coords == rhs_i).all():
            raise ValueError("input chain fails the lift recursion at degree %d" % i)
    rhs = np.zeros(complex.dim(2), dtype=np.int64)
    for j in range(1, n):
        rhs = np.mod(rhs + complex.cup(sigmas[j - 1], sigmas[n - j - 1]).coords, p)
    sol = fp.solve_affine(complex.dmat[1], rhs, p)
    if sol is None:
        obstruction = retract.project(Cochain(2, rhs))
        return ("obstructed", obstruction)
    particular, z1 = sol
    return ("extended", Cochain(1, particular), [Cochain(1, v) for v in z1])
