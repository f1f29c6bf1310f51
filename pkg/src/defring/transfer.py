"""Homotopy retract, Merkulov transfer, and the Massey product engine.

The retract realizes, blockwise per pair of simple summands, the
decomposition of each C^n into coboundaries, chosen cocycle lifts of
cohomology, and lifts of (n+1)-coboundaries.  The transferred products are
computed by the recursion

    mt_n = sum_{s+t=n} (-1)^{s+1} mu((h o mt_s) (x) (h o mt_t)),    h o mt_1 := -id
    m_n  = p o mt_n o i^{(x)n},   f_n = -(h o mt_n) o i^{(x)n}

with the Koszul sign rule applied when tensor products of maps are
evaluated on elements.  Signs are certified end to end by the universal
homomorphism check in the presentation module, not by golden tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fp
from .cochain import Cochain, CochainComplex


class TransferError(RuntimeError):
    pass


class Retract:
    """Per-degree maps (i, p, h) with the side conditions of the chosen splitting.

    h[n] maps degree-n cochains to degree n-1.  The complement priority
    ("standard" or "reversed") selects the greedy order used to pick lifts,
    which is the knob used by the retract-independence checks.
    """

    def __init__(self, complex: CochainComplex, priority: str = "standard"):
        self.complex = complex
        self.p_mod = complex.p
        self.priority = priority
        d_max = complex.d_max
        p = complex.p

        self.h_blocks = []        # per degree: list of block labels per H basis vector
        self.block_h_dims = []    # per degree: {(i,j): dim}
        self.i_mat = []
        self.p_mat = []
        self.h_mat = [np.zeros((0, complex.dim(0)), dtype=np.int64)]  # h^0 = 0

        blocks = [(i, j) for i in range(complex.r) for j in range(complex.r)]
        prev_L = {}  # block -> columns of L^{n-1} in block-local coordinates
        prev_idx = {}
        self._l_proj = None      # projector onto L in top degree, for verification
        for n in range(d_max + 1):
            i_cols, p_rows, labels = [], [], []
            h_cols_rows = np.zeros((complex.dim(n - 1) if n else 0, complex.dim(n)),
                                   dtype=np.int64)
            bdims = {}
            cur_L = {}
            if n == d_max:
                l_proj = np.zeros((complex.dim(n), complex.dim(n)), dtype=np.int64)
            for blk in blocks:
                idx_n = complex.block_indices(n, blk)
                sub = len(idx_n)
                if sub == 0:
                    continue
                dn = complex.dmat[n][:, idx_n]
                idx_up = complex.block_indices(n + 1, blk)
                dn = dn[idx_up, :]
                # B^n from d(L^{n-1}); Z^n from the kernel of d^n
                if blk in prev_L and prev_L[blk].shape[1]:
                    dprev = complex.dmat[n - 1][:, prev_idx[blk]][idx_n, :]
                    b_cols = fp.matmul(dprev, prev_L[blk], p)
                else:
                    b_cols = np.zeros((sub, 0), dtype=np.int64)
                z_basis = fp.kernel_basis(dn, p)
                z_cols = (np.stack(z_basis, axis=1) if z_basis
                          else np.zeros((sub, 0), dtype=np.int64))
                # lift cohomology: extend B inside Z along Z's canonical basis
                chosen, _ = fp.greedy_pivot_extend(b_cols, z_cols, p)
                hb = (z_cols[:, chosen] if chosen
                      else np.zeros((sub, 0), dtype=np.int64))
                # lifts of coboundaries: extend Z to the whole block space
                order = (np.arange(sub) if priority == "standard"
                         else np.arange(sub - 1, -1, -1))
                cand = np.eye(sub, dtype=np.int64)[:, order]
                z_all = np.concatenate([b_cols, hb], axis=1)
                chosen, _ = fp.greedy_pivot_extend(z_all, cand, p)
                l_cols = (cand[:, chosen] if chosen
                          else np.zeros((sub, 0), dtype=np.int64))
                M = np.concatenate([b_cols, hb, l_cols], axis=1)
                Minv = self._invert(M, p)
                nb, nh = b_cols.shape[1], hb.shape[1]
                bdims[blk] = nh
                cur_L[blk] = l_cols
                for k in range(nh):
                    col = np.zeros(complex.dim(n), dtype=np.int64)
                    col[idx_n] = hb[:, k]
                    i_cols.append(col)
                    row = np.zeros(complex.dim(n), dtype=np.int64)
                    row[idx_n] = Minv[nb + k, :]
                    p_rows.append(row)
                    labels.append(blk)
                if n > 0 and blk in prev_L and prev_L[blk].shape[1]:
                    # h on this block: kill H~ and L, send b_k = d(l_k) back to l_k
                    hb_local = fp.matmul(prev_L[blk], Minv[:nb, :], p)
                    h_cols_rows[np.ix_(prev_idx[blk], idx_n)] = hb_local
                if n == d_max and l_cols.shape[1]:
                    l_proj[np.ix_(idx_n, idx_n)] = fp.matmul(
                        l_cols, Minv[nb + nh:, :], p)
            self.i_mat.append(np.stack(i_cols, axis=1) if i_cols
                              else np.zeros((complex.dim(n), 0), dtype=np.int64))
            self.p_mat.append(np.stack(p_rows, axis=0) if p_rows
                              else np.zeros((0, complex.dim(n)), dtype=np.int64))
            if n > 0:
                self.h_mat.append(h_cols_rows)
            if n == d_max:
                self._l_proj = l_proj
            self.h_blocks.append(labels)
            self.block_h_dims.append(bdims)
            prev_L = cur_L
            prev_idx = {blk: complex.block_indices(n, blk) for blk in blocks}
        self._verify()

    @staticmethod
    def _invert(m: np.ndarray, p: int) -> np.ndarray:
        n = m.shape[0]
        if m.shape[1] != n:
            raise TransferError("decomposition matrix is not square")
        red, piv, rk = fp.rref(np.concatenate([m, np.eye(n, dtype=np.int64)], axis=1), p)
        if rk != n or piv[:n] != list(range(n)):
            raise TransferError("decomposition matrix is singular")
        return red[:, n:]

    def _verify(self):
        """Exact matrix checks of every retract identity.

        In the top degree the term h^{top+1} d^{top} is verified through its
        closed form: it equals the projector onto the L summand, since
        h^{top+1} inverts d on d(L) and kills a complement.
        """
        c, p = self.complex, self.p_mod
        for n in range(c.d_max + 1):
            i_n, p_n = self.i_mat[n], self.p_mat[n]
            h_n = self.h_mat[n]
            ident = np.eye(c.dim(n), dtype=np.int64)
            lhs = fp.matmul(i_n, p_n, p)
            if n > 0:
                lhs = np.mod(lhs + fp.matmul(c.dmat[n - 1], h_n, p), p)
            if n < c.d_max:
                lhs = np.mod(lhs + fp.matmul(self.h_mat[n + 1], c.dmat[n], p), p)
            else:
                lhs = np.mod(lhs + self._l_proj, p)
            if not (lhs == ident).all():
                raise TransferError("homotopy identity fails in degree %d" % n)
            if not (fp.matmul(p_n, i_n, p) == np.eye(i_n.shape[1], dtype=np.int64)).all():
                raise TransferError("p o i != id in degree %d" % n)
            if fp.matmul(c.dmat[n], i_n, p).any():
                raise TransferError("d o i != 0 in degree %d" % n)
            if n > 0 and fp.matmul(self.p_mat[n - 1], h_n, p).any():
                raise TransferError("p o h != 0 in degree %d" % n)
            if n > 0 and fp.matmul(h_n, self.i_mat[n], p).any():
                raise TransferError("h o i != 0 in degree %d" % n)
            if n > 0 and fp.matmul(self.h_mat[n - 1], h_n, p).any():
                raise TransferError("h o h != 0 in degree %d" % n)
            if n > 0 and fp.matmul(p_n, c.dmat[n - 1], p).any():
                raise TransferError("p o d != 0 in degree %d" % n)

    # -- convenience ---------------------------------------------------------

    def h_dim(self, n: int) -> int:
        return self.i_mat[n].shape[1]

    def include(self, n: int, coords: np.ndarray) -> Cochain:
        return Cochain(n, fp.matmul(self.i_mat[n], coords, self.p_mod))

    def project(self, c: Cochain) -> np.ndarray:
        return fp.matmul(self.p_mat[c.degree], c.coords, self.p_mod)

    def homotopy(self, c: Cochain) -> Cochain:
        return Cochain(c.degree - 1, fp.matmul(self.h_mat[c.degree], c.coords, self.p_mod))


def cohomology(complex: CochainComplex, n: int, retract: Retract = None):
    """(h^n, per-block dims, chosen cocycle lifts) for n < D_max."""
    if n >= complex.d_max + 1:
        raise ValueError("cohomology available for n <= D_max only")
    if retract is None:
        retract = Retract(complex)
    lifts = [Cochain(n, retract.i_mat[n][:, k].copy()) for k in range(retract.h_dim(n))]
    return retract.h_dim(n), dict(retract.block_h_dims[n]), lifts


@dataclass
class AInfStructure:
    """Transferred minimal structure: m- and f-tables on basis tuples.

    Keys of m_table / f_table are tuples of (degree, basis index) pairs;
    m-values are coordinate vectors over the H basis in the output degree,
    f-values are cochain coordinate vectors.  m_1 is absent (minimality).
    """
    p: int
    r: int
    n_max: int
    h1_blocks: list
    h2_blocks: list
    h3_blocks: list = field(default_factory=list)
    m_table: dict = field(default_factory=dict)
    f_table: dict = field(default_factory=dict)

    @property
    def h1_dim(self):
        return len(self.h1_blocks)

    @property
    def h2_dim(self):
        return len(self.h2_blocks)

    def m_deg1(self, idx_tuple):
        """m_n value on an all-degree-1 basis tuple, as H^2 coordinates."""
        key = tuple((1, t) for t in idx_tuple)
        v = self.m_table.get(key)
        if v is None:
            return np.zeros(len(self.h2_blocks), dtype=np.int64)
        return v

    def f_deg1(self, idx_tuple):
        key = tuple((1, t) for t in idx_tuple)
        return self.f_table.get(key)


def _composable(blocks):
    for a, b in zip(blocks, blocks[1:]):
        if a[1] != b[0]:
            return False
    return True


def transfer_products(retract: Retract, complex: CochainComplex, n_max: int,
                      degree_profile: str = "deg1") -> AInfStructure:
    """Run the Merkulov recursion up to arity n_max.

    degree_profile "deg1" computes all block-composable tuples of degree-1
    basis vectors; "stasheff" additionally computes tuples with exactly one
    degree-2 slot (needed to evaluate the structure relations in H^3).
    """
    if n_max < 2:
        raise TransferError("max arity must be at least 2")
    p = complex.p
    tuple_cap = 1 << 18
    h1 = retract.h_blocks[1]
    h2 = retract.h_blocks[2]
    h3 = retract.h_blocks[3] if complex.d_max >= 3 else []
    ainf = AInfStructure(p=p, r=complex.r, n_max=n_max,
                         h1_blocks=list(h1), h2_blocks=list(h2), h3_blocks=list(h3))

    # keys: tuple of (degree, index); memo holds h(mt(key)) cochains
    g_memo = {}

    def entry_block(e):
        deg, t = e
        return h1[t] if deg == 1 else h2[t]

    def g_value(key):
        if key in g_memo:
            return g_memo[key]
        if len(key) == 1:
            deg, t = key[0]
            val = Cochain(deg, np.mod(-retract.i_mat[deg][:, t], p))
            g_memo[key] = val
            return val
        mt = mtilde(key)
        val = retract.homotopy(mt)
        g_memo[key] = val
        return val

    def mtilde(key):
        n = len(key)
        total = None
        for s in range(1, n):
            t = n - s
            left = g_value(key[:s])
            right = g_value(key[s:])
            d_left = sum(e[0] for e in key[:s])
            sign = (-1) ** ((s + 1 + (1 + t) * d_left) % 2)
            term = complex.cup(left, right)
            coords = np.mod(sign * term.coords, p)
            total = coords if total is None else np.mod(total + coords, p)
        return Cochain(sum(e[0] for e in key) + 2 - n, total)

    def tuples_of_arity(n):
        out = []
        def rec(prefix):
            if len(prefix) == n:
                out.append(tuple(prefix))
                return
            for t in range(len(h1)):
                e = (1, t)
                if prefix and entry_block(prefix[-1])[1] != h1[t][0]:
                    continue
                rec(prefix + [e])
        rec([])
        if degree_profile == "stasheff":
            base = list(out)
            for key in base:
                for pos in range(n):
                    for s2 in range(len(h2)):
                        e2 = (2, s2)
                        cand = key[:pos] + (e2,) + key[pos + 1:]
                        if _composable([entry_block(e) for e in cand]):
                            out.append(cand)
        return out

    for t in range(len(h1)):
        ainf.f_table[((1, t),)] = retract.i_mat[1][:, t].copy()
    for n in range(2, n_max + 1):
        keys = tuples_of_arity(n)
        if len(keys) > tuple_cap:
            raise TransferError(
                "arity %d needs %d basis tuples (cap %d)" % (n, len(keys), tuple_cap))
        for key in keys:
            mt = mtilde(key)
            out_deg = mt.degree
            if out_deg > complex.d_max:
                continue
            ainf.m_table[key] = retract.project(mt)
            if all(e[0] == 1 for e in key):
                fval = Cochain(out_deg - 1,
                               np.mod(-retract.homotopy(mt).coords, p))
                ainf.f_table[key] = fval.coords
    return ainf


def check_stasheff(ainf: AInfStructure, complex: CochainComplex, arity_range) -> dict:
    """Evaluate the signed structure-relation sum on degree-1 basis tuples.

    Returns {"violations": [...], "checked": count}; each violation records
    (arity, tuple, coordinates in H^3).
    """
    violations = []
    checked = 0
    h2_dim = len(ainf.h2_blocks)
    h3_dim = len(ainf.h3_blocks)
    p = ainf.p
    for n in arity_range:
        keys = [k for k in ainf.m_table
                if len(k) == n and all(e[0] == 1 for e in k)]
        for key in sorted(keys):
            total = np.zeros(h3_dim, dtype=np.int64)
            for r in range(0, n):
                for s in range(2, n - r + 1):
                    t = n - r - s
                    u = r + 1 + t
                    if u < 2:
                        continue
                    inner = ainf.m_table.get(key[r:r + s])
                    if inner is None or not inner.any():
                        continue
                    sign = (-1) ** (r + s * t + r * s)
                    for beta in range(h2_dim):
                        cb = int(inner[beta])
                        if cb == 0:
                            continue
                        outer_key = key[:r] + ((2, beta),) + key[r + s:]
                        outer = ainf.m_table.get(outer_key)
                        if outer is None:
                            if u <= ainf.n_max:
                                raise TransferError(
                                    "structure relations need the extended degree "
                                    "profile; rerun the transfer with it enabled")
                            continue
                        total = np.mod(total + sign * cb * outer, p)
            checked += 1
            if total.any():
                violations.append((n, key, total.tolist()))
    return {"violations": violations, "checked": checked}


@dataclass
class DefiningSystem:
    """tau_1..tau_{n-1} for a Massey power, or a full sigma(i,j) grid."""
    taus: list = None
    grid: dict = None

    @property
    def order(self):
        if self.taus is not None:
            return len(self.taus) + 1
        return max(j for (_, j) in self.grid) if self.grid else 0


def validate_power_system(complex: CochainComplex, a: Cochain, system: DefiningSystem):
    p = complex.p
    taus = system.taus
    if taus is None or not taus:
        raise TransferError("empty defining system")
    if not (np.mod(taus[0].coords - a.coords, p) == 0).all():
        raise TransferError("defining system invalid at index 1: tau_1 != a")
    for i in range(1, len(taus) + 1):
        tau = taus[i - 1]
        rhs = np.zeros(complex.dim(2), dtype=np.int64)
        for j in range(1, i):
            rhs = np.mod(rhs + complex.cup(taus[j - 1], taus[i - j - 1]).coords, p)
        lhs = complex.d_apply(tau).coords
        if not (lhs == rhs).all():
            raise TransferError("defining system invalid at index %d" % i)


def massey_power(complex: CochainComplex, retract: Retract,
                 a: Cochain, system: DefiningSystem):
    """c(system) and its class in H^2, for the order-(n) Massey power of a."""
    validate_power_system(complex, a, system)
    p = complex.p
    taus = system.taus
    n = len(taus) + 1
    c = np.zeros(complex.dim(2), dtype=np.int64)
    for j in range(1, n):
        c = np.mod(c + complex.cup(taus[j - 1], taus[n - j - 1]).coords, p)
    cc = Cochain(2, c)
    if complex.d_apply(cc).coords.any():
        raise TransferError("Massey power value is not a cocycle")
    return cc, retract.project(cc)


def _eps(m: int) -> int:
    return (-1) ** (m * (m - 1) // 2)


def massey_sign(n: int) -> int:
    return (-1) ** ((n + 1) * (n + 2) // 2)


def massey_from_ainf(ainf: AInfStructure, complex: CochainComplex, retract: Retract,
                     idx_tuple):
    """Assemble the f-induced defining system and compare with m_n.

    Requires the vanishing hypothesis: every proper contiguous sub-product
    m_i on the tuple (2 <= i <= n-1) is zero.  Returns (system, value, sign_checked)
    where value = massey_sign(n) * m_n(tuple) as H^2 coordinates, and
    sign_checked certifies the cochain-level comparison via an explicit
    coboundary witness.
    """
    n = len(idx_tuple)
    if n < 2:
        raise TransferError("need at least a pair")
    p = ainf.p
    for ln in range(2, n):
        for start in range(0, n - ln + 1):
            window = idx_tuple[start:start + ln]
            if ainf.m_deg1(window).any():
                raise TransferError(
                    "hypothesis fails: m_%d is nonzero on sub-tuple %s"
                    % (ln, list(window)))
    grid = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            if (i, j) == (1, n):
                continue
            m = j - i + 1
            window = idx_tuple[i - 1:j]
            fv = (retract.i_mat[1][:, window[0]] if m == 1
                  else ainf.f_deg1(window))
            if fv is None:
                raise TransferError("f-table missing arity %d" % m)
            grid[(i, j)] = Cochain(1, np.mod(_eps(m) * fv, p))
    c = np.zeros(complex.dim(2), dtype=np.int64)
    for k in range(1, n):
        c = np.mod(c + complex.cup(grid[(1, k)], grid[(k + 1, n)]).coords, p)
    c = Cochain(2, c)
    m_val = ainf.m_deg1(idx_tuple)
    sign = massey_sign(n)
    expected = np.mod(sign * fp.matmul(retract.i_mat[2], m_val, p), p)
    value = retract.project(c)
    witness_f = ainf.f_deg1(idx_tuple)
    sign_checked = (value == np.mod(sign * m_val, p)).all()
    if witness_f is not None:
        witness = Cochain(1, np.mod(_eps(n) * witness_f, p))
        sign_checked = sign_checked and (np.mod(c.coords - expected, p)
                                         == complex.d_apply(witness).coords).all()
    taus = None
    if all(t == idx_tuple[0] for t in idx_tuple):
        taus = [grid[(1, k)] for k in range(1, n)]
    system = DefiningSystem(taus=taus, grid=grid)
    return system, value, bool(sign_checked)
