"""Truncated presentations of deformation rings from transferred products.

Relation bodies pair the dual basis of H^2 with the signed product sum

    sum_{n=2}^{N} (-1)^{n(n+1)/2} phi(m_n(e_{t_1} (x) .. (x) e_{t_n})) x_{t_1}..x_{t_n}

so that A-points of the truncation biject with solutions of the signed
Maurer-Cartan equation.  Hilbert functions are computed on associated-graded
slices: the degree-n ideal slice is spanned by the leading parts of
valuation-n ideal elements, read off a row echelon form with degree-blocked
columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fp
from .cochain import CochainComplex
from .deform import hmc_sign
from .transfer import AInfStructure


class PresentError(RuntimeError):
    pass


@dataclass
class PresentationTruncation:
    p: int
    r: int
    generators: list            # (name, block (i,j))
    relations: list             # (label, block, {word tuple: coeff})
    truncation: int
    commutative: bool = False
    cyclic_completed: bool = False

    def gen_blocks(self):
        return [b for (_, b) in self.generators]


def _gen_name(t, block, r):
    if r == 1:
        return "x%d" % t
    return "x%d%d_%d" % (block[0] + 1, block[1] + 1, t)


def relations_from_ainf(ainf: AInfStructure, n_trunc: int) -> PresentationTruncation:
    """Free presentation over F^r truncated at word length n_trunc."""
    if ainf.n_max < n_trunc:
        raise PresentError("products computed to arity %d < truncation %d"
                           % (ainf.n_max, n_trunc))
    p = ainf.p
    gens = [(_gen_name(t, blk, ainf.r), blk) for t, blk in enumerate(ainf.h1_blocks)]
    relations = []
    for s, blk in enumerate(ainf.h2_blocks):
        body = {}
        for key, vec in ainf.m_table.items():
            if len(key) > n_trunc or not all(e[0] == 1 for e in key):
                continue
            c = int(vec[s]) * hmc_sign(len(key)) % p
            if c:
                word = tuple(e[1] for e in key)
                body[word] = (body.get(word, 0) + c) % p
        body = {w: c for w, c in body.items() if c}
        for word in body:
            first = ainf.h1_blocks[word[0]][0]
            last = ainf.h1_blocks[word[-1]][1]
            if (first, last) != blk:
                raise PresentError("relation word in wrong block")
        relations.append(("r%d" % s, blk, body))
    return PresentationTruncation(p=p, r=ainf.r, generators=gens,
                                  relations=relations, truncation=n_trunc)


def abelianize(pres: PresentationTruncation) -> PresentationTruncation:
    if pres.commutative:
        raise PresentError("presentation is already commutative")
    out = []
    for label, blk, body in pres.relations:
        merged = {}
        for word, c in body.items():
            mono = tuple(sorted(word))
            merged[mono] = (merged.get(mono, 0) + c) % pres.p
        merged = {m: c for m, c in merged.items() if c}
        out.append((label, blk, merged))
    return PresentationTruncation(p=pres.p, r=pres.r, generators=list(pres.generators),
                                  relations=out, truncation=pres.truncation,
                                  commutative=True)


def gma_coordinate_ring(ainf: AInfStructure, n_trunc: int,
                        multiplicity_free: bool) -> PresentationTruncation:
    """Commutative coordinate ring on all H^1 duals, cyclically completed."""
    if not multiplicity_free:
        raise PresentError("multiplicity-free hypothesis fails; "
                           "the coordinate ring is gated on it")
    pres = abelianize(relations_from_ainf(ainf, n_trunc))
    pres.cyclic_completed = True
    return pres


# --------------------------------------------------------------------------
# word bases and ideal slices
# --------------------------------------------------------------------------

def _words_by_degree(pres: PresentationTruncation, n_max: int):
    """Degree-indexed word/monomial bases respecting block composability."""
    blocks = pres.gen_blocks()
    g = len(blocks)
    if pres.commutative:
        out = [[()]]
        for n in range(1, n_max + 1):
            level = []
            def rec(start, left, cur):
                if left == 0:
                    level.append(tuple(cur))
                    return
                for t in range(start, g):
                    rec(t, left - 1, cur + [t])
            rec(0, n, [])
            out.append(level)
        return out
    out = [[()]]
    for n in range(1, n_max + 1):
        level = []
        def rec(cur):
            if len(cur) == n:
                level.append(tuple(cur))
                return
            for t in range(g):
                if cur and blocks[cur[-1]][1] != blocks[t][0]:
                    continue
                rec(cur + [t])
        rec([])
        out.append(level)
    return out


def _word_mul(u, v, commutative):
    w = u + v
    return tuple(sorted(w)) if commutative else w


class IdealSlices:
    """Echelonized span of { u . relation . v } inside the truncated algebra."""

    def __init__(self, pres: PresentationTruncation, n_max: int = None):
        self.pres = pres
        self.p = pres.p
        n_max = pres.truncation if n_max is None else n_max
        self.n_max = min(n_max, pres.truncation)
        self.words = _words_by_degree(pres, self.n_max)
        self.col = {}
        cols = 0
        for n, level in enumerate(self.words):
            for w in level:
                self.col[w] = cols
                cols += 1
        self.n_cols = cols
        self.deg_of_col = np.array([len(w) for level in self.words for w in level])
        rows = []
        blocks = pres.gen_blocks()
        for label, blk, body in pres.relations:
            if not body:
                continue
            min_deg = min(len(w) for w in body)
            for lu in range(0, self.n_max - min_deg + 1):
                for u in self.words[lu]:
                    if not pres.commutative and u and blocks[u[-1]][1] != blk[0]:
                        continue
                    if pres.commutative:
                        rows.append(self._row(body, u, ()))
                        continue
                    for lv in range(0, self.n_max - min_deg - lu + 1):
                        for v in self.words[lv]:
                            if v and blocks[v[0]][0] != blk[1]:
                                continue
                            rows.append(self._row(body, u, v))
        m = (np.stack(rows) if rows
             else np.zeros((0, self.n_cols), dtype=np.int64))
        self.red, self.pivots, self.rank_ = fp.rref(m, self.p)

    def _row(self, body, u, v):
        row = np.zeros(self.n_cols, dtype=np.int64)
        for word, c in body.items():
            w = _word_mul(_word_mul(u, word, self.pres.commutative), v,
                          self.pres.commutative)
            if len(w) <= self.n_max:
                row[self.col[w]] = (row[self.col[w]] + c) % self.p
        return row

    def slice_rank(self, n: int) -> int:
        """Leading-term count in degree n (associated-graded ideal slice)."""
        return sum(1 for c in self.pivots if self.deg_of_col[c] == n)

    def contains(self, vectors) -> bool:
        base = self.red[:self.rank_]
        return fp.column_span_contains(base, np.asarray(vectors), self.p)

    def vector_of(self, poly: dict) -> np.ndarray:
        row = np.zeros(self.n_cols, dtype=np.int64)
        for w, c in poly.items():
            if len(w) <= self.n_max:
                row[self.col[w]] = c % self.p
        return row


def hilbert_function(pres: PresentationTruncation, max_degree: int):
    """Associated-graded dimensions of the truncated quotient, degree 0..max_degree."""
    if max_degree > pres.truncation:
        raise PresentError("requested degree %d exceeds truncation %d"
                           % (max_degree, pres.truncation))
    slices = IdealSlices(pres, max_degree)
    out = []
    for n in range(max_degree + 1):
        out.append(len(slices.words[n]) - slices.slice_rank(n))
    return out


def count_points(pres: PresentationTruncation, ring) -> int:
    """Number of F^r-algebra maps from the truncation into a test ring.

    Generators range over m_A (each block coordinate gets an independent
    value in the commutative case); every relation body must evaluate to
    zero.  Exact because relation bodies stop at the truncation and m_A is
    nilpotent below it.
    """
    import itertools
    p = pres.p
    g = len(pres.generators)
    if ring.nilpotency - 1 > pres.truncation:
        raise PresentError("truncation too short for the ring's nilpotency")
    count = 0
    m_dim = ring.m_dim
    for assign in itertools.product(range(p), repeat=g * m_dim):
        vals = np.zeros((g, ring.dim), dtype=np.int64)
        vals[:, 1:] = np.asarray(assign, dtype=np.int64).reshape(g, m_dim)
        ok = True
        for _, _, body in pres.relations:
            acc = np.zeros(ring.dim, dtype=np.int64)
            for word, c in body.items():
                prod = vals[word[0]]
                for t in word[1:]:
                    prod = ring.mul_vec(prod, vals[t])
                acc = np.mod(acc + c * prod, p)
            if acc.any():
                ok = False
                break
        if ok:
            count += 1
    return count


# --------------------------------------------------------------------------
# universal representation coefficients
# --------------------------------------------------------------------------

@dataclass
class UniversalRepCoeffs:
    n_trunc: int
    coeffs: dict = field(default_factory=dict)   # word tuple -> (n_elems, d, d)

    def coeff(self, word, x):
        m = self.coeffs.get(word)
        return None if m is None else m[x]


def _suspension_sign(n: int) -> int:
    # sign on length-n coefficients making rho^u multiplicative against the
    # signed relation bodies; +1 for n = 1, 2, so f_1 = i survives untouched
    return (-1) ** ((n + (n + 1) * (n + 2) // 2) % 2)


def universal_rep_coeffs(ainf: AInfStructure, complex: CochainComplex,
                         n_trunc: int) -> UniversalRepCoeffs:
    """Matrix coefficients of x -> rho(x) + sum f_n(e-tuple)(x) . words.

    The length-0 coefficient is rho itself; length-1 coefficients are the
    chosen cocycle lifts (f_1 = i); higher lengths come from the f-table,
    carrying the suspension sign that matches the signed relation bodies.
    """
    if ainf.n_max < n_trunc:
        raise PresentError("f-table computed to arity %d < truncation %d"
                           % (ainf.n_max, n_trunc))
    out = UniversalRepCoeffs(n_trunc=n_trunc)
    out.coeffs[()] = complex.rep.matrices.copy()
    for key, fval in ainf.f_table.items():
        if len(key) > n_trunc:
            continue
        word = tuple(e[1] for e in key)
        val = np.mod(_suspension_sign(len(key)) * np.asarray(fval, dtype=np.int64),
                     complex.p)
        out.coeffs[word] = complex.to_matrices(val, 1)
    return out


def verify_universal_hom(coeffs: UniversalRepCoeffs, pres: PresentationTruncation,
                         complex: CochainComplex) -> dict:
    """Certify rho^u(x) rho^u(y) = rho^u(xy) modulo the relation ideal.

    The defect at a word is the difference of matrix coefficients; all
    defects across all pairs and matrix entries must lie in the truncated
    two-sided relation ideal.  This is the end-to-end sign certificate.
    """
    p = complex.p
    n = coeffs.n_trunc
    slices = IdealSlices(pres, n)
    blocks = pres.gen_blocks()
    elems = range(complex.n_elems)
    mul = (lambda x, y: int(complex.rep.source.table[x, y])) if complex.kind == "group" else None
    if mul is None:
        raise PresentError("universal check is defined for group complexes")
    words_all = [w for level in slices.words for w in level]
    failures = []
    defect_rows = []
    for x in elems:
        for y in elems:
            xy = mul(x, y)
            defect = {}
            for w1, m1 in coeffs.coeffs.items():
                for w2, m2 in coeffs.coeffs.items():
                    if len(w1) + len(w2) > n:
                        continue
                    if w1 and w2 and blocks[w1[-1]][1] != blocks[w2[0]][0]:
                        continue
                    w = w1 + w2
                    prod = fp.matmul(m1[x], m2[y], p)
                    defect[w] = np.mod(defect.get(w, 0) + prod, p)
            for w, m in coeffs.coeffs.items():
                defect[w] = np.mod(defect.get(w, 0) - m[xy], p)
            row = np.zeros((slices.n_cols, complex.d, complex.d), dtype=np.int64)
            for w, mat in defect.items():
                if isinstance(mat, np.ndarray) and mat.any():
                    row[slices.col[w]] = mat
            if row.any():
                for a in range(complex.d):
                    for b in range(complex.d):
                        vec = row[:, a, b]
                        if vec.any():
                            defect_rows.append((x, y, a, b, vec))
    if defect_rows:
        mat = np.stack([v for (_, _, _, _, v) in defect_rows])
        if not slices.contains(mat):
            for (x, y, a, b, vec) in defect_rows:
                if not slices.contains(vec[None, :]):
                    w = words_all[int(np.nonzero(vec)[0][0])]
                    failures.append({"pair": (x, y), "entry": (a, b), "word": list(w)})
                    break
    return {"passed": not failures, "failures": failures,
            "pairs_checked": complex.n_elems ** 2}
