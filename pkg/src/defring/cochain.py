"""Truncated cochain dg-algebras: group cochains and Hochschild cochains.

Degree-n cochains are functions on n-tuples (of group elements, or of
algebra basis vectors) valued in End(V).  The differential is the
Hochschild formula

    (df)(x_1..x_{n+1}) = x_1 f(x_2..x_{n+1})
                         + (-1)^{n+1} f(x_1..x_n) x_{n+1}
                         + sum_j (-1)^j f(.., x_j x_{j+1}, ..)

with x acting through the representation on both sides; on group tuples
this is the inhomogeneous cochain differential with the bimodule action
written out.  Multiplication is the cup product followed by composition in
End(V), making each complex a dg-algebra whose cohomology carries the block
structure indexed by pairs of simple summands.

Basis order in degree n: lexicographic in the tuple, then block (i,j) in
lexicographic order, then row-major matrix coordinate within the block.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import fp
from .inputs import FiniteDimAlgebra, FiniteGroup, InputError, Representation

DEFAULT_CAP_BYTES = 1 << 29


class CapacityError(RuntimeError):
    """Raised when a build would exceed the configured memory cap."""


def _cap_bytes() -> int:
    return int(os.environ.get("DEFRING_CAP_BYTES", DEFAULT_CAP_BYTES))


@dataclass
class Cochain:
    degree: int
    coords: np.ndarray


class CochainComplex:
    """C^0..C^D_max with differentials (d^D_max kept for kernel computations)."""

    def __init__(self, rep: Representation, d_max: int, source_kind: str):
        self.rep = rep
        self.p = rep.p
        self.d_max = d_max
        self.kind = source_kind           # "group" | "algebra"
        d = rep.total_dim
        self.d = d
        self.r = rep.r
        if source_kind == "group":
            self.n_elems = rep.source.order
        else:
            self.n_elems = rep.source.dim

        # canonical basis order: block (i,j) lexicographic, then row-major in block
        slices = rep.block_slices()
        order = []
        blocks = []
        for i in range(self.r):
            for j in range(self.r):
                for a in range(slices[i].start, slices[i].stop):
                    for b in range(slices[j].start, slices[j].stop):
                        order.append(a * d + b)
                        blocks.append((i, j))
        self.coord_order = np.array(order, dtype=np.int64)      # coord_pos -> a*d+b
        self.coord_inv = np.argsort(self.coord_order)           # a*d+b -> coord_pos
        self.coord_blocks = blocks                              # coord_pos -> (i,j)

        self.dims = [self.n_elems ** n * d * d for n in range(d_max + 2)]
        est = sum(self.dims[n] * self.dims[n + 1] for n in range(d_max + 1)) * 8
        if est > _cap_bytes():
            raise CapacityError(
                "complex of estimated %d bytes exceeds DEFRING_CAP_BYTES" % est)

        self.dmat = [self._build_differential(n) for n in range(d_max + 1)]
        for n in range(d_max):
            comp = fp.matmul(self.dmat[n + 1], self.dmat[n], self.p)
            if comp.any():
                raise AssertionError("d o d != 0 at degree %d" % n)

    # ---- basis bookkeeping -------------------------------------------------

    def dim(self, n: int) -> int:
        return self.dims[n]

    def n_tuples(self, n: int) -> int:
        return self.n_elems ** n

    def tuple_rank(self, tup) -> int:
        r = 0
        for x in tup:
            r = r * self.n_elems + int(x)
        return r

    def unrank_tuple(self, rank: int, n: int):
        out = []
        for _ in range(n):
            out.append(rank % self.n_elems)
            rank //= self.n_elems
        return tuple(reversed(out))

    def flat_index(self, tup, a: int, b: int) -> int:
        return self.tuple_rank(tup) * self.d * self.d + int(self.coord_inv[a * self.d + b])

    def block_of_index(self, flat: int):
        return self.coord_blocks[flat % (self.d * self.d)]

    def basis_blocks(self, n: int):
        """Block label of every degree-n basis vector, tuple-major."""
        return self.coord_blocks * self.n_tuples(n)

    def block_indices(self, n: int, block) -> np.ndarray:
        """Flat indices of the degree-n basis vectors carrying `block`."""
        d2 = self.d * self.d
        local = np.array([k for k, blk in enumerate(self.coord_blocks) if blk == block],
                         dtype=np.int64)
        base = np.arange(self.n_tuples(n), dtype=np.int64) * d2
        return (base[:, None] + local[None, :]).reshape(-1)

    # ---- matrix views ------------------------------------------------------

    def to_matrices(self, coords: np.ndarray, n: int) -> np.ndarray:
        """Flat coordinates -> array (n_tuples, d, d)."""
        t = self.n_tuples(n)
        out = np.zeros((t, self.d * self.d), dtype=np.int64)
        out[:, self.coord_order] = coords.reshape(t, self.d * self.d)
        return out.reshape(t, self.d, self.d)

    def from_matrices(self, mats: np.ndarray) -> np.ndarray:
        t = mats.shape[0]
        flat = mats.reshape(t, self.d * self.d)[:, self.coord_order]
        return flat.reshape(-1)

    # ---- differential ------------------------------------------------------

    def _products(self, x: int, y: int):
        """(indices, coeffs) of the product x*y in the element basis."""
        if self.kind == "group":
            return [int(self.rep.source.table[x, y])], [1]
        row = self.rep.source.constants[x, y]
        nz = np.nonzero(row)[0]
        return [int(c) for c in nz], [int(row[c]) for c in nz]

    def _build_differential(self, n: int) -> np.ndarray:
        p = self.p
        d = self.d
        d2 = d * d
        rho = self.rep.matrices
        dn = np.zeros((self.dims[n + 1], self.dims[n]), dtype=np.int64)
        n_out = self.n_tuples(n + 1)
        for out_rank in range(n_out):
            U = self.unrank_tuple(out_rank, n + 1)
            row0 = out_rank * d2
            # term 1: rho(x_1) f(x_2..)
            col0 = self.tuple_rank(U[1:]) * d2
            dn[row0:row0 + d2, col0:col0 + d2] += self._reperm(
                np.kron(rho[U[0]], np.eye(d, dtype=np.int64)))
            # term 2: (-1)^{n+1} f(x_1..x_n) rho(x_{n+1})
            sgn = 1 if (n + 1) % 2 == 0 else p - 1
            col0 = self.tuple_rank(U[:n]) * d2
            dn[row0:row0 + d2, col0:col0 + d2] += sgn * self._reperm(
                np.kron(np.eye(d, dtype=np.int64), rho[U[n]].T))
            # term 3: sum_j (-1)^j f(.., x_j x_{j+1}, ..)
            for j in range(1, n + 1):
                sgn_j = 1 if j % 2 == 0 else p - 1
                prods, coeffs = self._products(U[j - 1], U[j])
                merged_base = U[:j - 1]
                merged_tail = U[j + 1:]
                for c_elt, c_val in zip(prods, coeffs):
                    col0 = self.tuple_rank(merged_base + (c_elt,) + merged_tail) * d2
                    dn[row0:row0 + d2, col0:col0 + d2] += (
                        sgn_j * c_val * np.eye(d2, dtype=np.int64))
        return np.mod(dn, p)

    def _reperm(self, op_rowmajor: np.ndarray) -> np.ndarray:
        """Conjugate an operator on row-major vec(M) into the canonical coord order."""
        return op_rowmajor[np.ix_(self.coord_order, self.coord_order)]

    # ---- dg-algebra operations ----------------------------------------------

    def d_apply(self, c: Cochain) -> Cochain:
        if c.degree > self.d_max:
            raise ValueError("degree exceeds D_max")
        return Cochain(c.degree + 1, fp.matmul(self.dmat[c.degree], c.coords, self.p))

    def cup(self, u: Cochain, v: Cochain) -> Cochain:
        m, n = u.degree, v.degree
        if m + n > self.d_max:
            raise ValueError("cup degree %d exceeds D_max=%d" % (m + n, self.d_max))
        um = self.to_matrices(u.coords, m)
        vm = self.to_matrices(v.coords, n)
        prod = np.mod(np.einsum("aij,bjk->abik", um, vm), self.p)
        return Cochain(m + n, self.from_matrices(prod.reshape(-1, self.d, self.d)))

    def unit_cochain(self) -> Cochain:
        mats = np.eye(self.d, dtype=np.int64)[None, :, :]
        return Cochain(0, self.from_matrices(mats))

    def zero(self, n: int) -> Cochain:
        return Cochain(n, np.zeros(self.dims[n], dtype=np.int64))

    def cohomology_dim(self, n: int) -> int:
        if n >= self.d_max + 1:
            raise ValueError("cohomology available for n <= D_max")
        z = self.dims[n] - fp.rank(self.dmat[n], self.p)
        b = fp.rank(self.dmat[n - 1], self.p) if n > 0 else 0
        return z - b


def build_group_complex(rep: Representation, d_max: int = 3) -> CochainComplex:
    if not rep.is_group:
        raise InputError("representation is not a group representation")
    if d_max < 2:
        raise InputError("D_max must be at least 2")
    return CochainComplex(rep, d_max, "group")


def build_hochschild_complex(rep: Representation, d_max: int = 3) -> CochainComplex:
    if rep.is_group:
        raise InputError("representation is not an algebra representation")
    if d_max < 2:
        raise InputError("D_max must be at least 2")
    return CochainComplex(rep, d_max, "algebra")


def group_algebra(group: FiniteGroup, p: int) -> FiniteDimAlgebra:
    """F_p[G] as explicit structure constants (basis = group elements)."""
    n = group.order
    c = np.zeros((n, n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            c[a, b, int(group.table[a, b])] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[0] = 1
    return FiniteDimAlgebra(dim=n, p=p, constants=c, unit=unit)


def compare_hochschild_group(group: FiniteGroup, rep: Representation, d_max: int = 2) -> dict:
    """Check that group cochains and Hochschild cochains of F[G] agree.

    Tiny instances only.  The identification is the identity on coordinates
    (tuples of group elements = tuples of F[G] basis vectors); the report
    records whether differentials coincide and cohomology dims agree.
    """
    if group.order > 4 or d_max > 2:
        raise CapacityError("comparison restricted to |G| <= 4, D_max <= 2")
    from .inputs import load_representation

    cg = build_group_complex(rep, d_max)
    alg = group_algebra(group, rep.p)
    rep_a = load_representation(alg, rep.block_dims, rep.matrices, rep.p)
    ch = build_hochschild_complex(rep_a, d_max)
    diffs_equal = all(
        (cg.dmat[n] == ch.dmat[n]).all() for n in range(d_max + 1))
    dims_group = [cg.cohomology_dim(n) for n in range(d_max + 1)]
    dims_hoch = [ch.cohomology_dim(n) for n in range(d_max + 1)]
    return {
        "differentials_equal": bool(diffs_equal),
        "cohomology_group": dims_group,
        "cohomology_hochschild": dims_hoch,
        "dims_agree": dims_group == dims_hoch,
    }
