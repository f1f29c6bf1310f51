"""Ingestion and validation of groups, algebras, and block-diagonal representations.

Input documents are JSON or TOML with the field layout fixed by
``schema/input_schema.json``:

    prime           modulus p (must be prime)
    group           {order, table, generators, words?}     (Cayley table, identity at index 0)
    algebra         {dim, constants, unit}                 (structure constants, dim^3 nested list)
    representation  {blocks, matrices}                     (block dims, integer matrices mod p)

For a group the representation matrices are listed per generator; for an
algebra, per basis element.  Everything is verified exhaustively at load
time: associativity on all triples, the homomorphism property on all pairs,
and block-diagonality of every image matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import fp


class InputError(ValueError):
    """Raised for any malformed or inconsistent input document."""


@dataclass(frozen=True)
class FiniteGroup:
    order: int
    table: np.ndarray          # order x order, identity at index 0
    generators: tuple
    words: tuple               # words[g] = tuple of generator positions composing to g

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.mul(x, g)
            k += 1
        return k


@dataclass(frozen=True)
class FiniteDimAlgebra:
    dim: int
    p: int
    constants: np.ndarray      # dim x dim x dim, e_a e_b = sum_c constants[a,b,c] e_c
    unit: np.ndarray           # coordinate vector of the two-sided identity


@dataclass(frozen=True)
class Representation:
    p: int
    source: object             # FiniteGroup or FiniteDimAlgebra
    block_dims: tuple
    matrices: np.ndarray       # per element (group) / per basis vector (algebra), d x d
    is_group: bool = True
    gen_matrices: np.ndarray = field(default=None, repr=False)

    @property
    def total_dim(self) -> int:
        return sum(self.block_dims)

    @property
    def r(self) -> int:
        return len(self.block_dims)

    def block_slices(self):
        out, off = [], 0
        for d in self.block_dims:
            out.append(slice(off, off + d))
            off += d
        return out


def _require(cond, msg):
    if not cond:
        raise InputError(msg)


def load_document(path: str) -> dict:
    text = open(path, "rb").read()
    if str(path).endswith(".toml"):
        try:
            import tomllib
        except ModuleNotFoundError:
            import tomli as tomllib
        return tomllib.loads(text.decode())
    return json.loads(text.decode())


def load_group(doc: dict) -> FiniteGroup:
    _require("order" in doc and "table" in doc and "generators" in doc,
             "group document needs fields order, table, generators")
    n = int(doc["order"])
    table = np.asarray(doc["table"], dtype=np.int64)
    _require(table.shape == (n, n), "Cayley table must be order x order")
    _require(((table >= 0) & (table < n)).all(), "Cayley table entries out of range")

    _require((table[0, :] == np.arange(n)).all() and (table[:, 0] == np.arange(n)).all(),
             "index 0 is not a two-sided identity")
    # associativity, naming the first bad triple
    left = table[table, :]            # left[a,b,c] = (ab)c
    right = table[:, table]           # right[a,b,c] = a(bc)
    bad = np.argwhere(left != right)
    if bad.size:
        a, b, c = (int(x) for x in bad[0])
        raise InputError("non-associative table at triple (%d, %d, %d)" % (a, b, c))
    for a in range(n):
        row = set(int(x) for x in table[a])
        _require(0 in row, "element %d has no right inverse" % a)

    gens = tuple(int(g) for g in doc["generators"])
    _require(all(0 <= g < n for g in gens), "generator index out of range")

    if "words" in doc and doc["words"] is not None:
        words = tuple(tuple(int(i) for i in w) for w in doc["words"])
        _require(len(words) == n, "words list must cover every element")
        for g, w in enumerate(words):
            x = 0
            for gi in w:
                _require(0 <= gi < len(gens), "word for element %d uses bad generator index" % g)
                x = int(table[x, gens[gi]])
            _require(x == g, "word for element %d evaluates to %d" % (g, x))
    else:
        words = _bfs_words(table, gens)
        _require(words is not None, "generators do not generate the group")
    return FiniteGroup(order=n, table=table, generators=gens, words=words)


def _bfs_words(table, gens):
    n = table.shape[0]
    words = {0: ()}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for gi, g in enumerate(gens):
                y = int(table[x, g])
                if y not in words:
                    words[y] = words[x] + (gi,)
                    nxt.append(y)
        frontier = nxt
    if len(words) != n:
        return None
    return tuple(words[g] for g in range(n))


def load_algebra(doc: dict, p: int) -> FiniteDimAlgebra:
    _require("dim" in doc and "constants" in doc and "unit" in doc,
             "algebra document needs fields dim, constants, unit")
    dim = int(doc["dim"])
    c = fp.fpmat(np.asarray(doc["constants"], dtype=np.int64), p)
    _require(c.shape == (dim, dim, dim), "structure constants must be dim^3")
    unit = fp.fpmat(np.asarray(doc["unit"], dtype=np.int64), p)
    _require(unit.shape == (dim,), "unit must be a coordinate vector of length dim")

    # (e_a e_b) e_c vs e_a (e_b e_c), naming the first bad triple
    lhs = np.mod(np.einsum("abx,xcy->abcy", c, c), p)
    rhs = np.mod(np.einsum("bcx,axy->abcy", c, c), p)
    bad = np.argwhere((lhs != rhs).any(axis=3))
    if bad.size:
        a, b, cc = (int(x) for x in bad[0])
        raise InputError("non-associative structure constants at triple (%d, %d, %d)" % (a, b, cc))
    left_unit = np.mod(np.einsum("a,abc->bc", unit, c), p)
    right_unit = np.mod(np.einsum("b,abc->ac", unit, c), p)
    ident = np.eye(dim, dtype=np.int64)
    _require((left_unit == ident).all() and (right_unit == ident).all(),
             "declared unit is not a two-sided identity")
    return FiniteDimAlgebra(dim=dim, p=p, constants=c, unit=unit)


def _check_block_diagonal(mats, block_dims):
    d = sum(block_dims)
    mask = np.zeros((d, d), dtype=bool)
    off = 0
    for bd in block_dims:
        mask[off:off + bd, off:off + bd] = True
        off += bd
    off_block = mats[:, ~mask]
    bad = np.argwhere(off_block)
    if bad.size:
        raise InputError("matrix %d is not block diagonal for blocks %s"
                         % (int(bad[0][0]), list(block_dims)))


def load_representation(source, block_dims, matrices, p: int) -> Representation:
    if not fp.is_prime(p):
        raise InputError("modulus %d is not prime; only prime fields are supported" % p)
    block_dims = tuple(int(b) for b in block_dims)
    d = sum(block_dims)
    mats = fp.fpmat(np.asarray(matrices, dtype=np.int64), p)
    _require(mats.ndim == 3 and mats.shape[1:] == (d, d),
             "representation matrices must be %dx%d" % (d, d))

    if isinstance(source, FiniteGroup):
        _require(mats.shape[0] == len(source.generators),
                 "expected one matrix per generator (%d), got %d"
                 % (len(source.generators), mats.shape[0]))
        full = np.zeros((source.order, d, d), dtype=np.int64)
        for g in range(source.order):
            m = np.eye(d, dtype=np.int64)
            for gi in source.words[g]:
                m = fp.matmul(m, mats[gi], p)
            full[g] = m
        prod = np.mod(np.einsum("aij,bjk->abik", full, full), p)
        expect = full[source.table]
        bad = np.argwhere((prod != expect).any(axis=(2, 3)))
        if bad.size:
            a, b = int(bad[0][0]), int(bad[0][1])
            raise InputError("homomorphism fails at pair (%d, %d)" % (a, b))
        _check_block_diagonal(full, block_dims)
        return Representation(p=p, source=source, block_dims=block_dims,
                              matrices=full, is_group=True, gen_matrices=mats)

    if isinstance(source, FiniteDimAlgebra):
        _require(mats.shape[0] == source.dim,
                 "expected one matrix per algebra basis element")
        prod = np.mod(np.einsum("aij,bjk->abik", mats, mats), p)
        expect = np.mod(np.einsum("abc,cik->abik", source.constants, mats), p)
        bad = np.argwhere((prod != expect).any(axis=(2, 3)))
        if bad.size:
            a, b = int(bad[0][0]), int(bad[0][1])
            raise InputError("homomorphism fails at basis pair (%d, %d)" % (a, b))
        unit_mat = np.mod(np.einsum("a,aik->ik", source.unit, mats), p)
        _require((unit_mat == np.eye(d, dtype=np.int64)).all(),
                 "algebra unit does not act as the identity")
        _check_block_diagonal(mats, block_dims)
        return Representation(p=p, source=source, block_dims=block_dims,
                              matrices=mats, is_group=False, gen_matrices=mats)

    raise InputError("source must be a FiniteGroup or FiniteDimAlgebra")


def load_problem(doc: dict):
    """Load a full input document: returns (rep, doc) with rep validated."""
    _require("prime" in doc, "document needs a prime field modulus")
    p = int(doc["prime"])
    if not fp.is_prime(p):
        raise InputError("modulus %d is not prime; only prime fields are supported" % p)
    _require("representation" in doc, "document needs a representation section")
    rsec = doc["representation"]
    _require("blocks" in rsec and "matrices" in rsec,
             "representation section needs blocks and matrices")
    if "group" in doc:
        src = load_group(doc["group"])
    elif "algebra" in doc:
        src = load_algebra(doc["algebra"], p)
    else:
        raise InputError("document needs a group or algebra section")
    rep = load_representation(src, rsec["blocks"], rsec["matrices"], p)
    return rep


def check_multiplicity_free(rep: Representation):
    """Intertwiner dimension table and the multiplicity-free verdict.

    Entry (i, j) is dim Hom(rho_i, rho_j) computed as the kernel of the
    linear system M rho_j(g) = rho_i(g) M over all elements (group case) or
    basis vectors (algebra case).  Verdict is True iff the table is the
    identity, which certifies pairwise non-isomorphic absolutely irreducible
    summands over F_p.
    """
    p = rep.p
    slices = rep.block_slices()
    r = rep.r
    table = np.zeros((r, r), dtype=np.int64)
    for i in range(r):
        for j in range(r):
            di = rep.block_dims[i]
            dj = rep.block_dims[j]
            rows = []
            for m in rep.matrices:
                mi = m[slices[i], slices[i]]
                mj = m[slices[j], slices[j]]
                # vec_row(M mj - mi M) = (I (x) mj^T - mi (x) I) vec_row(M)
                op = (np.kron(np.eye(di, dtype=np.int64), mj.T)
                      - np.kron(mi, np.eye(dj, dtype=np.int64)))
                rows.append(np.mod(op, p))
            sys = np.concatenate(rows, axis=0)
            table[i, j] = len(fp.kernel_basis(sys, p))
    verdict = bool((table == np.eye(r, dtype=np.int64)).all())
    return table, verdict
