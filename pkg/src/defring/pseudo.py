"""Cycle combinatorics, the cycle-invariant ring, and pseudodeformation data.

Conventions.  Quiver arrow t runs i -> j when the t-th basis vector of H^1
carries block (i, j); a path i -> .. -> j multiplies to a word in block
(i, j).  Everything downstream is graded by total degree in the H^1 duals
("ext-degree"), under which a cycle of length l is a degree-l monomial; the
cycle-count filtration is reported separately where the presentations are
naturally indexed by the number of cycle factors.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import fp
from .present import relations_from_ainf
from .transfer import AInfStructure


class PseudoError(RuntimeError):
    pass


@dataclass
class Quiver:
    r: int
    p: int
    h1: np.ndarray              # r x r arrow counts
    h2: np.ndarray              # r x r obstruction-space dims
    arrows: list = field(default_factory=list)   # arrow t -> (i, j, k)

    def __post_init__(self):
        if not self.arrows:
            for i in range(self.r):
                for j in range(self.r):
                    for k in range(int(self.h1[i, j])):
                        self.arrows.append((i, j, k))

    def arrow_name(self, t):
        i, j, k = self.arrows[t]
        return "x%d%d_%d" % (i + 1, j + 1, k)


def build_quiver(source, h2_table=None, p=None) -> Quiver:
    """Quiver from a transferred structure or from explicit h^1/h^2 tables."""
    if isinstance(source, AInfStructure):
        r = source.r
        h1 = np.zeros((r, r), dtype=np.int64)
        for (i, j) in source.h1_blocks:
            h1[i, j] += 1
        h2 = np.zeros((r, r), dtype=np.int64)
        for (i, j) in source.h2_blocks:
            h2[i, j] += 1
        return Quiver(r=r, p=source.p, h1=h1, h2=h2)
    h1 = np.asarray(source, dtype=np.int64)
    r = h1.shape[0]
    h2 = (np.asarray(h2_table, dtype=np.int64) if h2_table is not None
          else np.zeros((r, r), dtype=np.int64))
    return Quiver(r=r, p=p or 2, h1=h1, h2=h2)


def synthetic_ainf(h1_table, h2_table, m_entries=None, p: int = 2,
                   n_max: int = 8) -> AInfStructure:
    """Explicit-table structure: blocks laid out lexicographically, products
    given by coefficient entries {"tuple": [...], "h2": s, "coeff": c}."""
    h1 = np.asarray(h1_table, dtype=np.int64)
    h2 = np.asarray(h2_table, dtype=np.int64)
    r = h1.shape[0]
    h1_blocks = [(i, j) for i in range(r) for j in range(r)
                 for _ in range(int(h1[i, j]))]
    h2_blocks = [(i, j) for i in range(r) for j in range(r)
                 for _ in range(int(h2[i, j]))]
    ainf = AInfStructure(p=p, r=r, n_max=n_max,
                         h1_blocks=h1_blocks, h2_blocks=h2_blocks)
    for entry in (m_entries or []):
        key = tuple((1, int(t)) for t in entry["tuple"])
        blocks = [h1_blocks[t] for t in entry["tuple"]]
        for a, b in zip(blocks, blocks[1:]):
            if a[1] != b[0]:
                raise PseudoError("m entry on a non-composable tuple")
        vec = ainf.m_table.get(key)
        if vec is None:
            vec = np.zeros(len(h2_blocks), dtype=np.int64)
        s = int(entry["h2"])
        if h2_blocks[s] != (blocks[0][0], blocks[-1][1]):
            raise PseudoError("m entry lands in the wrong block")
        vec[s] = (vec[s] + int(entry["coeff"])) % p
        ainf.m_table[key] = vec
    return ainf


# --------------------------------------------------------------------------
# graph combinatorics
# --------------------------------------------------------------------------

def strongly_connected_components(q: Quiver):
    """Kosaraju partition of the vertex set, components sorted by least vertex."""
    adj = [[j for j in range(q.r) if q.h1[i, j] > 0] for i in range(q.r)]
    radj = [[j for j in range(q.r) if q.h1[j, i] > 0] for i in range(q.r)]
    seen, order = set(), []

    def dfs(v, graph, out):
        stack = [(v, iter(graph[v]))]
        seen.add(v)
        while stack:
            node, it = stack[-1]
            for w in it:
                if w not in seen:
                    seen.add(w)
                    stack.append((w, iter(graph[w])))
                    break
            else:
                stack.pop()
                out.append(node)

    for v in range(q.r):
        if v not in seen:
            dfs(v, adj, order)
    seen = set()
    comps = []
    for v in reversed(order):
        if v not in seen:
            comp = []
            dfs(v, radj, comp)
            comps.append(sorted(comp))
    return sorted(comps)


@dataclass
class CycleData:
    vertex_cycles: list         # canonical rotations (v_0..v_{l-1}), min vertex first
    vertex_scp: list            # all rotations of the above
    arrow_cycles: list          # tuples of arrow indices along a vertex cycle
    arrow_cycle_vertices: list  # matching vertex tuple per arrow cycle
    scc_paths: dict             # (i, j) -> vertex-simple paths i -> j (SCC(i,i) = [])

    def arrow_multiset(self, c: int) -> Counter:
        return Counter(self.arrow_cycles[c])

    def cycle_length(self, c: int) -> int:
        return len(self.arrow_cycles[c])


def enumerate_cycles(q: Quiver) -> CycleData:
    r = q.r
    vertex_cycles = []
    for v in range(r):
        # simple cycles whose least vertex is v, built over vertices > v
        stack = [(v,)]
        while stack:
            path = stack.pop()
            for w in range(v, r):
                if w == v:
                    vertex_cycles.append(path)
                    continue
                if w in path:
                    continue
                stack.append(path + (w,))
    vertex_cycles = sorted(set(vertex_cycles), key=lambda c: (len(c), c))
    scp = []
    for c in vertex_cycles:
        for s in range(len(c)):
            scp.append(c[s:] + c[:s])
    arrow_cycles, arrow_cycle_vertices = [], []
    for c in vertex_cycles:
        l = len(c)
        step_arrows = []
        ok = True
        for t in range(l):
            i, j = c[t], c[(t + 1) % l]
            opts = [a for a, (ai, aj, _) in enumerate(q.arrows) if (ai, aj) == (i, j)]
            if not opts:
                ok = False
                break
            step_arrows.append(opts)
        if not ok:
            continue
        for combo in itertools.product(*step_arrows):
            arrow_cycles.append(tuple(combo))
            arrow_cycle_vertices.append(c)
    scc_paths = {}
    for i in range(r):
        for j in range(r):
            if i == j:
                scc_paths[(i, j)] = []
                continue
            paths = []
            stack = [(i,)]
            while stack:
                path = stack.pop()
                for w in range(r):
                    if w == j:
                        paths.append(path + (w,))
                        continue
                    if w in path or w == i:
                        continue
                    stack.append(path + (w,))
            scc_paths[(i, j)] = sorted(paths, key=lambda pp: (len(pp), pp))
    return CycleData(vertex_cycles=vertex_cycles, vertex_scp=scp,
                     arrow_cycles=arrow_cycles,
                     arrow_cycle_vertices=arrow_cycle_vertices,
                     scc_paths=scc_paths)


def _canonical_cycle(arrows_seq, q: Quiver):
    """Min rotation of an arrow tuple (vertices are distinct, so unique)."""
    l = len(arrows_seq)
    rots = [tuple(arrows_seq[s:] + arrows_seq[:s]) for s in range(l)]
    starts = [q.arrows[rot[0]][0] for rot in rots]
    best = min(range(l), key=lambda s: (starts[s], rots[s]))
    return rots[best]


def decompose_closed_walk(arrow_walk, q: Quiver, cycle_index: dict):
    """Canonical decomposition of a closed arrow walk into simple cycles.

    Walk vertices are scanned with a stack; each time a vertex repeats the
    enclosed loop is popped off as one simple cycle.  Deterministic, and the
    multiset of popped cycles has the same arrow multiset as the walk.
    """
    if not arrow_walk:
        return Counter()
    out = Counter()
    stack_v = [q.arrows[arrow_walk[0]][0]]
    stack_a = []
    for a in arrow_walk:
        i, j, _ = q.arrows[a]
        if stack_v[-1] != i:
            raise PseudoError("walk is not connected")
        stack_a.append(a)
        if j in stack_v:
            pos = stack_v.index(j)
            seg = stack_a[pos:]
            key = _canonical_cycle(tuple(seg), q)
            if key not in cycle_index:
                raise PseudoError("walk segment is not an enumerated cycle")
            out[cycle_index[key]] += 1
            del stack_a[pos:]
            del stack_v[pos + 1:]
        else:
            stack_v.append(j)
    if stack_a:
        raise PseudoError("walk is not closed")
    return out


# --------------------------------------------------------------------------
# monoid congruence and the invariant ring
# --------------------------------------------------------------------------

def _cycle_monomials(cd: CycleData, max_ext: int):
    """Multisets of cycle indices grouped by ext-degree (sum of lengths)."""
    lengths = [cd.cycle_length(c) for c in range(len(cd.arrow_cycles))]
    by_deg = [[] for _ in range(max_ext + 1)]
    by_deg[0].append(())

    def rec(start, ext, cur):
        for c in range(start, len(lengths)):
            ne = ext + lengths[c]
            if ne > max_ext:
                continue
            mono = cur + (c,)
            by_deg[ne].append(mono)
            rec(c, ne, mono)
    rec(0, 0, ())
    for level in by_deg:
        level.sort()
    return by_deg


def _exponent_key(mono, cd: CycleData):
    total = Counter()
    for c in mono:
        total.update(cd.arrow_multiset(c))
    return tuple(sorted(total.items()))


def h2_monoid_generators(q: Quiver, cd: CycleData = None, bound: int = None):
    """Minimal generating pairs of the equal-arrow-multiset congruence.

    Returns {"pairs", "dim_h2", "by_degree", "bound", "partial"}; soundness
    is unconditional, completeness is certified only up to the ext-degree
    bound (default 2r + 4).
    """
    cd = cd or enumerate_cycles(q)
    bound = bound if bound is not None else 2 * q.r + 4
    monos = _cycle_monomials(cd, bound)
    p = q.p
    col = {}
    for level in monos:
        for m in level:
            col[m] = len(col)
    gens = []
    gen_rows = []
    by_degree = {}
    for deg in range(2, bound + 1):
        level = monos[deg]
        if not level:
            continue
        rows = []
        for (gu, gv, gdeg) in gens:
            rem = deg - gdeg
            for m in monos[rem] if rem >= 0 else []:
                row = np.zeros(len(col), dtype=np.int64)
                row[col[tuple(sorted(gu + m))]] += 1
                row[col[tuple(sorted(gv + m))]] -= 1
                rows.append(np.mod(row, p))
        span = (np.stack(rows) if rows else np.zeros((0, len(col)), dtype=np.int64))
        red, piv, rk = fp.rref(span, p)
        base = red[:rk]
        groups = {}
        for m in level:
            groups.setdefault(_exponent_key(m, cd), []).append(m)
        for key in sorted(groups):
            group = sorted(groups[key])
            if len(group) < 2:
                continue
            for mth in group[1:]:
                cand = np.zeros(len(col), dtype=np.int64)
                cand[col[group[0]]] += 1
                cand[col[mth]] -= 1
                cand = np.mod(cand, p)
                if not fp.column_span_contains(base, cand[None, :], p):
                    gens.append((group[0], mth, deg))
                    by_degree[deg] = by_degree.get(deg, 0) + 1
                    base = np.concatenate([base, cand[None, :]], axis=0)
                    red, piv, rk = fp.rref(base, p)
                    base = red[:rk]
    return {"pairs": [(u, v) for (u, v, _) in gens],
            "dim_h2": len(gens), "by_degree": by_degree,
            "bound": bound, "partial": True}


def r1d_presentation(q: Quiver, n_ext: int = 8, cd: CycleData = None):
    """Kernel slices of the cycle-monomial map into the big symmetric algebra.

    Returns generators (arrow cycles), per-degree dims of K, dim K/mK, and
    the invariant-ring Hilbert series by ext-degree.
    """
    cd = cd or enumerate_cycles(q)
    monos = _cycle_monomials(cd, n_ext)
    k_dims, hilbert = [], []
    k_rows_by_deg = {}
    for deg in range(n_ext + 1):
        level = monos[deg]
        groups = {}
        for m in level:
            groups.setdefault(_exponent_key(m, cd), []).append(m)
        k_dim = sum(len(g) - 1 for g in groups.values())
        k_dims.append(k_dim)
        hilbert.append(len(groups))
        rows = []
        col = {m: i for i, m in enumerate(level)}
        for g in groups.values():
            g = sorted(g)
            for m in g[1:]:
                row = np.zeros(len(level), dtype=np.int64)
                row[col[g[0]]] = 1
                row[col[m]] = q.p - 1
                rows.append(row)
        k_rows_by_deg[deg] = (level, rows)
    mingens = h2_monoid_generators(q, cd, bound=n_ext)
    return {
        "generators": [cd.arrow_cycles[c] for c in range(len(cd.arrow_cycles))],
        "k_dims": k_dims,
        "k_mingens_dim": mingens["dim_h2"],
        "mingen_pairs": mingens["pairs"],
        "hilbert_ext": hilbert,
        "bound": n_ext,
    }


def krull_dim_r1d(q: Quiver):
    comps = strongly_connected_components(q)
    per = []
    for comp in comps:
        s = sum(int(q.h1[i, j]) for i in comp for j in comp)
        per.append(1 - len(comp) + s)
    return {"components": comps, "per_component": per, "total": sum(per)}


# --------------------------------------------------------------------------
# the pseudodeformation presentation
# --------------------------------------------------------------------------

@dataclass
class PseudoPresentation:
    p: int
    quiver: Quiver
    cycles: CycleData
    gen_names: list
    n_ext: int
    k_pairs: list               # minimal congruence generators (u, v)
    relation_polys: list        # (label, {cycle-multiset: coeff})
    hilbert_ext: list
    hilbert_cycle: list
    tangent: dict


def _arrow_paths(q: Quiver, vertex_path):
    """All arrow realizations of a vertex path, as tuples of arrow indices."""
    opts = []
    for a, b in zip(vertex_path, vertex_path[1:]):
        arr = [t for t, (i, j, _) in enumerate(q.arrows) if (i, j) == (a, b)]
        if not arr:
            return []
        opts.append(arr)
    return [tuple(c) for c in itertools.product(*opts)]


def rd_presentation(ainf: AInfStructure, n_ext: int = 8) -> PseudoPresentation:
    """Truncation of the pseudodeformation ring.

    The cycle-invariant ring modulo (i) the full kernel slices of the
    monomial map and (ii) each relation body closed up by every simple
    complement path back to its source vertex (the empty path when the
    relation block is diagonal).
    """
    q = build_quiver(ainf)
    cd = enumerate_cycles(q)
    cycle_index = {cyc: c for c, cyc in enumerate(cd.arrow_cycles)}
    pres = relations_from_ainf(ainf, min(ainf.n_max, n_ext))
    relation_polys = []
    for label, (bi, bj), body in pres.relations:
        if bi == bj:
            complements = [()]
        else:
            complements = []
            for vp in cd.scc_paths[(bj, bi)]:
                complements.extend(_arrow_paths(q, vp))
        for ci, comp in enumerate(sorted(complements)):
            poly = {}
            for word, c in body.items():
                if len(word) + len(comp) > n_ext:
                    continue
                walk = tuple(word) + comp
                mono = tuple(sorted(decompose_closed_walk(walk, q, cycle_index).elements()))
                poly[mono] = (poly.get(mono, 0) + c) % ainf.p
            poly = {m: c for m, c in poly.items() if c}
            if poly:
                relation_polys.append(("%s|c%d" % (label, ci), poly))
    return _assemble_pseudo(ainf, q, cd, relation_polys, n_ext)


def _assemble_pseudo(ainf, q, cd, relation_polys, n_ext) -> PseudoPresentation:
    p = q.p
    monos = _cycle_monomials(cd, n_ext)
    col, degs = {}, []
    for deg, level in enumerate(monos):
        for m in level:
            col[m] = len(col)
            degs.append(deg)
    degs = np.array(degs)
    lengths = [cd.cycle_length(c) for c in range(len(cd.arrow_cycles))]
    rows = []
    # full kernel slices (complete per degree)
    for deg, level in enumerate(monos):
        groups = {}
        for m in level:
            groups.setdefault(_exponent_key(m, cd), []).append(m)
        for g in groups.values():
            g = sorted(g)
            for m in g[1:]:
                row = np.zeros(len(col), dtype=np.int64)
                row[col[g[0]]] = 1
                row[col[m]] = p - 1
                rows.append(row)
    # relation multiples
    for label, poly in relation_polys:
        min_deg = min(sum(lengths[c] for c in m) for m in poly)
        for deg in range(0, n_ext - min_deg + 1):
            for m in monos[deg]:
                row = np.zeros(len(col), dtype=np.int64)
                for mono, c in poly.items():
                    total = tuple(sorted(mono + m))
                    if sum(lengths[cc] for cc in total) <= n_ext:
                        row[col[total]] = (row[col[total]] + c) % p
                if row.any():
                    rows.append(row)
    mat = np.stack(rows) if rows else np.zeros((0, len(col)), dtype=np.int64)
    red, piv, rk = fp.rref(mat, p)
    hilbert_ext = []
    for deg in range(n_ext + 1):
        lead = sum(1 for c in piv if degs[c] == deg)
        hilbert_ext.append(len(monos[deg]) - lead)
    # cycle-count filtration of the quotient
    base = red[:rk]
    counts = np.array([len(m) for level in monos for m in level])
    max_count = int(counts.max()) if counts.size else 0
    hilbert_cycle = []
    prev = 0
    base_rank = rk
    for k in range(max_count + 1):
        sel = np.nonzero(counts <= k)[0]
        eye = np.zeros((len(sel), len(col)), dtype=np.int64)
        eye[np.arange(len(sel)), sel] = 1
        rank_k = fp.rank(np.concatenate([base, eye]), p) - base_rank
        hilbert_cycle.append(rank_k - prev)
        prev = rank_k
    mingens = h2_monoid_generators(q, cd, bound=n_ext)
    tangent = tangent_space(ainf, q=q, cd=cd)
    return PseudoPresentation(
        p=p, quiver=q, cycles=cd,
        gen_names=["c%d" % c for c in range(len(cd.arrow_cycles))],
        n_ext=n_ext, k_pairs=mingens["pairs"],
        relation_polys=relation_polys,
        hilbert_ext=hilbert_ext, hilbert_cycle=hilbert_cycle,
        tangent=tangent)


def rd_gma_crosscheck(ainf: AInfStructure, n_ext: int = 8):
    """Compare the presentation route with the torus-invariant slice.

    Independent route: inside the commutative ring on all H^1 duals modulo
    the abelianized relation ideal, the weight-zero monomials (balanced
    block content) span the invariant subquotient; its associated-graded
    dimensions must match hilbert_ext of the cycle-generated presentation
    degree by degree.  Never enumerates cycles.
    """
    from .present import abelianize, relations_from_ainf
    p = ainf.p
    r = ainf.r
    blocks = ainf.h1_blocks
    pres = abelianize(relations_from_ainf(ainf, min(ainf.n_max, n_ext)))
    g = len(blocks)

    def weight(mono):
        w = [0] * r
        for t in mono:
            i, j = blocks[t]
            w[i] += 1
            w[j] -= 1
        return tuple(w)

    monos = [[()]]
    for n in range(1, n_ext + 1):
        level = []
        def rec(start, left, cur):
            if left == 0:
                level.append(tuple(cur))
                return
            for t in range(start, g):
                rec(t, left - 1, cur + [t])
        rec(0, n, [])
        monos.append(sorted(level))
    col, degs, w0_cols = {}, [], []
    for deg, level in enumerate(monos):
        for m in level:
            col[m] = len(col)
            degs.append(deg)
            if weight(m) == (0,) * r:
                w0_cols.append(col[m])
    rows = []
    zero_w = (0,) * r
    for _, blk, body in pres.relations:
        if not body:
            continue
        min_deg = min(len(w) for w in body)
        some_word = min(body)
        w_rel = weight(some_word)
        for deg in range(0, n_ext - min_deg + 1):
            for m in monos[deg]:
                wm = weight(m)
                if tuple(a + b for a, b in zip(wm, w_rel)) != zero_w:
                    continue
                row = np.zeros(len(col), dtype=np.int64)
                for word, c in body.items():
                    total = tuple(sorted(word + m))
                    if len(total) <= n_ext:
                        row[col[total]] = (row[col[total]] + c) % p
                if row.any():
                    rows.append(row)
    sel = np.array(w0_cols, dtype=np.int64)
    sub_degs = np.array([degs[c] for c in w0_cols])
    mat = (np.stack(rows)[:, sel] if rows
           else np.zeros((0, len(sel)), dtype=np.int64))
    red, piv, rk = fp.rref(mat, p)
    invariant_dims = []
    for deg in range(n_ext + 1):
        lead = sum(1 for c in piv if sub_degs[c] == deg)
        total = int((sub_degs == deg).sum())
        invariant_dims.append(total - lead)
    pp = rd_presentation(ainf, n_ext)
    return {"invariant_dims": invariant_dims,
            "presentation_dims": pp.hilbert_ext,
            "agree": invariant_dims == pp.hilbert_ext}


def tangent_space(ainf: AInfStructure, q: Quiver = None, cd: CycleData = None):
    """Kernel of the arc maps on each simple cycle's arrow-choice space.

    For every contiguous arc of e >= 2 arrows on a cycle, the arc maps
    through m_e into the H^2 block it spans, tensored with the remaining
    arrows.  Returns total dimension, per-cycle data, and the complexity
    filtration graded by cycle length.
    """
    q = q or build_quiver(ainf)
    cd = cd or enumerate_cycles(q)
    p = ainf.p
    needed = max((len(c) for c in set(cd.arrow_cycle_vertices)), default=0)
    if ainf.n_max < needed:
        raise PseudoError("products to arity %d needed, have %d"
                          % (needed, ainf.n_max))
    per_cycle = []
    filtration = {}
    total = 0
    h2_blocks = ainf.h2_blocks
    for vc in cd.vertex_cycles:
        l = len(vc)
        step_arrows = []
        ok = True
        for t in range(l):
            i, j = vc[t], vc[(t + 1) % l]
            opts = [a for a, (ai, aj, _) in enumerate(q.arrows) if (ai, aj) == (i, j)]
            if not opts:
                ok = False
                break
            step_arrows.append(opts)
        if not ok:
            per_cycle.append((vc, 0))
            continue
        tuples = list(itertools.product(*step_arrows))
        dim_in = len(tuples)
        tup_col = {t: k for k, t in enumerate(tuples)}
        rows = []
        for s in range(l):
            for e in range(2, l + 1):
                tgt_block = (vc[s], vc[(s + e) % l])
                tgt_idx = [k for k, b in enumerate(h2_blocks) if b == tgt_block]
                if not tgt_idx:
                    continue
                comp_positions = [(s + e + t) % l for t in range(l - e)]
                comp_opts = [step_arrows[pos] for pos in comp_positions]
                comp_space = list(itertools.product(*comp_opts)) or [()]
                comp_col = {t: k for k, t in enumerate(comp_space)}
                block_rows = np.zeros((len(tgt_idx) * len(comp_space), dim_in),
                                      dtype=np.int64)
                for tup, cidx in tup_col.items():
                    chain = tuple(tup[(s + t) % l] for t in range(e))
                    vec = ainf.m_deg1(chain)
                    comp = tuple(tup[pos] for pos in comp_positions)
                    for kk, h2i in enumerate(tgt_idx):
                        v = int(vec[h2i])
                        if v:
                            row = kk * len(comp_space) + comp_col[comp]
                            block_rows[row, cidx] = (block_rows[row, cidx] + v) % p
                if block_rows.any():
                    rows.append(block_rows)
        if rows:
            mat = np.concatenate(rows, axis=0)
            kdim = len(fp.kernel_basis(mat, p))
        else:
            kdim = dim_in
        per_cycle.append((vc, kdim))
        filtration[l] = filtration.get(l, 0) + kdim
        total += kdim
    return {"total": total,
            "per_cycle": [(list(vc), k) for vc, k in per_cycle],
            "filtration": [filtration.get(k, 0) for k in range(1, q.r + 1)]}


def dimension_bounds(q: Quiver, cd: CycleData = None):
    """Literal bound formulas for tangent and Krull dimensions."""
    cd = cd or enumerate_cycles(q)
    upper_t = 0
    subtract = 0
    for vc in cd.vertex_cycles:
        l = len(vc)
        h1g = 1
        for t in range(l):
            h1g *= int(q.h1[vc[t], vc[(t + 1) % l]])
        upper_t += h1g
        for s in range(l):
            for e in range(2, l + 1):
                h2f = int(q.h2[vc[s], vc[(s + e) % l]])
                if h2f == 0:
                    continue
                comp = 1
                for t in range(e, l):
                    comp *= int(q.h1[vc[(s + t) % l], vc[(s + t + 1) % l]])
                subtract += h2f * comp
    krull = krull_dim_r1d(q)
    return {
        "tangent_upper": upper_t,
        "tangent_lower": upper_t - subtract,
        "krull_upper": krull["total"],
        "krull_lower": krull["total"] - subtract,
    }


# --------------------------------------------------------------------------
# obstruction evaluation over F[e]/(e^{n+1})
# --------------------------------------------------------------------------

def _poly_mul(a, b, p):
    n = len(a)
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        if a[i] == 0:
            continue
        top = n - i
        out[i:] = (out[i:] + a[i] * b[:top]) % p
    return out


def _eval_monomial(mono, values, n_coeff, p):
    acc = np.zeros(n_coeff, dtype=np.int64)
    acc[0] = 1
    for c in mono:
        acc = _poly_mul(acc, values[c], p)
    return acc


def evaluate_obstructions(ppres: PseudoPresentation, hom: dict, order: int):
    """Obstruction pair (alpha, beta) for extending an order-n point.

    hom maps cycle-generator names to coefficient lists [c_1..c_order] of a
    value in e F[e]/(e^{order+1}).  alpha evaluates the congruence
    generators at e^{order+1} on zero-extended lifts, beta the relation
    families; extendability is verified independently by direct search over
    degree-(order+1) corrections.
    """
    p = ppres.p
    names = ppres.gen_names
    n_coeff = order + 2          # coefficients of e^0..e^{order+1}
    values = []
    for name in names:
        coeffs = hom.get(name)
        if coeffs is None or len(coeffs) != order:
            raise PseudoError("hom must give %d coefficients for %s" % (order, name))
        v = np.zeros(n_coeff, dtype=np.int64)
        v[1:order + 1] = np.mod(np.asarray(coeffs, dtype=np.int64), p)
        values.append(v)

    def eval_poly(poly, vals):
        acc = np.zeros(n_coeff, dtype=np.int64)
        for mono, c in poly.items():
            acc = np.mod(acc + c * _eval_monomial(mono, vals, n_coeff, p), p)
        return acc

    k_polys = []
    for (u, v) in ppres.k_pairs:
        k_polys.append({u: 1, v: p - 1} if u != v else {})
    for poly in k_polys + [poly for _, poly in ppres.relation_polys]:
        ev = eval_poly(poly, values)
        if ev[1:order + 1].any():
            raise PseudoError("hom does not kill the relation ideal to order %d" % order)

    alpha = [int(eval_poly(kp, values)[order + 1]) for kp in k_polys]
    alpha_zero = not any(alpha)
    beta = None
    if alpha_zero:
        beta = [int(eval_poly(poly, values)[order + 1])
                for _, poly in ppres.relation_polys]
    # independent check: search all degree-(order+1) corrections
    g = len(names)
    found = False
    for assign in itertools.product(range(p), repeat=g):
        vals2 = [v.copy() for v in values]
        for t in range(g):
            vals2[t][order + 1] = assign[t]
        ok = True
        for poly in k_polys + [poly for _, poly in ppres.relation_polys]:
            if eval_poly(poly, vals2)[1:order + 2].any():
                ok = False
                break
        if ok:
            found = True
            break
    return {"alpha": alpha, "alpha_zero": alpha_zero,
            "beta": beta, "beta_zero": (beta is not None and not any(beta)),
            "extension_exists": found}
