"""Ribbon graphs, their orientations and the graph complex.

A ribbon graph is a map ``vertex name -> cyclic tuple of half-edge names``
plus the edge involution ``iota``.  An oriented graph carries an explicit
word of symbols and a sign: untwisted words list every vertex ``("v", name)``
and half-edge ``("h", name)``; twisted words list every edge ``("e", pair)``
(an element of det E).  Contraction, expansion and the tree-replacement
construction act on words; canonical forms reduce a word to a sign against
the standard word of the canonical labelling.

Canonical keys are ``(valencies, iota)``: the breadth-first labelling gives
vertex i the consecutive half-edges of its cycle, so valencies and the
involution determine the graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import count, product

from . import trees
from .chains import Chain
from .errors import (
    ArityMismatch,
    DiagonalArityTooSmall,
    InvalidGraph,
    IsLoop,
)
from .trees import perm_sign

_fresh = count()


def fresh(tag):
    return (tag, next(_fresh))


def edge_symbol(a, b):
    return ("e", frozenset((a, b)))


class RibbonGraph:
    """Vertex cycles and a fixed-point-free involution on half-edges."""

    def __init__(self, cycles, iota, check=True):
        self.cycles = {v: tuple(c) for v, c in (cycles.items() if isinstance(cycles, dict) else cycles)}
        self.iota = dict(iota)
        self.vertex_of = {h: v for v, c in self.cycles.items() for h in c}
        if check:
            self.validate()

    # -- structure -------------------------------------------------------
    def validate(self, min_valency=3):
        halves = [h for c in self.cycles.values() for h in c]
        if len(set(halves)) != len(halves):
            raise InvalidGraph("a half-edge occurs twice in the vertex cycles")
        if set(self.iota) != set(halves):
            raise InvalidGraph("iota must be defined exactly on the half-edges")
        for h, g in self.iota.items():
            if g == h or self.iota.get(g) != h:
                raise InvalidGraph(f"iota is not a fixed-point-free involution at {h!r}")
        for v, c in self.cycles.items():
            if len(c) < min_valency:
                raise InvalidGraph(f"vertex {v!r} has valency {len(c)} < {min_valency}")
        if self.cycles and len(self._component(next(iter(self.cycles)))) != len(self.cycles):
            raise InvalidGraph("graph is not connected")

    def _component(self, v0):
        seen, todo = {v0}, [v0]
        while todo:
            v = todo.pop()
            for h in self.cycles[v]:
                w = self.vertex_of[self.iota[h]]
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return seen

    @property
    def vertices(self):
        return list(self.cycles)

    def halves(self):
        return [h for c in self.cycles.values() for h in c]

    def edges(self):
        """Edges as (first, second) half-edge pairs in order of first appearance."""
        out, seen = [], set()
        for h in self.halves():
            if h not in seen:
                seen.update((h, self.iota[h]))
                out.append((h, self.iota[h]))
        return out

    def valency(self, v):
        return len(self.cycles[v])

    @property
    def degree(self) -> int:
        return sum(len(c) - 3 for c in self.cycles.values())

    def is_loop(self, h) -> bool:
        return self.vertex_of[h] == self.vertex_of[self.iota[h]]

    def next_half(self, h):
        c = self.cycles[self.vertex_of[h]]
        return c[(c.index(h) + 1) % len(c)]

    def boundary_cycles(self):
        """Orbits of h -> next(iota(h)), the boundary components of the surface."""
        seen, out = set(), []
        for h in self.halves():
            if h in seen:
                continue
            orb, x = [], h
            while x not in seen:
                seen.add(x)
                orb.append(x)
                x = self.next_half(self.iota[x])
            out.append(orb)
        return out

    def genus_boundaries(self):
        V, E = len(self.cycles), len(self.iota) // 2
        n = len(self.boundary_cycles())
        g2 = 2 - n - V + E
        return g2 // 2, n

    def first_betti(self) -> int:
        return len(self.iota) // 2 - len(self.cycles) + 1

    def standard_word(self, twisted=False):
        if twisted:
            return tuple(edge_symbol(a, b) for a, b in self.edges())
        return tuple(("v", v) for v in self.cycles) + tuple(("h", h) for h in self.halves())

    def __repr__(self):
        return f"RibbonGraph({self.cycles!r})"


@dataclass(frozen=True)
class Oriented:
    graph: RibbonGraph
    sign: int
    word: tuple
    twisted: bool = False

    def scaled(self, s):
        return Oriented(self.graph, self.sign * s, self.word, self.twisted)

    @property
    def degree(self):
        return self.graph.degree


def oriented(graph, sign=1, twisted=False):
    return Oriented(graph, sign, graph.standard_word(twisted), twisted)


# -- canonical forms ---------------------------------------------------------

def _bfs_labelling(g: RibbonGraph, start):
    vmap, hmap, vals = {}, {}, []
    queue = deque([start])
    while queue:
        h = queue.popleft()
        if h in hmap:
            continue
        v = g.vertex_of[h]
        c = g.cycles[v]
        k = c.index(h)
        ring = c[k:] + c[:k]
        vmap[v] = len(vals)
        vals.append(len(ring))
        for x in ring:
            hmap[x] = len(hmap)
        for x in ring:
            queue.append(g.iota[x])
    iota = [0] * len(hmap)
    for h, i in hmap.items():
        iota[i] = hmap[g.iota[h]]
    return (tuple(vals), tuple(iota)), vmap, hmap


def graph_from_key(key) -> RibbonGraph:
    vals, iota = key
    cycles, pos = {}, 0
    for i, n in enumerate(vals):
        cycles[i] = tuple(range(pos, pos + n))
        pos += n
    return RibbonGraph(cycles, {h: j for h, j in enumerate(iota)}, check=False)


def _canonical_word_in_old_names(key, vmap, hmap, twisted):
    vinv = {i: v for v, i in vmap.items()}
    hinv = {i: h for h, i in hmap.items()}
    canon = graph_from_key(key)
    out = []
    for sym in canon.standard_word(twisted):
        if sym[0] == "v":
            out.append(("v", vinv[sym[1]]))
        elif sym[0] == "h":
            out.append(("h", hinv[sym[1]]))
        else:
            out.append(("e", frozenset(hinv[x] for x in sym[1])))
    return out


def canonicalize(og: Oriented):
    """Return ``(key, sign, is_zero)`` with og = sign · (canonical graph, standard word).

    ``is_zero`` is true when an automorphism reverses the orientation.
    """
    g = og.graph
    best, labellings = None, []
    for h in g.halves():
        key, vmap, hmap = _bfs_labelling(g, h)
        if best is None or key < best:
            best, labellings = key, [(vmap, hmap)]
        elif key == best:
            labellings.append((vmap, hmap))
    signs = set()
    for vmap, hmap in labellings:
        ref = _canonical_word_in_old_names(best, vmap, hmap, og.twisted)
        signs.add(og.sign * perm_sign(og.word, ref))
    if len(signs) > 1 or 0 in signs:
        return best, 0, True
    return best, signs.pop(), False


def automorphism_count(g: RibbonGraph) -> int:
    keys = [_bfs_labelling(g, h)[0] for h in g.halves()]
    return keys.count(min(keys))


def to_chain(og: Oriented, coeff=1) -> Chain:
    key, s, zero = canonicalize(og)
    return Chain() if zero else Chain({key: coeff * s})


def key_degree(key) -> int:
    return sum(n - 3 for n in key[0])


# -- contraction and expansion -----------------------------------------------

def contract_edge(og: Oriented, half, new_name=None) -> Oriented:
    """Contract the edge containing ``half`` (which lies at v⁻); returns (G/e, σ/e)."""
    g = og.graph
    if g.is_loop(half):
        raise IsLoop(f"edge at half-edge {half!r} is a loop")
    em, ep = half, g.iota[half]
    vm, vp = g.vertex_of[em], g.vertex_of[ep]
    cm, cp = g.cycles[vm], g.cycles[vp]
    k = cm.index(em)
    before = cm[k + 1:] + cm[:k]            # e_1..e_k, then e⁻ closes the cycle
    j = cp.index(ep)
    after = cp[j + 1:] + cp[:j]             # e⁺ opens the cycle, then f_1..f_n
    v = vm if new_name is None else new_name
    cycles = {}
    for w, c in g.cycles.items():
        if w == vm:
            cycles[v] = before + after
        elif w != vp:
            cycles[w] = c
    iota = {h: x for h, x in g.iota.items() if h not in (em, ep)}
    new = RibbonGraph(cycles, iota, check=False)
    if og.twisted:
        e = edge_symbol(em, ep)
        rest = [s for s in og.word if s != e]
        eps = og.sign * perm_sign(og.word, [e] + rest)
        return Oriented(new, eps, tuple(rest), True)
    head = [("v", vm), ("v", vp), ("h", em), ("h", ep)]
    rest = [s for s in og.word if s not in head]
    eps = og.sign * perm_sign(og.word, head + rest)
    return Oriented(new, eps, (("v", v),) + tuple(rest), False)


def vertex_splits(m):
    """Unordered splits of a cyclic order of length m into two arcs of size ≥ 2.

    Returned as (start, size) of the arc avoiding position 0.
    """
    return [(s, size) for size in range(2, m - 1) for s in range(1, m - size + 1)]


def expand_vertex(og: Oriented, v, start, size):
    """Expansion at ``v`` moving the arc (start, size) onto a new vertex v⁻."""
    g = og.graph
    c = g.cycles[v]
    arc = c[start:start + size]
    rest = c[start + size:] + c[:start]
    vm, vp = fresh("v"), fresh("v")
    em, ep = fresh("h"), fresh("h")
    cycles = {}
    for w, cyc in g.cycles.items():
        if w == v:
            cycles[vm] = arc + (em,)
            cycles[vp] = (ep,) + rest
        else:
            cycles[w] = cyc
    iota = dict(g.iota)
    iota[em], iota[ep] = ep, em
    new = RibbonGraph(cycles, iota, check=False)
    if og.twisted:
        return Oriented(new, og.sign, (edge_symbol(em, ep),) + og.word, True), (em, ep)
    rest_word = [s for s in og.word if s != ("v", v)]
    eps = og.sign * perm_sign(og.word, [("v", v)] + rest_word)
    word = (("v", vm), ("v", vp), ("h", em), ("h", ep)) + tuple(rest_word)
    return Oriented(new, eps, word, False), (em, ep)


def expansions(og: Oriented):
    out = []
    for v, c in og.graph.cycles.items():
        for start, size in vertex_splits(len(c)):
            out.append(expand_vertex(og, v, start, size)[0])
    return out


def graph_boundary(og: Oriented) -> Chain:
    out = Chain()
    for x in expansions(og):
        out.add_chain(to_chain(x))
    return out


def key_boundary(key, twisted=False):
    return graph_boundary(oriented(graph_from_key(key), 1, twisted)).items()


class GraphComplex:
    """The graph complex (untwisted or det-twisted) on canonical keys."""

    def __init__(self, basis_by_degree, twisted=False):
        self._basis = {d: sorted(b) for d, b in basis_by_degree.items()}
        self.twisted = twisted

    def basis(self, d):
        return self._basis.get(d, [])

    def boundary(self, key):
        return key_boundary(key, self.twisted)

    def sort_key(self, key):
        return key

    def degree(self, key):
        return key_degree(key)

    @property
    def degrees(self):
        return sorted(self._basis)


# -- trees in vertices -------------------------------------------------------

@dataclass(frozen=True)
class VertexFrame:
    """Vertex order and, per vertex, its half-edges starting from the root e_{i,0}."""
    order: tuple
    rings: tuple

    @property
    def arities(self):
        return tuple(len(r) - 1 for r in self.rings)


def frame(g: RibbonGraph, order=None, roots=None) -> VertexFrame:
    order = tuple(g.cycles) if order is None else tuple(order)
    rings = []
    for i, v in enumerate(order):
        c = g.cycles[v]
        r = c[0] if roots is None else roots[i]
        k = c.index(r)
        rings.append(c[k:] + c[:k])
    return VertexFrame(order, tuple(rings))


def frame_word(fr: VertexFrame):
    """⟨v_1 e_{1,0} … e_{1,n_1} v_2 …⟩."""
    out = []
    for v, ring in zip(fr.order, fr.rings):
        out.append(("v", v))
        out.extend(("h", h) for h in ring)
    return tuple(out)


def a_sign(og: Oriented, fr: VertexFrame) -> int:
    """A_Γ: σ = A_Γ ⟨v_1 e_{1,0} … v_k e_{k,0} …⟩."""
    return og.sign * perm_sign(og.word, frame_word(fr))


def _graft_trees(g: RibbonGraph, fr: VertexFrame, tree_list):
    """Replace each framed vertex by its tree; returns (graph, tree edges, tree vertex names)."""
    if len(tree_list) != len(fr.order):
        raise ArityMismatch("one tree per vertex is required")
    cycles = {v: c for v, c in g.cycles.items() if v not in fr.order}
    iota = dict(g.iota)
    tree_edges = []          # per vertex: list of (parent-side half, child-side half) in pre-order
    roots = []
    for i, (v, ring, t) in enumerate(zip(fr.order, fr.rings, tree_list)):
        if trees.leaves(t) != len(ring) - 1:
            raise ArityMismatch(f"tree at vertex {v!r} has {trees.leaves(t)} leaves, "
                                f"vertex needs {len(ring) - 1}")
        leaves = iter(ring[1:])
        edges_i = []
        vertex_names = []

        def build(node, parent_half):
            name = v if not vertex_names else ("tv", i, len(vertex_names))
            vertex_names.append(name)
            cyc = [parent_half]
            for child in node:
                if child == trees.LEAF:
                    cyc.append(next(leaves))
                else:
                    down, up = ("td", i, len(vertex_names)), ("tu", i, len(vertex_names))
                    iota[down], iota[up] = up, down
                    cyc.append(down)
                    edges_i.append((down, up))
                    build(child, up)
            cycles[name] = tuple(cyc)

        build(t, ring[0])
        tree_edges.append(edges_i)
        roots.append(v)
    # keep the original vertex order first for readability
    ordered = {w: cycles[w] for w in g.cycles if w in cycles}
    ordered.update({w: c for w, c in cycles.items() if w not in ordered})
    return RibbonGraph(ordered, iota, check=False), tree_edges


def build_from_trees(og: Oriented, fr: VertexFrame, tree_list) -> Oriented:
    """Γ(T_1,…,T_k) with the orientation fixed by collapsing the tree edges back to Γ."""
    g = og.graph
    new, tree_edges = _graft_trees(g, fr, tree_list)
    if og.twisted:
        fs = tuple(edge_symbol(a, b) for edges in tree_edges for a, b in edges)
        return Oriented(new, og.sign, fs + og.word, True)
    probe = oriented(new)
    for v, edges in zip(fr.order, tree_edges):
        for down, up in edges:
            # the parent side keeps its name, so the root vertex ends up named v
            probe = contract_edge(probe, down)
    got = probe.graph
    for v in g.cycles:
        a, b = got.cycles[v], g.cycles[v]
        k = a.index(b[0])
        assert a[k:] + a[:k] == b, "tree collapse did not reproduce the vertex"
    c = og.sign * probe.sign * perm_sign(probe.word, og.word)
    return Oriented(new, c, new.standard_word(), False)


def _tree_sign(fr, tree_list):
    if len(tree_list) != len(fr.order):
        raise ArityMismatch("one tree per vertex is required")
    ns = fr.arities
    ts = [trees.internal_edges(t) for t in tree_list]
    e = sum(ns[i] * ts[j] for i in range(len(ns)) for j in range(i + 1, len(ns)))
    return -1 if e % 2 else 1


def phi(og: Oriented, fr: VertexFrame, tree_list) -> Chain:
    """φ_Γ(T_1⊗…⊗T_k) as a chain on canonical keys."""
    s = (-1) ** og.graph.degree * a_sign(og, fr) * _tree_sign(fr, tree_list)
    return to_chain(build_from_trees(og, fr, tree_list), s)


# -- twisted orientations ----------------------------------------------------

def _det_sign(cols):
    """Sign of the determinant of a square matrix given as a list of columns."""
    m = [[Fraction(x) for x in col] for col in cols]
    n, sign = len(m), 1
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        if m[c][c] < 0:
            sign = -sign
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return sign


def cycle_basis_vectors(g: RibbonGraph, root_vertex):
    """Breadth-first spanning tree and the fundamental cycles of the other edges.

    Edges are taken from ``g.edges()``, oriented from the first half-edge.
    Returns (tree edge indices, list of cycle vectors over the edges).
    """
    edges = g.edges()
    index = {h: i for i, (a, b) in enumerate(edges) for h in (a, b)}
    parent = {root_vertex: None}
    todo = deque([root_vertex])
    tree = []
    while todo:
        v = todo.popleft()
        for h in g.cycles[v]:
            w = g.vertex_of[g.iota[h]]
            if w not in parent:
                parent[w] = h
                tree.append(index[h])
                todo.append(w)

    def path_to_root(v):
        vec = [0] * len(edges)
        while parent[v] is not None:
            h = parent[v]                  # half-edge at the parent, pointing to v
            i = index[h]
            vec[i] += 1 if edges[i][0] == h else -1
            v = g.vertex_of[h]
        return vec

    tree_set = set(tree)
    cycles = []
    for i, (a, b) in enumerate(edges):
        if i in tree_set:
            continue
        pa, pb = path_to_root(g.vertex_of[a]), path_to_root(g.vertex_of[b])
        vec = [x - y for x, y in zip(pa, pb)]
        vec[i] += 1
        cycles.append(vec)
    return tree, cycles


def twisted_reference(g: RibbonGraph, fr: VertexFrame):
    """The element of det E matching ⟨v_1 e_{1,0} … v_k … s_1 … s_n⟩.

    Uses det E ≅ det V ⊗ det H ⊗ det H_1 from 0 → H_1 → ℚ^E → ℚ^V → ℚ → 0,
    with the cycles s_j of ``cycle_basis_vectors``.  Returns (sign, edge word).
    """
    edges = g.edges()
    fw = frame_word(fr)
    vpart = [s for s in fw if s[0] == "v"]
    hpart = [s for s in fw if s[0] == "h"]
    sign = perm_sign(fw, vpart + hpart)
    sign *= perm_sign(hpart, [("h", h) for e in edges for h in e])
    tree, cycles = cycle_basis_vectors(g, fr.order[0])
    cols = list(cycles)
    for i in tree:
        col = [0] * len(edges)
        col[i] = 1
        cols.append(col)
    sign *= _det_sign(cols)
    vindex = {v: j for j, v in enumerate(fr.order)}
    bcols = []
    for i in tree:
        a, b = edges[i]
        col = [0] * len(fr.order)
        col[vindex[g.vertex_of[b]]] += 1
        col[vindex[g.vertex_of[a]]] -= 1
        bcols.append(col)
    point = [0] * len(fr.order)
    point[0] = 1
    sign *= _det_sign(bcols + [point])
    return sign, tuple(edge_symbol(a, b) for a, b in edges)


def b_sign(og: Oriented, fr: VertexFrame) -> int:
    """B_Γ: μ = B_Γ · ⟨v_1 e_{1,0} … s_1 … s_n⟩."""
    ws, word = twisted_reference(og.graph, fr)
    return og.sign * perm_sign(og.word, word) * ws


def psi(og: Oriented, fr: VertexFrame, tree_list) -> Chain:
    """ψ_Γ(T_1⊗…⊗T_k) for det-twisted orientations."""
    s = (-1) ** og.graph.degree * b_sign(og, fr) * _tree_sign(fr, tree_list)
    return to_chain(build_from_trees(og, fr, tree_list), s)


def tree_map(og: Oriented, fr: VertexFrame, tree_list) -> Chain:
    return (psi if og.twisted else phi)(og, fr, tree_list)


def frame_sign(og: Oriented, fr: VertexFrame) -> int:
    """(−1)^{|Γ|} A_Γ (or B_Γ): the coefficient of og in the image of the corollas."""
    s = b_sign(og, fr) if og.twisted else a_sign(og, fr)
    return (-1) ** og.graph.degree * s


def tree_preimages(og: Oriented, fr: VertexFrame):
    """key -> (trees, c) with tree_map(trees) = c · key, first hit in enumeration order."""
    out = {}
    for ts in product(*[trees.all_trees(n) for n in fr.arities]):
        for key, c in tree_map(og, fr, ts).items():
            out.setdefault(key, (ts, c))
    return out


def generate_subcomplex(og: Oriented, fr: VertexFrame | None = None) -> GraphComplex:
    """The subcomplex spanned by the images of all tree tuples."""
    fr = frame(og.graph) if fr is None else fr
    basis = {}
    for key in tree_preimages(og, fr):
        basis.setdefault(key_degree(key), []).append(key)
    return GraphComplex(basis, og.twisted)


# -- the graph diagonal ------------------------------------------------------

def delta_on_trees(g: RibbonGraph, fr: VertexFrame, tree_list, diag,
                   left_twisted=False, right_twisted=False) -> Chain:
    """(map ⊗ map) ∘ τ ∘ Δ^{⊗k} on a tuple of trees, into pairs of graph keys."""
    from .diagonal import tree_diagonal

    if diag.max_arity < max(fr.arities, default=2):
        raise DiagonalArityTooSmall(
            f"graph needs arity {max(fr.arities)}, diagonal stops at {diag.max_arity}")
    left, right = oriented(g, 1, left_twisted), oriented(g, 1, right_twisted)
    pieces = [list(tree_diagonal(diag, t).items()) for t in tree_list]
    out = Chain()
    for choice in product(*pieces):
        coeff = Fraction(1)
        e = 0
        odd_right = 0
        for (u, v), c in choice:
            coeff *= c
            e += odd_right * trees.degree(u)
            odd_right += trees.degree(v)
        if e % 2:
            coeff = -coeff
        lhs = tree_map(left, fr, tuple(u for (u, _), _ in choice))
        if not lhs:
            continue
        rhs = tree_map(right, fr, tuple(v for (_, v), _ in choice))
        for k1, a in lhs.items():
            for k2, b in rhs.items():
                out.add((k1, k2), coeff * a * b)
    return out


def graph_diagonal(og: Oriented, diag, left_twisted=None, right_twisted=None,
                   fr: VertexFrame | None = None) -> Chain:
    """δ(og) with the given target regimes; the source regime must be their sum."""
    if left_twisted is None and right_twisted is None:
        left_twisted, right_twisted = False, og.twisted
    if og.twisted != (bool(left_twisted) != bool(right_twisted)):
        raise ValueError("source regime must be the sum of the target regimes")
    fr = frame(og.graph) if fr is None else fr
    corollas = tuple(trees.corolla(n) for n in fr.arities)
    out = delta_on_trees(og.graph, fr, corollas, diag, left_twisted, right_twisted)
    return out * frame_sign(og, fr)


def key_diagonal(key, diag, source_twisted, left_twisted, right_twisted) -> Chain:
    return graph_diagonal(oriented(graph_from_key(key), 1, source_twisted), diag,
                          left_twisted, right_twisted)


def pair_boundary_keys(x: Chain, left_twisted, right_twisted) -> Chain:
    """(∂⊗1 + (−1)^{|G_1|} 1⊗∂) on pairs of graph keys."""
    out = Chain()
    for (k1, k2), c in x.items():
        for j1, a in key_boundary(k1, left_twisted):
            out.add((j1, k2), c * a)
        s = -1 if key_degree(k1) % 2 else 1
        for j2, b in key_boundary(k2, right_twisted):
            out.add((k1, j2), c * s * b)
    return out
