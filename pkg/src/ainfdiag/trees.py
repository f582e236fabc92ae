"""Planar rooted trees as oriented cells of the associahedra.

A tree is a nested tuple: a leaf is ``0`` and an internal vertex is the tuple
of its children (at least two).  The text encoding writes leaves as ``*``,
so ``((**)*)`` is the left comb with three leaves.

An oriented tree is a tree together with a sign; the sign is taken relative
to the canonical order of internal edges, which is the pre-order discovery
order of the non-root internal vertices (each internal edge is named by its
lower endpoint).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import count

from .errors import DegreeOutOfRange, IndexOutOfRange

LEAF = 0


def perm_sign(source, target) -> int:
    """Sign of the permutation carrying the sequence ``source`` to ``target``."""
    pos = {x: i for i, x in enumerate(target)}
    if len(pos) != len(source) or any(x not in pos for x in source):
        raise ValueError("sequences are not permutations of each other")
    p = [pos[x] for x in source]
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# -- basic structure ---------------------------------------------------------

@lru_cache(maxsize=None)
def leaves(t) -> int:
    if t == LEAF:
        return 1
    return sum(leaves(c) for c in t)


@lru_cache(maxsize=None)
def internal_vertices(t) -> int:
    if t == LEAF:
        return 0
    return 1 + sum(internal_vertices(c) for c in t)


def internal_edges(t) -> int:
    return internal_vertices(t) - 1


def degree(t) -> int:
    return leaves(t) - 2 - internal_edges(t)


@lru_cache(maxsize=None)
def encode(t) -> str:
    if t == LEAF:
        return "*"
    return "(" + "".join(encode(c) for c in t) + ")"


def decode(s: str):
    s = s.strip()
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(s):
            raise ValueError(f"unexpected end of tree encoding {s!r}")
        ch = s[pos]
        if ch == "*":
            pos += 1
            return LEAF
        if ch != "(":
            raise ValueError(f"bad character {ch!r} at {pos} in {s!r}")
        pos += 1
        kids = []
        while pos < len(s) and s[pos] != ")":
            kids.append(parse())
        if pos >= len(s):
            raise ValueError(f"unbalanced tree encoding {s!r}")
        pos += 1
        if len(kids) < 2:
            raise ValueError(f"internal vertex with fewer than two children in {s!r}")
        return tuple(kids)

    t = parse()
    if pos != len(s):
        raise ValueError(f"trailing characters in tree encoding {s!r}")
    if t == LEAF:
        raise ValueError("a single leaf is not a tree of the operad")
    return t


def corolla(n: int):
    if n < 2:
        raise ValueError("corollas have at least two leaves")
    return (LEAF,) * n


def sort_key(t):
    return encode(t)


# -- enumeration -------------------------------------------------------------

@lru_cache(maxsize=None)
def _forests(n: int, k: int):
    """Ordered sequences of k subtrees (leaves allowed) with n leaves total."""
    if k == 0:
        return [()] if n == 0 else []
    out = []
    for first in range(1, n - k + 2):
        for head in _subtrees(first):
            for rest in _forests(n - first, k - 1):
                out.append((head,) + rest)
    return out


@lru_cache(maxsize=None)
def _subtrees(n: int):
    if n == 1:
        return [LEAF]
    return list(all_trees(n))


@lru_cache(maxsize=None)
def all_trees(n: int):
    out = []
    for k in range(2, n + 1):
        out.extend(_forests(n, k))
    return tuple(sorted(out, key=encode))


def enumerate_trees(n: int, d: int):
    """Planar rooted trees with ``n`` leaves and degree ``d``, in encoding order."""
    if n < 2:
        raise DegreeOutOfRange(f"need at least two leaves, got n={n}")
    if not 0 <= d <= n - 2:
        raise DegreeOutOfRange(f"degree {d} outside [0, {n - 2}] for n={n}")
    return [t for t in all_trees(n) if degree(t) == d]


# -- labelled trees ----------------------------------------------------------
# A labelled internal vertex is (label, children); leaves stay LEAF.

def _label(t, tag, counter):
    if t == LEAF:
        return LEAF
    lab = (tag, next(counter))
    return (lab, tuple(_label(c, tag, counter) for c in t))


def label(t, tag=0):
    return _label(t, tag, count())


def strip(lt):
    if lt == LEAF:
        return LEAF
    return tuple(strip(c) for c in lt[1])


def edge_order(lt):
    """Labels of non-root internal vertices in pre-order."""
    out = []

    def walk(node, is_root):
        if node == LEAF:
            return
        if not is_root:
            out.append(node[0])
        for c in node[1]:
            walk(c, False)

    walk(lt, True)
    return out


# -- operad structure --------------------------------------------------------

def _replace_leaf(lt, i, sub):
    """Replace the i-th (1-based) leaf of a labelled tree by ``sub``."""
    remaining = [i]

    def walk(node):
        if node == LEAF:
            remaining[0] -= 1
            return sub if remaining[0] == 0 else LEAF
        return (node[0], tuple(walk(c) for c in node[1]))

    return walk(lt)


@lru_cache(maxsize=None)
def graft(u, i: int, v):
    """Operadic composition of canonically oriented trees.

    Returns ``(tree, sign)`` with ``(u, +) o_i (v, +) = sign * (tree, +)``.
    """
    n1, n2 = leaves(u), leaves(v)
    if not 1 <= i <= n1:
        raise IndexOutOfRange(f"leaf index {i} outside 1..{n1}")
    lu, lv = label(u, "u"), label(v, "v")
    composite = _replace_leaf(lu, i, lv)
    word = edge_order(lu) + edge_order(lv) + [lv[0]]
    sign = perm_sign(word, edge_order(composite))
    if (i * (n2 + 1) + n1 * degree(v)) % 2:
        sign = -sign
    return strip(composite), sign


@lru_cache(maxsize=None)
def boundary(t):
    """Differential of the canonically oriented tree as a tuple of (tree, sign)."""
    lt = label(t)
    old_edges = edge_order(lt)
    out = []
    new_label = ("new", 0)

    def expansions(node):
        if node == LEAF:
            return
        lab, kids = node
        k = len(kids)
        for size in range(2, k):
            for a in range(0, k - size + 1):
                block = (new_label, kids[a:a + size])
                yield (lab, kids[:a] + (block,) + kids[a + size:])
        for j, c in enumerate(kids):
            for sub in expansions(c):
                yield (lab, kids[:j] + (sub,) + kids[j + 1:])

    for new in expansions(lt):
        sign = perm_sign([new_label] + old_edges, edge_order(new))
        out.append((strip(new), sign))
    return tuple(out)


def _planar_neighbours(lt):
    """Cyclic neighbour lists of internal vertices; legs are ('L', j)."""
    nbrs = {}
    leaf_no = count(1)

    def walk(node, parent):
        lab, kids = node
        ring = [parent]
        for c in kids:
            if c == LEAF:
                ring.append(("L", next(leaf_no)))
            else:
                ring.append(c[0])
                walk(c, lab)
        nbrs[lab] = ring

    walk(lt, ("L", 0))
    return nbrs


def _edge_sets(nbrs, root_vertex, entry):
    """Rebuild a rooted labelled tree from planar neighbour lists."""
    def build(v, came_from):
        ring = nbrs[v]
        k = ring.index(came_from)
        kids = []
        for ref in ring[k + 1:] + ring[:k]:
            if isinstance(ref, tuple) and ref[0] == "L":
                kids.append(LEAF)
            else:
                kids.append(build(ref, v))
        return (v, tuple(kids))

    return build(root_vertex, entry)


@lru_cache(maxsize=None)
def rotate(t):
    """Cyclic generator: ``r((t,+)) = sign * (r(t), +)``.

    The rightmost leaf becomes the new root; the old root becomes leaf 1.
    """
    n = leaves(t)
    lt = label(t)
    nbrs = _planar_neighbours(lt)
    last = ("L", n)
    attach = next(v for v, ring in nbrs.items() if last in ring)
    new = _edge_sets(nbrs, attach, last)

    def parents(node, parent, acc):
        if node == LEAF:
            return acc
        if parent is not None:
            acc.append(frozenset((node[0], parent)))
        for c in node[1]:
            parents(c, node[0], acc)
        return acc

    old_edges = parents(lt, None, [])
    new_edges = parents(new, None, [])
    sign = perm_sign(old_edges, new_edges)
    if n % 2:
        sign = -sign
    return strip(new), sign
