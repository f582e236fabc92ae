"""Kontsevich's graph cochains c_A and the tensor product formula.

An algebra with an even pairing evaluates untwisted graphs; an odd pairing
evaluates det-twisted graphs.  The value is a state sum: every edge carries
a nonzero copairing entry g^{ab}, every vertex contributes
⟨m_n(x_1, …, x_n), x_0⟩ read from its root, and the Koszul sign of the
shuffle from vertex slots to edge pairs is applied.

Sign conventions (pinned down by the cocycle, tensor and frame-independence
tests):

* even pairing: parities |a|, global factor (−1)^{|Γ|} A_Γ;
* odd pairing: shifted parities |a| + 1, an extra vertex factor
  (−1)^{Σ_p p·|y_p|} over the slot word (x_1, …, x_n, x_0), edges paired in
  the order of the orientation word, global factor (−1)^{|Γ|} times the
  orientation sign.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .algebra import CyclicAInfAlgebra, tensor_product_algebra
from .chains import Chain
from .errors import ParityMismatch
from .graphs import (
    Oriented,
    VertexFrame,
    a_sign,
    frame,
    graph_from_key,
    key_boundary,
    key_degree,
    key_diagonal,
    oriented,
)


@dataclass
class Audit:
    """How a value was assembled; handy when a sign looks wrong."""
    frame_order: tuple = ()
    frame_roots: tuple = ()
    edges: tuple = ()
    orientation_sign: int = 1
    degree_sign: int = 1
    states: int = 0
    nonzero_states: int = 0
    state_sum: Fraction = Fraction(0)
    value: Fraction = Fraction(0)


def _koszul(parities_in_order, target_positions) -> int:
    """Sign of moving the symbols (given in source order) to their target slots."""
    odd = [t for t, p in zip(target_positions, parities_in_order) if p]
    inv = sum(1 for i in range(len(odd)) for j in range(i + 1, len(odd)) if odd[i] > odd[j])
    return -1 if inv % 2 else 1


def _edge_list(og: Oriented):
    g = og.graph
    if og.twisted:
        first = {h: i for i, h in enumerate(g.halves())}
        edges = []
        for sym in og.word:
            a, b = sorted(sym[1], key=first.__getitem__)
            edges.append((a, b))
        return edges, og.sign
    return g.edges(), None


def _check_parity(A: CyclicAInfAlgebra, og: Oriented):
    if bool(A.parity) != bool(og.twisted):
        kind = "twisted" if og.twisted else "untwisted"
        raise ParityMismatch(
            f"pairing of parity {A.parity} cannot evaluate a {kind} graph")


def state_sum(A: CyclicAInfAlgebra, og: Oriented, fr: VertexFrame, edges, audit=None) -> Fraction:
    odd = A.parity == 1
    slots = [h for ring in fr.rings for h in ring[1:] + ring[:1]]
    target = {}
    for i, (a, b) in enumerate(edges):
        target[a], target[b] = 2 * i, 2 * i + 1
    target_positions = [target[h] for h in slots]
    entries = [(a, b, c) for a in range(A.dim) for b in range(A.dim)
               for c in [A.copairing[a][b]] if c]
    total = Fraction(0)
    n_states = n_nonzero = 0
    for choice in product(entries, repeat=len(edges)):
        n_states += 1
        label = {}
        coeff = Fraction(1)
        for (a, b, c), (h, k) in zip(choice, edges):
            label[h], label[k] = a, b
            coeff *= c
        for ring in fr.rings:
            n = len(ring) - 1
            out = A.m(n, tuple(label[h] for h in ring[1:]))
            if not out:
                coeff = 0
                break
            coeff *= A.pair_vec(out, label[ring[0]])
            if not coeff:
                break
            if odd:
                word = [label[h] for h in ring[1:]] + [label[ring[0]]]
                if sum(p * A.p(x) for p, x in enumerate(word, 1)) % 2:
                    coeff = -coeff
        if not coeff:
            continue
        parities = [(A.p(label[h]) + odd) % 2 for h in slots]
        total += coeff * _koszul(parities, target_positions)
        n_nonzero += 1
    if audit is not None:
        audit.states, audit.nonzero_states, audit.state_sum = n_states, n_nonzero, total
    return total


def kontsevich_value(A: CyclicAInfAlgebra, og, fr: VertexFrame | None = None,
                     audit: Audit | None = None) -> Fraction:
    """c_A evaluated on an oriented graph (or on a canonical key)."""
    if not isinstance(og, Oriented):
        og = oriented(graph_from_key(og), 1, bool(A.parity))
    _check_parity(A, og)
    fr = frame(og.graph) if fr is None else fr
    edges, osign = _edge_list(og)
    if osign is None:
        osign = a_sign(og, fr)
    dsign = -1 if og.graph.degree % 2 else 1
    z = state_sum(A, og, fr, edges, audit)
    value = dsign * osign * z
    if audit is not None:
        audit.frame_order = fr.order
        audit.frame_roots = tuple(r[0] for r in fr.rings)
        audit.edges = tuple(edges)
        audit.orientation_sign, audit.degree_sign, audit.value = osign, dsign, value
    return value


def evaluate_chain(A, x: Chain) -> Fraction:
    return sum((c * kontsevich_value(A, k) for k, c in x.items()), Fraction(0))


def brute_force_value(A: CyclicAInfAlgebra, og: Oriented, fr: VertexFrame | None = None) -> Fraction:
    """Independent evaluation: build the full tensor of vertex forms, then contract.

    Uses dense arrays over all basis labels and sorts symbols into edge
    pairs one transposition at a time; only suitable for tiny graphs.
    """
    _check_parity(A, og)
    fr = frame(og.graph) if fr is None else fr
    edges, osign = _edge_list(og)
    if osign is None:
        osign = a_sign(og, fr)
    odd = A.parity == 1
    slots = [h for ring in fr.rings for h in ring[1:] + ring[:1]]
    total = Fraction(0)
    for labels in product(range(A.dim), repeat=len(slots)):
        lab = dict(zip(slots, labels))
        val = Fraction(1)
        for ring in fr.rings:
            word = [lab[h] for h in ring[1:]] + [lab[ring[0]]]
            val *= A.pair_vec(A.m(len(ring) - 1, tuple(word[:-1])), word[-1])
            if odd and sum(p * A.p(x) for p, x in enumerate(word, 1)) % 2:
                val = -val
            if not val:
                break
        if not val:
            continue
        # bubble sort the symbols into (h1+, h1−, h2+, …), tracking Koszul signs
        order = {h: i for i, e in enumerate(edges) for i in [2 * i] for h in [e[0]]}
        order.update({e[1]: 2 * i + 1 for i, e in enumerate(edges)})
        seq = list(slots)
        sign = 1
        for i in range(len(seq)):
            for j in range(len(seq) - 1 - i):
                if order[seq[j]] > order[seq[j + 1]]:
                    if (A.p(lab[seq[j]]) + odd) % 2 and (A.p(lab[seq[j + 1]]) + odd) % 2:
                        sign = -sign
                    seq[j], seq[j + 1] = seq[j + 1], seq[j]
        for a, b in edges:
            val *= A.copairing[lab[a]][lab[b]]
        total += sign * val
    return (-1) ** og.graph.degree * osign * total


# -- checks ------------------------------------------------------------------

@dataclass
class KontsevichReport:
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures

    def record(self, name, ok, witness=None):
        self.checks[name] = bool(ok)
        if not ok:
            self.failures.append((name, witness))


def verify_cocycle(A: CyclicAInfAlgebra, keys) -> KontsevichReport:
    """c_A(∂G) = 0 for every key in ``keys``."""
    rep = KontsevichReport()
    twisted = bool(A.parity)
    for key in keys:
        v = evaluate_chain(A, Chain(key_boundary(key, twisted)))
        rep.record(f"cocycle:{key}", v == 0, v)
    return rep


def tensor_formula_sides(A, B, AB, key, diag):
    """(c_{A⊗B}(G), (c_A ⊗ c_B)(δG)) with the Koszul sign (−1)^{|G_1||G_2|}."""
    tw_a, tw_b = bool(A.parity), bool(B.parity)
    source = tw_a != tw_b
    lhs = kontsevich_value(AB, oriented(graph_from_key(key), 1, source))
    rhs = Fraction(0)
    for (k1, k2), c in key_diagonal(key, diag, source, tw_a, tw_b).items():
        s = -1 if key_degree(k1) * key_degree(k2) % 2 else 1
        rhs += s * c * kontsevich_value(A, k1) * kontsevich_value(B, k2)
    return lhs, rhs


def verify_tensor_formula(A, B, keys, diag, AB=None) -> KontsevichReport:
    """c_{A⊗B} = (c_A ⊗ c_B) ∘ δ on each key."""
    top = max(max(graph_from_key(k).valency(v) for v in graph_from_key(k).cycles) - 1
              for k in keys)
    AB = tensor_product_algebra(A, B, diag, top) if AB is None else AB
    rep = KontsevichReport()
    for key in keys:
        lhs, rhs = tensor_formula_sides(A, B, AB, key, diag)
        rep.record(f"tensor:{key}", lhs == rhs, (lhs, rhs))
    return rep
