"""JSON round-tripping for diagonals, homotopies, algebras and graphs.

Rationals are written as "p/q" strings (integers as "p").  Trees use the
text encoding with ``*`` for leaves.  Output is pretty-printed with sorted
keys so files diff cleanly.
"""

from __future__ import annotations

import json
from fractions import Fraction

from . import trees
from .algebra import CyclicAInfAlgebra
from .chains import Chain
from .diagonal import Diagonal, Homotopy
from .errors import InvalidGraph
from .graphs import (
    Oriented,
    RibbonGraph,
    b_sign,
    canonicalize,
    cycle_basis_vectors,
    frame,
    frame_word,
    graph_from_key,
    twisted_reference,
)
from .trees import perm_sign


class SchemaError(ValueError):
    """A JSON document does not match the expected layout."""


def q(x) -> str:
    return str(Fraction(x))


def unq(s) -> Fraction:
    try:
        return Fraction(s)
    except (TypeError, ValueError, ZeroDivisionError):
        raise SchemaError(f"not a rational: {s!r}") from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _need(d, key, where):
    if not isinstance(d, dict) or key not in d:
        raise SchemaError(f"{where}: missing field {key!r}")
    return d[key]


# -- diagonals and homotopies ------------------------------------------------

def _tree(s, where):
    try:
        return trees.decode(s)
    except Exception:
        raise SchemaError(f"{where}: bad tree {s!r}") from None


def diagonal_to_json(diag: Diagonal) -> dict:
    entries = {}
    for n, chain in sorted(diag.entries.items()):
        items = sorted(chain.items(), key=lambda kv: (trees.sort_key(kv[0][0]), trees.sort_key(kv[0][1])))
        entries[str(n)] = [{"left": trees.encode(a), "right": trees.encode(b), "coeff": q(c)}
                           for (a, b), c in items]
    return {"max_arity": diag.max_arity,
            "flags": {"cyclic": diag.cyclic, "cocommutative": diag.cocommutative},
            "entries": entries}


def diagonal_from_json(d) -> Diagonal:
    entries = {}
    for n, terms in _need(d, "entries", "diagonal").items():
        chain = Chain()
        for i, t in enumerate(terms):
            where = f"diagonal.entries[{n}][{i}]"
            chain.add((_tree(_need(t, "left", where), where), _tree(_need(t, "right", where), where)),
                      unq(_need(t, "coeff", where)))
        entries[int(n)] = chain
    flags = d.get("flags", {})
    return Diagonal(entries, bool(flags.get("cyclic", True)), bool(flags.get("cocommutative", False)))


def homotopy_to_json(h: Homotopy) -> dict:
    entries = {}
    for n in sorted(h.entries):
        forms = h.forms(n)
        rows = []
        for (a, b) in sorted(forms, key=lambda p: (trees.sort_key(p[0]), trees.sort_key(p[1]))):
            f = forms[(a, b)]
            rows.append({"left": trees.encode(a), "right": trees.encode(b),
                         "poly": [q(c) for c in f.poly], "dt_poly": [q(c) for c in f.dt_poly]})
        entries[str(n)] = rows
    return {"max_arity": h.max_arity, "start": diagonal_to_json(h.start),
            "end": diagonal_to_json(h.end), "entries": entries}


def homotopy_from_json(d) -> Homotopy:
    entries = {}
    for n, rows in _need(d, "entries", "homotopy").items():
        chain = Chain()
        for i, r in enumerate(rows):
            where = f"homotopy.entries[{n}][{i}]"
            pair = (_tree(_need(r, "left", where), where), _tree(_need(r, "right", where), where))
            for p, c in enumerate(r.get("poly", [])):
                chain.add((pair, 0, p), unq(c))
            for p, c in enumerate(r.get("dt_poly", [])):
                chain.add((pair, 1, p), unq(c))
        entries[int(n)] = chain
    return Homotopy(entries, diagonal_from_json(_need(d, "start", "homotopy")),
                    diagonal_from_json(_need(d, "end", "homotopy")))


# -- algebras ----------------------------------------------------------------

def algebra_to_json(A: CyclicAInfAlgebra) -> dict:
    ops = {}
    for k in sorted(A.ops):
        rows = []
        for inp in sorted(A.ops[k]):
            out = A.ops[k][inp]
            rows.append({"in": [A.names[i] for i in inp],
                         "out": {A.names[j]: q(c) for j, c in sorted(out.items())}})
        ops[str(k)] = rows
    return {"parity": A.parity, "grading": A.grading,
            "basis": [{"name": n, "degree": d} for n, d in zip(A.names, A.degrees)],
            "pairing": [[q(x) for x in row] for row in A.pairing], "ops": ops}


def algebra_from_json(d) -> CyclicAInfAlgebra:
    basis = _need(d, "basis", "algebra")
    names = [_need(b, "name", "algebra.basis") for b in basis]
    degrees = [int(_need(b, "degree", "algebra.basis")) for b in basis]
    idx = {n: i for i, n in enumerate(names)}
    pairing = [[unq(x) for x in row] for row in _need(d, "pairing", "algebra")]
    if len(pairing) != len(names) or any(len(r) != len(names) for r in pairing):
        raise SchemaError("algebra.pairing must be a square matrix over the basis")
    ops = {}
    for k, rows in d.get("ops", {}).items():
        table = {}
        for i, r in enumerate(rows):
            where = f"algebra.ops[{k}][{i}]"
            try:
                inp = tuple(idx[x] for x in _need(r, "in", where))
                out = {idx[x]: unq(c) for x, c in _need(r, "out", where).items()}
            except KeyError as e:
                raise SchemaError(f"{where}: unknown basis name {e}") from None
            if len(inp) != int(k):
                raise SchemaError(f"{where}: expected {k} inputs")
            table[inp] = out
        ops[int(k)] = table
    grading = d.get("grading", "Z")
    if grading not in ("Z", "Z2"):
        raise SchemaError(f"algebra.grading must be 'Z' or 'Z2', got {grading!r}")
    return CyclicAInfAlgebra(names, degrees, pairing, ops, int(d.get("parity", 0)), grading)


# -- graphs ------------------------------------------------------------------

def _sym(s):
    return s[0] + str(s[1])


def graph_to_json(og: Oriented) -> dict:
    """Canonical labelling; twisted orientations as ⟨v e … s …⟩ words."""
    key, sign, zero = canonicalize(og)
    g = graph_from_key(key)
    if zero:
        sign = 0
    out = {"half_edges": len(g.iota), "nu": [list(c) for c in g.cycles.values()],
           "iota": sorted([a, b] for a, b in g.iota.items() if a < b),
           "twisted": og.twisted}
    if og.twisted:
        fr = frame(g)
        ref = Oriented(g, sign, g.standard_word(True), True)
        order = [_sym(s) for s in frame_word(fr)]
        order += [f"s{j + 1}" for j in range(len(cycle_basis_vectors(g, fr.order[0])[1]))]
        out["orientation"] = {"order": order, "sign": b_sign(ref, fr) if sign else 0}
    else:
        out["orientation"] = {"order": [_sym(s) for s in g.standard_word()], "sign": sign}
    return out


def graph_from_json(d) -> Oriented:
    nu = _need(d, "nu", "graph")
    pairs = _need(d, "iota", "graph")
    iota = {}
    for p in pairs:
        if len(p) != 2:
            raise SchemaError("graph.iota entries must be pairs")
        a, b = int(p[0]), int(p[1])
        iota[a], iota[b] = b, a
    g = RibbonGraph({i: tuple(int(h) for h in c) for i, c in enumerate(nu)}, iota)
    if "half_edges" in d and int(d["half_edges"]) != len(iota):
        raise InvalidGraph("half_edges does not match iota")
    twisted = bool(d.get("twisted", False))
    ori = d.get("orientation", {})
    sign = int(ori.get("sign", 1))
    order = ori.get("order")
    if not twisted:
        if order is None:
            return Oriented(g, sign, g.standard_word(), False)
        word = tuple(("v" if s[0] == "v" else "h", int(s[1:])) for s in order)
        if sorted(word) != sorted(g.standard_word()):
            raise SchemaError("graph.orientation.order must list every vertex and half-edge once")
        return Oriented(g, sign, word, False)
    fr = frame(g)
    ncycles = len(cycle_basis_vectors(g, fr.order[0])[1])
    std = [_sym(s) for s in frame_word(fr)] + [f"s{j + 1}" for j in range(ncycles)]
    if order is None:
        order = std
    if sorted(order) != sorted(std):
        raise SchemaError("twisted orientation must list every vertex, half-edge and cycle once")
    ws, edge_word = twisted_reference(g, fr)
    return Oriented(g, sign * perm_sign(order, std) * ws, edge_word, True)


def load(path):
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as e:
            raise SchemaError(f"{path}: {e}") from None


def save(obj, path):
    with open(path, "w") as fh:
        fh.write(dumps(obj))
