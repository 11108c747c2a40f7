"""Term graphs and Pajek export.

Nodes carry a label and a payload of document ids; combining two nodes
unions or intersects the payloads like a logical sum of the underlying
document sets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .cocluster import CoClustering, TermDocMatrix
from .errors import SemindexError, UnknownNode, UnknownTerm


class MalformedPajek(SemindexError):
    pass


class CombineMode(Enum):
    UNION = "union"
    INTERSECTION = "intersection"


@dataclass(frozen=True)
class TermGraph:
    nodes: tuple  # (label, frozenset of doc ids), insertion order
    edges: tuple  # (node index, node index, weight), no self-loops

    def labels(self) -> tuple:
        return tuple(label for label, _ in self.nodes)


def ego_network(m: TermDocMatrix, term: str, radius: int = 1) -> TermGraph:
    """Star of terms sharing at least one document with the center term."""
    if radius != 1:
        raise ValueError("only radius-1 ego networks are supported")
    if term not in m.terms:
        raise UnknownTerm(f"{term!r} is not a matrix row")
    dense = m.A.toarray()
    center = m.terms.index(term)
    support = {m.docs[j] for j in range(len(m.docs)) if dense[center, j] > 0}
    nodes = [(term, frozenset(support))]
    edges = []
    for i, other in enumerate(m.terms):
        if i == center:
            continue
        shared = {m.docs[j] for j in range(len(m.docs)) if dense[i, j] > 0 and m.docs[j] in support}
        if shared:
            edges.append((0, len(nodes), float(len(shared))))
            nodes.append((other, frozenset(shared)))
    return TermGraph(tuple(nodes), tuple(edges))


def cluster_graph(m: TermDocMatrix, cc: CoClustering) -> TermGraph:
    """One node per co-cluster; edge weight = cross-cluster matrix mass."""
    dense = m.A.toarray()
    term_pos = {t: i for i, t in enumerate(m.terms)}
    doc_pos = {d: j for j, d in enumerate(m.docs)}
    nodes = tuple(
        (f"cluster-{i + 1}", frozenset(cc.doc_clusters[i])) for i in range(cc.k)
    )
    edges = []
    for a in range(cc.k):
        rows = [term_pos[t] for t in cc.word_clusters[a] if t in term_pos]
        for b in range(cc.k):
            if b <= a:
                continue
            cols = [doc_pos[d] for d in cc.doc_clusters[b] if d in doc_pos]
            mass = float(dense[rows][:, cols].sum()) if rows and cols else 0.0
            rows_b = [term_pos[t] for t in cc.word_clusters[b] if t in term_pos]
            cols_a = [doc_pos[d] for d in cc.doc_clusters[a] if d in doc_pos]
            if rows_b and cols_a:
                mass += float(dense[rows_b][:, cols_a].sum())
            if mass > 0:
                edges.append((a, b, mass))
    return TermGraph(nodes, tuple(edges))


def combine_nodes(g: TermGraph, a: str, b: str, mode: CombineMode) -> TermGraph:
    """Merge two nodes; Union joins payloads, Intersection keeps the overlap."""
    labels = g.labels()
    if a == b:
        raise ValueError("cannot combine a node with itself")
    if a not in labels or b not in labels:
        missing = a if a not in labels else b
        raise UnknownNode(f"no node labeled {missing!r}")
    ia, ib = labels.index(a), labels.index(b)
    pa, pb = g.nodes[ia][1], g.nodes[ib][1]
    if mode is CombineMode.UNION:
        merged = (f"{a}+{b}", pa | pb)
    else:
        merged = (f"{a}·{b}", pa & pb)

    new_nodes = []
    remap = {}
    for i in range(len(g.nodes)):
        if i == min(ia, ib):
            remap[ia] = remap[ib] = len(new_nodes)
            new_nodes.append(merged)
        elif i in (ia, ib):
            continue
        else:
            remap[i] = len(new_nodes)
            new_nodes.append(g.nodes[i])

    weights = {}
    order = []
    for u, v, w in g.edges:
        nu, nv = remap[u], remap[v]
        if nu == nv:
            continue  # the internal a-b edge disappears, no self-loop
        key = (min(nu, nv), max(nu, nv))
        if key not in weights:
            weights[key] = 0.0
            order.append(key)
        weights[key] += w
    return TermGraph(tuple(new_nodes), tuple((u, v, weights[(u, v)]) for u, v in order))


def _format_weight(w: float) -> str:
    return str(int(w)) if float(w).is_integer() else repr(float(w))


def export_pajek(g: TermGraph, path) -> None:
    """Write the graph in Pajek .net format with LF endings."""
    lines = [f"*Vertices {len(g.nodes)}"]
    for i, (label, _) in enumerate(g.nodes, start=1):
        if '"' in label:
            raise ValueError(f"label {label!r} contains a double quote")
        lines.append(f'{i} "{label}"')
    lines.append("*Edges")
    for u, v, w in g.edges:
        lines.append(f"{u + 1} {v + 1} {_format_weight(w)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


_VERTEX_RE = re.compile(r'^(\d+) "(.*)"$')
_EDGE_RE = re.compile(r"^(\d+) (\d+) (\S+)$")


def parse_pajek(path) -> TermGraph:
    """Read back a Pajek file written by export_pajek (payloads are lost)."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("*Vertices "):
        raise MalformedPajek(f"{path}: missing *Vertices header")
    count = int(lines[0].split()[1])
    nodes = []
    pos = 1
    for _ in range(count):
        match = _VERTEX_RE.match(lines[pos])
        if not match:
            raise MalformedPajek(f"{path}: bad vertex line {lines[pos]!r}")
        nodes.append((match.group(2), frozenset()))
        pos += 1
    if pos >= len(lines) or lines[pos] != "*Edges":
        raise MalformedPajek(f"{path}: missing *Edges section")
    pos += 1
    edges = []
    for line in lines[pos:]:
        match = _EDGE_RE.match(line)
        if not match:
            raise MalformedPajek(f"{path}: bad edge line {line!r}")
        edges.append((int(match.group(1)) - 1, int(match.group(2)) - 1, float(match.group(3))))
    return TermGraph(tuple(nodes), tuple(edges))
