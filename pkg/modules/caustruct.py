"""
CAUSAL STRUCTURES
Signaling digraphs of deterministic processes and their classification

Features:
- Flip-test digraph: i -> j when flipping a_i can flip x_j
- Isomorphism classes by brute force over party permutations
- Siblings-on-cycles test through networkx cycle enumeration
- Fixed / Adaptive / ICO taxonomy and a pandas census
"""

import logging
from dataclasses import dataclass
from itertools import permutations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx
import pandas as pd

from modules.bitcore import party_bit, party_mask
from modules.process import DetProcess

logger = logging.getLogger(__name__)

FIXED = "Fixed"
ADAPTIVE = "Adaptive"
ICO = "ICO"


@dataclass(frozen=True)
class SignalingDigraph:
    n: int
    edges: FrozenSet[Tuple[int, int]]

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(1, self.n + 1))
        g.add_edges_from(self.edges)
        return g

    def adjacency(self, order: Optional[Sequence[int]] = None) -> str:
        """Row-major 0/1 string; order[k] is the party placed at position k"""
        order = list(order) if order is not None else list(range(1, self.n + 1))
        return "".join(
            "1" if (i, j) in self.edges else "0"
            for i in order for j in order
        )

    def canonical_adjacency(self) -> str:
        return min(self.adjacency(perm) for perm in permutations(range(1, self.n + 1)))


@dataclass
class StructureClass:
    structure_id: str
    adjacency: str
    type: str
    soc: bool
    members: List[int]

    @property
    def nonempty(self) -> bool:
        return "1" in self.adjacency


def signaling_digraph(f: DetProcess) -> SignalingDigraph:
    n = f.n
    edges = set()
    for i in range(1, n + 1):
        mask = party_mask(i, n)
        for a in range(1 << n):
            flipped = f(a ^ mask)
            for j in range(1, n + 1):
                if j != i and party_bit(f(a), j, n) != party_bit(flipped, j, n):
                    edges.add((i, j))
    return SignalingDigraph(n, frozenset(edges))


def is_soc(g) -> bool:
    """Every directed cycle holds two distinct nodes with a common parent"""
    graph = g.to_networkx() if isinstance(g, SignalingDigraph) else g
    for cycle in nx.simple_cycles(graph):
        parents = [set(graph.predecessors(node)) for node in cycle]
        if not any(parents[k] & parents[m]
                   for k in range(len(cycle)) for m in range(k + 1, len(cycle))):
            return False
    return True


def structure_type(g: SignalingDigraph) -> str:
    graph = g.to_networkx()
    if nx.is_directed_acyclic_graph(graph):
        return FIXED
    if any(degree == 0 for _, degree in graph.in_degree()):
        return ADAPTIVE
    return ICO


def classify_type(f: DetProcess) -> str:
    graph = signaling_digraph(f).to_networkx()
    if nx.is_directed_acyclic_graph(graph):
        return FIXED
    if any(len(set(f.coordinate(party))) == 1 for party in range(1, f.n + 1)):
        return ADAPTIVE
    return ICO


def iso_classes(digraphs: Sequence[SignalingDigraph]) -> List[StructureClass]:
    """Classes ordered by canonical adjacency; members are indices into digraphs"""
    grouped: Dict[str, List[int]] = {}
    representative: Dict[str, SignalingDigraph] = {}
    for k, g in enumerate(digraphs):
        key = g.canonical_adjacency()
        grouped.setdefault(key, []).append(k)
        representative.setdefault(key, g)

    classes = []
    for number, key in enumerate(sorted(grouped), start=1):
        g = representative[key]
        classes.append(StructureClass(
            structure_id=f"S{number:02d}",
            adjacency=key,
            type=structure_type(g),
            soc=is_soc(g),
            members=grouped[key],
        ))
    return classes


def structure_census(processes: Sequence[DetProcess],
                     labels: Optional[Sequence[str]] = None) -> Dict:
    """
    Structure classes of a set of processes

    labels (for instance catalog class ids) are reported per structure class
    instead of the raw process indices.
    """
    digraphs = [signaling_digraph(f) for f in processes]
    classes = iso_classes(digraphs)

    mismatched = [k for k, f in enumerate(processes) if classify_type(f) != structure_type(digraphs[k])]
    if mismatched:
        logger.warning("%d processes disagree between digraph and coordinate typing", len(mismatched))

    rows = []
    for cls in classes:
        members = [labels[k] for k in cls.members] if labels is not None else cls.members
        rows.append({
            "structure_id": cls.structure_id,
            "adjacency": cls.adjacency,
            "type": cls.type,
            "soc": cls.soc,
            "member_classes": list(members),
            "member_count": len(cls.members),
        })

    df = pd.DataFrame(rows, columns=["structure_id", "adjacency", "type", "soc", "member_classes", "member_count"])
    nonempty = df[df["adjacency"].str.contains("1")] if len(df) else df
    counts = {
        "processes": len(processes),
        "classes": len(df),
        "nonempty_classes": len(nonempty),
        "by_type": {k: int(v) for k, v in df["type"].value_counts().sort_index().items()} if len(df) else {},
        "all_soc": bool(df["soc"].all()) if len(df) else True,
        "type_mismatches": mismatched,
    }
    logger.info("%d processes fall into %d structure classes (%d nonempty)",
                len(processes), counts["classes"], counts["nonempty_classes"])
    return {"classes": rows, "counts": counts}
