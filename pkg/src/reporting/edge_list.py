import csv
import logging
import os
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from core.errors import InputError, InputMissingError, MalformedInputError
from core.graph import DirectedGraph

logger = logging.getLogger(__name__)

EDGE_LIST_FORMATS = ("whitespace", "csv")

# Header written by write_edge_list; lets a reader restore isolated nodes.
_NODES_HEADER = re.compile(r"#\s*nodes\s+(\d+)\s*$")


@dataclass
class EdgeListImport:
    graph: DirectedGraph
    labels: List[str] = field(default_factory=list)  # dense id -> original label
    duplicates: int = 0
    self_loops: int = 0
    comments: int = 0
    declared_nodes: Optional[int] = None
    identity_ids: bool = False   # labels 0..N-1 were kept as the node ids


def _split_line(line: str, fmt: str) -> List[str]:
    if fmt == "csv":
        return [token.strip() for token in next(csv.reader([line]))]
    return line.split()


def _read_pairs(path, fmt: str, result: EdgeListImport) -> List[Tuple[int, str, str]]:
    pairs = []
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for line_number, raw in enumerate(handle, start=1):
                line = raw.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    result.comments += 1
                    header = _NODES_HEADER.match(line)
                    if header and result.declared_nodes is None:
                        result.declared_nodes = int(header.group(1))
                    continue
                tokens = _split_line(line, fmt)
                if len(tokens) != 2 or not all(tokens):
                    raise MalformedInputError(path, line_number,
                                              f"expected 2 labels, got {len(tokens)}: {line[:60]!r}")
                pairs.append((line_number, tokens[0], tokens[1]))
    except UnicodeDecodeError as e:
        raise InputError(f"{path}: not a text edge list ({e.reason})") from e
    except IsADirectoryError as e:
        raise InputError(f"{path}: is a directory") from e
    except PermissionError as e:
        raise InputError(f"{path}: permission denied") from e
    return pairs


def _identity_ids(pairs, declared: Optional[int]) -> bool:
    """True when a node-count header is present and every label is an id below it."""
    if declared is None:
        return False
    for _, src, dst in pairs:
        for label in (src, dst):
            canonical = label.isascii() and label.isdigit() and str(int(label)) == label
            if not canonical or int(label) >= declared:
                return False
    return True


def read_edge_list(path, fmt: str = "whitespace") -> EdgeListImport:
    """
    Parse an edge list into a graph plus the label table.

    A file that starts with a "# nodes N" header and uses only the labels
    0..N-1 (what write_edge_list produces) keeps those labels as node ids,
    isolated nodes included. Any other file maps labels to dense ids in
    order of first appearance. Duplicate edges and self-loops are dropped
    and counted.
    """
    if fmt not in EDGE_LIST_FORMATS:
        raise InputError(f"Unknown edge list format {fmt!r} (known: {', '.join(EDGE_LIST_FORMATS)})")
    if not os.path.exists(path):
        raise InputMissingError(path)

    graph = DirectedGraph()
    result = EdgeListImport(graph=graph)
    pairs = _read_pairs(path, fmt, result)

    if _identity_ids(pairs, result.declared_nodes):
        result.identity_ids = True
        graph.add_nodes(result.declared_nodes)
        result.labels = [str(v) for v in range(result.declared_nodes)]

        def node_id(label: str) -> int:
            return int(label)
    else:
        if result.declared_nodes is not None:
            logger.warning(f"Edge list {path}: labels are not the ids 0..{result.declared_nodes - 1}; "
                           f"ignoring the node-count header.")
        ids: Dict[str, int] = {}

        def node_id(label: str) -> int:
            if label not in ids:
                ids[label] = graph.add_node()
                result.labels.append(label)
            return ids[label]

    for _, src, dst in pairs:
        if src == dst:
            node_id(src)
            result.self_loops += 1
            continue
        if not graph.add_edge(node_id(src), node_id(dst)):
            result.duplicates += 1

    if graph.node_count == 0:
        logger.warning(f"Edge list {path} is empty: loaded an empty graph.")
    if result.duplicates or result.self_loops:
        logger.warning(f"Edge list {path}: dropped {result.duplicates} duplicate edge(s) "
                       f"and {result.self_loops} self-loop(s).")
    logger.info(f"Loaded {path}: {graph.node_count} nodes, {graph.edge_count} edges")
    return result


def load_edge_list(path, fmt: str = "whitespace") -> DirectedGraph:
    return read_edge_list(path, fmt).graph


def write_edge_list(graph: DirectedGraph, path) -> None:
    """
    A "# nodes N" comment, then one "src dst" line per edge, sorted. Identical
    graphs give identical bytes, and read_edge_list gives the graph back with
    the same ids. An empty graph gives an empty file.
    """
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        if graph.node_count:
            handle.write(f"# nodes {graph.node_count}\n")
        for src, dst in graph.edges():
            handle.write(f"{src} {dst}\n")


def write_label_table(labels: List[str], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["id", "label"])
        for node, label in enumerate(labels):
            writer.writerow([node, label])
