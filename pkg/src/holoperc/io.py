"""Graph edge lists, scenario JSON and report serialisation.

Edge list (version 1)::

    #v1
    n 5
    1 2
    2 3

Scenario JSON (version 1)::

    {"format": 1, "n": 5, "edges": [[1, 2], [2, 3]],
     "k1": 1, "k2": 1, "non_forceable": [11, 19, 20, 25]}

State ids are ``1 + sum(x_i * 2**(n - i))``: node 1 is the most
significant bit.
"""

import csv
import io as _io
import json
from pathlib import Path

from .errors import InvalidInputError
from .netmodel import Graph, PercParams, Scenario

EDGE_LIST_HEADER = "#v1"
SCENARIO_FORMAT = 1


def parse_edge_list(text: str) -> Graph:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0] != EDGE_LIST_HEADER:
        raise InvalidInputError(f"edge list must start with a '{EDGE_LIST_HEADER}' header line")
    body = [ln for ln in lines[1:] if not ln.startswith("#")]
    if not body or not body[0].startswith("n "):
        raise InvalidInputError("edge list needs an 'n <count>' line before the edges")
    try:
        n = int(body[0].split()[1])
        edges = []
        for ln in body[1:]:
            parts = ln.split()
            if len(parts) != 2:
                raise ValueError(ln)
            edges.append((int(parts[0]), int(parts[1])))
    except (ValueError, IndexError) as exc:
        raise InvalidInputError(f"malformed edge list line: {exc}") from None
    return Graph.from_edges(n, edges)


def format_edge_list(graph: Graph) -> str:
    lines = [EDGE_LIST_HEADER, f"n {graph.n}"] + [f"{i} {j}" for i, j in graph.edges()]
    return "\n".join(lines) + "\n"


def read_edge_list(path) -> Graph:
    return parse_edge_list(Path(path).read_text())


def _field(doc: dict, name: str, kind):
    if name not in doc:
        raise InvalidInputError(f"scenario field '{name}' is missing")
    value = doc[name]
    if kind is int and (not isinstance(value, int) or isinstance(value, bool)):
        raise InvalidInputError(f"scenario field '{name}' must be an integer")
    if kind is list and not isinstance(value, list):
        raise InvalidInputError(f"scenario field '{name}' must be an array")
    return value


def scenario_from_dict(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise InvalidInputError("scenario document must be a JSON object")
    if _field(doc, "format", int) != SCENARIO_FORMAT:
        raise InvalidInputError(f"scenario field 'format' must be {SCENARIO_FORMAT}")
    n = _field(doc, "n", int)
    edges = _field(doc, "edges", list)
    try:
        graph = Graph.from_edges(n, edges)
    except (InvalidInputError, TypeError, ValueError) as exc:
        raise InvalidInputError(f"scenario field 'edges': {exc}") from None
    try:
        params = PercParams(_field(doc, "k1", int), _field(doc, "k2", int))
    except InvalidInputError as exc:
        raise InvalidInputError(f"scenario field 'k1'/'k2': {exc}") from None
    nf = doc.get("non_forceable", [])
    if not isinstance(nf, list) or not all(isinstance(s, int) and not isinstance(s, bool) for s in nf):
        raise InvalidInputError("scenario field 'non_forceable' must be an array of state ids")
    try:
        return Scenario(graph, params, frozenset(nf), bool(doc.get("monotone", False)))
    except InvalidInputError as exc:
        raise InvalidInputError(f"scenario field 'non_forceable': {exc}") from None


def scenario_to_dict(scen: Scenario) -> dict:
    doc = {
        "format": SCENARIO_FORMAT,
        "n": scen.n,
        "edges": [list(e) for e in scen.graph.edges()],
        "k1": scen.params.k1,
        "k2": scen.params.k2,
        "non_forceable": sorted(scen.non_forceable),
    }
    if scen.monotone:
        doc["monotone"] = True
    return doc


def read_scenario(path) -> Scenario:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"scenario file is not valid JSON: {exc}") from None
    return scenario_from_dict(doc)


def dumps(obj) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def heatmap_csv(values: dict, k1_range, k2_range) -> str:
    """Grid as CSV: columns k1 ascending, rows k2 descending (heat-map orientation)."""
    k1s = sorted(k1_range)
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k2\\k1"] + k1s)
    for k2 in sorted(k2_range, reverse=True):
        w.writerow([k2] + [values[(k1, k2)] for k1 in k1s])
    return buf.getvalue()


def parse_heatmap_csv(text: str) -> dict:
    rows = list(csv.reader(_io.StringIO(text)))
    k1s = [int(v) for v in rows[0][1:]]
    return {(k1, int(r[0])): int(v) for r in rows[1:] for k1, v in zip(k1s, r[1:])}
