"""Road network representation and shortest-path routing.

The network is a directed graph of integer node ids and links carrying a
length in meters and a travel time in whole seconds.  Travel times are
static for the lifetime of a network object, so all routing results are
cached after the first query; the cache is invisible to callers.
"""

from __future__ import annotations

import heapq
import json
import math
from pathlib import Path
from typing import Iterable, NamedTuple


class NetworkFormatError(ValueError):
    """A network document failed parsing or validation."""


class Link(NamedTuple):
    src: int
    dst: int
    length_m: float
    travel_time_s: int


_NODE_FIELDS = {"id"}
_LINK_FIELDS = {"from", "to", "length_m", "travel_time_s"}


class RoadNetwork:
    """Directed road graph with time-shortest routing.

    Read-only after construction: queries may run concurrently, mutation is
    not supported.  Shortest-path ties are broken towards the smallest next
    node id, so identical queries always return identical paths.
    """

    def __init__(self, nodes: Iterable[int], links: Iterable[Link]):
        self.nodes: tuple[int, ...] = tuple(sorted(set(nodes)))
        self.links: tuple[Link, ...] = tuple(links)
        node_set = set(self.nodes)
        self._out: dict[int, list[Link]] = {n: [] for n in self.nodes}
        self._in: dict[int, list[Link]] = {n: [] for n in self.nodes}
        self._link_by_pair: dict[tuple[int, int], Link] = {}
        for link in self.links:
            if link.src not in node_set or link.dst not in node_set:
                raise NetworkFormatError(
                    f"link {link.src}->{link.dst} references an unknown node")
            if link.src == link.dst:
                raise NetworkFormatError(f"self-loop link at node {link.src}")
            if link.travel_time_s <= 0:
                raise NetworkFormatError(
                    f"link {link.src}->{link.dst} has non-positive travel time")
            if not (link.length_m > 0 and math.isfinite(link.length_m)):
                raise NetworkFormatError(
                    f"link {link.src}->{link.dst} has invalid length")
            if (link.src, link.dst) in self._link_by_pair:
                raise NetworkFormatError(
                    f"duplicate link {link.src}->{link.dst}")
            self._link_by_pair[(link.src, link.dst)] = link
            self._out[link.src].append(link)
            self._in[link.dst].append(link)
        for n in self.nodes:
            self._out[n].sort(key=lambda l: l.dst)
            self._in[n].sort(key=lambda l: l.src)
        # lazy routing caches, keyed by query endpoints
        self._dist_from: dict[int, dict[int, int]] = {}
        self._dist_to: dict[int, dict[int, int]] = {}
        self._path_cache: dict[tuple[int, int], tuple[int, ...] | None] = {}

    def __contains__(self, node: int) -> bool:
        return node in self._out

    def link(self, src: int, dst: int) -> Link:
        return self._link_by_pair[(src, dst)]

    def _require(self, node: int) -> None:
        if node not in self._out:
            raise KeyError(f"unknown node id {node}")

    def _dijkstra(self, source: int, adjacency: dict[int, list[Link]],
                  forward: bool) -> dict[int, int]:
        dist = {source: 0}
        heap = [(0, source)]
        while heap:
            d, node = heapq.heappop(heap)
            if d > dist[node]:
                continue
            for link in adjacency[node]:
                nxt = link.dst if forward else link.src
                nd = d + link.travel_time_s
                if nxt not in dist or nd < dist[nxt]:
                    dist[nxt] = nd
                    heapq.heappush(heap, (nd, nxt))
        return dist

    def _distances_from(self, source: int) -> dict[int, int]:
        cached = self._dist_from.get(source)
        if cached is None:
            cached = self._dijkstra(source, self._out, forward=True)
            self._dist_from[source] = cached
        return cached

    def _distances_to(self, target: int) -> dict[int, int]:
        cached = self._dist_to.get(target)
        if cached is None:
            cached = self._dijkstra(target, self._in, forward=False)
            self._dist_to[target] = cached
        return cached

    def shortest_travel_time(self, src: int, dst: int) -> int | None:
        """Minimal travel time in seconds over any directed path.

        Returns None when ``dst`` is unreachable from ``src``; a node is
        always reachable from itself at cost 0.
        """
        self._require(src)
        self._require(dst)
        return self._distances_from(src).get(dst)

    def shortest_path(self, src: int, dst: int) -> tuple[int, ...] | None:
        """Node sequence of a time-shortest path, or None if unreachable.

        Among equal-cost paths the one whose next node id is smallest at
        every step is returned.
        """
        self._require(src)
        self._require(dst)
        key = (src, dst)
        if key in self._path_cache:
            return self._path_cache[key]
        total = self._distances_from(src).get(dst)
        if total is None:
            self._path_cache[key] = None
            return None
        dist_from = self._distances_from(src)
        dist_to = self._distances_to(dst)
        path = [src]
        current = src
        while current != dst:
            step = None
            base = dist_from[current]
            for link in self._out[current]:  # sorted by dst: first hit wins
                remain = dist_to.get(link.dst)
                if remain is not None and base + link.travel_time_s + remain == total:
                    step = link.dst
                    break
            assert step is not None, "inconsistent distance tables"
            path.append(step)
            current = step
        result = tuple(path)
        self._path_cache[key] = result
        return result


def _as_int(value, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise NetworkFormatError(f"{what} must be an integer, got {value!r}")
    return value


def load_network(source: str | Path | dict) -> RoadNetwork:
    """Build a validated RoadNetwork from a JSON document.

    ``source`` may be a path to a JSON file, a JSON string, or an already
    parsed dict.  The document has the shape::

        {"nodes": [{"id": 0}, ...],
         "links": [{"from": 0, "to": 1, "length_m": 400.0,
                    "travel_time_s": 40}, ...]}

    Parsing is strict: unknown fields, duplicate nodes or links, dangling
    endpoints, and non-positive travel times are all rejected.
    """
    if isinstance(source, dict):
        doc = source
    else:
        path = Path(source)
        try:
            text = path.read_text()
        except OSError as exc:
            raise NetworkFormatError(f"cannot read network file {path}: {exc}") from exc
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise NetworkFormatError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise NetworkFormatError("network document must be a JSON object")
    extra = set(doc) - {"nodes", "links"}
    if extra:
        raise NetworkFormatError(f"unknown top-level fields: {sorted(extra)}")
    if "nodes" not in doc or "links" not in doc:
        raise NetworkFormatError("network document needs 'nodes' and 'links'")

    nodes: list[int] = []
    seen: set[int] = set()
    for rec in doc["nodes"]:
        if not isinstance(rec, dict) or set(rec) != _NODE_FIELDS:
            raise NetworkFormatError(f"node record must have exactly 'id': {rec!r}")
        nid = _as_int(rec["id"], "node id")
        if nid in seen:
            raise NetworkFormatError(f"duplicate node id {nid}")
        seen.add(nid)
        nodes.append(nid)

    links: list[Link] = []
    for rec in doc["links"]:
        if not isinstance(rec, dict) or set(rec) != _LINK_FIELDS:
            raise NetworkFormatError(
                f"link record must have exactly {sorted(_LINK_FIELDS)}: {rec!r}")
        src = _as_int(rec["from"], "link 'from'")
        dst = _as_int(rec["to"], "link 'to'")
        tt = _as_int(rec["travel_time_s"], "link travel_time_s")
        length = rec["length_m"]
        if isinstance(length, bool) or not isinstance(length, (int, float)):
            raise NetworkFormatError(f"link length_m must be a number: {length!r}")
        if src not in seen or dst not in seen:
            raise NetworkFormatError(f"link {src}->{dst} references an unknown node")
        links.append(Link(src, dst, float(length), tt))
    return RoadNetwork(nodes, links)


def grid_network(rows: int, cols: int, link_length_m: float = 400.0,
                 link_travel_time_s: int = 40) -> RoadNetwork:
    """Rectangular lattice with bidirectional links between neighbours.

    Node ids are row-major (``r * cols + c``).  This is the bundled synthetic
    network used by tests, demos, and demand presets.
    """
    if rows < 1 or cols < 1:
        raise ValueError("grid needs at least one row and column")
    nodes = list(range(rows * cols))
    links = []
    for r in range(rows):
        for c in range(cols):
            n = r * cols + c
            if c + 1 < cols:
                links.append(Link(n, n + 1, link_length_m, link_travel_time_s))
                links.append(Link(n + 1, n, link_length_m, link_travel_time_s))
            if r + 1 < rows:
                links.append(Link(n, n + cols, link_length_m, link_travel_time_s))
                links.append(Link(n + cols, n, link_length_m, link_travel_time_s))
    return RoadNetwork(nodes, links)
