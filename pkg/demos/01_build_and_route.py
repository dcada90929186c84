"""Build a road network and query it for routes.

Networks are directed graphs with per-link lengths and travel times.
``grid_network`` wires a rectangular lattice, which is what the bundled
scenarios use; ``load_network`` reads the same structure from JSON and
validates it strictly.
"""

from ridematch import grid_network, load_network

net = grid_network(4, 4)
print(f"4x4 grid: {len(net.nodes)} nodes, {len(net.links)} links")
print(f"one link: {net.link(0, 1)}")

print("\nshortest travel times from node 0 (40 s per 400 m link):")
for dest in (1, 5, 10, 15):
    secs = net.shortest_travel_time(0, dest)
    hops = " -> ".join(str(n) for n in net.shortest_path(0, dest))
    print(f"  0 to {dest:2d}: {secs:4d} s   {hops}")

# ties are broken deterministically, so repeat queries are identical
assert net.shortest_path(0, 15) == net.shortest_path(0, 15)

# the same structure loads from a plain dict (or a JSON file path)
one_way = load_network({
    "nodes": [{"id": 0}, {"id": 1}, {"id": 2}],
    "links": [
        {"from": 0, "to": 1, "length_m": 500, "travel_time_s": 60},
        {"from": 1, "to": 2, "length_m": 500, "travel_time_s": 60},
        {"from": 2, "to": 0, "length_m": 500, "travel_time_s": 60},
    ],
})
print("\none-way ring: 1 to 2 takes", one_way.shortest_travel_time(1, 2), "s")
print("              2 to 1 takes", one_way.shortest_travel_time(2, 1),
      "s (the long way round)")
