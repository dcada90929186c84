import random

import pytest

from ridematch.model import DROPOFF, PICKUP, Request, Stop, Vehicle
from ridematch.network import Link, RoadNetwork, grid_network


@pytest.fixture(scope="session")
def line_net():
    """Five nodes in a row, 60 s / 500 m per hop, both directions."""
    nodes = range(5)
    links = []
    for a in range(4):
        links.append(Link(a, a + 1, 500.0, 60))
        links.append(Link(a + 1, a, 500.0, 60))
    return RoadNetwork(nodes, links)


@pytest.fixture(scope="session")
def grid6():
    return grid_network(6, 6)


@pytest.fixture(scope="session")
def grid3():
    return grid_network(3, 3)


def make_request(rid, t_r, origin, destination, flexibility_s, net):
    direct = net.shortest_travel_time(origin, destination)
    assert direct is not None
    return Request(id=rid, t_r=t_r, e_r=t_r,
                   l_r=t_r + flexibility_s + direct, origin=origin,
                   destination=destination, f_r=flexibility_s,
                   q_r=t_r + flexibility_s, direct_time_s=direct)


def make_vehicle(vid, location, capacity=4, **kw):
    return Vehicle(id=vid, capacity=capacity, location=location, **kw)


def pickup(rid, node):
    return Stop(PICKUP, rid, node)


def dropoff(rid, node):
    return Stop(DROPOFF, rid, node)


def random_net_nodes(net, rng, k):
    return [net.nodes[rng.randrange(len(net.nodes))] for _ in range(k)]


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
