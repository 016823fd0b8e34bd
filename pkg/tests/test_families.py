from itertools import permutations

import networkx as nx
import pytest

from mediangle import families as fam
from mediangle.errors import InputError
from mediangle.families import FamilySpec, generate
from mediangle.periagroup import corpus_presentations, dihedral, graph_product
from mediangle.recognition import MEDIANGLE, classify, is_mediangle
from test_graph import to_nx


def iso(g, h):
    return nx.is_isomorphic(to_nx(g), h)


# -- specs --------------------------------------------------------------


@pytest.mark.parametrize("text, spec", [
    ("hypercube:3", FamilySpec("hypercube", (3,))),
    ("bowtie", FamilySpec("bowtie")),
    ("tree:random,30,1", FamilySpec("tree", ("random", 30, 1))),
    ("cartesian_product:even_cycle:6,hamming:2/3", FamilySpec("cartesian_product", ("even_cycle:6", "hamming:2/3"))),
])
def test_spec_parse_and_str(text, spec):
    assert FamilySpec.parse(text) == spec
    assert str(spec) == text


# -- constructions against networkx -------------------------------------


@pytest.mark.parametrize("text, ref", [
    ("hypercube:4", nx.hypercube_graph(4)),
    ("complete:5", nx.complete_graph(5)),
    ("cycle:7", nx.cycle_graph(7)),
    ("even_cycle:10", nx.cycle_graph(10)),
    ("coxeter_dihedral:4", nx.cycle_graph(8)),
    ("path:6", nx.path_graph(6)),
    ("square_grid:3,4", nx.grid_2d_graph(3, 4)),
    ("hamming:3,4", nx.cartesian_product(nx.complete_graph(3), nx.complete_graph(4))),
    ("k32", nx.complete_bipartite_graph(3, 2)),
    ("tree:star,6,0", nx.star_graph(5)),
    ("tree:binary,15,0", nx.balanced_tree(2, 3)),
    ("cartesian_product:even_cycle:6,hypercube:1", nx.circular_ladder_graph(6)),
])
def test_generate_matches_networkx(text, ref):
    assert iso(generate(text), ref)


def test_cube_minus_vertex_and_k4_minus():
    q3 = nx.hypercube_graph(3)
    q3.remove_node((1, 1, 1))
    assert iso(fam.cube_minus_vertex(), q3)
    k4 = nx.complete_graph(4)
    k4.remove_edge(1, 3)
    assert iso(fam.k4_minus(), k4)


def test_symmetric_group_cayley():
    ref = nx.Graph()
    for p in permutations(range(4)):
        for i in range(3):
            q = list(p)
            q[i], q[i + 1] = q[i + 1], q[i]
            ref.add_edge(p, tuple(q))
    assert iso(generate("coxeter_cayley:A3"), ref)
    assert generate("coxeter_cayley:A2").n == 6


@pytest.mark.parametrize("r", [1, 2, 4, 6])
def test_hexagonal_ball_is_a_ball_in_the_honeycomb(r):
    g = fam.hexagonal_tiling_ball(r)
    lattice = nx.hexagonal_lattice_graph(2 * r + 4, 2 * r + 4)
    centre = nx.center(lattice)[0]
    dist = nx.single_source_shortest_path_length(lattice, centre)
    # the ball must stay clear of the patch boundary
    assert min(d for v, d in dist.items() if lattice.degree(v) < 3) > r
    ref = nx.ego_graph(lattice, centre, radius=r)
    assert iso(g, ref)
    assert g.ball.radius == r
    assert max(g.distances[g.ball.center]) == r


@pytest.mark.parametrize("n, seed", [(1, 0), (2, 0), (10, 3), (40, 7)])
def test_random_trees(n, seed):
    g = generate(f"tree:random,{n},{seed}")
    assert nx.is_tree(to_nx(g))
    assert g.edges == generate(f"tree:random,{n},{seed}").edges


def test_presentation_families():
    assert generate("coxeter_cayley", presentation=dihedral(4)).n == 8
    p = graph_product([2, 3], [(0, 1)])
    assert iso(generate("graph_product_ball", presentation=p), nx.cartesian_product(nx.complete_graph(2),
                                                                                      nx.complete_graph(3)))
    with pytest.raises(InputError):
        generate("graph_product_ball", presentation=dihedral(3))
    with pytest.raises(InputError):
        generate("graph_product_ball")


# -- determinism and errors ---------------------------------------------


@pytest.mark.parametrize("text", ["hamming:3,3", "tree:random,25,4", "hexagonal_tiling_ball:3",
                                  "cartesian_product:even_cycle:6,complete:3"])
def test_generate_is_deterministic(text):
    a, b = generate(text), generate(FamilySpec.parse(text))
    assert a.n == b.n and a.edges == b.edges


@pytest.mark.parametrize("text", [
    "dodecahedron", "hypercube", "hypercube:x", "even_cycle:5", "cycle:2", "hamming:0", "tree:weird,5,0",
    "coxeter_cayley:B3", "cartesian_product:cycle:4", "hypercube:3,4", "complete:0",
])
def test_generate_rejects(text):
    with pytest.raises(InputError):
        generate(text)


FAMILY_SAMPLES = {
    "bowtie": "bowtie", "cartesian_product": "cartesian_product:cycle:4,path:2", "complete": "complete:3",
    "coxeter_cayley": "coxeter_cayley:A2", "coxeter_dihedral": "coxeter_dihedral:3",
    "cube_minus_vertex": "cube_minus_vertex", "cycle": "cycle:5", "even_cycle": "even_cycle:4",
    "hamming": "hamming:3", "hexagonal_tiling_ball": "hexagonal_tiling_ball:2",
    "hexagons_sharing_two_edges": "hexagons_sharing_two_edges", "hypercube": "hypercube:2", "k32": "k32",
    "k4_minus": "k4_minus", "path": "path:4", "square_grid": "square_grid:2,3", "tree": "tree",
}


def test_every_family_has_a_sample():
    assert sorted(FAMILY_SAMPLES) == sorted(set(fam.FAMILIES) - {"graph_product_ball"})
    for text in FAMILY_SAMPLES.values():
        assert generate(text).n >= 1


# -- corpus -------------------------------------------------------------


def test_corpus_labels_match_classifier():
    for e in fam.corpus():
        if e.graph.n > 200:
            continue
        assert classify(e.graph, e.max_len) == set(e.labels), e.name


def test_corpus_names_regenerate():
    for e in fam.corpus(include_cayley=False):
        if e.name.count(",") > 1 and e.name.startswith("cartesian_product:"):
            continue  # nested products have no single spec
        assert generate(e.name).edges == e.graph.edges, e.name


@pytest.mark.parametrize("name", sorted(corpus_presentations()))
def test_presentation_labels(name):
    from mediangle.periagroup import cayley_ball

    p = corpus_presentations()[name]
    g = cayley_ball(p).graph
    assert classify(g) == fam.expected_presentation_labels(p)


SMALL_MEDIANGLE = ["even_cycle:6", "hamming:2,3", "path:3", "bowtie", "even_cycle:8", "complete:3"]


@pytest.mark.parametrize("a", SMALL_MEDIANGLE)
@pytest.mark.parametrize("b", SMALL_MEDIANGLE[:4])
def test_products_of_mediangle_graphs_are_mediangle(a, b):
    g = fam.cartesian_product(generate(a), generate(b))
    assert MEDIANGLE in classify(generate(a)) and MEDIANGLE in classify(generate(b))
    assert is_mediangle(g, 8).holds
