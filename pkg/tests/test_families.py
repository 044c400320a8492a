import io
from collections import Counter

import numpy as np
import pytest

import oracles
from powergraph_lab.errors import BadParameter, NotAssociative, NotLatinSquare, ParseError
from powergraph_lab.families import (
    build,
    catalog,
    cyclic,
    dicyclic,
    dihedral,
    format_cayley_table,
    heisenberg,
    modular,
    parse_cayley_json,
    parse_cayley_text,
    parse_family,
    product,
    read_cayley_table,
    semidihedral,
    write_cayley_table,
)
from powergraph_lab.groups import is_generalized_quaternion, validate_group


@pytest.mark.parametrize(
    "text, name, order",
    [
        ("cyclic:1", "Z1", 1),
        ("dicyclic:2", "Q8", 8),
        ("dicyclic:3", "Dic12", 12),
        ("dihedral:20", "D40", 40),
        ("semidihedral:5", "SD32", 32),
        ("modular:3,3", "M27", 27),
        ("heisenberg:5", "Heis125", 125),
        ("product(cyclic:3,cyclic:9)", "Z3xZ9", 27),
        (" product( cyclic:2 , product(cyclic:2,cyclic:2) ) ", "Z2xZ2xZ2", 8),
    ],
)
def test_parse_and_name(text, name, order):
    spec = parse_family(text)
    assert spec.name == name
    assert spec.order == order
    assert parse_family(str(spec)) == spec


@pytest.mark.parametrize(
    "text",
    ["cyclic:0", "dicyclic:1", "semidihedral:3", "modular:4,3", "modular:3,2", "heisenberg:6",
     "nope:3", "cyclic", "product(cyclic:2)", "product(cyclic:2,cyclic:3", "cyclic:2 junk", "dihedral:2,3"],
)
def test_parse_rejects(text):
    with pytest.raises(BadParameter):
        parse_family(text)


@pytest.mark.parametrize(
    "spec",
    [cyclic(7), dihedral(5), dihedral(20), dicyclic(2), dicyclic(3), dicyclic(4), semidihedral(4),
     semidihedral(5), modular(2, 4), modular(3, 3), modular(5, 3), heisenberg(3), heisenberg(5),
     product(cyclic(2), cyclic(4), cyclic(3))],
)
def test_constructions_are_groups(spec):
    G = build(spec, validate=True)
    assert G.n == spec.order
    assert (G.table[0] == np.arange(G.n)).all()


def test_family_invariants():
    # element-order profiles that pin down each family
    assert Counter(build(dihedral(5)).element_orders.tolist()) == {1: 1, 2: 5, 5: 4}
    assert Counter(build(semidihedral(4)).element_orders.tolist()) == {1: 1, 2: 5, 4: 6, 8: 4}
    assert Counter(build(modular(2, 4)).element_orders.tolist()) == {1: 1, 2: 3, 4: 4, 8: 8}
    assert Counter(build(heisenberg(3)).element_orders.tolist()) == {1: 1, 3: 26}
    # M27 has exponent 9 and is non-abelian
    M = build(modular(3, 3))
    assert max(M.element_orders) == 9
    assert not (M.table == M.table.T).all()


def test_dicyclic_structure():
    for n in (2, 3, 4, 5, 8):
        G = build(dicyclic(n))
        orders = sorted(M.order for M in G.maximal_cyclic_subgroups)
        assert orders == [4] * n + [2 * n]
        inv = {x for x in range(G.n) if G.element_orders[x] <= 2}
        mcs = G.maximal_cyclic_subgroups
        for i in range(len(mcs)):
            for j in range(i + 1, len(mcs)):
                assert mcs[i].element_set & mcs[j].element_set == inv
        assert is_generalized_quaternion(G) == (n & (n - 1) == 0)


def test_d40_maximal_cyclic_orders():
    G = build(dihedral(20))
    assert Counter(M.order for M in G.maximal_cyclic_subgroups) == {20: 1, 2: 20}


def test_default_catalog_contents():
    names = [e.name for e in catalog()]
    assert len(names) == len(set(names))
    for must in ("Q8", "Q16", "Q32", "Q64", "D64", "SD64", "M64", "Z9xZ3", "Z5xZ5", "Z7xZ7",
                 "Heis27", "Heis125", "M27", "M81", "M125", "Z8xZ2", "D40", "Z6", "Z2xZ2xZ2xZ2xZ2xZ2"):
        assert must in names, must
    ords = [e.group.n for e in catalog()]
    assert ords == sorted(ords)
    d40 = next(e for e in catalog() if e.name == "D40")
    assert "example:worked" in d40.tags and d40.p is None


def test_catalog_bound_3_27():
    names = {e.name for e in catalog({3: 27})}
    assert {"Z27", "Z9xZ3", "Z3xZ3xZ3", "Z3xZ3", "Heis27", "M27"} <= names


def test_catalog_abelian_count():
    # number of abelian groups of order p^k is the partition number of k
    ab = [e for e in catalog({2: 64}, extras=()) if "abelian" in e.tags]
    assert Counter(e.group.n for e in ab) == {2: 1, 4: 2, 8: 3, 16: 5, 32: 7, 64: 11}


def test_catalog_ingest_tables():
    G = build(dicyclic(2))
    entries = catalog({2: 4}, extras=(), tables=[G])
    ing = [e for e in entries if "ingested" in e.tags]
    assert len(ing) == 1 and ing[0].p == 2


# --- Cayley table IO ----------------------------------------------------------------


def test_table_roundtrip():
    G = build(dihedral(4))
    text = format_cayley_table(G)
    assert text.splitlines()[0] == "8"
    assert (parse_cayley_text(text).table == G.table).all()
    js = format_cayley_table(G, "json")
    assert (parse_cayley_json(js).table == G.table).all()
    buf = io.StringIO()
    write_cayley_table(G, buf, "json")
    buf.seek(0)
    assert read_cayley_table(buf, "json") == G


def test_comments_and_relabelled_identity():
    text = "# Z3 with identity 2\n3\n1 2 0  # row 0\n2 0 1\n0 1 2\n"
    G = parse_cayley_text(text)
    assert G.n == 3 and G.is_cyclic
    assert (G.table[0] == np.arange(3)).all()


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("", 1, 1),
        ("2\n0 1\n1 x\n", 3, 3),
        ("2\n0 1\n1\n", 3, 1),
        ("2\n0 1\n1 5\n", 3, 3),
        ("2\n0 1\n", 3, 1),
        ("2 0\n0 1\n1 0\n", 1, 3),
    ],
)
def test_parse_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as info:
        parse_cayley_text(text)
    assert (info.value.line, info.value.column) == (line, col)


def test_json_errors():
    with pytest.raises(ParseError):
        parse_cayley_json("{not json")
    with pytest.raises(ParseError):
        parse_cayley_json('{"n": 2, "table": [[0, 1]]}')
    with pytest.raises(NotLatinSquare):
        parse_cayley_json('{"n": 2, "table": [[0, 1], [0, 1]]}')


def test_ingest_rejects_loop():
    t = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    text = "5\n" + "\n".join(" ".join(map(str, r)) for r in t) + "\n"
    with pytest.raises(NotAssociative):
        parse_cayley_text(text)


def test_ingested_relabelled_group_matches_family():
    G0 = build(dicyclic(2))
    rng = np.random.default_rng(3)
    perm = rng.permutation(8)
    G = validate_group(oracles.relabel(G0.table, perm))
    assert G.order_histogram == G0.order_histogram
    assert is_generalized_quaternion(G)
