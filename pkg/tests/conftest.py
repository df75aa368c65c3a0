import networkx as nx
import pytest

from l1tiling.catalog import build_graph, family_members, is_finite, load_catalog


@pytest.fixture(scope="session")
def catalog():
    return load_catalog()


def to_nx(g):
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges)
    return G


def corpus(cat, max_n=120):
    """(name, graph) for every finite catalog graph with at most ``max_n`` vertices."""
    out = []
    for e in cat:
        if not is_finite(e):
            continue
        for n in family_members(e):
            g = build_graph(cat, e, n)
            if g.n <= max_n:
                out.append((e.id if n is None else f"{e.id}[n={n}]", g))
    return out


@pytest.fixture(scope="session")
def finite_corpus(catalog):
    return corpus(catalog)


ACCEPTANCE: list[str] = []


@pytest.fixture
def record():
    """Collect one PASS/FAIL line per acceptance criterion for the terminal summary."""
    def add(label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
        ACCEPTANCE.append(line)
        print(line)
        return ok
    return add


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
