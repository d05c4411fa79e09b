import json
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from salbp.errors import (
    BadArc,
    BadParameters,
    BadTaskTime,
    CycleDetected,
    MalformedHeader,
    MissingSentinel,
)
from salbp.instances import (
    Instance,
    alb_metadata,
    dumps,
    format_alb,
    loads,
    order_strength,
    parse_alb,
    random_instance,
    read_instance,
    to_document,
    transitive_closure,
    transitive_reduction,
)

from _support import diamond


def test_minimal_file():
    inst = parse_alb("2\n3\n4\n1,2\n-1,-1")
    assert inst.n == 2 and inst.times == (3, 4) and inst.arcs == {(1, 2)}


def test_single_task():
    inst = parse_alb("1\n5\n-1,-1")
    assert inst.n == 1 and inst.times == (5,) and not inst.arcs


def test_cycle_rejected():
    with pytest.raises(CycleDetected):
        parse_alb("3\n1\n1\n1\n1,2\n2,3\n3,1\n-1,-1")


def test_index_time_layout_and_whitespace():
    text = "  3 \n1 4\n 2 2\n3   7\n\n1 , 3\n2,3\n1,3\n-1,-1\n"
    inst = parse_alb(text)
    assert inst.times == (4, 2, 7)
    assert inst.arcs == {(1, 3), (2, 3)}  # duplicate arc dropped


def test_bracketed_layout():
    text = (
        "<number of tasks>\n3\n<cycle time>\n9\n<order strength>\n0,667\n"
        "<task times>\n1 3\n2 4\n3 5\n<precedence relations>\n1,2\n2,3\n<end>\n"
    )
    inst = parse_alb(text)
    assert inst.times == (3, 4, 5) and inst.arcs == {(1, 2), (2, 3)}
    assert alb_metadata(text) == {"c": 9}


@pytest.mark.parametrize(
    "text, exc",
    [
        ("", MalformedHeader),
        ("0\n-1,-1", MalformedHeader),
        ("x\n1\n-1,-1", MalformedHeader),
        ("2\n3\n-1,-1", BadTaskTime),
        ("2\n3\n0\n-1,-1", BadTaskTime),
        ("2\n3\n4\n1,3\n-1,-1", BadArc),
        ("2\n3\n4\n1,1\n-1,-1", BadArc),
        ("2\n3\n4\n1,x\n-1,-1", BadArc),
        ("2\n3\n4\n1;2\n-1,-1", BadTaskTime),
        ("2\n3\n4\n1,2\n", MissingSentinel),
    ],
)
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse_alb(text)


def test_closure_examples():
    assert transitive_closure([(1, 2), (2, 3)], 3) == {(1, 2), (2, 3), (1, 3)}
    assert transitive_closure([], 4) == frozenset()
    assert transitive_closure([(1, 2), (1, 3), (2, 4), (3, 4)], 4) == {(1, 2), (1, 3), (1, 4), (2, 4), (3, 4)}
    with pytest.raises(CycleDetected):
        transitive_closure([(1, 2), (2, 1)], 2)


def test_order_strength_examples():
    assert order_strength(Instance((1, 1, 1), ((1, 2), (2, 3)))) == 3
    assert order_strength(Instance((1,) * 5, ())) == 0
    assert order_strength(Instance((1,) * 5, ((1, 2), (1, 3), (2, 4), (3, 4)))) == 5
    assert order_strength(diamond()) == 9


def test_random_examples():
    one = random_instance(1, 1, 0.7)
    assert one.n == 1 and not one.arcs
    anti = random_instance(7, 10, 0.0)
    assert anti.n == 10 and not anti.arcs
    assert random_instance(3, 9, 0.4, (2, 6)) == random_instance(3, 9, 0.4, (2, 6))
    assert all(2 <= t <= 6 for t in random_instance(3, 9, 0.4, (2, 6)).times)
    with pytest.raises(BadParameters):
        random_instance(1, 0, 0.5)
    with pytest.raises(BadParameters):
        random_instance(1, 3, 1.5)
    with pytest.raises(BadParameters):
        random_instance(1, 3, 0.5, (0, 4))


def test_canonical_document_fields():
    doc = to_document(diamond())
    assert list(doc) == ["name", "n", "times", "arcs"]
    assert doc["arcs"] == [[1, 2], [1, 3], [2, 4], [3, 4], [4, 5]]
    assert json.loads(dumps(diamond())) == doc


def test_read_instance_by_extension(tmp_path):
    a = tmp_path / "d.alb"
    a.write_text(format_alb(diamond()))
    j = tmp_path / "d.json"
    j.write_text(dumps(diamond()))
    assert read_instance(a).times == read_instance(j).times
    assert read_instance(a).arcs == read_instance(j).arcs
    assert read_instance(j).name == "diamond"
    assert read_instance(a).name == "d"


def _brute_closure(arcs, n):
    adj = {i: [j for a, j in arcs if a == i] for i in range(1, n + 1)}
    out = set()
    for s in range(1, n + 1):
        seen, todo = set(), list(adj[s])
        while todo:
            v = todo.pop()
            if v not in seen:
                seen.add(v)
                todo.extend(adj[v])
        out |= {(s, v) for v in seen}
    return out


instances = st.builds(
    random_instance,
    seed=st.integers(0, 10**6),
    n=st.integers(1, 12),
    arc_density=st.sampled_from([0.0, 0.2, 0.5, 0.9, 1.0]),
    time_range=st.sampled_from([(1, 1), (1, 10), (3, 30)]),
)


@settings(max_examples=80, deadline=None)
@given(instances)
def test_round_trips(inst):
    assert loads(dumps(inst)) == inst
    assert parse_alb(format_alb(inst), name=inst.name) == inst


@settings(max_examples=80, deadline=None)
@given(instances)
def test_closure_properties(inst):
    cl = inst.closure
    assert cl == _brute_closure(inst.arcs, inst.n)
    assert transitive_closure(cl, inst.n) == cl
    assert inst.arcs <= cl
    assert all(i != j for i, j in cl)
    assert transitive_reduction(cl, inst.n) == inst.arcs  # arcs are already reduced
    n = inst.n
    assert order_strength(inst) <= n * (n - 1) // 2
    order = inst.topological_order()
    pos = {v: k for k, v in enumerate(order)}
    assert all(pos[i] < pos[j] for i, j in cl)


def test_total_order_attains_pair_bound():
    for n in range(1, 7):
        inst = random_instance(n, n, 1.0)
        assert order_strength(inst) == n * (n - 1) // 2


def test_strength_below_bound_unless_total():
    for perm_arcs in permutations([(1, 2), (2, 3), (1, 3)], 2):
        inst = Instance((1, 1, 1), perm_arcs)
        total = len(inst.closure) == 3
        assert (order_strength(inst) == 3) == total


def test_head_and_tail_times():
    d = diamond()
    assert [d.head_time(i) for i in d.tasks] == [3, 7, 5, 14, 15]
    assert [d.tail_time(i) for i in d.tasks] == [15, 10, 8, 6, 1]
