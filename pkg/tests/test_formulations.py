import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from salbp.bounds import Type1, Type2, make_bounds_context
from salbp.errors import DimensionMismatch, IncompatibleConfig
from salbp.exact import enumerate_assignments
from salbp.formulations import (
    TAGS,
    FormulationConfig,
    FractionalPoint,
    all_configs,
    build_model,
    check_point,
    convert_impulse_to_step,
    emit_precedence,
    emit_station_limits,
    impulse,
    model_stats,
    parse_config,
    step,
)
from salbp.instances import Instance, random_instance
from salbp.lp import solve_lp

from _support import diamond, integer_point

PAIR = Instance((1, 1), ((1, 2),), "pair")


def test_config_validation_and_labels():
    assert impulse("RC2", 4).label == "RC2-4"
    assert step(3).label == "SC-3"
    with pytest.raises(IncompatibleConfig):
        FormulationConfig("impulse", "SC", 1)
    with pytest.raises(IncompatibleConfig):
        FormulationConfig("step", "PA", 1)
    with pytest.raises(IncompatibleConfig):
        FormulationConfig("impulse", "PA", 5)


@pytest.mark.parametrize(
    "label, want",
    [
        ("PA1", impulse("PA", 1)),
        ("BW4", impulse("BW", 4)),
        ("RC3", impulse("RC1", 3)),
        ("RC'4", impulse("RC2", 4)),
        ("RC'-2", impulse("RC2", 2)),
        ("rc2-4", impulse("RC2", 4)),
        ("SC-2", step(2)),
        ("SC1", step(1)),
    ],
)
def test_parse_config(label, want):
    assert parse_config(label) == want


def test_labels_round_trip():
    for cfg in all_configs():
        assert parse_config(cfg.label) == cfg
    with pytest.raises(IncompatibleConfig):
        parse_config("XY-1")
    assert len(all_configs()) == 24


def test_single_task_model():
    inst = Instance((5,), ())
    m = build_model(inst, Type1(5), impulse("BW", 1))
    assert [v.name for v in m.variables] == ["x_1_1", "y_1"]
    assert sorted(c.tag for c in m.constraints) == ["cap", "occ"]
    sol = solve_lp(m)
    assert sol.optimal and sol.objective == pytest.approx(1)


def test_precedence_examples_on_pair():
    ctx = make_bounds_context(PAIR, Type2(3))
    (pa,) = emit_precedence("PA", PAIR, ctx)
    assert dict(pa.terms) == {("x", 1, 1): 1, ("x", 2, 1): 2, ("x", 3, 1): 3,
                              ("x", 1, 2): -1, ("x", 2, 2): -2, ("x", 3, 2): -3}  # fmt: skip
    assert pa.sense == "<=" and pa.rhs == 0
    (ts,) = emit_precedence("TS", PAIR, ctx)
    assert ts.sense == ">=" and ts.terms[("x", 1, 1)] == 3 and ts.terms[("x", 3, 2)] == -1
    bw = emit_precedence("BW", PAIR, ctx)
    assert len(bw) == 3
    assert dict(bw[1].terms) == {("x", 2, 2): 1, ("x", 1, 1): -1, ("x", 2, 1): -1}
    rc1 = emit_precedence("RC1", PAIR, ctx)
    got = {tuple(sorted(r.terms)) for r in rc1}
    want = {tuple(sorted([("x", s, 1), ("x", t, 2)])) for t, s in [(1, 2), (1, 3), (2, 3)]}
    assert got == want and all(r.rhs == 1 for r in rc1)
    rc2 = emit_precedence("RC2", PAIR, ctx)
    assert len(rc2) == 3
    assert dict(rc2[1].terms) == {("x", 2, 1): 1, ("x", 3, 1): 1, ("x", 2, 2): -1, ("x", 3, 2): -1}


@pytest.mark.parametrize("family, count", [("BW", 3), ("RC2", 3), ("PA", 1), ("TS", 1), ("RC1", 3)])
def test_stats_counts(family, count):
    m = build_model(PAIR, Type2(3), impulse(family, 1))
    stats = model_stats(m)
    assert stats.by_tag[f"prec.{family}"] == count
    assert stats.constraints == sum(stats.by_tag.values())
    assert stats.variables == 7 and stats.binaries == 6


def test_type2_level3_adds_cycle_time_indicators():
    m = build_model(diamond(), Type2(3), impulse("PA", 3))
    names = [v.name for v in m.variables]
    assert [n for n in names if n.startswith("r_")] == [f"r_{t}" for t in range(5, 11)]  # declaration order
    rt = [c for c in m.constraints if c.tag == "lim.RT"]
    assert len(rt) == 2 and all(c.sense == "=" for c in rt)
    link = next(c for c in rt if c.rhs == 0)
    coefs = {m.variables[j].name: v for j, v in link.coefs}
    assert coefs["c"] == 1 and all(coefs[f"r_{t}"] == -t for t in range(5, 11))
    one = next(c for c in rt if c.rhs == 1)
    assert {m.variables[j].name for j, _ in one.coefs} == {f"r_{t}" for t in range(5, 11)}


def test_window_elimination():
    ctx = make_bounds_context(diamond(), Type1(6))
    full = build_model(diamond(), Type1(6), impulse("BW", 1), ctx)
    cut = build_model(diamond(), Type1(6), impulse("BW", 2), ctx)
    xs = {k for k in cut.keys if k[0] == "x"}
    assert xs == {("x", s, i) for i in range(1, 6) for s in ctx.window(i)}
    assert len([k for k in full.keys if k[0] == "x"]) == 25
    rows, fixed = emit_station_limits(2, Type1(6), ctx)
    assert all(v == 0 for v in fixed.values())
    assert len(fixed) == 25 - len(xs)


def test_step_elimination_fixes_prefix_and_suffix():
    ctx = make_bounds_context(diamond(), Type1(6))
    _, fixed = emit_station_limits(2, Type1(6), ctx, kind="step")
    for i in range(1, 6):
        for s in ctx.stations:
            key = ("xb", s, i)
            if s < ctx.E[i]:
                assert fixed[key] == 0
            elif s >= ctx.L[i]:
                assert fixed[key] == 1
            else:
                assert key not in fixed


def test_limit_rows_type1():
    ctx = make_bounds_context(diamond(), Type1(6))
    rows3, _ = emit_station_limits(3, Type1(6), ctx)
    pf = [r for r in rows3 if r.tag == "lim.PF1"]
    assert pf
    for r in pf:
        ys = [k for k in r.terms if k[0] == "y"]
        xs = [k for k in r.terms if k[0] == "x"]
        assert len(ys) == 1 and len(xs) == 1
        s, (_, u, i) = ys[0][1], xs[0]
        assert u == ctx.latest(i, 6, s)
    rows4, _ = emit_station_limits(4, Type1(6), ctx)
    spf = [r for r in rows4 if r.tag == "lim.SPF1"]
    assert spf and all(r.sense == "<=" and r.rhs == 0 for r in spf)


def test_model_invariants():
    for spec in (Type1(6), Type2(3)):
        for cfg in all_configs():
            m = build_model(diamond(), spec, cfg)
            for con in m.constraints:
                assert con.tag in TAGS
                assert all(0 <= j < m.n_vars for j, _ in con.coefs)
                assert con.coefs
            for v in m.variables:
                assert v.lb <= v.ub
                if v.binary:
                    assert 0 <= v.lb and v.ub <= 1


def test_conversion_examples():
    p = convert_impulse_to_step(FractionalPoint({(2, 1): 1.0}), 3, tasks=[1])
    assert [p.x[(s, 1)] for s in (1, 2, 3)] == [0, 1, 1]
    p = convert_impulse_to_step(FractionalPoint({(1, 1): 0.5, (3, 1): 0.5}, y={1: 1.0}), 3)
    assert [p.x[(s, 1)] for s in (1, 2, 3)] == [0.5, 0.5, 1]
    assert p.kind == "step" and p.y == {1: 1.0}


def test_check_point_dimension_errors():
    ctx = make_bounds_context(PAIR, Type2(3))
    with pytest.raises(DimensionMismatch):
        check_point(FractionalPoint({(4, 1): 1.0}), PAIR, Type2(3), "PA", ctx)
    with pytest.raises(DimensionMismatch):
        check_point(FractionalPoint({(1, 1): 1.0}, kind="step"), PAIR, Type2(3), "PA", ctx)
    with pytest.raises(DimensionMismatch):
        check_point(FractionalPoint({(1, 1): 1.0}), PAIR, Type2(3), "lim.RT", ctx)
    ctx1 = make_bounds_context(PAIR, Type1(2))
    with pytest.raises(DimensionMismatch):
        check_point(FractionalPoint({(1, 1): 1.0}), PAIR, Type2(3), "PA", ctx1)


def test_paper_points():
    ctx = make_bounds_context(PAIR, Type2(3))
    dom1 = FractionalPoint({(1, 1): 0.5, (2, 1): 0.5, (1, 2): 0.75, (3, 2): 0.25})
    dom2 = FractionalPoint({(1, 1): 0.5, (3, 1): 0.5, (1, 2): 0.5, (2, 2): 0.5})
    r1 = check_point(dom1, PAIR, Type2(3), ["PA", "TS", "BW", "RC1", "RC2", "occ"], ctx)
    assert r1["PA"].satisfied and r1["TS"].satisfied and r1["occ"].satisfied
    assert not r1["BW"].satisfied and not r1["RC1"].satisfied and not r1["RC2"].satisfied
    assert r1["RC2"].violation == pytest.approx(0.25)
    r2 = check_point(dom2, PAIR, Type2(3), ["PA", "TS", "BW", "RC1", "RC2"], ctx)
    assert r2["BW"].satisfied and r2["RC1"].satisfied
    assert not r2["PA"].satisfied and not r2["TS"].satisfied and not r2["RC2"].satisfied
    assert sorted(r2.violated_families()) == ["PA", "RC2", "TS"]
    assert r2["PA"].worst_row == 0


def _small_instances():
    out = [diamond()]
    for seed in range(14):
        out.append(random_instance(50 + seed, 3 + seed % 4, (0.0, 0.3, 0.6)[seed % 3], (1, 6)))
    return out


@pytest.mark.parametrize("inst", _small_instances(), ids=lambda i: i.name)
def test_every_feasible_assignment_satisfies_every_family(inst):
    c = max(max(inst.times), -(-inst.total_time // 3))
    for spec in (Type1(c), Type2(min(3, inst.n))):
        ctx = make_bounds_context(inst, spec)
        cap = c if isinstance(spec, Type1) else ctx.c_upper
        m_max = ctx.n_stations
        configs = all_configs()
        seen = 0
        for a in enumerate_assignments(inst, cap, m_max):
            p = integer_point(inst, a.station_of, spec, ctx)
            ps = convert_impulse_to_step(p, ctx.n_stations, inst.tasks)
            for cfg in configs:
                point = ps if cfg.variable_kind == "step" else p
                rep = check_point(point, inst, spec, cfg, ctx)
                assert rep.satisfied, (spec, cfg.label, a.station_of, rep.violated_families())
            seen += 1
            if seen >= 150:
                break
        assert seen > 0


occupancy = st.lists(st.integers(0, 8), min_size=3, max_size=3).filter(lambda v: sum(v) > 0)


def _point(rows):
    x = {}
    for i, row in enumerate(rows, start=1):
        tot = sum(row)
        for s, v in enumerate(row, start=1):
            if v:
                x[(s, i)] = v / tot
    return FractionalPoint(x)


@settings(max_examples=300, deadline=None)
@given(st.lists(occupancy, min_size=3, max_size=3))
def test_implications_on_occurrence_points(rows):
    inst = Instance((1, 1, 1), ((1, 2), (2, 3)))
    ctx = make_bounds_context(inst, Type2(3))
    rep = check_point(_point(rows), inst, Type2(3), ["PA", "TS", "BW", "RC1", "RC2"], ctx, tol=1e-9)
    if rep["RC2"].satisfied:
        assert rep["PA"].satisfied and rep["TS"].satisfied and rep["BW"].satisfied
    if rep["BW"].satisfied:
        assert rep["RC1"].satisfied
    assert rep["PA"].satisfied == rep["TS"].satisfied


@pytest.mark.parametrize("spec", [Type1(6), Type2(3)], ids=str)
def test_levels_nest(spec):
    """An LP optimum at level k+1 is feasible for the level-k rows."""
    ctx = make_bounds_context(diamond(), spec)
    for fam in ("PA", "BW", "RC2"):
        for k in (1, 2, 3):
            m = build_model(diamond(), spec, impulse(fam, k + 1), ctx)
            sol = solve_lp(m)
            p = m.point(sol.values)
            rep = check_point(p, diamond(), spec, impulse(fam, k), ctx, tol=1e-7)
            assert rep.satisfied, (fam, k, rep.violated_families())


def test_non_rc2_vertex_may_break_step_precedence():
    # an occurrence-feasible PA point whose prefix sums invert on one arc
    ctx = make_bounds_context(PAIR, Type2(3))
    dom1 = FractionalPoint({(1, 1): 0.5, (2, 1): 0.5, (1, 2): 0.75, (3, 2): 0.25})
    assert check_point(dom1, PAIR, Type2(3), "PA", ctx).satisfied
    sc = check_point(convert_impulse_to_step(dom1, 3), PAIR, Type2(3), "SC", ctx)
    assert not sc.satisfied
