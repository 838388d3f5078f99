import pytest

from paphelp import build_abelian_table
from paphelp.cyclotomics import divisors
from paphelp.engine import EngineError, compile_constraints, mu_virtual, irr_n, pap_check, pap_expand, trivial_candidate
from paphelp.search import IntegerSystem, ResourceLimitError, enumerate_points
from paphelp.solver import (
    PAPAssumptionError,
    SolverOptions,
    analyze,
    bounding_box,
    enumerate_pap,
    enumerate_standard,
)

from conftest import SMALL_FIXTURES, get_table
from oracles import brute_force

PLAIN = SolverOptions(use_cl_congruences=False, use_folklore_congruences=False)


def test_bounding_box_examples():
    c3 = build_abelian_table([3])
    assert bounding_box(c3, 3) == {1: (-1, 1), 2: (-1, 1)}
    a5 = get_table("A5")
    box = bounding_box(a5, 5)
    assert box[a5.class_by_name("5a")] == (-12, 12)
    assert 0 not in box


def test_c3_order_3():
    c3 = build_abelian_table([3])
    sols = enumerate_standard(c3, 3)
    assert sols.members == sorted([trivial_candidate(c3, 1), trivial_candidate(c3, 2)])
    assert all(sols.is_trivial)


def test_a5_order_6_empty():
    assert len(enumerate_standard(get_table("A5"), 6)) == 0


def test_order_must_divide_exponent():
    with pytest.raises(EngineError):
        enumerate_standard(get_table("A5"), 4)


def test_216_order_6_contains_example():
    g = get_table("SmallGroup_216_153")
    sols = enumerate_standard(g, 6)
    n = g.class_by_name
    target = [0] * g.num_classes
    target[n("3a")] = target[n("6a")] = 1
    target[n("3d")] = -1
    hits = [X for X in sols if list(X.rows[1]) == target and set(X.rows[2]) <= {0, 1}]
    assert hits
    assert all(not pap_check(g, X).ok for X in hits)


def test_solutions_satisfy_every_row(any_fixture):
    t = any_fixture
    for n in divisors(t.exponent):
        if n > 12:
            continue
        system = compile_constraints(t, n)
        for X in enumerate_standard(t, n):
            X.validate(t)
            assert system.violations(X) == []
            for chi in irr_n(t, n):
                for j in range(n):
                    mu = mu_virtual(t, chi, X, j)
                    assert mu.denominator == 1 and mu >= 0


@pytest.mark.parametrize("name", SMALL_FIXTURES)
def test_matches_brute_force(name):
    t = get_table(name)
    memo = {}
    for n in divisors(t.exponent):
        assert set(enumerate_standard(t, n, PLAIN).members) == brute_force(t, n, memo=memo)


def test_congruences_only_shrink():
    t = get_table("S4")
    for n in divisors(t.exponent):
        full = set(enumerate_standard(t, n).members)
        plain = set(enumerate_standard(t, n, PLAIN).members)
        assert full <= plain


def test_group_elements_always_solve(any_fixture):
    t = any_fixture
    for c in t.classes:
        n = c.element_order
        if n > 12:
            continue
        assert trivial_candidate(t, c.id) in enumerate_standard(t, n)
        if t.pap_assumed:
            Y = enumerate_pap(t, n)
            assert any(y.values[c.id] == 1 and sum(map(abs, y.values)) == 1 for y in Y)


@pytest.mark.parametrize("factors", [[6], [12], "D8"])
def test_pap_consistency_equality(factors):
    t = get_table(factors)
    opts = SolverOptions(use_brauer=False)
    for n in divisors(t.exponent):
        expanded = {pap_expand(t, Y) for Y in enumerate_pap(t, n, opts, acknowledge=True)}
        standard = {X for X in enumerate_standard(t, n, opts) if pap_check(t, X).ok}
        assert expanded == standard


def test_pap_requires_assumption():
    with pytest.raises(PAPAssumptionError):
        enumerate_pap(get_table("A5"), 5)
    assert len(enumerate_pap(get_table("A5"), 5, acknowledge=True)) == 2


def test_frobenius_21_pap_nonnegative():
    t = get_table("C7xC3")
    for n in divisors(t.exponent):
        assert all(enumerate_pap(t, n).all_nonnegative)


def test_budget_exhaustion_raises():
    with pytest.raises(ResourceLimitError) as info:
        enumerate_standard(get_table("SmallGroup_216_153"), 3, SolverOptions(budget=5, lp_bounds=False))
    assert info.value.nodes >= 5


def test_parallel_matches_serial():
    t = get_table("SmallGroup_216_153")
    serial = enumerate_standard(t, 3)
    parallel = enumerate_standard(t, 3, SolverOptions(workers=2))
    assert serial.members == parallel.members


def test_lp_bounds_do_not_change_results():
    t = get_table("S4")
    for n in divisors(t.exponent):
        a = enumerate_standard(t, n).members
        b = enumerate_standard(t, n, SolverOptions(lp_bounds=False)).members
        assert a == b


def test_enumerate_points_small_box():
    # x + y = 1, 0 <= x - y + 1 <= 2, x, y in [-2, 2]
    sys = IntegerSystem(A=[[1, 1], [1, -1]], b=[-1, 1], lo=[0, 0], hi=[0, 2], box_lo=[-2, -2], box_hi=[2, 2])
    brute = sorted(
        (x, y) for x in range(-2, 3) for y in range(-2, 3) if x + y == 1 and 0 <= x - y + 1 <= 2
    )
    assert enumerate_points(sys) == brute
    cong = IntegerSystem([[1, 1]], [-1], [0], [0], [-2, -2], [2, 2], congruences=[([1, 0], 0, 2)])
    assert enumerate_points(cong) == [(0, 1), (2, -1)]


def test_analyze_c6():
    report = analyze(build_abelian_table([6]))
    assert [o.n for o in report.orders] == [1, 2, 3, 6]
    assert all(o.zc_by_help == "proven" for o in report.orders)


def test_analyze_a5():
    report = analyze(get_table("A5"))
    for n in (2, 3, 5):
        o = report.order(n)
        assert o.zc_by_help == "proven" and all(o.solutions.is_trivial)
    for n in (6, 10, 15, 30):
        assert report.order(n).count == 0 and report.order(n).order_excluded
    assert report.spectrum_summary()["verdict"] == "proven"
    assert report.prime_graph_summary()["unit_edges"] == report.prime_graph_summary()["group_edges"]


def test_analyze_216_order_6():
    report = analyze(get_table("SmallGroup_216_153"), [6])
    o = report.order(6)
    assert o.pap_by_help == "open"
    assert o.genbp == "holds"
    assert o.zc_by_help == "open"


def test_analyze_records_resource_errors():
    report = analyze(get_table("SmallGroup_216_153"), [3], SolverOptions(budget=5, lp_bounds=False))
    assert report.order(3).error
    assert 3 in report.unit_spectrum()


def test_analyze_marks_non_divisors():
    report = analyze(get_table("A5"), [7])
    o = report.order(7)
    assert o.order_excluded and o.count == 0
    assert report.provenance[7] == {"excluded_by": "exponent"}
