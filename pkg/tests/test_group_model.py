import json
import re

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from paphelp import (
    GroupRingElement,
    TableError,
    build_abelian_table,
    classes_of_order,
    fixture_names,
    load_fixture,
    load_table,
    power_class,
    validate_table,
)
from paphelp.group_model import group_ring_power, table_from_dict, table_to_dict

from conftest import get_table
from oracles import complex_values, cyclic_power_convolution


def test_bundled_fixtures_present():
    assert set(fixture_names()) >= {
        "S3", "D8", "Q8", "A4", "S4", "SL_2_3", "C7xC3", "A5", "SmallGroup_216_153", "PSL_2_19",
    }


def test_orthogonality_float_oracle(any_fixture):
    t = any_fixture
    M = np.array([complex_values(t, 0, i) for i in range(len(t.characters))])
    sizes = np.array([c.size for c in t.classes])
    gram = (M * sizes) @ M.conj().T
    assert np.allclose(gram, t.order * np.eye(len(M)), atol=1e-8)
    cols = M.conj().T @ M
    assert np.allclose(cols, np.diag([c.centralizer_order for c in t.classes]), atol=1e-8)


def test_class_invariants(any_fixture):
    t = any_fixture
    assert t.classes[0].element_order == 1 and t.classes[0].size == 1
    for c in t.classes:
        assert c.size * c.centralizer_order == t.order
        assert t.exponent % c.element_order == 0
    assert sum(c.size for c in t.classes) == t.order
    assert sum(d * d for d in t.degrees) == t.order


def test_a5_fixture():
    t = get_table("A5")
    assert t.num_classes == 5
    assert t.exponent == 30
    assert sorted(t.degrees) == [1, 3, 3, 4, 5]
    assert sorted(c.size for c in t.classes) == [1, 12, 12, 15, 20]
    assert len(classes_of_order(t, 5)) == 2
    assert classes_of_order(t, 4) == []
    assert classes_of_order(t, 1) == [0]


def _a5_doc():
    return table_to_dict(get_table("A5"))


def test_round_trip_document():
    doc = _a5_doc()
    again = table_to_dict(table_from_dict(json.loads(json.dumps(doc))))
    assert again == doc


def test_corrupted_value_names_pair():
    doc = _a5_doc()
    doc["characters"][2][1] = 5
    with pytest.raises(TableError, match=r"orthogonality fails for characters \((\d+), (\d+)\)") as info:
        table_from_dict(doc)
    i, j = map(int, re.search(r"\((\d+), (\d+)\)", str(info.value)).groups())
    assert 2 in (i, j)


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda d: d.pop("exponent"), "missing key"),
        (lambda d: d["classes"][1].update(size=30), "sum to the group order"),
        (lambda d: d["power_maps"].pop("5"), "missing power map"),
        (lambda d: d["power_maps"]["2"].__setitem__(1, 2), "power map 2"),
    ],
)
def test_schema_errors(mutate, message):
    doc = _a5_doc()
    mutate(doc)
    with pytest.raises(TableError, match=message):
        table_from_dict(doc)


def test_load_table_from_path(tmp_path):
    path = tmp_path / "a5.json"
    path.write_text(json.dumps(_a5_doc()))
    t = load_table(path)
    assert t.name == "A5"


def test_small_group_216_names_and_powers():
    t = get_table("SmallGroup_216_153")
    names = set(t.class_names())
    assert {"3a", "3c", "3d", "3e", "6a"} <= names
    n = t.class_by_name
    assert power_class(t, n("3a"), 2) == n("3c")
    assert power_class(t, n("6a"), 2) == n("3c")
    assert power_class(t, n("3d"), 2) == n("3e")
    assert t.order == 216 and t.num_classes == 10


def test_psl_fixture():
    t = get_table("PSL_2_19")
    assert t.num_classes == 12
    assert t.order == 3420
    assert 19 in t.brauer
    assert len(t.brauer[19].characters) == len(t.brauer[19].regular_classes)


def test_power_class_examples(any_fixture):
    t = any_fixture
    for k in range(-3, 8):
        assert power_class(t, 0, k) == 0
    for c in t.classes:
        assert power_class(t, c.id, c.element_order) == 0
        assert power_class(t, c.id, 0) == 0
        assert power_class(t, c.id, 1) == c.id


@pytest.mark.parametrize("name", fixture_names())
@settings(max_examples=40, deadline=None)
@given(data=st.data())
def test_power_maps_compose(name, data):
    t = get_table(name)
    c = data.draw(st.integers(0, t.num_classes - 1))
    j = data.draw(st.integers(1, t.exponent))
    k = data.draw(st.integers(1, t.exponent))
    assert power_class(t, c, j * k) == power_class(t, power_class(t, c, j), k)
    m = t.classes[c].element_order
    assert power_class(t, c, k) == power_class(t, c, k + m) == power_class(t, c, k - 3 * m)
    if np.gcd(k, m) == 1:
        assert t.classes[power_class(t, c, k)].element_order == m


def test_abelian_c3():
    t = build_abelian_table([3])
    assert t.num_classes == 3 and len(t.characters) == 3
    assert all(v**3 == 1 for row in t.characters for v in row)


def test_abelian_klein():
    t = build_abelian_table([2, 2])
    assert t.num_classes == 4
    assert all(v == 1 or v == -1 for row in t.characters for v in row)


@pytest.mark.parametrize("factors", [[7], [2, 4], [3, 3], [12], [2, 2, 2]])
def test_abelian_validates(factors):
    t = build_abelian_table(factors)
    with pytest.warns(UserWarning):
        validate_table(t)
    assert t.pap_assumed


def test_pap_assumed_without_prime_index_is_rejected():
    doc = _a5_doc()
    doc["pap_assumed"] = True
    with pytest.raises(TableError, match="no linear character of prime order"):
        table_from_dict(doc)


def test_pap_assumed_warns_about_nilpotency():
    doc = table_to_dict(get_table("S3"))
    doc["pap_assumed"] = True
    with pytest.warns(UserWarning, match="nilpotency"):
        table_from_dict(doc)


def test_group_ring_examples():
    u = GroupRingElement.from_dict([7], {0: 1, 1: -1, 2: 1})
    assert group_ring_power(u, 1).coeffs == u.coeffs
    g = GroupRingElement.from_dict([5], {1: 1})
    assert group_ring_power(g, 5).coeffs == GroupRingElement.one([5]).coeffs
    u2 = group_ring_power(u, 2)
    t = build_abelian_table([7])
    oracle = cyclic_power_convolution({0: 1, 1: -1, 2: 1}, 2, 7)
    pa = u2.partial_augmentations(t)
    names = t.class_names()
    # classes are listed in element order g^0 .. g^6
    assert pa == oracle
    assert names[0] == "1a"


elements = st.dictionaries(st.integers(0, 5), st.integers(-3, 3), max_size=4)


@given(elements, st.integers(0, 4), st.integers(0, 4))
@settings(max_examples=60, deadline=None)
def test_group_ring_power_multiplicative(coeffs, j, k):
    x = GroupRingElement.from_dict([6], coeffs)
    lhs = group_ring_power(x, j + k)
    rhs = group_ring_power(x, j) * group_ring_power(x, k)
    assert lhs.coeffs == rhs.coeffs
    assert lhs.augmentation() == x.augmentation() ** (j + k)
    assert lhs.partial_augmentations(build_abelian_table([6])) == cyclic_power_convolution(coeffs, j + k, 6)
