import pytest
from conftest import brute_force_zero_sum

from zerosum import Group, Sequence, ValidationError, compute_davenport, find_fixed_length_zero_sum
from zerosum.constructions import (
    MAX_CAPS_F3,
    all_elements_sequence,
    doubled_cap_sequence,
    egz_extremal_construction,
    general_construction,
    general_lower_bound,
    kubertin_construction,
    kubertin_lower_bound,
    verify_all_kubertin,
)


def test_kubertin_examples():
    G = Group.parse("2^2")
    S = kubertin_lower_bound(2, 2, 1)
    assert len(S) == 3
    assert S == Sequence.from_coords(G, [(0, 0), (1, 0), (0, 1)])
    T = kubertin_lower_bound(3, 1, 1)
    C3 = Group.parse("3")
    assert T == Sequence.from_coords(C3, [(0,), (0,), (1,), (1,)])
    assert not brute_force_zero_sum(C3, T, 3)


def test_kubertin_box():
    rows = list(verify_all_kubertin(4, 3, 3))
    assert len(rows) == 3 * 3 * 3
    assert all(length_ok and verified for *_, length_ok, verified in rows)


def test_kubertin_brute_force_small():
    for n, r, k in [(2, 2, 1), (2, 2, 2), (3, 2, 1), (2, 3, 1)]:
        S = kubertin_lower_bound(n, r, k)
        assert not brute_force_zero_sum(S.group, S, k * n)


def test_kubertin_validation():
    for bad in [(1, 2, 1), (2, 0, 1), (2, 2, 0)]:
        with pytest.raises(ValidationError):
            kubertin_lower_bound(*bad)


def test_general_lower_bound_examples():
    C3 = Group.parse("3")
    e1 = C3.element((1,))
    S = general_lower_bound(C3, 1, Sequence.power(e1, 2))
    assert S == Sequence(C3, {C3.zero: 2, e1: 2})
    G = Group.parse("2^2")
    T = Sequence.from_coords(G, [(1, 0), (0, 1)])
    c = general_construction(G, 2, T)
    assert len(c.sequence) == 2 * 2 + 3 - 2
    assert c.verify()
    assert not brute_force_zero_sum(G, c.sequence, 4)
    trivial = Group.parse("1")
    assert general_lower_bound(trivial, 3, Sequence.empty(trivial)) == Sequence.power(trivial.zero, 2)


def test_general_lower_bound_rejects():
    G = Group.parse("3")
    with pytest.raises(ValidationError, match="zero-sum free"):
        general_lower_bound(G, 1, Sequence.power(G.element((1,)), 3))
    with pytest.raises(ValidationError):
        general_lower_bound(G, 1, Sequence.empty(Group.parse("2")))


@pytest.mark.parametrize("desc", ["2^2", "3^2", "2,4", "6", "2^3", "4^2"])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_general_lower_bound_from_search(desc, k):
    G = Group.parse(desc)
    D = compute_davenport(G)
    c = general_construction(G, k, D.extremal_example)
    assert len(c.sequence) == k * G.exponent + D.value - 2
    assert c.verify()


def test_caps():
    for r, pts in MAX_CAPS_F3.items():
        assert len(pts) == [2, 4, 9, 20][r - 1]
        assert len(set(pts)) == len(pts)
        S = doubled_cap_sequence(r)
        assert len(S) == 2 * len(pts)
        assert find_fixed_length_zero_sum(S, 3) is None
    # independent check for the 9-cap: no three distinct collinear points
    pts = MAX_CAPS_F3[3]
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            third = tuple((-a - b) % 3 for a, b in zip(pts[i], pts[j]))
            assert third not in pts or third in (pts[i], pts[j])
    with pytest.raises(ValidationError):
        doubled_cap_sequence(5)


def test_all_elements():
    S = all_elements_sequence(3)
    assert len(S) == 8
    assert find_fixed_length_zero_sum(S, 2) is None


def test_egz_extremal():
    for desc, L, length in [("5", 5, 8), ("2^4", 2, 16), ("3^3", 3, 18), ("3^4", 3, 40)]:
        c = egz_extremal_construction(Group.parse(desc))
        assert c.no_zero_sum_of_length == L
        assert len(c.sequence) == length
        assert c.verify()
    with pytest.raises(ValidationError):
        egz_extremal_construction(Group.parse("5^2"))


def test_construction_json():
    c = kubertin_construction(3, 2, 1)
    data = c.to_json(verified=c.verify())
    assert data["claim"] == {"no_zero_sum_of_length": 3, "verified": True}
    assert Sequence.from_json(data) == c.sequence
    assert c.certified_lower_bound == (1 + 2) * 3 - 2
