import itertools
import json
import warnings

import pytest
from conftest import brute_force_zero_sum, brute_force_zero_sum_free

from zerosum import (
    Certificate,
    Group,
    ResourceCapError,
    Sequence,
    compute_davenport,
    compute_s_exact,
    find_fixed_length_zero_sum,
    has_short_zero_sum,
    verify_certificate,
)
from zerosum.constructions import kubertin_lower_bound
from zerosum.sequences import random_sequence
from zerosum.solver import has_zero_sum_of_length, is_zero_sum_free, subset_sums


def multisets(G, max_len):
    for n in range(max_len + 1):
        for combo in itertools.combinations_with_replacement(G.elements(), n):
            yield Sequence.from_elements(G, combo)


# -- find_fixed_length_zero_sum ---------------------------------------------


def test_find_all_zero():
    G = Group.parse("3^2")
    for L in range(6):
        cert = find_fixed_length_zero_sum(Sequence.power(G.zero, L), L)
        assert cert.witness == Sequence.power(G.zero, L)
        assert verify_certificate(cert)


def test_find_kubertin_none():
    for n, r, k in [(2, 2, 1), (3, 2, 2), (4, 3, 1), (5, 2, 3)]:
        assert find_fixed_length_zero_sum(kubertin_lower_bound(n, r, k), k * n) is None


def test_find_matches_brute_force_c2_2(rng):
    G = Group.parse("2^2")
    for _ in range(200):
        S = random_sequence(G, 6, rng)
        assert (find_fixed_length_zero_sum(S, 2) is not None) == brute_force_zero_sum(G, S, 2)


@pytest.mark.parametrize("desc", ["2^2", "3"])
def test_completeness_tiny(desc):
    G = Group.parse(desc)
    count = 0
    for S in multisets(G, 7):
        for L in range(0, len(S) + 2):
            cert = find_fixed_length_zero_sum(S, L)
            expected = L <= len(S) and (L == 0 or brute_force_zero_sum(G, S, L))
            assert (cert is not None) == expected, (S, L)
            if cert is not None:
                assert verify_certificate(cert)
            count += 1
    assert count > 300


def test_soundness_fuzz(rng):
    groups = [Group.parse(d) for d in ("2", "5", "2^2", "6", "2,4", "3^2", "2^3", "4^2", "2,6", "3^3")]
    found = 0
    for _ in range(10_000):
        G = rng.choice(groups)
        S = random_sequence(G, rng.randrange(0, 16), rng)
        L = rng.randrange(0, 12)
        cert = find_fixed_length_zero_sum(S, L)
        if cert is not None:
            found += 1
            assert verify_certificate(cert), (S, L)
    assert found > 1000


def test_monotone_under_supersequence(rng):
    G = Group.parse("3^2")
    for _ in range(300):
        S = random_sequence(G, rng.randrange(3, 10), rng)
        if find_fixed_length_zero_sum(S, 3) is None:
            continue
        bigger = S.concat(random_sequence(G, rng.randrange(1, 5), rng))
        assert find_fixed_length_zero_sum(bigger, 3) is not None


def test_find_deterministic(rng):
    G = Group.parse("2,4")
    S = random_sequence(G, 14, rng)
    a = find_fixed_length_zero_sum(S, 4)
    b = find_fixed_length_zero_sum(Sequence.from_json(S.to_json()), 4)
    assert a.witness == b.witness


def test_find_edge_cases():
    G = Group.parse("4")
    S = Sequence.from_coords(G, [(1,), (3,)])
    assert find_fixed_length_zero_sum(S, 3) is None
    assert len(find_fixed_length_zero_sum(S, 0).witness) == 0
    with pytest.raises(ValueError):
        find_fixed_length_zero_sum(S, -1)


def test_find_resource_cap():
    G = Group.parse("2^4")
    S = Sequence.from_elements(G, G.elements())
    with pytest.raises(ResourceCapError, match="cells"):
        find_fixed_length_zero_sum(S, 10, max_cells=100)


# -- short zero sums and Davenport ---------------------------------------------


def test_has_short_zero_sum_examples():
    G = Group.parse("3^2")
    S = Sequence.from_coords(G, [(1, 0), (0, 0)])
    assert has_short_zero_sum(S).witness == Sequence.power(G.zero, 1)
    T = compute_davenport(G).extremal_example
    assert len(T) == 4
    assert has_short_zero_sum(T) is None
    C2 = Group.parse("2")
    S2 = Sequence.from_coords(C2, [(1,), (1,), (0,)])
    assert len(has_short_zero_sum(S2.remove(Sequence.power(C2.zero, 1))).witness) == 2


def test_zero_sum_free_helpers():
    G = Group.parse("5")
    S = Sequence.power(G.element((1,)), 4)
    assert is_zero_sum_free(S)
    sums = subset_sums(S)  # non-empty subsets only
    assert sums.sum() == 4 and not sums[0]
    assert has_zero_sum_of_length(S.concat(Sequence.power(G.element((1,)), 1)), 5)


@pytest.mark.parametrize("n", range(1, 9))
def test_davenport_cyclic(n):
    res = compute_davenport(Group.cyclic_power(n, 1))
    assert res.value == n
    assert len(res.extremal_example) == n - 1
    assert res.target_length is None


def test_davenport_examples():
    assert compute_davenport(Group.parse("3^2")).value == 5
    assert compute_davenport(Group.parse("6")).value == 6
    assert compute_davenport(Group.parse("2,6")).value == 7


@pytest.mark.parametrize("desc", ["2^2", "2^3", "3^2", "2,4", "2,6", "4^2", "3,6"])
def test_davenport_extremal_example_independent(desc):
    G = Group.parse(desc)
    res = compute_davenport(G)
    T = res.extremal_example
    assert len(T) == res.value - 1
    assert brute_force_zero_sum_free(G, T)


def test_davenport_without_symmetry_agrees():
    for desc in ("2^3", "3^2", "2,4", "6"):
        G = Group.parse(desc)
        assert compute_davenport(G, symmetry=False).value == compute_davenport(G).value


def test_davenport_cap():
    with pytest.raises(ResourceCapError, match="formula"):
        compute_davenport(Group.parse("3^4"))
    with pytest.raises(ResourceCapError):
        compute_davenport(Group.parse("2,2,4"), cap=8)


# -- s_L ------------------------------------------------------------------------


@pytest.mark.parametrize(
    "desc,L,value",
    [("2", 2, 3), ("2^3", 2, 9), ("2^2", 4, 6), ("3", 3, 5), ("4", 4, 7), ("2", 4, 5), ("2^2", 2, 5),
     ("2^3", 4, 7), ("3", 6, 8), ("2,4", 4, 9)],  # s(C_m + C_n) = 2m + 2n - 3
)
def test_s_exact_examples(desc, L, value):
    G = Group.parse(desc)
    res = compute_s_exact(G, L)
    assert res.value == value
    T = res.extremal_example
    assert len(T) == value - 1
    assert find_fixed_length_zero_sum(T, L) is None
    if len(T) <= 12:
        assert not brute_force_zero_sum(G, T, L)


@pytest.mark.parametrize("n", range(2, 7))
def test_egz_cyclic(n):
    assert compute_s_exact(Group.cyclic_power(n, 1), n).value == 2 * n - 1


def test_s_exact_symmetry_off_agrees():
    for desc, L in [("2^2", 2), ("3", 3), ("2,4", 4), ("2^3", 4)]:
        G = Group.parse(desc)
        assert compute_s_exact(G, L, symmetry=False).value == compute_s_exact(G, L).value


def test_s_exact_trivial_group():
    res = compute_s_exact(Group.parse("1"), 3)
    assert res.value == 3


def test_s_exact_cap_partial_bound():
    with pytest.raises(ResourceCapError) as info:
        compute_s_exact(Group.parse("3^3"), 3, max_states=50)
    assert info.value.partial_lower_bound >= 3 + 7 - 1
    with pytest.raises(ResourceCapError):
        compute_s_exact(Group.parse("2^7"), 2)


def test_s_exact_non_multiple_warns():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        with pytest.raises(ResourceCapError):
            compute_s_exact(Group.parse("4"), 2)
    assert any("not a multiple" in str(w.message) for w in caught)


# -- certificates ---------------------------------------------------------------


def test_verify_certificate_violations():
    G = Group.parse("3")
    g = G.element((1,))
    base = Sequence.power(g, 3)
    good = Certificate(base, Sequence.power(g, 3), 3)
    assert verify_certificate(good)
    wrong_len = Certificate(base, Sequence.power(g, 3), 2)
    nonzero = Certificate(Sequence.power(g, 4), Sequence.power(g, 2), 2)
    not_sub = Certificate(Sequence.power(g, 2), Sequence.power(g, 3), 3)
    for cert, word in [(wrong_len, "length"), (nonzero, "sum"), (not_sub, "occurs")]:
        res = verify_certificate(cert)
        assert not res and word in res.reason
    other = Certificate(base, Sequence.empty(Group.parse("2")), 0)
    assert not verify_certificate(other)


def test_certificate_json_roundtrip(rng):
    G = Group.parse("2,4")
    cert = find_fixed_length_zero_sum(random_sequence(G, 12, rng), 4)
    data = json.loads(json.dumps(cert.to_json()))
    assert data["verified"] is True
    again = Certificate.from_json(data)
    assert again == cert
