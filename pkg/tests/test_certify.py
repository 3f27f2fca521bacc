import dataclasses

import pytest
from hypothesis import given, strategies as st

import oracles
from generators import FAMILY4, RUNNING_U, S1, S2, random_query
from trieset.certify import MEMBER, Certificate, Interval, compute_delta, compute_xi, validate

RUNNING_SPANS = [(0, 1), (2, 2), (3, 4), (5, 6), (7, 7), (8, 11), (12, 12), (13, 15)]


def test_running_example_delta():
    delta, cert = compute_delta([S1, S2], RUNNING_U)
    assert delta == 8
    assert cert.spans() == RUNNING_SPANS
    members = [iv.lo for iv in cert.intervals if iv.is_member]
    assert members == [7, 12]
    assert validate(cert, [S1, S2])


def test_run_family_values():
    xi, xcert = compute_xi(FAMILY4, RUNNING_U)
    delta, dcert = compute_delta(FAMILY4, RUNNING_U)
    result = oracles.kway_merge(FAMILY4)
    assert xi == 5
    assert xcert.spans() == [(0, 7), (8, 9), (10, 10), (11, 14), (15, 15)]
    assert (xi, len(result), delta) == (5, 6, 9)
    assert xi < len(result) < delta
    assert validate(xcert, FAMILY4) and validate(dcert, FAMILY4)


def test_identical_sets():
    xs = [2, 3, 9]
    delta, cert = compute_delta([xs, xs], 12)
    assert sum(iv.is_member for iv in cert.intervals) == 3
    assert delta == 6  # [0..1] 2 3 [4..8] 9 [10..11]
    xi, _ = compute_xi([xs, xs], 12)
    assert xi == 5


def test_exhausted_set_closes_at_universe_end():
    delta, cert = compute_delta([[0, 1], [1]], 8)
    # both sets are exhausted after 1; the tie goes to the lower index
    assert cert.intervals == (Interval(0, 0, 1), Interval(1, 1, MEMBER), Interval(2, 7, 0))
    assert delta == 3
    assert validate(cert, [[0, 1], [1]])


def test_k_must_be_at_least_two():
    with pytest.raises(ValueError):
        compute_delta([S1], 16)


def _mutants(cert, u):
    ivs = list(cert.intervals)
    for i, iv in enumerate(ivs):
        if not iv.is_member and len(ivs) > 1:
            # relabel the eliminator with every other set index
            for other in range(-1, 4):
                if other != iv.label:
                    yield ivs[:i] + [dataclasses.replace(iv, label=other)] + ivs[i + 1:]
        if iv.hi + 1 < u and i + 1 < len(ivs):
            nxt = ivs[i + 1]
            if len(nxt) > 1:
                # move the boundary right by one
                yield ivs[:i] + [dataclasses.replace(iv, hi=iv.hi + 1),
                                 dataclasses.replace(nxt, lo=nxt.lo + 1)] + ivs[i + 2:]
    if len(ivs) > 1:
        yield ivs[:-1]                                   # gap at the end
        yield ivs[1:]                                    # gap at the start
        yield [dataclasses.replace(ivs[0], hi=ivs[1].hi)] + ivs[2:]   # merge first two


def test_validator_rejects_mutations(rng):
    checked = 0
    for _ in range(150):
        u = int(rng.integers(8, 65))
        sets = random_query(rng, u, int(rng.integers(2, 5)), max_n=12)
        for compute in (compute_delta, compute_xi):
            _, cert = compute(sets, u)
            assert validate(cert, sets)
            for ivs in _mutants(cert, u):
                mutant = Certificate(cert.kind, u, tuple(ivs))
                # a mutation may land on another valid certificate
                assert validate(mutant, sets) == _brute_valid(mutant, sets)
                checked += not validate(mutant, sets)
    assert checked > 500


def _brute_valid(cert, sets):
    covered = []
    for iv in cert.intervals:
        covered.extend(range(iv.lo, iv.hi + 1))
        span = set(range(iv.lo, iv.hi + 1))
        if iv.is_member:
            if not all(span <= set(s) for s in sets):
                return False
            if cert.kind == "delta" and len(span) != 1:
                return False
        elif not 0 <= iv.label < len(sets) or span & set(sets[iv.label]):
            return False
    return covered == list(range(cert.u))


def test_delta_mode_rejects_wide_member_interval():
    cert = Certificate("delta", 4, (Interval(0, 1, MEMBER), Interval(2, 3, 0)))
    assert not validate(cert, [[0, 1], [0, 1, 2]])
    assert validate(Certificate("xi", 4, cert.intervals), [[0, 1], [0, 1, 2]])


def test_greedy_matches_exhaustive_minimum(rng):
    for _ in range(300):
        u = int(rng.integers(2, 65))
        k = int(rng.integers(2, 5))
        sets = random_query(rng, u, k, max_n=16)
        sets = [s[:16] for s in sets]
        assert compute_delta(sets, u)[0] == oracles.min_certificate(sets, u)
        assert compute_xi(sets, u)[0] == oracles.min_certificate(sets, u, merge_runs=True)


@given(st.integers(2, 40).flatmap(lambda u: st.tuples(
    st.just(u), st.lists(st.sets(st.integers(0, u - 1)), min_size=2, max_size=4))))
def test_certificate_properties(case):
    u, raw = case
    sets = [sorted(s) for s in raw]
    delta, dcert = compute_delta(sets, u)
    xi, xcert = compute_xi(sets, u)
    assert validate(dcert, sets) and validate(xcert, sets)
    assert xi <= delta
    assert len(oracles.kway_merge(sets)) <= delta
    assert delta == oracles.min_certificate(sets, u)
    assert _brute_valid(dcert, sets) and _brute_valid(xcert, sets)
