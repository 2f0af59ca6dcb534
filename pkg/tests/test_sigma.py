import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracle
from gaars import hhs, sigma
from gaars.errors import (
    DuplicateStatement,
    InvalidChallenge,
    LengthMismatch,
    NoMatchingSession,
    StatementNotInRing,
    WitnessNotInRing,
)
from gaars.rng import Rng
from gaars.structures import Commitment, Response


def _example(tiny, ex):
    return sigma.commit_with(tiny, ex["E_m"], ex["ring"], ex["sks"][0], ex["deltas"],
                             ex["delta_primes"], ex["b"], ex["tau"])


def test_commit_example(tiny, example):
    com, st_ = _example(tiny, example)
    assert com.alphas == (12, 18)
    assert com.betas == (3, 2)
    assert com.gammas == (16, 18)
    assert com.e_open == 4
    assert com.e_check == 2
    assert st_.l == 4
    assert st_.k == 0
    ref = oracle.honest_commit(8, [9, 13], 5, [2, 4], [3, 2], 6, [0, 1])
    assert ref == ([12, 18], [3, 2], [16, 18], 4, 2, 4)


def test_commit_permutes_gammas(tiny, example):
    example["tau"] = (1, 0)
    com, _ = _example(tiny, example)
    assert com.gammas == (18, 16)


def test_commit_preconditions(tiny):
    with pytest.raises(DuplicateStatement):
        sigma.commit(tiny, 8, (9, 9), 5, Rng(1))
    with pytest.raises(WitnessNotInRing):
        sigma.commit(tiny, 8, (9, 13), 3, Rng(1))
    with pytest.raises(LengthMismatch):
        sigma.commit(tiny, 8, (), 5, Rng(1))


def test_single_member_ring(tiny):
    for seed in range(20):
        com, _ = sigma.commit(tiny, 8, (9,), 5, Rng(seed))
        assert sigma.open(tiny, 3, (9,), com) == 9


def test_respond_examples(tiny, example):
    _, st_ = _example(tiny, example)
    assert sigma.respond(st_, 4) == Response.of_l(4)
    assert oracle.mul(2, 3, 6, 5) == 4
    assert sigma.respond(st_, 3) == Response.of_b(6)
    assert sigma.respond(st_, 1) == Response.deltas((2, 4))
    assert sigma.respond(st_, 2) == Response.delta_primes((3, 2))
    for bad in (0, 5, "1"):
        with pytest.raises(InvalidChallenge):
            sigma.respond(st_, bad)


def test_verify_example(tiny, example):
    com, st_ = _example(tiny, example)
    for ch in (1, 2, 3, 4):
        assert sigma.verify(tiny, 8, (9, 13), com, ch, sigma.respond(st_, ch))
    assert tiny.act(4, 8) == 2 == com.e_check
    assert tiny.act(4, 2) == 16 and 16 in com.gammas


def test_verify_rejects_wrong_variant(tiny, example):
    com, st_ = _example(tiny, example)
    assert not sigma.verify(tiny, 8, (9, 13), com, 1, sigma.respond(st_, 2))
    assert not sigma.verify(tiny, 8, (9, 13), com, 5, sigma.respond(st_, 4))


def test_verify_tampered_check(tiny, example):
    com, st_ = _example(tiny, example)
    # e_check = b * (r * E0) for a fresh r breaks the challenge-4 equation
    for r in tiny.group_elements():
        e_check = tiny.act(6, tiny.act(r, 2))
        bad = Commitment(com.alphas, com.betas, com.gammas, com.e_open, e_check)
        assert sigma.verify(tiny, 8, (9, 13), bad, 4, sigma.respond(st_, 4)) == (e_check == 2)


def test_open_example(tiny, example):
    com, _ = _example(tiny, example)
    assert tiny.act(3, 3) == 4 == com.e_open
    assert sigma.open(tiny, 3, (9, 13), com) == 9


def test_open_with_random_e_open(tiny, example):
    com, _ = _example(tiny, example)
    misses = 0
    for r in tiny.group_elements():
        bad = Commitment(com.alphas, com.betas, com.gammas, tiny.act(r, 2), com.e_check)
        misses += sigma.open(tiny, 3, (9, 13), bad) is None
    # e_open is uniform over the q-1 = 10 set elements; two of them hit a beta
    assert misses == 8


def test_open_length_mismatch(tiny, example):
    com, _ = _example(tiny, example)
    with pytest.raises(LengthMismatch):
        sigma.open(tiny, 3, (9, 13, 4), com)


def test_open_ignores_gamma_order(tiny, example):
    com, _ = _example(tiny, example)
    swapped = Commitment(com.alphas, com.betas, com.gammas[::-1], com.e_open, com.e_check)
    assert sigma.open(tiny, 3, (9, 13), swapped) == sigma.open(tiny, 3, (9, 13), com)


def test_simulate_verifies_and_opens(tiny):
    ring = (9, 13, 4)
    for seed in range(200):
        rng = Rng(seed)
        target = ring[seed % 3]
        com, ch, resp = sigma.simulate(tiny, 8, ring, target, rng)
        assert sigma.verify(tiny, 8, ring, com, ch, resp)
        assert sigma.open(tiny, 3, ring, com) == target


def test_simulate_forced_challenge(tiny):
    for seed in range(50):
        com, ch, resp = sigma.simulate(tiny, 8, (9, 13), 13, Rng(seed), ch=3)
        assert ch == 3 and resp.challenge == 3
        assert sigma.open(tiny, 3, (9, 13), com) == 13
    with pytest.raises(StatementNotInRing):
        sigma.simulate(tiny, 8, (9, 13), 4, Rng(1))
    with pytest.raises(InvalidChallenge):
        sigma.simulate(tiny, 8, (9, 13), 9, Rng(1), ch=7)


def test_extract_example(tiny, example):
    com, _ = _example(tiny, example)
    resps = [Response.deltas((2, 4)), Response.delta_primes((3, 2)), Response.of_b(6),
             Response.of_l(4)]
    assert tiny.act(4, 2) == 16 == tiny.act(6, 3)
    assert oracle.mul(4, oracle.inv(oracle.mul(2, 3, 6))) == 5
    assert sigma.extract(tiny, (9, 13), com, resps) == (0, 5)


def test_extract_honest_runs(tiny):
    ring = (9, 13, 4, 3)
    sks = [oracle.solve(2, E) for E in ring]
    for seed in range(300):
        k = seed % 4
        com, st_ = sigma.commit(tiny, 8, ring, sks[k], Rng(seed))
        resps = [sigma.respond(st_, c) for c in (1, 2, 3, 4)]
        assert sigma.extract(tiny, ring, com, resps) == (k, sks[k])


def test_extract_rejects_forged_l(tiny, example):
    com, st_ = _example(tiny, example)
    for r in tiny.group_elements():
        if r == 4:
            continue
        assert not sigma.verify(tiny, 8, (9, 13), com, 4, Response.of_l(r))


def test_extract_needs_all_challenges(tiny, example):
    com, st_ = _example(tiny, example)
    with pytest.raises(ValueError):
        sigma.extract(tiny, (9, 13), com, [sigma.respond(st_, c) for c in (1, 2, 3)])


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(1, 4), k=st.integers(0, 3))
def test_completeness_property(seed, n, k):
    tiny = hhs.tiny()
    rng = Rng(seed)
    ring = [E for E in tiny.set_elements()]
    ring = tuple(ring[i] for i in rng.permutation(len(ring))[:n])
    k %= n
    s = tiny.solve_action_brute(2, ring[k])
    s_m = tiny.sample_group(rng)
    E_m = tiny.act(s_m, 2)
    com, st_ = sigma.commit(tiny, E_m, ring, s, rng)
    assert all(sigma.verify(tiny, E_m, ring, com, c, sigma.respond(st_, c)) for c in (1, 2, 3, 4))
    assert sigma.open(tiny, s_m, ring, com) == ring[k]


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_special_soundness_property(seed):
    """Four accepting transcripts on one commitment always extract the opened key."""
    tiny = hhs.tiny()
    rng = Rng(seed)
    ring = (9, 13, 4)
    com, ch, resp = sigma.simulate(tiny, 8, ring, ring[rng.randbelow(3)], rng)
    resps = []
    for c in (1, 2, 3, 4):
        # any response the verifier accepts for challenge c, found by search
        cands = _accepting(tiny, 8, ring, com, c)
        if not cands:
            return
        resps.append(cands[rng.randbelow(len(cands))])
    k, s = sigma.extract(tiny, ring, com, resps)
    assert tiny.act(s, 2) == ring[k] == sigma.open(tiny, 3, ring, com)


def _accepting(tiny, E_m, ring, com, c):
    G = list(tiny.group_elements())
    if c in (1, 2):
        return [Response(c, v) for v in itertools.product(G, repeat=len(ring))
                if sigma.verify(tiny, E_m, ring, com, c, Response(c, v))]
    return [Response(c, (x,)) for x in G if sigma.verify(tiny, E_m, ring, com, c, Response(c, (x,)))]
