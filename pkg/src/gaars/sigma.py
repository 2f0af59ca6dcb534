"""Openable OR-sigma protocol over a group action.

A prover holding ``s`` with ``act(s, E0) = ring[k]`` commits to

* ``alphas[i] = D_i * ring[i]``, ``betas[i] = D'_i * alphas[i]``,
* ``gammas = tau(b * betas)`` (shuffled),
* ``e_open = D_k D'_k s * E_m`` and ``e_check = b * e_open``,

and answers challenge 1..4 with the deltas, the delta primes, ``b``, or
``l = D_k D'_k b s``.  Whoever knows ``s_m`` with ``act(s_m, E0) = E_m``
can tell which ring member produced the commitment, because
``act(s_m, betas[k]) == e_open`` only at the signer's index.

Every randomized entry point has a deterministic ``*_with`` twin taking the
randomness explicitly; the enumeration oracles in the tests drive those.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import (
    DuplicateStatement,
    InvalidChallenge,
    InvalidElement,
    LengthMismatch,
    NoMatchingSession,
    StatementNotInRing,
    WitnessNotInRing,
)
from .structures import CHALLENGES, Commitment, Response


class BetaCollision(Exception):
    """Raised by the deterministic cores when two betas coincide."""


@dataclass(frozen=True)
class SigmaState:
    """Prover secrets between commit and respond.  Single owner; never share."""

    deltas: tuple[int, ...]
    delta_primes: tuple[int, ...]
    b: int
    l: int
    k: int
    tau: tuple[int, ...]


def check_ring(ring: Sequence[int]) -> None:
    if len(ring) < 1:
        raise LengthMismatch("ring must be non-empty")
    if len(set(ring)) != len(ring):
        raise DuplicateStatement("ring contains repeated statements")


def witness_index(action, ring: Sequence[int], s: int) -> int:
    pk = action.act(s, action.base)
    try:
        return ring.index(pk)
    except ValueError:
        raise WitnessNotInRing("no ring member matches the witness") from None


def _permute(values, tau):
    return tuple(values[j] for j in tau)


def _check_tau(tau, n):
    if sorted(tau) != list(range(n)):
        raise ValueError("tau must be a permutation of range(n)")


def commit_with(action, E_m: int, ring: Sequence[int], s: int,
                deltas, delta_primes, b: int, tau) -> tuple[Commitment, SigmaState]:
    """Commitment for fixed randomness.  Raises :class:`BetaCollision`."""
    ring = tuple(ring)
    check_ring(ring)
    k = witness_index(action, ring, s)
    n = len(ring)
    if len(deltas) != n or len(delta_primes) != n:
        raise LengthMismatch("need one delta and one delta prime per ring member")
    _check_tau(tau, n)
    act, compose = action.act, action.compose
    alphas = tuple(act(d, E) for d, E in zip(deltas, ring))
    # beta_i = D'_i * alpha_i = (D_i D'_i) * E_i; the second form reuses
    # the fixed-base table of E_i.
    dd = [compose(d, dp) for d, dp in zip(deltas, delta_primes)]
    betas = tuple(act(x, E) for x, E in zip(dd, ring))
    if len(set(betas)) != n:
        raise BetaCollision
    gammas = tuple(act(compose(x, b), E) for x, E in zip(dd, ring))
    open_exp = compose(dd[k], s)
    l = compose(open_exp, b)
    com = Commitment(alphas, betas, _permute(gammas, tau),
                     act(open_exp, E_m), act(l, E_m))
    st = SigmaState(tuple(deltas), tuple(delta_primes), b, l, k, tuple(tau))
    return com, st


def commit(action, E_m: int, ring: Sequence[int], s: int, rng) -> tuple[Commitment, SigmaState]:
    """Honest commitment.  Colliding betas make the verifier reject, so the
    whole run is re-sampled instead of emitting such a transcript."""
    ring = tuple(ring)
    check_ring(ring)
    witness_index(action, ring, s)
    n = len(ring)
    while True:
        deltas = [action.sample_group(rng) for _ in range(n)]
        delta_primes = [action.sample_group(rng) for _ in range(n)]
        b = action.sample_group(rng)
        tau = rng.permutation(n)
        try:
            return commit_with(action, E_m, ring, s, deltas, delta_primes, b, tau)
        except BetaCollision:
            continue


def respond(st: SigmaState, ch: int) -> Response:
    if ch == 1:
        return Response.deltas(st.deltas)
    if ch == 2:
        return Response.delta_primes(st.delta_primes)
    if ch == 3:
        return Response.of_b(st.b)
    if ch == 4:
        return Response.of_l(st.l)
    raise InvalidChallenge(f"challenge must be one of {CHALLENGES}, got {ch!r}")


def verify(action, E_m: int, ring: Sequence[int], com: Commitment, ch: int,
           resp: Response) -> bool:
    """Accept or reject one transcript.  Never raises on malformed input."""
    try:
        n = len(ring)
        if com.n != n or len(set(ring)) != n or len(set(com.betas)) != n:
            return False
        if resp.challenge != ch:
            return False
        act = action.act
        if ch in (1, 2):
            if len(resp.values) != n:
                return False
            if ch == 1:
                return all(act(d, E) == a for d, E, a in zip(resp.values, ring, com.alphas))
            return all(act(d, a) == bt for d, a, bt in zip(resp.values, com.alphas, com.betas))
        if ch == 3:
            b = resp.scalar
            # multiset equality up to an unknown permutation
            if sorted(act(b, bt) for bt in com.betas) != sorted(com.gammas):
                return False
            return act(b, com.e_open) == com.e_check
        if ch == 4:
            l = resp.scalar
            return act(l, E_m) == com.e_check and act(l, action.base) in com.gammas
        return False
    except (InvalidElement, ValueError, TypeError, AttributeError):
        return False


def open(action, s_m: int, ring: Sequence[int], com: Commitment):
    """Ring member whose beta maps onto ``e_open`` under ``s_m``, else ``None``.

    ``act(s_m, beta) == e_open`` iff ``beta == act(s_m^-1, e_open)``, so one
    action plus a scan replaces ``n`` actions.  The first match in scan order
    wins; with distinct betas there is at most one.
    """
    if len(com.betas) != len(ring):
        raise LengthMismatch(f"commitment has {len(com.betas)} betas for a ring of {len(ring)}")
    target = action.act(action.invert(s_m), com.e_open)
    for i, beta in enumerate(com.betas):
        if beta == target:
            return ring[i]
    return None


def simulate_with(action, E_m: int, ring: Sequence[int], k: int, ch: int, b: int, tau,
                  first, second) -> tuple[Commitment, int, Response]:
    """Simulated transcript for fixed randomness.

    For ``ch == 1`` ``first``/``second`` are the deltas and the free
    exponents ``D``; otherwise they are ``D`` and the delta primes.
    Raises :class:`BetaCollision`.
    """
    ring = tuple(ring)
    n = len(ring)
    if ch not in CHALLENGES:
        raise InvalidChallenge(f"challenge must be one of {CHALLENGES}, got {ch!r}")
    if len(first) != n or len(second) != n:
        raise LengthMismatch("need n values for each randomness vector")
    _check_tau(tau, n)
    act, compose, E0 = action.act, action.compose, action.base
    if ch == 1:
        deltas, ds = first, second
        alphas = tuple(act(d, E) for d, E in zip(deltas, ring))
        betas = tuple(act(compose(d, x), E0) for d, x in zip(deltas, ds))
        open_exp = compose(deltas[k], ds[k])
    else:
        ds, delta_primes = first, second
        alphas = tuple(act(x, E0) for x in ds)
        betas = tuple(act(compose(dp, x), E0) for dp, x in zip(delta_primes, ds))
        open_exp = compose(ds[k], delta_primes[k])
    if len(set(betas)) != n:
        raise BetaCollision
    gammas = tuple(act(b, bt) for bt in betas)
    e_open = act(open_exp, E_m)
    if ch == 4:
        l = compose(open_exp, b)
        e_check = act(l, E_m)
        resp = Response.of_l(l)
    else:
        e_check = act(b, e_open)
        resp = {1: Response.deltas(first), 2: Response.delta_primes(second),
                3: Response.of_b(b)}[ch]
    com = Commitment(alphas, betas, _permute(gammas, tau), e_open, e_check)
    return com, ch, resp


def simulate(action, E_m: int, ring: Sequence[int], E_k: int, rng, ch: int | None = None
             ) -> tuple[Commitment, int, Response]:
    """Witness-free transcript whose ``e_open`` points at ``E_k``.

    The challenge is drawn first unless forced through ``ch``.
    """
    ring = tuple(ring)
    check_ring(ring)
    try:
        k = ring.index(E_k)
    except ValueError:
        raise StatementNotInRing("E_k is not a ring member") from None
    n = len(ring)
    if ch is None:
        ch = 1 + rng.randbelow(4)
    while True:
        b = action.sample_group(rng)
        tau = rng.permutation(n)
        first = [action.sample_group(rng) for _ in range(n)]
        second = [action.sample_group(rng) for _ in range(n)]
        try:
            return simulate_with(action, E_m, ring, k, ch, b, tau, first, second)
        except BetaCollision:
            continue


def _by_challenge(resps) -> dict[int, Response]:
    if isinstance(resps, Mapping):
        items = list(resps.values())
    else:
        items = list(resps)
    out = {r.challenge: r for r in items}
    if sorted(out) != list(CHALLENGES) or len(items) != 4:
        raise InvalidChallenge("extraction needs exactly one response per challenge 1..4")
    return out


def extract(action, ring: Sequence[int], com: Commitment, resps) -> tuple[int, int]:
    """Witness from four accepting responses sharing ``com``.

    Finds ``k`` with ``act(l, E0) == act(b, betas[k])`` and returns
    ``(k, l * (D_k D'_k b)^-1)``.
    """
    r = _by_challenge(resps)
    deltas, delta_primes = r[1].values, r[2].values
    b, l = r[3].scalar, r[4].scalar
    n = len(ring)
    if com.n != n or len(deltas) != n or len(delta_primes) != n:
        raise LengthMismatch("responses do not match the ring size")
    target = action.act(l, action.base)
    for k, beta in enumerate(com.betas):
        if action.act(b, beta) == target:
            s = action.compose(l, action.invert(action.compose(deltas[k], delta_primes[k], b)))
            return k, s
    raise NoMatchingSession("no session index satisfies l*E0 == b*beta_k")
