"""Accountable ring signature: parallel openable sigma sessions + Fiat-Shamir.

A signature over ring ``S`` runs ``t = 2 * lam * |S|`` independent sessions,
derives all challenges from one hash of the commitments and the message, and
opens to the majority of the per-session openings.  The judge extension lets
the opener prove that at least ``lam`` sessions open to the claimed member,
using ``iota = lam`` Schnorr-style repetitions per session.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Sequence

from . import codec, sigma
from .errors import (
    DuplicateStatement,
    InvalidChallenge,
    InvalidElement,
    LengthMismatch,
    StatementNotInRing,
)
from .rng import as_rng
from .structures import (
    Commitment,
    JudgeCommitment,
    JudgeEntry,
    JudgeProof,
    Signature,
)

__all__ = [
    "Params", "KeyPair", "MasterKeyPair", "JudgeState",
    "Signature", "JudgeCommitment", "JudgeEntry", "JudgeProof",
    "keygen", "mkeygen", "sign", "verify", "maj", "open",
    "jcommit", "jcommit_with", "jrespond", "jverify", "open_with_proof", "judge",
]

# (action, coms, message, t) -> challenge vector
Challenger = Callable[..., Sequence[int]]


@dataclass(frozen=True)
class Params:
    lam: int

    def __post_init__(self):
        if not isinstance(self.lam, int) or self.lam < 1:
            raise ValueError("lambda must be a positive integer")

    def sessions(self, ring_size: int) -> int:
        return 2 * self.lam * ring_size

    @property
    def iota(self) -> int:
        return self.lam


@dataclass(frozen=True)
class KeyPair:
    pk: int
    sk: int


@dataclass(frozen=True)
class MasterKeyPair:
    mpk: int
    msk: int


@dataclass(frozen=True)
class JudgeState:
    b_prime: int
    msk: int
    l_prime: int


def keygen(action, rng=None) -> KeyPair:
    sk = action.sample_group(as_rng(rng))
    return KeyPair(action.act(sk, action.base), sk)


def mkeygen(action, rng=None) -> MasterKeyPair:
    msk = action.sample_group(as_rng(rng))
    return MasterKeyPair(action.act(msk, action.base), msk)


def _checked_ring(action, mpk, ring) -> tuple[int, ...]:
    ring = tuple(ring)
    sigma.check_ring(ring)
    action.check_set_element(mpk)
    for pk in ring:
        action.check_set_element(pk)
    return ring


def sign(action, mpk: int, ring: Sequence[int], m: bytes, sk: int, params: Params,
         rng=None, *, oracle: Challenger | None = None) -> Signature:
    """Sign ``m`` on behalf of ``ring``.

    Session ``j`` draws from ``rng.fork("session", j)``, so the result does
    not depend on the order sessions are computed in.
    """
    ring = _checked_ring(action, mpk, ring)
    sigma.witness_index(action, ring, sk)
    rng = as_rng(rng)
    oracle = codec.derive_challenges if oracle is None else oracle
    t = params.sessions(len(ring))
    action.precompute(mpk, *ring)
    runs = [sigma.commit(action, mpk, ring, sk, rng.fork("session", j)) for j in range(t)]
    coms = tuple(com for com, _ in runs)
    chs = tuple(oracle(action, coms, m, t))
    resps = tuple(sigma.respond(st, ch) for (_, st), ch in zip(runs, chs))
    return Signature(coms, chs, resps)


def verify(action, mpk: int, ring: Sequence[int], m: bytes, sig: Signature, params: Params,
           *, oracle: Challenger | None = None) -> bool:
    oracle = codec.derive_challenges if oracle is None else oracle
    try:
        ring = _checked_ring(action, mpk, ring)
        t = params.sessions(len(ring))
        if sig.t != t:
            return False
        if tuple(oracle(action, sig.coms, m, t)) != tuple(sig.chs):
            return False
        action.precompute(mpk, *ring)
        return all(sigma.verify(action, mpk, ring, com, ch, resp)
                   for com, ch, resp in zip(sig.coms, sig.chs, sig.resps))
    except (InvalidElement, DuplicateStatement, LengthMismatch, ValueError, TypeError,
            AttributeError):
        return False


def maj(outs: Sequence):
    """Most frequent opening result; ``None`` stands for failure.

    Ties go to ``None`` if it is among the leaders, otherwise to the leader
    with the smallest canonical encoding (smallest integer, fixed width).
    """
    if not outs:
        raise ValueError("maj needs at least one opening result")
    counts = Counter(outs)
    top = max(counts.values())
    leaders = [o for o, c in counts.items() if c == top]
    if None in leaders:
        return None
    return min(leaders)


def _session_outs(action, msk, ring, sig, params) -> list:
    ring = tuple(ring)
    t = params.sessions(len(ring))
    if sig.t != t:
        raise LengthMismatch(f"signature has {sig.t} sessions, expected {t}")
    return [sigma.open(action, msk, ring, com) for com in sig.coms]


def open(action, msk: int, ring: Sequence[int], m: bytes, sig: Signature, params: Params):
    """Signer's public key, or ``None`` when the majority of sessions fail to open."""
    return maj(_session_outs(action, msk, ring, sig, params))


# -- judge ----------------------------------------------------------------------


def jcommit_with(action, msk: int, com: Commitment, b_prime: int
                 ) -> tuple[JudgeCommitment, JudgeState]:
    l_prime = action.compose(b_prime, msk)
    jcom = JudgeCommitment(action.act(b_prime, com.e_open), action.act(l_prime, action.base))
    return jcom, JudgeState(b_prime, msk, l_prime)


def jcommit(action, msk: int, ring: Sequence[int], com: Commitment, rng
            ) -> tuple[JudgeCommitment, JudgeState]:
    if len(com.betas) != len(ring):
        raise LengthMismatch("commitment does not match the ring")
    return jcommit_with(action, msk, com, action.sample_group(rng))


def jrespond(state: JudgeState, jch: int) -> int:
    if jch == 0:
        return state.b_prime
    if jch == 1:
        return state.l_prime
    raise InvalidChallenge(f"judge challenge must be 0 or 1, got {jch!r}")


def jverify(action, mpk: int, ring: Sequence[int], pk: int, com: Commitment,
            jcom: JudgeCommitment, jch: int, jresp: int) -> bool:
    ring = tuple(ring)
    try:
        k = ring.index(pk)
    except ValueError:
        raise StatementNotInRing("claimed opener is not a ring member") from None
    try:
        if jch == 0:
            return (jcom.e_judge == action.act(jresp, com.e_open)
                    and jcom.e_bm == action.act(jresp, mpk))
        if jch == 1:
            return (jcom.e_judge == action.act(jresp, com.betas[k])
                    and jcom.e_bm == action.act(jresp, action.base))
    except (InvalidElement, IndexError, TypeError):
        return False
    return False


def open_with_proof(action, msk: int, ring: Sequence[int], m: bytes, sig: Signature,
                    params: Params, rng=None):
    """Open and produce an ``iota x t`` proof that the sessions open as claimed."""
    ring = tuple(ring)
    rng = as_rng(rng)
    outs = _session_outs(action, msk, ring, sig, params)
    pk = maj(outs)
    mpk = action.act(msk, action.base)
    runs = [[jcommit(action, msk, ring, com, rng.fork("judge", i, j))
             for j, com in enumerate(sig.coms)] for i in range(params.iota)]
    jcoms = tuple(tuple(jc for jc, _ in row) for row in runs)
    jchs = codec.derive_judge_challenges(action, sig, jcoms, mpk=mpk, ring=ring, pk=pk)
    entries = tuple(
        tuple(JudgeEntry(jc, bit, jrespond(st, bit)) for (jc, st), bit in zip(row, bits))
        for row, bits in zip(runs, jchs))
    return pk, JudgeProof(entries)


def judge(action, mpk: int, ring: Sequence[int], sig: Signature, pk, proof: JudgeProof,
          params: Params) -> bool:
    """Accept iff at least ``lam`` sessions have every repetition verifying."""
    if pk is None:
        return False
    ring = tuple(ring)
    if pk not in ring:
        return False
    t = params.sessions(len(ring))
    if sig.t != t or proof.iota != params.iota or proof.t != t:
        return False
    try:
        expected = codec.derive_judge_challenges(action, sig, proof.jcoms(),
                                                 mpk=mpk, ring=ring, pk=pk)
    except (InvalidElement, ValueError, TypeError, OverflowError):
        return False
    action.precompute(mpk)
    passed = 0
    for j, com in enumerate(sig.coms):
        if all(entry.jch == expected[i][j]
               and jverify(action, mpk, ring, pk, com, entry.jcom, entry.jch, entry.jresp)
               for i, entry in enumerate(row[j] for row in proof.entries)):
            passed += 1
    return passed >= params.lam
