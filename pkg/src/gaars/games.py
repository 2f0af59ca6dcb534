"""Security games and proof machinery for the ARS.

* :class:`ProgrammableOracle` -- lazily sampled random oracle with a query
  log, programming, and forking (prefix answers frozen, suffix fresh).
* :func:`simulate_sign` -- witness-free signer that programs the oracle.
* :func:`hyb2_transcript` -- the witness-independent hybrid transcript.
* :func:`run_unforgeability_game` / :func:`run_anonymity_game`.
* :func:`fork_and_extract` -- rewinds a deterministic forger until four
  forgeries share their commitments, then extracts a secret key.

Adversaries are plain callables.  Forking adversaries take ``(tape, oracle)``
and must be deterministic given both, so a rewind is an exact replay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Protocol, Sequence

from . import ars, codec, sigma
from .errors import (
    ForkBudgetExhausted,
    NoGoodSession,
    NoMatchingSession,
    OracleCollision,
    ProtocolViolation,
    StatementNotInRing,
)
from .rng import Rng, as_rng
from .sigma import BetaCollision
from .structures import Commitment, Response, Signature

FORK_BUDGET_CONSTANT = 8
FORK_REWIND_CAP = 10**6


class ProgrammableOracle:
    """Random oracle from query bytes to challenge vectors in {1,2,3,4}^t.

    ``log`` lists distinct queries in the order first asked (programming
    counts as asking).  :meth:`fork` returns an oracle that answers the first
    ``at`` logged queries exactly as this one did and everything else afresh.
    """

    def __init__(self, rng=None, *, frozen: dict[bytes, tuple[int, ...]] | None = None,
                 fork_point: int | None = None):
        self._rng = as_rng(rng)
        self.tape: dict[bytes, tuple[int, ...]] = dict(frozen or {})
        self._frozen = frozenset(self.tape)
        self.log: list[bytes] = []
        self._touched: set[bytes] = set()
        self.fork_point = fork_point
        self.calls = 0

    def _touch(self, data: bytes) -> None:
        if data not in self._touched:
            self._touched.add(data)
            self.log.append(data)

    def query(self, data: bytes, t: int) -> tuple[int, ...]:
        self.calls += 1
        data = bytes(data)
        ans = self.tape.get(data)
        if ans is None:
            ans = tuple(1 + self._rng.randbelow(4) for _ in range(t))
            self.tape[data] = ans
        elif len(ans) != t:
            raise ValueError(f"query was answered with length {len(ans)}, asked for {t}")
        self._touch(data)
        return ans

    def __call__(self, action, coms, m: bytes, t: int) -> tuple[int, ...]:
        return self.query(codec.challenge_query(action, coms, m), t)

    def program(self, data: bytes, answer: Sequence[int]) -> None:
        data = bytes(data)
        answer = tuple(answer)
        if data in self._touched:
            raise OracleCollision("oracle slot already queried or programmed")
        if data in self.tape and not (data in self._frozen and self.tape[data] == answer):
            raise OracleCollision("oracle slot already fixed to a different answer")
        self.tape[data] = answer
        self._touch(data)

    def index_of(self, data: bytes) -> int | None:
        try:
            return self.log.index(bytes(data))
        except ValueError:
            return None

    def fork(self, at: int, rng=None) -> "ProgrammableOracle":
        frozen = {q: self.tape[q] for q in self.log[:at]}
        return ProgrammableOracle(rng, frozen=frozen, fork_point=at)

    def __len__(self) -> int:
        return len(self.log)


# -- simulators -----------------------------------------------------------------


def simulate_sign(action, mpk: int, ring: Sequence[int], m: bytes, pk_target: int,
                  params: ars.Params, oracle: ProgrammableOracle, rng=None) -> Signature:
    """Signature without any secret key, made valid by programming the oracle."""
    ring = tuple(ring)
    if pk_target not in ring:
        raise StatementNotInRing("target key is not in the ring")
    rng = as_rng(rng)
    t = params.sessions(len(ring))
    action.precompute(mpk, *ring)
    runs = [sigma.simulate(action, mpk, ring, pk_target, rng.fork("sim", j)) for j in range(t)]
    coms = tuple(r[0] for r in runs)
    chs = tuple(r[1] for r in runs)
    oracle.program(codec.challenge_query(action, coms, m), chs)
    return Signature(coms, chs, tuple(r[2] for r in runs))


def hyb2_with(action, E_m: int, ring: Sequence[int], s: int, ch: int, deltas, delta_primes,
              b: int, tau, r: int, rs) -> tuple[Commitment, int, Response]:
    """Hybrid transcript for fixed randomness; raises :class:`BetaCollision`.

    ``e_open`` is ``r * E0`` regardless of the witness.  On challenge 4 the
    gammas are fresh ``rs[i] * E0`` and the response is ``rs[k]``; ``b`` is
    unused there and ``rs`` is unused elsewhere.
    """
    ring = tuple(ring)
    k = sigma.witness_index(action, ring, s)
    n = len(ring)
    act, compose, E0 = action.act, action.compose, action.base
    alphas = tuple(act(d, E) for d, E in zip(deltas, ring))
    betas = tuple(act(compose(d, dp), E) for d, dp, E in zip(deltas, delta_primes, ring))
    if len(set(betas)) != n:
        raise BetaCollision
    e_open = act(r, E0)
    if ch == 4:
        gammas = tuple(act(x, E0) for x in rs)
        l = rs[k]
        e_check = act(l, E_m)
        resp = Response.of_l(l)
    else:
        gammas = tuple(act(b, bt) for bt in betas)
        e_check = act(b, e_open)
        resp = sigma.respond(sigma.SigmaState(tuple(deltas), tuple(delta_primes), b, 0, k,
                                              tuple(tau)), ch)
    com = Commitment(alphas, betas, tuple(gammas[j] for j in tau), e_open, e_check)
    return com, ch, resp


def hyb2_transcript(action, E_m: int, ring: Sequence[int], s: int, rng, ch: int | None = None
                    ) -> tuple[Commitment, int, Response]:
    ring = tuple(ring)
    sigma.check_ring(ring)
    sigma.witness_index(action, ring, s)
    rng = as_rng(rng)
    n = len(ring)
    if ch is None:
        ch = 1 + rng.randbelow(4)
    while True:
        deltas = [action.sample_group(rng) for _ in range(n)]
        delta_primes = [action.sample_group(rng) for _ in range(n)]
        b = action.sample_group(rng)
        tau = rng.permutation(n)
        r = action.sample_group(rng)
        rs = [action.sample_group(rng) for _ in range(n)]
        try:
            return hyb2_with(action, E_m, ring, s, ch, deltas, delta_primes, b, tau, r, rs)
        except BetaCollision:
            continue


# -- game records -----------------------------------------------------------------


@dataclass(frozen=True)
class GameRecord:
    """One line of harness output: ``game<TAB>trial<TAB>outcome<TAB>rewinds``."""

    game: str
    trial: int
    outcome: str
    rewinds: int = 0

    HEADER = "game\ttrial\toutcome\trewinds"

    def to_line(self) -> str:
        return f"{self.game}\t{self.trial}\t{self.outcome}\t{self.rewinds}"

    @classmethod
    def from_line(cls, line: str) -> "GameRecord":
        game, trial, outcome, rewinds = line.rstrip("\n").split("\t")
        return cls(game, int(trial), outcome, int(rewinds))


# -- unforgeability ------------------------------------------------------------------


@dataclass(frozen=True)
class Forgery:
    mpk: int
    ring: tuple[int, ...]
    m: bytes
    sig: Signature


@dataclass
class GameState:
    hon: list[ars.KeyPair]
    cor: set[int] = field(default_factory=set)
    sign_log: list[tuple[bytes, bytes]] = field(default_factory=list)

    @property
    def honest_pks(self) -> list[int]:
        return [kp.pk for kp in self.hon]


class UnforgeabilityInterface:
    """Everything an unforgeability adversary may touch."""

    def __init__(self, action, params, master: ars.MasterKeyPair, state: GameState,
                 oracle: ProgrammableOracle, rng: Rng, simulate: bool):
        self.action = action
        self.params = params
        self.mpk = master.mpk
        self.msk = master.msk  # the opener may collude with the forger
        self.oracle = oracle
        self._state = state
        self._rng = rng
        self._simulate = simulate
        self._count = 0

    @property
    def hon(self) -> list[int]:
        return list(self._state.honest_pks)

    def _keypair(self, pk) -> ars.KeyPair:
        for kp in self._state.hon:
            if kp.pk == pk:
                return kp
        raise ProtocolViolation("query names a key outside Hon")

    def corrupt(self, pk: int) -> int:
        kp = self._keypair(pk)
        self._state.cor.add(pk)
        return kp.sk

    def sign(self, ring: Sequence[int], m: bytes, pk: int) -> Signature:
        kp = self._keypair(pk)
        ring = tuple(ring)
        if pk not in ring:
            raise ProtocolViolation("signing key must belong to the requested ring")
        rng = self._rng.fork("sign-oracle", self._count)
        self._count += 1
        if self._simulate:
            sig = simulate_sign(self.action, self.mpk, ring, m, pk, self.params, self.oracle, rng)
        else:
            sig = ars.sign(self.action, self.mpk, ring, m, kp.sk, self.params, rng,
                           oracle=self.oracle)
        self._state.sign_log.append((bytes(m), codec.encode_signature(self.action, sig)))
        return sig


@dataclass(frozen=True)
class GameResult:
    win: bool
    reason: str
    forgery: Forgery | None = None
    opened: int | None = None


def run_unforgeability_game(adversary: Callable[[UnforgeabilityInterface], Forgery | None],
                            n_h: int, params: ars.Params, rng=None, *, action,
                            master: ars.MasterKeyPair | None = None,
                            simulate_signing: bool = False) -> GameResult:
    """Forger wins with a fresh, valid signature opening to failure or to an
    uncorrupted honest key."""
    rng = as_rng(rng)
    master = master or ars.mkeygen(action, rng.fork("master"))
    hon = []
    i = 0
    while len(hon) < n_h:
        kp = ars.keygen(action, rng.fork("hon", i))
        i += 1
        if all(kp.pk != other.pk for other in hon):
            hon.append(kp)
    state = GameState(hon)
    oracle = ProgrammableOracle(rng.fork("oracle"))
    iface = UnforgeabilityInterface(action, params, master, state, oracle, rng.fork("oracles"),
                                    simulate_signing)
    forgery = adversary(iface)
    if forgery is None:
        return GameResult(False, "no output")
    encoded = codec.encode_signature(action, forgery.sig)
    if (bytes(forgery.m), encoded) in state.sign_log:
        return GameResult(False, "not fresh", forgery)
    if not ars.verify(action, master.mpk, forgery.ring, forgery.m, forgery.sig, params,
                      oracle=oracle):
        return GameResult(False, "invalid", forgery)
    opened = ars.open(action, master.msk, forgery.ring, forgery.m, forgery.sig, params)
    if opened is None:
        return GameResult(True, "opens to failure", forgery, None)
    if opened in state.honest_pks and opened not in state.cor:
        return GameResult(True, "opens to uncorrupted honest key", forgery, opened)
    return GameResult(False, "opens to corrupted or foreign key", forgery, opened)


# -- anonymity ------------------------------------------------------------------------


class Distinguisher(Protocol):
    """External cryptanalysis hook: sees ``mpk`` and a challenge signing oracle,
    returns a guess for which of two keys signs."""

    def __call__(self, mpk: int, pks: tuple[int, int],
                 sign: Callable[[Sequence[int], bytes], Signature]) -> int: ...


def run_anonymity_game(distinguisher: Distinguisher, params: ars.Params, rng=None, *,
                       action) -> GameResult:
    """One round of the anonymity experiment.  Only the harness lives here; the
    property itself is computational and is not asserted by this package."""
    rng = as_rng(rng)
    master = ars.mkeygen(action, rng.fork("master"))
    keys = (ars.keygen(action, rng.fork("k0")),)
    i = 1
    while len(keys) < 2:
        kp = ars.keygen(action, rng.fork("k", i))
        i += 1
        if kp.pk != keys[0].pk:
            keys += (kp,)
    bit = rng.fork("bit").bit()
    count = [0]

    def sign(ring, m):
        ring = tuple(ring)
        if keys[0].pk not in ring or keys[1].pk not in ring:
            raise ProtocolViolation("challenge ring must contain both keys")
        count[0] += 1
        return ars.sign(action, master.mpk, ring, m, keys[bit].sk, params,
                        rng.fork("sign", count[0]))

    guess = distinguisher(master.mpk, (keys[0].pk, keys[1].pk), sign)
    return GameResult(guess == bit, "guessed" if guess == bit else "missed")


# -- forking ---------------------------------------------------------------------------


class HonestSignerAdversary:
    """Scripted forger that simply holds a ring member's secret key.

    It asks ``warmup`` oracle queries whose answers fix the message, signs
    through the oracle (the critical query), then asks ``trailing`` more.
    With ``success_rate < 1`` it withholds its output unless a post-signing
    oracle coin comes up in its favour, so its success rate is measurable.
    """

    def __init__(self, action, mpk: int, ring: Sequence[int], sk: int, params: ars.Params, *,
                 warmup: int = 3, trailing: int = 2, success_rate: float = 1.0):
        self.action = action
        self.mpk = mpk
        self.ring = tuple(ring)
        self.sk = sk
        self.params = params
        self.warmup = warmup
        self.trailing = trailing
        self.success_rate = success_rate
        self.max_queries = warmup + 1 + trailing + (success_rate < 1)

    def __call__(self, tape: Rng, oracle: ProgrammableOracle) -> Forgery | None:
        m = bytearray(b"forged message")
        for i in range(self.warmup):
            m += bytes(oracle.query(b"warmup" + bytes([i]) + tape.randbytes(8), 4))
        m = bytes(m)
        sig = ars.sign(self.action, self.mpk, self.ring, m, self.sk, self.params,
                       tape.fork("sign"), oracle=oracle)
        for i in range(self.trailing):
            oracle.query(b"trailing" + bytes([i]) + tape.randbytes(8), 4)
        if self.success_rate < 1:
            coin = oracle.query(b"coin" + tape.randbytes(8), 8)
            u = sum((c - 1) << (2 * i) for i, c in enumerate(coin)) / 4**8
            if u >= self.success_rate:
                return None
        return Forgery(self.mpk, self.ring, m, sig)


@dataclass
class ForkResult:
    """``outcome`` is ``"extracted"``, or ``"violation"`` when four accepting
    transcripts on one commitment failed to yield a consistent witness (the
    protocol is 4-special sound, so this must never happen)."""

    outcome: str
    pk: int | None
    sk: int | None
    session: int
    rewinds: int
    forks: tuple[Signature, ...]
    candidates: tuple[int, ...]
    epsilon: float


def _replay(adversary, tape_source: Rng, oracle):
    return adversary(tape_source.fork("tape"), oracle)


def _valid(action, params, forgery, oracle) -> bool:
    return forgery is not None and ars.verify(action, forgery.mpk, forgery.ring, forgery.m,
                                              forgery.sig, params, oracle=oracle)


def _good_session(forks: Sequence[Signature], candidates: Sequence[int]):
    """First candidate session where the forks cover all four challenges, with
    one fork per challenge value."""
    for j in candidates:
        pick: dict[int, Signature] = {}
        for sig in forks:
            pick.setdefault(sig.chs[j], sig)
        if len(pick) == 4:
            return j, [pick[c] for c in (1, 2, 3, 4)]
    return None


def fork_budget(queries: int, t: int, epsilon: float, c: int = FORK_BUDGET_CONSTANT,
                cap: int = FORK_REWIND_CAP) -> int:
    """``c * Q * t * log2(t) / epsilon`` rewinds, capped."""
    if epsilon <= 0:
        return 0
    return min(cap, math.ceil(c * queries * t * max(1.0, math.log2(t)) / epsilon))


def fork_and_extract(adversary, params: ars.Params, oracle: ProgrammableOracle, rng=None, *,
                     action, msk: int | None = None, epsilon: float | None = None,
                     queries: int | None = None, pilot_runs: int = 16, max_forks: int = 4,
                     c: int = FORK_BUDGET_CONSTANT, cap: int = FORK_REWIND_CAP) -> ForkResult:
    """Rewind ``adversary`` until four accepting forgeries share commitments.

    The success rate is measured over ``pilot_runs`` fresh runs unless given.
    After a success the critical query is located in the oracle log, the
    prefix is frozen, and the adversary is replayed with fresh suffix answers.
    Once ``max_forks`` forgeries with pairwise distinct challenge vectors are
    in hand, a session in the candidate set (sessions opening to the majority
    result when ``msk`` is known, all sessions otherwise) whose challenges
    cover {1,2,3,4} is handed to the sigma extractor.  ``max_forks=4`` is the
    textbook procedure; larger values keep rewinding to find a good session.
    """
    rng = as_rng(rng)
    Q = queries or getattr(adversary, "max_queries", 1)
    if epsilon is None:
        wins = 0
        for i in range(pilot_runs):
            o = oracle.fork(0, rng.fork("pilot-oracle", i))
            if _valid(action, params, _replay(adversary, rng.fork("pilot", i), o), o):
                wins += 1
        epsilon = wins / pilot_runs
    if epsilon <= 0:
        raise ForkBudgetExhausted("adversary never succeeded; no rewinds are worthwhile")

    rewinds = 0
    budget = cap
    attempt = 0
    while rewinds < budget:
        source = rng.fork("attempt", attempt)
        base = oracle if attempt == 0 else oracle.fork(0, rng.fork("attempt-oracle", attempt))
        attempt += 1
        first = _replay(adversary, source, base)
        rewinds += 1
        if not _valid(action, params, first, base):
            continue
        t = first.sig.t
        budget = min(budget, fork_budget(Q, t, epsilon, c, cap))
        critical = codec.challenge_query(action, first.sig.coms, first.m)
        at = base.index_of(critical)
        if at is None or at >= Q:
            continue
        forks = [first.sig]
        seen = {first.sig.chs}
        candidates = _candidates(action, params, first, msk)
        while rewinds < budget:
            branch = base.fork(at, rng.fork("rewind", attempt, rewinds))
            again = _replay(adversary, source, branch)
            rewinds += 1
            if not _valid(action, params, again, branch):
                continue
            if codec.challenge_query(action, again.sig.coms, again.m) != critical:
                continue
            if again.sig.chs in seen:
                continue
            seen.add(again.sig.chs)
            forks.append(again.sig)
            found = _good_session(forks, candidates)
            if found:
                return _extract(action, first, found, rewinds, candidates, epsilon, msk)
            if len(forks) >= max_forks:
                raise NoGoodSession(
                    f"{len(forks)} forks share commitments but no candidate session "
                    f"has four distinct challenges ({len(candidates)} candidates)")
        break
    raise ForkBudgetExhausted(f"no extraction within {rewinds} rewinds")


def _candidates(action, params, forgery: Forgery, msk) -> tuple[int, ...]:
    t = forgery.sig.t
    if msk is None:
        return tuple(range(t))
    outs = [sigma.open(action, msk, forgery.ring, com) for com in forgery.sig.coms]
    winner = ars.maj(outs)
    return tuple(j for j in range(t) if outs[j] == winner)


def _extract(action, forgery: Forgery, found, rewinds, candidates, epsilon, msk) -> ForkResult:
    j, four = found
    com = forgery.sig.coms[j]
    resps = [sig.resps[j] for sig in four]
    opened = sigma.open(action, msk, forgery.ring, com) if msk is not None else None
    try:
        k, sk = sigma.extract(action, forgery.ring, com, resps)
    except NoMatchingSession:
        return ForkResult("violation", None, None, j, rewinds, tuple(four), candidates, epsilon)
    pk = forgery.ring[k]
    if action.act(sk, action.base) != pk or (msk is not None and opened != pk):
        return ForkResult("violation", pk, sk, j, rewinds, tuple(four), candidates, epsilon)
    return ForkResult("extracted", pk, sk, j, rewinds, tuple(four), candidates, epsilon)


def enumerate_randomness(action, n: int, *, with_b: bool = True, with_tau: bool = True):
    """All ``(first, second, b, tau)`` tuples for a ring of size ``n`` (tiny only)."""
    from itertools import permutations

    G = list(action.group_elements())
    vecs = list(product(G, repeat=n))
    bs = G if with_b else [action.identity]
    taus = list(permutations(range(n))) if with_tau else [tuple(range(n))]
    return product(vecs, vecs, bs, taus)
