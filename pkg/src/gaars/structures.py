"""Immutable protocol objects shared by the sigma protocol, ARS and codec."""

from __future__ import annotations

from dataclasses import dataclass

CHALLENGES = (1, 2, 3, 4)


@dataclass(frozen=True)
class Commitment:
    """First message of the openable OR-sigma protocol.

    ``gammas`` is already permuted; the permutation itself never leaves the
    prover.
    """

    alphas: tuple[int, ...]
    betas: tuple[int, ...]
    gammas: tuple[int, ...]
    e_open: int
    e_check: int

    def __post_init__(self):
        n = len(self.alphas)
        if n < 1 or len(self.betas) != n or len(self.gammas) != n:
            raise ValueError("alphas, betas and gammas must have equal length n >= 1")

    @property
    def n(self) -> int:
        return len(self.alphas)


@dataclass(frozen=True)
class Response:
    """Answer to one challenge.

    ``challenge`` doubles as the variant tag: 1 carries the deltas, 2 the
    delta primes, 3 the single element ``b`` and 4 the single element ``l``.
    """

    challenge: int
    values: tuple[int, ...]

    @classmethod
    def deltas(cls, values) -> "Response":
        return cls(1, tuple(values))

    @classmethod
    def delta_primes(cls, values) -> "Response":
        return cls(2, tuple(values))

    @classmethod
    def of_b(cls, b: int) -> "Response":
        return cls(3, (b,))

    @classmethod
    def of_l(cls, l: int) -> "Response":
        return cls(4, (l,))

    @property
    def scalar(self) -> int:
        if self.challenge not in (3, 4) or len(self.values) != 1:
            raise ValueError("only b/l responses carry a single scalar")
        return self.values[0]


@dataclass(frozen=True)
class Signature:
    coms: tuple[Commitment, ...]
    chs: tuple[int, ...]
    resps: tuple[Response, ...]

    def __post_init__(self):
        if not (len(self.coms) == len(self.chs) == len(self.resps)):
            raise ValueError("coms, chs and resps must have the same length")

    @property
    def t(self) -> int:
        return len(self.coms)


@dataclass(frozen=True)
class JudgeCommitment:
    e_judge: int
    e_bm: int


@dataclass(frozen=True)
class JudgeEntry:
    jcom: JudgeCommitment
    jch: int
    jresp: int


@dataclass(frozen=True)
class JudgeProof:
    """``iota x t`` matrix of judge transcripts, row-major."""

    entries: tuple[tuple[JudgeEntry, ...], ...]

    def __post_init__(self):
        widths = {len(row) for row in self.entries}
        if len(widths) > 1:
            raise ValueError("judge proof rows must all have length t")

    @property
    def iota(self) -> int:
        return len(self.entries)

    @property
    def t(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __len__(self) -> int:
        return self.iota * self.t

    def jcoms(self) -> tuple[tuple[JudgeCommitment, ...], ...]:
        return tuple(tuple(e.jcom for e in row) for row in self.entries)

    def jchs(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(e.jch for e in row) for row in self.entries)


@dataclass(frozen=True)
class GroupPublicKey:
    mpk: int
    roster: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.roster)) != len(self.roster):
            raise ValueError("roster entries must be pairwise distinct")
