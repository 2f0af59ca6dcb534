"""Static group signatures: an ARS whose ring and opener are fixed at setup."""

from __future__ import annotations

from typing import Sequence

from . import ars
from .rng import as_rng
from .structures import GroupPublicKey, Signature


def gkeygen(action, n: int, params: ars.Params, rng=None
            ) -> tuple[GroupPublicKey, list[int], int]:
    """One master key pair and ``n`` member key pairs; roster order = member id."""
    if n < 1:
        raise ValueError("a group needs at least one member")
    rng = as_rng(rng)
    master = ars.mkeygen(action, rng)
    roster: list[int] = []
    sks: list[int] = []
    while len(roster) < n:
        kp = ars.keygen(action, rng)
        if kp.pk in roster:
            continue
        roster.append(kp.pk)
        sks.append(kp.sk)
    return GroupPublicKey(master.mpk, tuple(roster)), sks, master.msk


def gsign(action, gpk: GroupPublicKey, m: bytes, sk: int, params: ars.Params, rng=None,
          **kw) -> Signature:
    return ars.sign(action, gpk.mpk, gpk.roster, m, sk, params, rng, **kw)


def gverify(action, gpk: GroupPublicKey, m: bytes, sig: Signature, params: ars.Params,
            **kw) -> bool:
    return ars.verify(action, gpk.mpk, gpk.roster, m, sig, params, **kw)


def gopen(action, gpk: GroupPublicKey, msk: int, m: bytes, sig: Signature,
          params: ars.Params) -> int | None:
    """Roster index of the signer, or ``None``."""
    pk = ars.open(action, msk, gpk.roster, m, sig, params)
    return member_index(gpk.roster, pk)


def member_index(roster: Sequence[int], pk) -> int | None:
    if pk is None:
        return None
    try:
        return list(roster).index(pk)
    except ValueError:
        return None
