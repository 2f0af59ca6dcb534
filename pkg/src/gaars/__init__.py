"""Accountable ring signatures from an openable OR-sigma protocol over a group action."""

from . import ars, codec, games, group_sig, hhs, sigma
from .ars import KeyPair, MasterKeyPair, Params
from .hhs import GroupAction, get_backend, realistic, tiny
from .rng import Rng
from .structures import Commitment, JudgeProof, Response, Signature

__all__ = [
    "ars", "codec", "games", "group_sig", "hhs", "sigma",
    "KeyPair", "MasterKeyPair", "Params", "GroupAction", "get_backend", "realistic", "tiny",
    "Rng", "Commitment", "JudgeProof", "Response", "Signature",
]
__version__ = "0.1.0"
