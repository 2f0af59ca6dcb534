"""Canonical encodings, Fiat-Shamir transcript hashing and the ARS1 container.

All integers are big-endian.  Set and group elements use the fixed widths of
their backend (byte length of p and q respectively), so every valid object
has exactly one encoding.

The XOF is SHA-256 in counter mode::

    digest  = SHA-256(tag || input)
    block_i = SHA-256(tag || i (4 bytes) || digest)

Domain tags separate the two Fiat-Shamir layers and key fingerprints.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from enum import IntEnum

from .errors import DecodeError, InvalidElement
from .structures import (
    Commitment,
    JudgeCommitment,
    JudgeEntry,
    JudgeProof,
    GroupPublicKey,
    Response,
    Signature,
)

TAG_CHALLENGE = 0x01
TAG_JUDGE = 0x02
TAG_FINGERPRINT = 0x03

MAGIC = b"ARS1"
_HEADER = struct.Struct(">4sBI")


class Kind(IntEnum):
    PUBLIC_KEY = 1
    SECRET_KEY = 2
    MASTER_PUBLIC_KEY = 3
    MASTER_SECRET_KEY = 4
    RING = 5
    SIGNATURE = 6
    OPENING = 7
    JUDGE_PROOF = 8
    GROUP_PUBLIC_KEY = 9


# -- hashing -------------------------------------------------------------------


@dataclass(frozen=True)
class TranscriptDigest:
    domain_tag: int
    digest: bytes

    def expand(self, nbytes: int) -> bytes:
        tag = bytes([self.domain_tag])
        out = bytearray()
        i = 0
        while len(out) < nbytes:
            out += hashlib.sha256(tag + i.to_bytes(4, "big") + self.digest).digest()
            i += 1
        return bytes(out[:nbytes])


def transcript_digest(tag: int, data: bytes) -> TranscriptDigest:
    return TranscriptDigest(tag, hashlib.sha256(bytes([tag]) + data).digest())


def xof(tag: int, data: bytes, nbytes: int) -> bytes:
    return transcript_digest(tag, data).expand(nbytes)


def challenges_from_stream(stream: bytes, t: int) -> tuple[int, ...]:
    """Two bits per challenge, MSB first, mapped to {1, 2, 3, 4}."""
    if len(stream) * 4 < t:
        raise ValueError("stream too short")
    return tuple(((stream[j >> 2] >> (6 - 2 * (j & 3))) & 3) + 1 for j in range(t))


def bits_from_stream(stream: bytes, count: int) -> tuple[int, ...]:
    if len(stream) * 8 < count:
        raise ValueError("stream too short")
    return tuple((stream[j >> 3] >> (7 - (j & 7))) & 1 for j in range(count))


def challenge_query(action, coms, m: bytes) -> bytes:
    """Random-oracle input for the signature challenges: coms then message."""
    return b"".join(encode_commitment(action, c) for c in coms) + bytes(m)


def derive_challenges(action, coms, m: bytes, t: int) -> tuple[int, ...]:
    if len(coms) != t:
        raise ValueError(f"expected {t} commitments, got {len(coms)}")
    stream = xof(TAG_CHALLENGE, challenge_query(action, coms, m), -(-t // 4))
    return challenges_from_stream(stream, t)


def judge_query(action, sig: Signature, jcoms, *, mpk: int, ring, pk) -> bytes:
    """Random-oracle input for judge challenges.

    The signature and row-major judge commitments come first, followed by the
    statement being proven (master key, ring, claimed opener) so a proof
    cannot be replayed against a different claimed signer.
    """
    parts = [encode_signature(action, sig)]
    for row in jcoms:
        for jc in row:
            parts.append(action.encode_set(jc.e_judge) + action.encode_set(jc.e_bm))
    parts.append(action.encode_set(mpk))
    parts.append(encode_ring(action, ring))
    parts.append(encode_opening(action, pk))
    return b"".join(parts)


def derive_judge_challenges(action, sig: Signature, jcoms, *, mpk: int, ring, pk
                            ) -> tuple[tuple[int, ...], ...]:
    iota = len(jcoms)
    t = len(jcoms[0]) if iota else 0
    if any(len(row) != t for row in jcoms):
        raise ValueError("judge commitments must form an iota x t matrix")
    query = judge_query(action, sig, jcoms, mpk=mpk, ring=ring, pk=pk)
    bits = bits_from_stream(xof(TAG_JUDGE, query, -(-(iota * t) // 8)), iota * t)
    return tuple(bits[i * t:(i + 1) * t] for i in range(iota))


def fingerprint(action, E: int) -> str:
    """First 8 bytes of the tagged SHA-256 of an element's encoding, hex."""
    return hashlib.sha256(bytes([TAG_FINGERPRINT]) + action.encode_set(E)).digest()[:8].hex()


# -- object encodings -----------------------------------------------------------


class _Reader:
    __slots__ = ("data", "pos")

    def __init__(self, data: bytes):
        self.data = bytes(data)
        self.pos = 0

    def take(self, n: int) -> bytes:
        if n < 0 or self.pos + n > len(self.data):
            raise DecodeError("truncated input")
        out = self.data[self.pos:self.pos + n]
        self.pos += n
        return out

    def u32(self) -> int:
        return int.from_bytes(self.take(4), "big")

    def u8(self) -> int:
        return self.take(1)[0]

    def set_element(self, action) -> int:
        return action.decode_set(self.take(action.set_width))

    def group_element(self, action) -> int:
        return action.decode_group(self.take(action.group_width))

    def done(self) -> None:
        if self.pos != len(self.data):
            raise DecodeError(f"{len(self.data) - self.pos} trailing bytes")


def _set_elements(action, values) -> bytes:
    try:
        return b"".join(action.encode_set(v) for v in values)
    except (OverflowError, AttributeError, TypeError) as exc:
        raise InvalidElement(str(exc)) from None


def encode_commitment(action, com: Commitment) -> bytes:
    return (com.n.to_bytes(4, "big")
            + _set_elements(action, com.alphas)
            + _set_elements(action, com.betas)
            + _set_elements(action, com.gammas)
            + _set_elements(action, (com.e_open, com.e_check)))


def _read_commitment(r: _Reader, action) -> Commitment:
    n = r.u32()
    if n < 1 or n * action.set_width > len(r.data):
        raise DecodeError(f"implausible ring size {n}")
    alphas = tuple(r.set_element(action) for _ in range(n))
    betas = tuple(r.set_element(action) for _ in range(n))
    gammas = tuple(r.set_element(action) for _ in range(n))
    return Commitment(alphas, betas, gammas, r.set_element(action), r.set_element(action))


def decode_commitment(action, data: bytes) -> Commitment:
    r = _Reader(data)
    com = _read_commitment(r, action)
    r.done()
    return com


def encode_response(action, resp: Response) -> bytes:
    return bytes([resp.challenge]) + b"".join(action.encode_group(v) for v in resp.values)


def _read_response(r: _Reader, action, n: int) -> Response:
    ch = r.u8()
    if ch not in (1, 2, 3, 4):
        raise DecodeError(f"bad response tag {ch}")
    count = n if ch in (1, 2) else 1
    return Response(ch, tuple(r.group_element(action) for _ in range(count)))


def encode_signature(action, sig: Signature) -> bytes:
    parts = [sig.t.to_bytes(4, "big")]
    parts += [encode_commitment(action, c) for c in sig.coms]
    parts.append(bytes(sig.chs))
    parts += [encode_response(action, r) for r in sig.resps]
    return b"".join(parts)


def decode_signature(action, data: bytes) -> Signature:
    r = _Reader(data)
    t = r.u32()
    if t < 1 or t > len(data):
        raise DecodeError(f"implausible session count {t}")
    coms = tuple(_read_commitment(r, action) for _ in range(t))
    chs = tuple(r.take(t))
    if any(c not in (1, 2, 3, 4) for c in chs):
        raise DecodeError("challenge outside {1,2,3,4}")
    resps = tuple(_read_response(r, action, com.n) for com in coms)
    r.done()
    return Signature(coms, chs, resps)


def encode_ring(action, ring) -> bytes:
    return len(ring).to_bytes(4, "big") + _set_elements(action, ring)


def decode_ring(action, data: bytes) -> tuple[int, ...]:
    r = _Reader(data)
    ring = _read_ring(r, action)
    r.done()
    return ring


def _read_ring(r: _Reader, action) -> tuple[int, ...]:
    n = r.u32()
    if n * action.set_width > len(r.data):
        raise DecodeError(f"implausible ring size {n}")
    return tuple(r.set_element(action) for _ in range(n))


def encode_opening(action, pk) -> bytes:
    """Opening result: ``00`` for the failure symbol, ``01 || pk`` otherwise."""
    if pk is None:
        return b"\x00"
    return b"\x01" + action.encode_set(pk)


def decode_opening(action, data: bytes):
    r = _Reader(data)
    flag = r.u8()
    if flag == 0:
        pk = None
    elif flag == 1:
        pk = r.set_element(action)
    else:
        raise DecodeError(f"bad opening flag {flag}")
    r.done()
    return pk


def encode_judge_proof(action, proof: JudgeProof) -> bytes:
    parts = [proof.iota.to_bytes(4, "big"), proof.t.to_bytes(4, "big")]
    for row in proof.entries:
        for e in row:
            parts.append(action.encode_set(e.jcom.e_judge) + action.encode_set(e.jcom.e_bm)
                         + bytes([e.jch]) + action.encode_group(e.jresp))
    return b"".join(parts)


def decode_judge_proof(action, data: bytes) -> JudgeProof:
    r = _Reader(data)
    iota, t = r.u32(), r.u32()
    entry_size = 2 * action.set_width + 1 + action.group_width
    if iota * t * entry_size != len(data) - 8:
        raise DecodeError("judge proof length does not match its dimensions")
    rows = []
    for _ in range(iota):
        row = []
        for _ in range(t):
            jcom = JudgeCommitment(r.set_element(action), r.set_element(action))
            jch = r.u8()
            if jch not in (0, 1):
                raise DecodeError("judge challenge must be a bit")
            row.append(JudgeEntry(jcom, jch, r.group_element(action)))
        rows.append(tuple(row))
    r.done()
    return JudgeProof(tuple(rows))


def encode_group_public_key(action, gpk: GroupPublicKey) -> bytes:
    return action.encode_set(gpk.mpk) + encode_ring(action, gpk.roster)


def decode_group_public_key(action, data: bytes) -> GroupPublicKey:
    r = _Reader(data)
    mpk = r.set_element(action)
    roster = _read_ring(r, action)
    r.done()
    try:
        return GroupPublicKey(mpk, roster)
    except ValueError as exc:
        raise DecodeError(str(exc)) from None


# -- ARS1 container --------------------------------------------------------------


def pack(kind: Kind, body: bytes) -> bytes:
    return _HEADER.pack(MAGIC, int(kind), len(body)) + body


def unpack(data: bytes, expected: Kind | None = None) -> tuple[Kind, bytes]:
    if len(data) < _HEADER.size:
        raise DecodeError("file too short for an ARS1 header")
    magic, kind, length = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise DecodeError("missing ARS1 magic")
    try:
        kind = Kind(kind)
    except ValueError:
        raise DecodeError(f"unknown object kind {kind}") from None
    if expected is not None and kind != expected:
        raise DecodeError(f"expected {expected.name}, found {kind.name}")
    body = data[_HEADER.size:]
    if len(body) != length:
        raise DecodeError("declared body length does not match")
    return kind, body


_ENCODERS = {
    Kind.PUBLIC_KEY: lambda a, v: a.encode_set(v),
    Kind.MASTER_PUBLIC_KEY: lambda a, v: a.encode_set(v),
    Kind.SECRET_KEY: lambda a, v: a.encode_group(v),
    Kind.MASTER_SECRET_KEY: lambda a, v: a.encode_group(v),
    Kind.RING: encode_ring,
    Kind.SIGNATURE: encode_signature,
    Kind.OPENING: encode_opening,
    Kind.JUDGE_PROOF: encode_judge_proof,
    Kind.GROUP_PUBLIC_KEY: encode_group_public_key,
}

_DECODERS = {
    Kind.PUBLIC_KEY: lambda a, b: a.decode_set(b),
    Kind.MASTER_PUBLIC_KEY: lambda a, b: a.decode_set(b),
    Kind.SECRET_KEY: lambda a, b: a.decode_group(b),
    Kind.MASTER_SECRET_KEY: lambda a, b: a.decode_group(b),
    Kind.RING: decode_ring,
    Kind.SIGNATURE: decode_signature,
    Kind.OPENING: decode_opening,
    Kind.JUDGE_PROOF: decode_judge_proof,
    Kind.GROUP_PUBLIC_KEY: decode_group_public_key,
}


def dump(action, kind: Kind, obj) -> bytes:
    """Encode ``obj`` and wrap it in an ARS1 container."""
    return pack(kind, _ENCODERS[kind](action, obj))


def load(action, data: bytes, kind: Kind):
    _, body = unpack(data, kind)
    return _DECODERS[kind](action, body)


def hexdump(data: bytes, width: int = 16) -> str:
    lines = []
    for off in range(0, len(data), width):
        chunk = data[off:off + width]
        lines.append(f"{off:08x}  {chunk.hex(' ')}")
    return "\n".join(lines)
