"""Deterministic, forkable random source.

Every randomized operation takes an explicit :class:`Rng`.  Seeded instances
are reproducible; unseeded ones draw their key from :mod:`secrets`.
"""

from __future__ import annotations

import hashlib
import secrets

_BLOCK = 32


def _seed_bytes(seed) -> bytes:
    if seed is None:
        return secrets.token_bytes(32)
    if isinstance(seed, bytes):
        return seed
    if isinstance(seed, str):
        return seed.encode()
    if isinstance(seed, int):
        if seed < 0:
            raise ValueError("integer seeds must be non-negative")
        return b"int:" + seed.to_bytes(max(1, (seed.bit_length() + 7) // 8), "big")
    raise TypeError(f"unsupported seed type {type(seed).__name__}")


class Rng:
    """SHA-256 counter-mode byte stream with rejection-sampled integers."""

    __slots__ = ("_key", "_counter", "_buf")

    def __init__(self, seed=None):
        self._key = hashlib.sha256(b"gaars.rng\x00" + _seed_bytes(seed)).digest()
        self._counter = 0
        self._buf = b""

    def randbytes(self, n: int) -> bytes:
        while len(self._buf) < n:
            self._buf += hashlib.sha256(
                self._key + self._counter.to_bytes(8, "big")).digest()
            self._counter += 1
        out, self._buf = self._buf[:n], self._buf[n:]
        return out

    def randbits(self, k: int) -> int:
        if k <= 0:
            return 0
        nbytes = (k + 7) // 8
        return int.from_bytes(self.randbytes(nbytes), "big") >> (8 * nbytes - k)

    def randbelow(self, n: int) -> int:
        """Uniform integer in ``[0, n)``, exact (rejection from fixed width)."""
        if n <= 0:
            raise ValueError("randbelow needs a positive bound")
        k = (n - 1).bit_length()
        while True:
            x = self.randbits(k)
            if x < n:
                return x

    def randrange(self, lo: int, hi: int) -> int:
        return lo + self.randbelow(hi - lo)

    def bit(self) -> int:
        return self.randbits(1)

    def permutation(self, n: int) -> tuple[int, ...]:
        # Fisher-Yates
        perm = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.randbelow(i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        return tuple(perm)

    def fork(self, *labels) -> "Rng":
        """Child stream that depends only on this key and ``labels``.

        Forking does not advance the parent, so children can be created in
        any order (or in parallel) with identical results.
        """
        h = hashlib.sha256(b"gaars.fork\x00" + self._key)
        for label in labels:
            data = _seed_bytes(label)
            h.update(len(data).to_bytes(4, "big") + data)
        child = Rng.__new__(Rng)
        child._key = h.digest()
        child._counter = 0
        child._buf = b""
        return child


def as_rng(rng) -> Rng:
    """Accept an :class:`Rng`, a seed, or ``None`` (fresh system entropy)."""
    if isinstance(rng, Rng):
        return rng
    return Rng(rng)
