"""Free and transitive group actions (hard homogeneous spaces).

The acting group is ``(Z/q)^*`` under multiplication and the acted set is the
order-``q`` subgroup of ``(Z/p)^*`` with the identity removed::

    act(a, E) = E**a mod p

For prime ``q`` this action is free and transitive, and its decisional
Diffie-Hellman problem is exactly group DDH in ``<g>``.  The ``tiny`` preset
(p=23, q=11) is small enough to enumerate and backs the exact test oracles.
Elements on both sides are plain ``int`` values in canonical reduced form.

Security contract of the realistic presets: group-action DDH (distinguishing
``(E, aE, bE, abE)`` from ``(E, aE, bE, cE)``) and its parallel variant are
assumed hard, which reduces to DDH in a 2048-bit prime field subgroup.  These
backends are classically hard only; nothing here is post-quantum.
"""

from __future__ import annotations

import hashlib
from collections import OrderedDict
from dataclasses import dataclass
from functools import lru_cache

import gmpy2

from .errors import BackendUnsupported, DecodeError, InvalidElement

IDENTITY = 1

# Enumeration-based helpers refuse anything larger than this.
_ENUMERABLE_MAX_Q = 1 << 12


@dataclass(frozen=True)
class ActionParams:
    backend_id: str
    p: int
    q: int
    g: int
    base: int
    security_level: int

    def check(self) -> None:
        """Raise ``ValueError`` unless the parameters define a valid action."""
        p, q = self.p, self.q
        if not (gmpy2.is_prime(p, 40) and gmpy2.is_prime(q, 40)):
            raise ValueError("p and q must be prime")
        if (p - 1) % q:
            raise ValueError("q must divide p - 1")
        if self.g in (0, 1) or pow(self.g, q, p) != 1:
            raise ValueError("g must have exact order q")
        if self.base in (0, 1) or pow(self.base, q, p) != 1:
            raise ValueError("base point must lie in <g> minus the identity")
        if self.security_level < 1:
            raise ValueError("security level must be positive")


class _FixedBase:
    """Windowed comb table: ``rows[i][d] = base**(d * 2**(w*i)) mod p``."""

    __slots__ = ("rows", "mask", "w", "p")

    def __init__(self, base: int, p: int, nbits: int, w: int):
        P = gmpy2.mpz(p)
        cur = gmpy2.mpz(base)
        rows = []
        for _ in range(-(-nbits // w)):
            row = [gmpy2.mpz(1), cur]
            for _d in range(2, 1 << w):
                row.append(row[-1] * cur % P)
            rows.append(row)
            cur = row[-1] * cur % P
        self.rows = rows
        self.mask = (1 << w) - 1
        self.w = w
        self.p = P

    def pow(self, e: int) -> int:
        acc = gmpy2.mpz(1)
        rows, mask, w, P = self.rows, self.mask, self.w, self.p
        i = 0
        while e:
            d = e & mask
            if d:
                acc = acc * rows[i][d] % P
            e >>= w
            i += 1
        return int(acc)


class GroupAction:
    """Exponentiation action of ``(Z/q)^*`` on ``<g> \\ {1}``.

    Instances are logically immutable.  The only mutable piece is a bounded
    cache of fixed-base tables, which never changes results.
    """

    identity = IDENTITY

    def __init__(self, params: ActionParams, *, window: int = 4, cache_size: int = 32):
        self.params = params
        self.p = params.p
        self.q = params.q
        self.g = params.g
        self.base = params.base
        self.name = params.backend_id
        self.set_width = (self.p.bit_length() + 7) // 8
        self.group_width = (self.q.bit_length() + 7) // 8
        self._safe = self.p == 2 * self.q + 1
        self._window = window
        self._cache_size = cache_size
        self._tables: OrderedDict[int, _FixedBase] = OrderedDict()
        self._base_table = _FixedBase(self.base, self.p, self.q.bit_length(), self._window)

    def __repr__(self):
        return f"GroupAction({self.name!r}, p~2^{self.p.bit_length()}, q~2^{self.q.bit_length()})"

    def __reduce__(self):
        return (type(self), (self.params,))

    # -- acting group ------------------------------------------------------

    @property
    def group_order(self) -> int:
        """Number of elements of the acting group (and of the acted set)."""
        return self.q - 1

    def is_group_element(self, a) -> bool:
        return isinstance(a, int) and 0 < a < self.q

    def _check_group(self, a) -> int:
        if not self.is_group_element(a):
            raise InvalidElement(f"{a!r} is not an element of (Z/{self.q})^*")
        return a

    def compose(self, a: int, b: int, *more: int) -> int:
        out = self._check_group(a) * self._check_group(b) % self.q
        for c in more:
            out = out * self._check_group(c) % self.q
        return out

    def invert(self, a: int) -> int:
        return pow(self._check_group(a), -1, self.q)

    def sample_group(self, rng) -> int:
        """Exactly uniform over ``(Z/q)^*``; ``randbelow`` rejects out-of-range draws."""
        return 1 + rng.randbelow(self.q - 1)

    # -- acted set ---------------------------------------------------------

    def validate_set_element(self, E) -> bool:
        """Membership test; never raises."""
        if not isinstance(E, int) or not 1 < E < self.p:
            return False
        if self._safe:
            # order-q subgroup of a safe-prime field = quadratic residues
            return gmpy2.jacobi(E, self.p) == 1
        return gmpy2.powmod(E, self.q, self.p) == 1

    def check_set_element(self, E) -> int:
        if not self.validate_set_element(E):
            raise InvalidElement(f"{E!r} is not in the acted set")
        return E

    def act(self, a: int, E: int) -> int:
        """``a * E``.  Checks ranges only; full membership is checked at decode
        time and by :meth:`check_set_element`, since it costs an exponentiation."""
        self._check_group(a)
        if not isinstance(E, int) or not 1 < E < self.p:
            raise InvalidElement(f"{E!r} is not in the acted set")
        if E == self.base:
            return self._base_table.pow(a)
        table = self._tables.get(E)
        if table is not None:
            return table.pow(a)
        return int(gmpy2.powmod(E, a, self.p))

    def act_base(self, a: int) -> int:
        return self.act(a, self.base)

    def precompute(self, *points: int) -> None:
        """Build fixed-base tables for points that will be acted on repeatedly."""
        for E in points:
            if E == self.base:
                continue
            if E in self._tables:
                self._tables.move_to_end(E)
                continue
            self._tables[E] = _FixedBase(E, self.p, self.q.bit_length(), self._window)
            while len(self._tables) > self._cache_size:
                self._tables.popitem(last=False)

    # -- enumeration (tiny parameters only) ----------------------------------

    @property
    def enumerable(self) -> bool:
        return self.q <= _ENUMERABLE_MAX_Q

    def group_elements(self) -> range:
        if not self.enumerable:
            raise BackendUnsupported(f"{self.name} is too large to enumerate")
        return range(1, self.q)

    def set_elements(self) -> list[int]:
        return [self.act(a, self.base) for a in self.group_elements()]

    def solve_action_brute(self, E1: int, E2: int) -> int:
        """The unique ``a`` with ``act(a, E1) == E2``, by exhaustive scan."""
        if not self.enumerable:
            raise BackendUnsupported(f"{self.name} is not enumerable")
        self.check_set_element(E1)
        self.check_set_element(E2)
        for a in self.group_elements():
            if self.act(a, E1) == E2:
                return a
        raise InvalidElement("no solution; action is not transitive on these inputs")

    # -- encodings -----------------------------------------------------------

    def encode_set(self, E: int) -> bytes:
        return E.to_bytes(self.set_width, "big")

    def decode_set(self, data: bytes) -> int:
        if len(data) != self.set_width:
            raise DecodeError(f"set element must be {self.set_width} bytes")
        E = int.from_bytes(data, "big")
        if not self.validate_set_element(E):
            raise DecodeError("bytes do not encode an element of the acted set")
        return E

    def encode_group(self, a: int) -> bytes:
        return self._check_group(a).to_bytes(self.group_width, "big")

    def decode_group(self, data: bytes) -> int:
        if len(data) != self.group_width:
            raise DecodeError(f"group element must be {self.group_width} bytes")
        a = int.from_bytes(data, "big")
        if not self.is_group_element(a):
            raise DecodeError("bytes do not encode an element of the acting group")
        return a


class TinyAction(GroupAction):
    """Enumerable action with a full lookup table; for exact test oracles."""

    def __init__(self, params: ActionParams):
        super().__init__(params, cache_size=0)
        p, q = self.p, self.q
        points = sorted({pow(params.g, e, p) for e in range(1, q)})
        self._table = {a: {E: pow(E, a, p) for E in points} for a in range(1, q)}
        self._members = frozenset(points)

    def validate_set_element(self, E) -> bool:
        return isinstance(E, int) and E in self._members

    def act(self, a: int, E: int) -> int:
        try:
            return self._table[a][E]
        except (KeyError, TypeError):
            pass
        self._check_group(a)
        raise InvalidElement(f"{E!r} is not in the acted set")

    def precompute(self, *points: int) -> None:
        pass


# -- presets -------------------------------------------------------------------

TINY_PARAMS = ActionParams("tiny", p=23, q=11, g=2, base=2, security_level=1)

# Prime-order subgroup of a 2048-bit field, derived by generate_modp_params()
# from the label below.  Reproduced by the test suite.
MODP2048_Q256_LABEL = b"gaars/modp2048q256"
_Q256_P = int(
    "8562422d92e998cfc0d185bafe6351eb0ce8068abd312e5ee25f57ceb753b044"
    "edd58368ac1f3f783d3849a8e60b644710fbebabc814e20e27a8094efb73add2"
    "8419db6796488d46c4e955244e639fb1d639e945707375193f620404a860238f"
    "345bbdb4d31f69850b20e9daf37916b4fc118bd66fddee23f4af14fd7219910c"
    "89313f5ded4583064c449a150c24e14a1ee6f56346c2fb8a6e04e2479c093857"
    "42c2a98a50b815c9ea3c885d8e08b9a04b55f50e1265b6472e1d93e1f0dbf254"
    "592acb65f2ed4be8a317b96dd0f2efc4074c7f21f71aa85144e37e3939b532ff"
    "84ab3893aed34c56def67fbf808b19f746df8a53a5c5c75fe22b78c1365c7bc7", 16)
_Q256_Q = int("906ab3dea5a94d93a3fe2d4b2c0838ebf3d42400df3f09a320c5e6bea3bd98af", 16)
_Q256_G = int(
    "1d0296c22c1a4cb36d4d83472f7ba8cb13e20ce1769c33280bedb1adaae6e429"
    "ba83ffdadabb21d7a76de5878cf96ae76c85dfb4451f86fe4fabb4fc68782a81"
    "8b15456b19c5abaa7066070031424e2dbba07df07d53ab5e9148fffcb51b7feb"
    "c4300b0abeab937d47a9cf16ec0c0503cf5329db1240e5a1296f0718501c42c5"
    "3ce0a9a7cbced89767336ff5e41b7817ff5c7a70802117b086bb4dc9ef1d93c6"
    "1f131d9f9c31e4d7ce075c1719effd3b17142cbf77bc72d7cb1d9a77efb01675"
    "9418f2bdc2a74e80be9f5b608fd0efefb2a281f2e80a1abe71f51f19dab7ac72"
    "430a26b52a61933f5699db8ce1bb9ab855f2b28e96479cdbee7f8a34c061bff3", 16)
MODP2048_Q256_PARAMS = ActionParams(
    "modp2048q256", p=_Q256_P, q=_Q256_Q, g=_Q256_G, base=_Q256_G, security_level=112)

# RFC 3526 group 14: 2048-bit safe prime, q = (p - 1) / 2, g = 2.
_RFC3526_P = int(
    "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74"
    "020BBEA63B139B22514A08798E3404DDEF9519B3CD3A431B302B0A6DF25F1437"
    "4FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF05"
    "98DA48361C55D39A69163FA8FD24CF5F83655D23DCA3AD961C62F356208552BB"
    "9ED529077096966D670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
    "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9DE2BCBF695581718"
    "3995497CEA956AE515D2261898FA051015728E5A8AACAA68FFFFFFFFFFFFFFFF", 16)
MODP2048_SAFE_PARAMS = ActionParams(
    "modp2048safe", p=_RFC3526_P, q=(_RFC3526_P - 1) // 2, g=2, base=2,
    security_level=112)


def _expand(label: bytes, nbits: int, counter: int) -> int:
    out = b""
    i = 0
    while len(out) * 8 < nbits:
        out += hashlib.sha256(label + counter.to_bytes(4, "big") + i.to_bytes(4, "big")).digest()
        i += 1
    return int.from_bytes(out, "big") >> (len(out) * 8 - nbits)


def generate_modp_params(label: bytes, pbits: int = 2048, qbits: int = 256,
                         security_level: int = 112) -> ActionParams:
    """Nothing-up-my-sleeve Schnorr-group parameters derived from ``label``.

    q is the first prime above a hashed ``qbits``-bit integer; p = k*q + 1 for
    the first hashed even cofactor k giving a ``pbits``-bit prime; g is the
    smallest h >= 2 with h**((p-1)/q) != 1, raised to that power.
    """
    q = int(gmpy2.next_prime(_expand(label + b"/q", qbits, 0) | (1 << (qbits - 1))))
    counter = 0
    while True:
        k = _expand(label + b"/p", pbits - qbits, counter) | (1 << (pbits - qbits - 1))
        k -= k % 2
        p = k * q + 1
        if p.bit_length() == pbits and gmpy2.is_prime(p, 50):
            break
        counter += 1
    h = 2
    while pow(h, (p - 1) // q, p) == 1:
        h += 1
    g = pow(h, (p - 1) // q, p)
    name = label.decode(errors="replace").rsplit("/", 1)[-1]
    return ActionParams(name, p=p, q=q, g=g, base=g, security_level=security_level)


_PRESETS = {
    "tiny": TINY_PARAMS,
    "modp2048q256": MODP2048_Q256_PARAMS,
    "modp2048safe": MODP2048_SAFE_PARAMS,
}
_ALIASES = {"realistic": "modp2048q256"}


def backend_names() -> list[str]:
    return sorted([*_PRESETS, *_ALIASES])


@lru_cache(maxsize=None)
def get_backend(name: str = "realistic") -> GroupAction:
    """Shared backend instance for a preset name (``tiny``, ``realistic``, ...)."""
    key = _ALIASES.get(name, name)
    try:
        params = _PRESETS[key]
    except KeyError:
        raise BackendUnsupported(f"unknown backend {name!r}; choose from {backend_names()}") from None
    if key == "tiny":
        return TinyAction(params)
    return GroupAction(params)


def tiny() -> TinyAction:
    return get_backend("tiny")


def realistic() -> GroupAction:
    return get_backend("realistic")
