"""``gaars`` command line.

Exit codes: 0 success, 1 verification or judge rejection, 2 malformed input,
3 key-relation violation.  Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from . import ars, codec
from .codec import Kind
from .errors import (
    BackendUnsupported,
    DecodeError,
    DuplicateStatement,
    GaarsError,
    InvalidElement,
    WitnessNotInRing,
)
from .hhs import backend_names, get_backend
from .rng import Rng

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_MALFORMED = 2
EXIT_KEY_RELATION = 3


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class CliConfig:
    backend: str
    lam: int
    seed: str | None = None

    def __post_init__(self):
        if self.seed is not None and self.backend != "tiny":
            raise CliError(EXIT_MALFORMED, "--seed is only accepted with --backend tiny")

    @property
    def params(self) -> ars.Params:
        return ars.Params(self.lam)

    def rng(self, *labels) -> Rng:
        return Rng(self.seed).fork(*labels) if self.seed is not None else Rng()


def _need(args, name: str) -> str:
    value = getattr(args, name)
    if value is None:
        raise CliError(EXIT_MALFORMED, f"--{name.replace('_', '-')} is required")
    return value


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError(EXIT_MALFORMED, f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, data: bytes) -> None:
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise CliError(EXIT_MALFORMED, f"cannot write {path}: {exc.strerror}") from None


def _load(action, path: str, kind: Kind):
    try:
        return codec.load(action, _read(path), kind)
    except (DecodeError, InvalidElement) as exc:
        raise CliError(EXIT_MALFORMED, f"{path}: {exc}") from None


def _load_claim(action, path: str):
    """A claimed signer is an opening file or a plain public-key file."""
    data = _read(path)
    try:
        kind, _ = codec.unpack(data)
        if kind == Kind.PUBLIC_KEY:
            return codec.load(action, data, Kind.PUBLIC_KEY)
        return codec.load(action, data, Kind.OPENING)
    except (DecodeError, InvalidElement) as exc:
        raise CliError(EXIT_MALFORMED, f"{path}: {exc}") from None


def _ring(action, path: str) -> tuple[int, ...]:
    ring = _load(action, path, Kind.RING)
    if len(set(ring)) != len(ring):
        raise CliError(EXIT_MALFORMED, f"{path}: ring lists a key twice")
    return ring


def cmd_mkeygen(cfg, action, args) -> int:
    kp = ars.mkeygen(action, cfg.rng("mkeygen"))
    _write(_need(args, "msk"), codec.dump(action, Kind.MASTER_SECRET_KEY, kp.msk))
    _write(_need(args, "mpk"), codec.dump(action, Kind.MASTER_PUBLIC_KEY, kp.mpk))
    print(codec.fingerprint(action, kp.mpk))
    return EXIT_OK


def cmd_keygen(cfg, action, args) -> int:
    key = _need(args, "key")
    kp = ars.keygen(action, cfg.rng("keygen"))
    _write(key, codec.dump(action, Kind.SECRET_KEY, kp.sk))
    _write(key + ".pub", codec.dump(action, Kind.PUBLIC_KEY, kp.pk))
    print(codec.fingerprint(action, kp.pk))
    return EXIT_OK


def cmd_ring(cfg, action, args) -> int:
    pks = [_load(action, p, Kind.PUBLIC_KEY) for p in args.pubkeys]
    if not pks:
        raise CliError(EXIT_MALFORMED, "a ring needs at least one public key")
    if len(set(pks)) != len(pks):
        raise CliError(EXIT_MALFORMED, "ring lists a key twice")
    _write(_need(args, "ring"), codec.dump(action, Kind.RING, pks))
    for pk in pks:
        print(codec.fingerprint(action, pk))
    return EXIT_OK


def cmd_sign(cfg, action, args) -> int:
    mpk = _load(action, _need(args, "mpk"), Kind.MASTER_PUBLIC_KEY)
    sk = _load(action, _need(args, "key"), Kind.SECRET_KEY)
    ring = _ring(action, _need(args, "ring"))
    m = _read(_need(args, "msg"))
    try:
        sig = ars.sign(action, mpk, ring, m, sk, cfg.params, cfg.rng("sign"))
    except WitnessNotInRing:
        raise CliError(EXIT_KEY_RELATION, "secret key matches no ring member") from None
    _write(_need(args, "sig"), codec.dump(action, Kind.SIGNATURE, sig))
    return EXIT_OK


def cmd_verify(cfg, action, args) -> int:
    mpk = _load(action, _need(args, "mpk"), Kind.MASTER_PUBLIC_KEY)
    ring = _ring(action, _need(args, "ring"))
    m = _read(_need(args, "msg"))
    try:
        sig = codec.load(action, _read(_need(args, "sig")), Kind.SIGNATURE)
    except (DecodeError, InvalidElement) as exc:
        print(f"reject: {exc}", file=sys.stderr)
        return EXIT_REJECT
    if ars.verify(action, mpk, ring, m, sig, cfg.params):
        print("accept")
        return EXIT_OK
    print("reject", file=sys.stderr)
    return EXIT_REJECT


def cmd_open(cfg, action, args) -> int:
    msk = _load(action, _need(args, "msk"), Kind.MASTER_SECRET_KEY)
    if args.mpk is not None:
        mpk = _load(action, args.mpk, Kind.MASTER_PUBLIC_KEY)
        if action.act(msk, action.base) != mpk:
            raise CliError(EXIT_KEY_RELATION, "master secret does not match --mpk")
    ring = _ring(action, _need(args, "ring"))
    m = _read(_need(args, "msg"))
    sig = _load(action, _need(args, "sig"), Kind.SIGNATURE)
    if sig.t != cfg.params.sessions(len(ring)):
        raise CliError(EXIT_MALFORMED, "signature session count does not match ring and lambda")
    pk, proof = ars.open_with_proof(action, msk, ring, m, sig, cfg.params, cfg.rng("open"))
    _write(_need(args, "claimed_pk"), codec.dump(action, Kind.OPENING, pk))
    _write(_need(args, "proof"), codec.dump(action, Kind.JUDGE_PROOF, proof))
    print("⊥" if pk is None else codec.fingerprint(action, pk))
    return EXIT_OK


def cmd_judge(cfg, action, args) -> int:
    mpk = _load(action, _need(args, "mpk"), Kind.MASTER_PUBLIC_KEY)
    ring = _ring(action, _need(args, "ring"))
    sig = _load(action, _need(args, "sig"), Kind.SIGNATURE)
    pk = _load_claim(action, _need(args, "claimed_pk"))
    proof = _load(action, _need(args, "proof"), Kind.JUDGE_PROOF)
    if ars.judge(action, mpk, ring, sig, pk, proof, cfg.params):
        print(codec.fingerprint(action, pk))
        return EXIT_OK
    print("reject", file=sys.stderr)
    return EXIT_REJECT


def cmd_report(cfg, action, args) -> int:
    from . import report

    records = report.fork_trials(args.trials, cfg.lam, args.ring_size,
                                 cfg.seed if cfg.seed is not None else 0, action=action)
    report.write_records(records, sys.stdout)
    for path in report.render(records, args.out):
        print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "mkeygen": cmd_mkeygen,
    "keygen": cmd_keygen,
    "ring": cmd_ring,
    "sign": cmd_sign,
    "verify": cmd_verify,
    "open": cmd_open,
    "judge": cmd_judge,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", default="realistic", choices=backend_names())
    common.add_argument("--lambda", dest="lam", type=int, default=8)
    common.add_argument("--seed", help="deterministic randomness (tiny backend only)")
    for flag in ("--mpk", "--msk", "--key", "--ring", "--msg", "--sig", "--proof",
                 "--claimed-pk"):
        common.add_argument(flag)

    parser = argparse.ArgumentParser(prog="gaars", description="Accountable ring signatures "
                                     "over a group action.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "ring":
            p.add_argument("pubkeys", nargs="*", help="public-key files, in ring order")
        if name == "report":
            p.add_argument("--out", default="report", help="directory for figures")
            p.add_argument("--trials", type=int, default=20)
            p.add_argument("--ring-size", type=int, default=2)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED if exc.code else EXIT_OK
    try:
        if args.lam < 1:
            raise CliError(EXIT_MALFORMED, "--lambda must be positive")
        cfg = CliConfig(args.backend, args.lam, args.seed)
        action = get_backend(args.backend)
        return COMMANDS[args.command](cfg, action, args)
    except CliError as exc:
        print(f"gaars: {exc}", file=sys.stderr)
        return exc.code
    except (DecodeError, InvalidElement, DuplicateStatement) as exc:
        print(f"gaars: malformed input: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except BackendUnsupported as exc:
        print(f"gaars: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except GaarsError as exc:
        print(f"gaars: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
