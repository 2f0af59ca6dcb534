"""Harness report: run forking-extraction trials, emit records, draw figures.

Records go out as tab-separated lines (see :class:`games.GameRecord`); the
figures are PNG files written with matplotlib's Agg backend.
"""

from __future__ import annotations

from collections import Counter
from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import ars, games  # noqa: E402
from .errors import ForkBudgetExhausted, NoGoodSession  # noqa: E402
from .hhs import tiny  # noqa: E402
from .rng import Rng  # noqa: E402


def fork_trials(trials: int, lam: int = 4, ring_size: int = 2, seed=0, *,
                action=None) -> list[games.GameRecord]:
    """Seeded forking-extraction runs against the honest-signer adversary."""
    action = action or tiny()
    params = ars.Params(lam)
    records = []
    for trial in range(trials):
        rng = Rng(seed).fork("trial", trial)
        master = ars.mkeygen(action, rng.fork("master"))
        keys: list[ars.KeyPair] = []
        i = 0
        while len(keys) < ring_size:
            kp = ars.keygen(action, rng.fork("key", i))
            i += 1
            if all(kp.pk != other.pk for other in keys):
                keys.append(kp)
        signer = keys[rng.fork("signer").randbelow(ring_size)]
        adv = games.HonestSignerAdversary(action, master.mpk, [k.pk for k in keys],
                                          signer.sk, params)
        oracle = games.ProgrammableOracle(rng.fork("oracle"))
        try:
            res = games.fork_and_extract(adv, params, oracle, rng.fork("fork"), action=action,
                                         msk=master.msk)
        except NoGoodSession:
            records.append(games.GameRecord("fork", trial, "no-good-session", 0))
            continue
        except ForkBudgetExhausted:
            records.append(games.GameRecord("fork", trial, "budget-exhausted", 0))
            continue
        if res.outcome == "extracted" and res.sk == signer.sk:
            outcome = "extracted"
        elif res.outcome == "violation":
            outcome = "violation"
        else:
            outcome = "wrong-key"
        records.append(games.GameRecord("fork", trial, outcome, res.rewinds))
    return records


def write_records(records: Iterable[games.GameRecord], fh) -> None:
    fh.write(games.GameRecord.HEADER + "\n")
    for rec in records:
        fh.write(rec.to_line() + "\n")


def render(records: Sequence[games.GameRecord], out_dir, prefix: str = "fork") -> list[Path]:
    """Outcome bar chart and rewind histogram; returns the written paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []

    counts = Counter(r.outcome for r in records)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    labels = sorted(counts)
    ax.bar(labels, [counts[k] for k in labels], color="#4c72b0")
    ax.set_ylabel("trials")
    ax.set_title(f"{prefix}: outcomes over {len(records)} trials")
    fig.tight_layout()
    path = out / f"{prefix}_outcomes.png"
    fig.savefig(path, dpi=100)
    plt.close(fig)
    paths.append(path)

    rewinds = [r.rewinds for r in records if r.outcome == "extracted"]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    if rewinds:
        ax.hist(rewinds, bins=range(min(rewinds), max(rewinds) + 2), color="#55a868",
                align="left")
    ax.set_xlabel("adversary runs until extraction")
    ax.set_ylabel("trials")
    fig.tight_layout()
    path = out / f"{prefix}_rewinds.png"
    fig.savefig(path, dpi=100)
    plt.close(fig)
    paths.append(path)
    return paths
