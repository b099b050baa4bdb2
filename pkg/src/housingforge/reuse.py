"""Component reuse across design revisions and housing reassembly cycles."""

from __future__ import annotations

import fcntl
import os
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .errors import MissingPartNumbers
from .ingest.textfmt import decode, lines, quote, read_header
from .model import BoardDesign

CYCLE_LIMIT = 7  # pressed contacts degrade once a housing has been assembled this often


@dataclass(frozen=True)
class ReuseReport:
    matched: tuple[tuple[str, int], ...]  # (partNumber, reusable count), sorted by part number
    only_in_old: tuple[tuple[str, int], ...]
    only_in_new: tuple[tuple[str, int], ...]
    package_mismatch: tuple[str, ...] = ()

    @property
    def matched_total(self) -> int:
        return sum(n for _, n in self.matched)

    @property
    def new_total(self) -> int:
        return self.matched_total + sum(n for _, n in self.only_in_new)

    @property
    def reusable_fraction(self) -> float:
        return self.matched_total / self.new_total if self.new_total else 0.0

    def text(self) -> str:
        pct = round(100.0 * self.reusable_fraction)
        out = [f"reusable: {self.matched_total}/{self.new_total} ({pct}%)"]
        out += [f"  reuse {part} x{n}" for part, n in self.matched]
        out += [f"  only in old: {part} x{n}" for part, n in self.only_in_old]
        out += [f"  only in new: {part} x{n}" for part, n in self.only_in_new]
        out += [f"  packageMismatch: {note}" for note in self.package_mismatch]
        return "\n".join(out) + "\n"

    def tsv(self) -> str:
        out = ["kind\tpart\tcount"]
        out += [f"matched\t{p}\t{n}" for p, n in self.matched]
        out += [f"only-old\t{p}\t{n}" for p, n in self.only_in_old]
        out += [f"only-new\t{p}\t{n}" for p, n in self.only_in_new]
        out += [f"package-mismatch\t{note}\t0" for note in self.package_mismatch]
        out.append(f"fraction\t{self.matched_total}/{self.new_total}\t{self.reusable_fraction:.6f}")
        return "\n".join(out) + "\n"


def _bom(board: BoardDesign) -> tuple[Counter, dict[str, set[str]]]:
    missing = sorted(c.ref for c in board.components if not c.part_number)
    if missing:
        raise MissingPartNumbers(missing)
    counts = Counter(c.part_number for c in board.components)
    packages: dict[str, set[str]] = {}
    for c in board.components:
        packages.setdefault(c.part_number, set()).add(c.package.name)
    return counts, packages


def diff_reuse(old: BoardDesign, new: BoardDesign) -> ReuseReport:
    """Multiset intersection of the two BOMs keyed by part number.

    A part number that appears in both designs with different packages is not
    counted as reusable; it is listed under ``package_mismatch`` instead.
    """
    old_n, old_pk = _bom(old)
    new_n, new_pk = _bom(new)
    matched, mismatch = [], []
    only_old, only_new = Counter(old_n), Counter(new_n)
    for part in sorted(set(old_n) & set(new_n)):
        if old_pk[part] != new_pk[part]:
            mismatch.append(f"{part}: {'/'.join(sorted(old_pk[part]))} -> {'/'.join(sorted(new_pk[part]))}")
            continue
        n = min(old_n[part], new_n[part])
        matched.append((part, n))
        only_old[part] -= n
        only_new[part] -= n
    rest = lambda c: tuple(sorted((p, n) for p, n in c.items() if n > 0))  # noqa: E731
    return ReuseReport(tuple(matched), rest(only_old), rest(only_new), tuple(mismatch))


# --------------------------------------------------------------------------- cycle ledger


@dataclass(frozen=True)
class DurabilityWarning:
    housing_id: str
    count: int
    limit: int = CYCLE_LIMIT

    def __str__(self) -> str:
        return (f"housing {self.housing_id} has been assembled {self.count} times "
                f"(limit {self.limit}); print a new housing")


@dataclass(frozen=True)
class CycleLedger:
    counts: dict[str, int] = field(default_factory=dict)
    limit: int = CYCLE_LIMIT

    def __post_init__(self) -> None:
        for hid, n in self.counts.items():
            if n < 0:
                raise ValueError(f"negative cycle count for {hid}")

    def count(self, housing_id: str) -> int:
        return self.counts.get(housing_id, 0)

    def warned(self, housing_id: str) -> bool:
        return self.count(housing_id) >= self.limit


def record_cycle(ledger: CycleLedger, housing_id: str) -> tuple[CycleLedger, DurabilityWarning | None]:
    """One more assembly of ``housing_id``; warns once the count reaches the limit."""
    n = ledger.count(housing_id) + 1
    counts = dict(ledger.counts)
    counts[housing_id] = n
    updated = CycleLedger(counts, ledger.limit)
    return updated, (DurabilityWarning(housing_id, n, ledger.limit) if n >= ledger.limit else None)


def dump_ledger(ledger: CycleLedger) -> bytes:
    body = "".join(f"{quote(h)} {n}\n" for h, n in sorted(ledger.counts.items()))
    return ("reuse-ledger v1\n" + body).encode("utf-8")


def parse_ledger(data: bytes | str) -> CycleLedger:
    it = lines(decode(data))
    read_header(it, "reuse-ledger", "v1")
    counts: dict[str, int] = {}
    for ln in it:
        ln.expect_len(2)
        hid, raw = ln.token(0), ln.token(1)
        if not (raw.isascii() and raw.isdigit()):  # str.isdigit also accepts "²"
            raise ln.error("cycle count must be a non-negative integer", 1)
        if hid in counts:
            raise ln.error(f"duplicate housing {hid!r}", 0)
        counts[hid] = int(raw)
    return CycleLedger(counts)


def load_ledger(path: str | Path) -> CycleLedger:
    p = Path(path)
    if not p.exists():
        return CycleLedger()
    with open(p, "rb") as fh:
        fcntl.flock(fh, fcntl.LOCK_SH)
        try:
            return parse_ledger(fh.read())
        finally:
            fcntl.flock(fh, fcntl.LOCK_UN)


def record_cycle_file(path: str | Path, housing_id: str) -> tuple[CycleLedger, DurabilityWarning | None]:
    """Read-modify-write of a ledger file under an exclusive advisory lock."""
    p = Path(path)
    fd = os.open(p, os.O_RDWR | os.O_CREAT, 0o644)
    with os.fdopen(fd, "r+b") as fh:
        fcntl.flock(fh, fcntl.LOCK_EX)
        try:
            data = fh.read()
            ledger = parse_ledger(data) if data.strip() else CycleLedger()
            ledger, warning = record_cycle(ledger, housing_id)
            fh.seek(0)
            fh.truncate()
            fh.write(dump_ledger(ledger))
            fh.flush()
            os.fsync(fh.fileno())
        finally:
            fcntl.flock(fh, fcntl.LOCK_UN)
    return ledger, warning


__all__ = ["ReuseReport", "diff_reuse", "CycleLedger", "DurabilityWarning", "record_cycle",
           "dump_ledger", "parse_ledger", "load_ledger", "record_cycle_file", "CYCLE_LIMIT"]
