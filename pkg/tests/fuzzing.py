"""Mutation fuzzing of every text reader.

A reader passes when each input either parses or raises one of the toolchain's
named errors (all subclasses of HousingForgeError, syntax errors included).
Anything else (IndexError, RecursionError, a bare ValueError...) is a crash.
"""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import dataclass, field

from housingforge.bolts import load_calibration
from housingforge.errors import HousingForgeError
from housingforge.ingest import SourceFormat, default_library, load_library, parse_board
from housingforge.reuse import parse_ledger

from samples import seed_corpus

_WEIRD = [b"nan", b"inf", b"-inf", b"1e309", b"-0", b"0", b"1e-320", b"99999999999", b"-5", b"0x10", b"1_0",
          b'"', b"(", b")", b"\\", b"#", b"'", b"\x00", b"\xff", b"\xc3", b"top", b"bottom", b"end", b"package",
          b"component", b"outline", b"Edge.Cuts", b"F.Cu", b"B.Cu", b"(at 1 2)", b"(layer \"Edge.Cuts\")"]


def _targets():
    lib = default_library()
    return {
        "native": lambda d: parse_board(d, SourceFormat.NATIVE_BOARD, lib),
        "kicad": lambda d: parse_board(d, SourceFormat.KICAD_PCB_SUBSET, lib),
        "library": load_library,
        "calibration": load_calibration,
        "ledger": parse_ledger,
    }


def mutate(rng: random.Random, data: bytes) -> bytes:
    buf = bytearray(data)
    for _ in range(rng.randint(1, 6)):
        op = rng.randrange(9)
        pos = rng.randrange(len(buf) + 1)
        if op == 0 and buf:  # flip a byte
            buf[min(pos, len(buf) - 1)] = rng.randrange(256)
        elif op == 1:  # insert a dictionary token
            buf[pos:pos] = rng.choice(_WEIRD)
        elif op == 2 and buf:  # delete a run
            del buf[pos:pos + rng.randint(1, 40)]
        elif op == 3:  # truncate
            del buf[pos:]
        elif op == 4:  # duplicate a run
            buf[pos:pos] = buf[pos:pos + rng.randint(1, 200)]
        elif op == 5:  # replace a number-ish token
            lines = bytes(buf).split(b"\n")
            i = rng.randrange(len(lines))
            toks = lines[i].split(b" ")
            toks[rng.randrange(len(toks))] = rng.choice(_WEIRD)
            lines[i] = b" ".join(toks)
            buf = bytearray(b"\n".join(lines))
        elif op == 6:  # shuffle two lines
            lines = bytes(buf).split(b"\n")
            i, j = rng.randrange(len(lines)), rng.randrange(len(lines))
            lines[i], lines[j] = lines[j], lines[i]
            buf = bytearray(b"\n".join(lines))
        elif op == 7:  # deep nesting
            n = rng.choice([10, 600, 5000])
            buf[pos:pos] = b"(" * n + b"x" + b")" * rng.choice([0, n])
        else:  # random garbage
            buf[pos:pos] = bytes(rng.randrange(256) for _ in range(rng.randint(1, 16)))
    return bytes(buf)


@dataclass
class FuzzResult:
    executions: int = 0
    parsed: int = 0
    rejected: int = 0
    errors: Counter = field(default_factory=Counter)  # rejection counts by error class
    crashes: list = field(default_factory=list)
    seconds: float = 0.0


def run_campaign(seconds: float, seed: int = 0, max_crashes: int = 20) -> FuzzResult:
    rng = random.Random(seed)
    corpus = seed_corpus()
    targets = _targets()
    kinds = sorted(targets)
    res = FuzzResult()
    start = time.monotonic()
    while time.monotonic() - start < seconds and len(res.crashes) < max_crashes:
        kind = kinds[res.executions % len(kinds)]
        if rng.random() < 0.03:
            data = bytes(rng.randrange(256) for _ in range(rng.randint(0, 300)))
        else:
            data = mutate(rng, rng.choice(corpus[kind]))
        res.executions += 1
        try:
            targets[kind](data)
            res.parsed += 1
        except HousingForgeError as exc:
            res.rejected += 1
            res.errors[type(exc).__name__] += 1
        except Exception as exc:  # noqa: BLE001 - every other exception is a finding
            res.crashes.append((kind, data, repr(exc)))
    res.seconds = time.monotonic() - start
    return res
