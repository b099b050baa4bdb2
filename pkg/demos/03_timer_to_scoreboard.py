"""Taking a countdown timer apart and building a scoreboard from its parts.

Nothing is soldered, so once the timer's housing is unbolted every part can
go straight into the next design. The reuse report counts what carries over;
the cycle ledger tracks how often one printed housing has been reassembled,
because pressed contacts wear out after about seven assemblies.

Run:  python demos/03_timer_to_scoreboard.py
"""

from __future__ import annotations

import tempfile
from pathlib import Path

from housingforge import assembly_report, default_library, diff_reuse, plan_bolts
from housingforge.fixtures import scoreboard_board, timer_board
from housingforge.reuse import load_ledger, record_cycle_file


def main() -> None:
    lib = default_library()
    timer, scoreboard = timer_board(), scoreboard_board()

    print(diff_reuse(timer, scoreboard).text())
    print(assembly_report(scoreboard, plan_bolts(scoreboard, lib)).text())

    with tempfile.TemporaryDirectory() as tmp:
        ledger = Path(tmp) / "cycles.txt"
        for n in range(1, 9):
            _, warning = record_cycle_file(ledger, "timer-housing")
            print(f"assembly {n}: {warning or 'ok'}")
        print("\nledger file:\n" + ledger.read_text())
        assert load_ledger(ledger).count("timer-housing") == 8


if __name__ == "__main__":
    main()
