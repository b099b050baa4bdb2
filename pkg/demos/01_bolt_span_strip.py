"""How far apart can bolts be? Planning the 29-resistor strip.

The strip is 91 mm long and carries an 0805 resistor every 3 mm. A 3 mm
housing holds parts down only between bolts at most 27 mm apart, so the
planner has to chain flanking bolt pairs down the strip. Thinner housings
flex more, which means shorter spans and more bolts.

Run:  python demos/01_bolt_span_strip.py
"""

from __future__ import annotations

from housingforge import default_library, plan_bolts, verify_plan
from housingforge.bolts import max_span
from housingforge.fixtures import strip_board


def main() -> None:
    lib = default_library()
    board = strip_board()
    print(f"{board.name}: {len(board.components)} parts on a 23 x 91 mm board\n")

    for t in (1.5, 2.0, 3.0, 4.0):
        plan = plan_bolts(board, lib, thickness=t)
        problems = verify_plan(board, plan)
        print(f"thickness {t:.1f} mm: span limit {max_span(t):5.1f} mm, "
              f"{len(plan.holes):2d} holes in {plan.stations} flank pairs, "
              f"longest certified span {plan.max_span_used:5.2f} mm, "
              f"verifier: {'clean' if not problems else problems}")

    plan = plan_bolts(board, lib, thickness=3.0)
    print("\nbolt rows at 3 mm (y positions):",
          sorted({round(h.position.y, 2) for h in plan.holes}))
    # every part names the holes that certify it
    print("R15 is held by holes", plan.coverage["R15"])


if __name__ == "__main__":
    main()
