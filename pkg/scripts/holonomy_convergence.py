#!/usr/bin/env python3
"""Convergence study: octant-loop rotation angle versus integrator step.

The loop encloses one eighth of the surface, so the exact angle is pi/2.
Prints a CSV table of step, angle, absolute error, and the observed order
between consecutive step halvings (the integrator is fourth order, so the
column should hover near 4 until roundoff takes over).
"""

import argparse
import math
import sys

from fibretransport.instances import holonomy_angle, make_instance

EXACT = math.pi / 2


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", default="8e-3,4e-3,2e-3,1e-3,5e-4",
                    help="comma-separated integrator steps, large to small")
    ap.add_argument("--loop", default="octant")
    args = ap.parse_args()

    steps = [float(s) for s in args.steps.split(",") if s.strip()]
    print("step,angle,abs_error,observed_order")
    prev_err = None
    for h in steps:
        spec = make_instance("sphere-levi-civita", step=h)
        ang = holonomy_angle(spec.transport, spec.path_named(args.loop),
                             spec.metric)
        err = abs(ang - EXACT)
        if prev_err is None or err == 0.0:
            order = ""
        else:
            order = f"{math.log(prev_err / err) / math.log(2):.2f}"
        print(f"{h:.6e},{ang:.15f},{err:.6e},{order}")
        prev_err = err
    return 0


if __name__ == "__main__":
    sys.exit(main())
