"""Structure constants of the sl2 orbifold generators and their poles in k.

Usage: python3 scripts/sl2_poles.py [--json PATH]
"""

import argparse
import json
import time

from vertex_orbifold.algebras import sl2_eigenbasis
from vertex_orbifold.coefficients import render_rational
from vertex_orbifold.genericity import orbifold_generators, structure_constants


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--json", help="write the full report here")
    args = ap.parse_args()

    gs = orbifold_generators(sl2_eigenbasis())
    t0 = time.perf_counter()
    report = structure_constants(gs)
    elapsed = time.perf_counter() - t0
    print(f"generators: {', '.join(gs.names)}")
    print(f"{len(report.entries)} products in {elapsed:.1f} s")
    print("poles: {" + ", ".join(render_rational(p) for p in report.poles) + "}")
    print(f"residual factors: {len(report.residual_factors)}")
    for p in report.poles:
        print(f"  {render_rational(p)}: " + ", ".join(f"{a} o{n} {b}" for a, b, n in report.pole_sources[p]))
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report.to_json(), fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
