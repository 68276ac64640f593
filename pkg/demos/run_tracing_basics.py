"""Trace level sets of simple polynomials and render them.

Walks through the three regimes of f(z) = z^5 - 1: five ovals below the
critical value, the five-petal critical curve at eps = 1, and a single
enclosing curve above it.
"""

import pathlib

import numpy as np

from levelcurves import parse_function_spec, trace_level_set
from levelcurves.svgout import render_svg

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)


def main():
    print("== circles: f(z) = z^2 ==")
    f = parse_function_spec("poly:1,0,0")
    for eps in (0.25, 1.0, 4.0):
        (comp,) = trace_level_set(f, eps)
        radius = eps**0.5
        dev = np.max(np.abs(np.abs(comp.points) - radius))
        print(f"  eps={eps:<5}: circle of radius {radius:.3f}, "
              f"{len(comp.points)} points, radial deviation {dev:.2e}")

    print("== the three regimes of f(z) = z^5 - 1 ==")
    f = parse_function_spec("poly:1,0,0,0,0,-1")
    for eps in (0.5, 1.0, 1.5):
        comps = trace_level_set(f, eps)
        kinds = [
            f"{len(c.arcs)} arc(s), {len(c.vertices)} vertex(es)" for c in comps
        ]
        print(f"  eps={eps}: {len(comps)} component(s): {kinds}")
        svg = OUT / f"z5m1_eps{eps}.svg"
        svg.write_text(render_svg(comps))
        print(f"    wrote {svg}")

    print("the critical curve at eps=1 has one vertex of multiplicity 4 at 0,")
    print("where 2*(4+1) = 10 arc ends meet")


if __name__ == "__main__":
    main()
