"""Extract the planar-graph structure of traced level curves.

Shows the combinatorial laws on the lemniscate and the z^5 - 1 critical
curve: vertex degrees 2*(mult+1), each edge between two distinct faces, and
the face count sum(mult) + 2.
"""

import pathlib

from levelcurves import (
    build_graph,
    face_count,
    face_of_point,
    parse_function_spec,
    trace_level_set,
    zeros_per_face,
)
from levelcurves.svgout import render_svg

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)


def describe(name, f, eps):
    comps = trace_level_set(f, eps)
    graphs = [build_graph(c) for c in comps]
    print(f"== {name} at eps={eps}: {len(comps)} component(s) ==")
    for g in graphs:
        bounded, total = face_count(g)
        print(f"  V={len(g.vertices)} E={len(g.edges)} F={total} ({bounded} bounded)")
        for vi, (pos, mult) in enumerate(g.vertices):
            print(f"    vertex {pos:.4f} with mult {mult}: degree {g.degree(vi)}")
        per_face = zeros_per_face(g, f)
        for fc in g.bounded_faces:
            inside = ", ".join(f"{kind} {z:.3f}" for z, _, kind in per_face[fc.id])
            print(f"    face {fc.id}: {inside}")
    svg = OUT / f"{name}_graph.svg"
    svg.write_text(render_svg(comps, graphs))
    print(f"  wrote {svg}")
    return graphs


def main():
    lem = parse_function_spec("poly:1,0,-1")
    describe("lemniscate", lem, 1.0)

    z5 = parse_function_spec("poly:1,0,0,0,0,-1")
    graphs = describe("z5m1", z5, 1.0)

    g = graphs[0]
    print("== face membership ==")
    for z, _ in z5.zeros:
        print(f"  zero {z:.3f} lies in face {face_of_point(g, z)}")
    print(f"  the point 40+40i lies in face {face_of_point(g, 40 + 40j)} (unbounded)")


if __name__ == "__main__":
    main()
