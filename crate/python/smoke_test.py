#!/usr/bin/env python3
"""Smoke test for the anglekit_py extension module.

Builds nothing itself: expects `cargo build -p anglekit-py` (or --release)
to have produced libanglekit_py.so, which it copies next to itself under
the importable name.
"""

import math
import pathlib
import shutil
import sys

HERE = pathlib.Path(__file__).resolve().parent
ROOT = HERE.parent


def locate_extension():
    candidates = [
        ROOT / "target" / "release" / "libanglekit_py.so",
        ROOT / "target" / "debug" / "libanglekit_py.so",
    ]
    built = [p for p in candidates if p.is_file()]
    if not built:
        sys.exit("build the extension first: cargo build -p anglekit-py")
    newest = max(built, key=lambda p: p.stat().st_mtime)
    target = HERE / "anglekit_py.so"
    shutil.copyfile(newest, target)
    return target


def approx(a, b, tol=5e-3):
    return abs(a - b) <= tol


def main():
    locate_extension()
    sys.path.insert(0, str(HERE))
    import anglekit_py as ak

    print(f"anglekit_py {ak.__version__}")

    # cube fixture: f-vector and belt property
    cube = ak.Polytope.fixture("cube 3")
    assert cube.f_vector() == [8, 12, 6], cube.f_vector()
    assert cube.is_belt_polytope()

    # interior angle vector of the cube is (1, 3, 3)
    vec = cube.angle_vector(side="interior", spec="standard", samples=200_000, seed=7)
    for got, want in zip(vec, (1.0, 3.0, 3.0)):
        value, stderr, _ = got
        assert approx(value, want, max(4 * stderr, 5e-3)), (vec,)
    print("cube interior angle vector ~ (1, 3, 3):", [round(v, 4) for v, _, _ in vec])

    # Gram's relation on the square under the body valuation
    square = ak.Polytope.fixture("square")
    computed, sigma, ok = square.gram_check(spec="body", samples=100_000, seed=3)
    assert ok, (computed, sigma)
    assert approx(computed, -1.0, max(4 * sigma, 1e-3))
    print(f"square gram check (body): {computed:.6f} (sigma {sigma:.2e})")

    # exact combinatorics: Whitney numbers of the coordinate 3-cube lattice
    big, small = ak.zonotope_whitney_numbers([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert big == [1, 3, 3, 1] and small == [1, -3, 3, -1], (big, small)
    print("boolean lattice whitney numbers:", big, small)

    # cocharacteristic of five generic vectors in dimension three: 1 + 10t + 15t^2 + 6t^3
    assert ak.generic_cocharacteristic(3, 2) == [1, 10, 15, 6]

    # flag-angle entries of the square: S={0}: 1, S={1}: 2, S={0,1}: 2
    flags = {
        tuple(dims): (value, stderr)
        for dims, value, stderr in square.flag_angle_vector(
            side="interior", spec="standard", samples=50_000, seed=5
        )
    }
    assert approx(flags[(0,)][0], 1.0) and approx(flags[(1,)][0], 2.0)
    assert approx(flags[(0, 1)][0], 2.0)
    print("square interior flag entries:", {k: round(v[0], 4) for k, v in flags.items()})

    # ab-index machinery: the {E, M∘E} family spans in degree 3
    rank, expected = ak.ab_spanning_rank(3)
    assert rank == expected == 8, (rank, expected)
    print(f"ab spanning rank at degree 3: {rank}/{expected}")

    # hexagon zonotope from raw generators
    hexagon = ak.zonotope([[2, 0], [0, 3], [2, 3]])
    assert hexagon.f_vector() == [6, 6]
    v = hexagon.angle_vector(side="exterior", spec="standard", samples=100_000, seed=11)
    assert approx(sum(e[0] for e in v), 1.0 + 3.0, 2e-2)  # W = (1, 3)
    print("hexagon exterior angle vector:", [round(e[0], 4) for e in v])

    print("smoke test passed")


if __name__ == "__main__":
    main()
