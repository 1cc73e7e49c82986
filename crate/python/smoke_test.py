#!/usr/bin/env python3
"""Smoke test for the orientavoid Python bindings.

Build the extension first:

    cargo build -p orientavoid-py --release

then run this script; it locates the built cdylib, stages it as an
importable module, and exercises the main types and operations.
"""

import shutil
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def stage_module() -> None:
    candidates = [
        REPO / "target" / "release" / "liborientavoid.so",
        REPO / "target" / "debug" / "liborientavoid.so",
        REPO / "target" / "release" / "liborientavoid.dylib",
        REPO / "target" / "debug" / "liborientavoid.dylib",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit("extension not found; run: cargo build -p orientavoid-py --release")
    stage = Path(tempfile.mkdtemp(prefix="orientavoid-"))
    shutil.copy2(built, stage / "orientavoid.so")
    sys.path.insert(0, str(stage))


def main() -> None:
    stage_module()
    import orientavoid as oa

    # Sharpness: K_5 cannot avoid {2,3} everywhere, but avoids {2}.
    k5 = oa.gen_complete(5)
    blocked = oa.ForbiddenSets(k5, "outdeg", [[2, 3]] * 5)
    assert oa.find_orientation(k5, blocked) is None
    single = oa.ForbiddenSets(k5, "outdeg", [[2]] * 5)
    witness = oa.find_orientation(k5, single)
    assert witness is not None and witness.is_f_avoiding(single)
    print("oracle: K_5 sharpness OK")

    # Deterministic construction: K_7 certifies any singleton lists.
    k7 = oa.gen_complete(7)
    ordering, h_edges = oa.build_h_third(k7)
    f = oa.ForbiddenSets(k7, "outdeg", [[v % 7] for v in range(7)])
    cert = oa.certify(k7, ordering, h_edges, f)
    assert cert["valid"], cert
    assert oa.find_orientation(k7, f) is not None
    print("construction: K_7 third-bound certificate OK")

    # Two-thirds regime from a balanced orientation.
    d = oa.balanced_orientation(k7)
    ordering2, h2 = oa.build_h_two_thirds(k7, d)
    lower = [2 * d.out_degree(v) // 3 - 1 for v in range(7)]
    gl, _ = oa.left_right_degrees(k7, ordering2)
    hl, hr = oa.left_right_degrees(k7, ordering2, h2)
    for v in range(7):
        assert gl[v] - 2 * hl[v] + hr[v] >= lower[v]
    print("construction: two-thirds weight bound OK")

    # Randomized construction on K_40.
    result = oa.build_h_random(oa.gen_complete(40), Fraction(1, 10), seed=11)
    assert result["accepted"], result
    bound = oa.alpha_gamma_floor(39, Fraction(1, 10))
    assert min(result["weight"]) > bound - 1
    print(f"construction: random bound accepted (attempt {result['attempt']})")

    # Permanent duality: coefficients through the permanent match naive
    # expansion, exactly.
    a = [[1, 2], [3, -1]]
    perm, coeff_y, coeff_x = oa.coeff_via_permanent(a, [1, 1], [1, 1])
    assert Fraction(perm) == Fraction(oa.permanent(a))
    assert Fraction(coeff_y) == Fraction(oa.naive_coeff_y(a, [1, 1], [1, 1]))
    assert Fraction(coeff_x) == Fraction(oa.naive_coeff_x(a, [1, 1], [1, 1]))
    print("algebra: permanent duality OK")

    # Alon-Tarsi regressions.
    assert oa.at_number(oa.gen_complete_minus_matching(4)) == 2
    assert oa.at_number(oa.gen_complete_minus_matching(5)) == 3
    print("algebra: Alon-Tarsi numbers OK")

    # Eulerian counting on a directed triangle: empty set vs full cycle.
    c3 = oa.gen_cycle(3)
    cyc = oa.Orientation(c3, [True, True, True])
    assert oa.eulerian_counts(cyc) == (1, 1)
    assert oa.eulerian_diff(cyc) == 0
    print("algebra: Eulerian counts OK")

    # Exact rounding with rational entries.
    g = oa.Graph(2, [(0, 1)])
    bits = oa.round_fractional(g, [(0, 0, 1), (1, 0, -2)], [Fraction(1, 2)])
    assert bits == [False]
    print("rounding: pendant edge rounds down OK")

    # Flows: C_4 has a nowhere-zero 3-flow, K_4 does not.
    assert oa.find_b_flow(oa.gen_cycle(4), 3, [0, 0, 0, 0]) is not None
    assert oa.find_b_flow(oa.gen_complete(4), 3, [0, 0, 0, 0]) is None
    print("oracle: 3-flow verdicts OK")

    # Frank-Gyarfas subset test against the search.
    g = oa.gen_gnp(6, 0.5, seed=3)
    a_bounds = [0] * 6
    b_bounds = [g.degree(v) for v in range(6)]
    assert oa.frank_gyarfas_check(g, a_bounds, b_bounds)
    print("oracle: orientation-existence test OK")

    print("all smoke tests passed")


if __name__ == "__main__":
    main()
