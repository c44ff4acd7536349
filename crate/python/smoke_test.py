"""Smoke test for the pymatkern extension. Run after building it with
`pip install --no-build-isolation -e crates/py`."""

import pymatkern as mk


def main():
    # pair cut: source 0 reaches 4 and 5 through 1, 2, 3
    d = mk.Digraph(7, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (2, 5), (3, 5), (4, 6), (5, 6)])
    assert mk.solve_dpc(d, 0, [(4, 5), (1, 3)], 1) is None
    x = mk.solve_dpc(d, 0, [(4, 5), (1, 3), (6, 6)], 3)
    assert x is not None and len(x) <= 3
    # terminals are deletable too, so the source alone is a cut
    assert d.min_cut_size([0], [6]) == 1
    assert d.min_cut_size([1, 2, 3], [4, 5]) == 2

    ker = mk.kernelize_dpc(d, 0, [(4, 5), (1, 3)], 1, seed=3)
    assert ker["vertex_bound"] >= ker["digraph"].n
    assert ker["false_positive_bound"] < 1e-6

    text, bound = mk.compress_dpc(d, 0, [(4, 5), (1, 3)], 1, epsilon=2.0 ** -20, seed=1)
    assert bound <= 2.0 ** -20
    assert mk.decide_compressed(text) is False

    # gammoid from {0}: any single vertex reachable from 0 is independent, pairs are not
    m = mk.Matroid.gammoid(d, [0], seed=7)
    assert m.rank == 1
    assert m.is_independent([4]) and not m.is_independent([4, 5])
    u = mk.Matroid.uniform(5, 3)
    kept = u.representative_family([[0], [1], [2], [3], [4]])
    assert len(kept) <= 3

    cover = mk.cut_covering_set(d, [0], [6], seed=2)
    assert not set(cover["z"]) & {0, 6}
    assert cover["reduced"].n == 2 + len(cover["z"])

    # triangle with a pendant terminal on each corner: LP 3/2, integer optimum 2
    g = mk.Graph(6, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)])
    doubled, objective = mk.multiway_lp(g, [3, 4, 5])
    assert objective == 3
    k1 = mk.kernelize_smwc(g, [3, 4, 5], 1, seed=4)
    assert k1["negative"]
    k2 = mk.kernelize_smwc(g, [3, 4, 5], 2, seed=4)
    assert not k2["negative"]
    dt = mk.kernelize_dtmwc(g, [3, 4, 5], 2, seed=4)
    assert dt["graph"].n <= dt["vertex_bound"]
    mc = mk.kernelize_multicut(g, [(3, 4)], 1, seed=4)
    assert mc["parts"] == 2

    # (x1) (-x1 | x2) (-x2) is unsatisfiable; dropping x1 or x2 fixes it
    clauses = [[1], [-1, 2], [-2]]
    assert mk.solve_2sat(2, clauses) is None
    assert mk.solve_2sat(2, [[1, 2], [-1, 2]]) is not None
    assert len(mk.solve_a2sat(2, clauses, 1)) == 1
    ak = mk.kernelize_a2sat(2, clauses, 1, seed=5)
    assert ak["decided"] is True or ak["num_vars"] <= ak["variable_bound"]

    vc = mk.reduce_vc_above_lp(g, 1)
    assert vc["matching"] == 3

    try:
        mk.Digraph(2, [(0, 5)])
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-range arc accepted")

    results = mk.selftest(quick=True, seed=0)
    assert len(results) == 11 and all(ok for _, ok, _ in results), results
    print("pymatkern smoke test passed")


if __name__ == "__main__":
    main()
