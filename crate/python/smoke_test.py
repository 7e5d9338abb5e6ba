"""Smoke test for the chainfact Python bindings.

Build and install first, e.g.

    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/chainfact-*.whl
    python python/smoke_test.py
"""

import json
import sys
import tempfile

import chainfact_py as cf


def main() -> int:
    c = cf.Chain("2,2")
    assert c.exponents == [2, 2] and c.n == 2 and c.mu == 3
    assert c.phi() == [1, -1, 1, -1]
    assert c.chi() == [[1, 1, 0], [0, 1, 1], [0, 0, 1]]
    assert c.grading_group() == "Z^1"

    es = c.collection()
    assert len(es) == 3 and all(e.size == 1 for e in es)
    euler = [[cf.euler_form(a, b) for b in es] for a in es]
    assert euler == c.chi(), euler

    e0 = es[0]
    assert cf.hom_dim(e0, e0) == 1
    assert cf.hom_dim(e0, e0, parity=1) == 0
    # x1 has degree x1 in End(E0); x1^2 = 0 there.
    assert cf.hom_dim(e0, e0, [1, 0, 0]) == 1
    assert cf.hom_dim(e0, e0, [2, 0, 0]) == 0
    assert e0.translate().translate() == e0.shift([0, 0, 1])
    assert e0.direct_sum(c.trivial()).reduce() == e0
    assert json.loads(e0.to_json())["chain"] == [2, 2]

    table = c.hom_table()
    assert set(table) == {"chain", "entries", "window"}

    odd = cf.Chain([2, 2, 2])
    assert odd.weights == ([3, 2, 4], 8)
    assert odd.chi()[0] == [1, -1, 1, -1, 0]

    with tempfile.TemporaryDirectory() as cache:
        report = cf.verify_chain(c, cache_dir=cache)
        assert report.all_passed, report.render("md")
        assert report.euler == [[1, 1, 0], [0, 1, 1], [0, 0, 1]]
        again = cf.verify_chain(c, cache_dir=cache)
        assert ("cache", "pass") in again.statuses
    assert cf.verify_invariants(odd).all_passed
    assert cf.verify_reduction(odd).all_passed
    tri = cf.verify_triangles(cf.Chain("3,2"))
    assert tri.all_passed, tri.render("md")
    assert report.to_dict()["schema_version"] == 1

    try:
        cf.Chain("2,1")
    except ValueError:
        pass
    else:
        raise AssertionError("exponent 1 must be rejected")

    print(f"chainfact {cf.__version__}: python smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
