"""Smoke test for the prokit extension module.

Build and run from the repository root:

    cargo build -p prokit-py --release --features extension-module
    python3 python/smoke_test.py
"""

import json
import os
import shutil
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    built = os.path.join(ROOT, "target", "release", "libprokit_py.so")
    if not os.path.exists(built):
        sys.exit(f"missing {built}; build the extension first")
    dest = tempfile.mkdtemp()
    shutil.copy(built, os.path.join(dest, "prokit.so"))
    sys.path.insert(0, dest)
    import prokit

    return prokit


def main():
    pk = load()

    d, u, v = pk.smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert [d[i][i] for i in range(3)] == [2, 6, 12], d
    h, _ = pk.hermite_normal_form([[4, 6], [2, 2]])
    assert h == [[2, 0], [0, 2]], h

    r = pk.Ring.zmod(8)
    assert r.order == 8 and r.is_local()
    assert r.mul(3, 5) == [7]
    assert r.check_axioms() == []

    m = pk.Module.ring_module(r)
    p = m.profile("lipman", [2], 4)
    assert p.is_conclusive()
    assert p.table() == [[4, 5, 6, 7]], p.table()
    assert m.bounded_torsion_index(2)[0] == 3
    assert m.cech_cohomology([2], 1).order == 1
    assert m.matlis_dual().order == 8

    t = pk.Ring.truncated_two_power(4)
    assert t.order == 2 * 4 * 8 * 16
    tm = pk.Module.ring_module(t)
    assert tm.profile("lipman", [t.x], 2).witness(1, 1) == 5

    z12 = pk.Ring.zmod(12)
    assert not z12.is_local() and z12.is_covering([3, 4])
    assert len(z12.primitive_idempotents()) == 2
    c = pk.Module.cyclic(z12, [4])
    assert c.order == 4 and c.hom(c).order == 4

    with open(os.path.join(ROOT, "fixtures", "prism_style.json")) as f:
        code, out = pk.run(f.read())
    assert code == 0, out
    assert json.loads(out)["status"] == "pass"

    passed, outcome = pk.suite("smith_oracle", seed=3, count=20)
    assert passed, outcome

    try:
        pk.run('{"schema": 1, "ring": {"kind": "zmod", "n": 8}, "analysis": {"kind": "profile", "sequence": ["y"]}}')
    except pk.ProkitError as e:
        assert "y" in str(e)
    else:
        raise AssertionError("undeclared element accepted")

    print("prokit python smoke test: ok")


if __name__ == "__main__":
    main()
