"""Builds the extension with cargo and exercises it from Python.

    python3 python/smoke_test.py [--no-build]
"""

import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"


def build():
    subprocess.run(
        ["cargo", "build", "--release", "-p", "majid-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )


def load(tmp):
    lib = ROOT / "target" / "release" / "libmajid.so"
    shutil.copy(lib, Path(tmp) / "majid.so")
    sys.path.insert(0, tmp)
    import majid

    return majid


def check(majid):
    p = majid.Phase(-1, 3)
    assert (p.num, p.den) == (2, 3)
    assert p + majid.Phase(1, 3) == majid.Phase(0, 1)
    assert p.order() == 3

    g = majid.Group([2, 2, 2])
    assert g.order() == 8 and len(g.elements()) == 8
    assert majid.CocycleSpec.count(g) == 128

    spec = majid.CocycleSpec.from_json((DATA / "z2cubed_a123.json").read_text())
    assert not spec.is_abelian()
    assert spec.eval([0, 0, 1], [0, 1, 0], [1, 0, 0]) == majid.Phase(1, 2)
    assert majid.classify_table(spec.tabulate()) == spec
    assert majid.cocycle_counterexample_table(spec.tabulate()) is None

    report = json.loads(majid.double_check(spec))
    assert report["abelian"] is False and report["abelian_bruteforce"] is False
    assert report["axioms_hold"] is True
    assert json.loads(majid.resolve(spec))["confirmed"] is True

    ab = majid.CocycleSpec.from_json((DATA / "z2xz4_abelian.json").read_text())
    assert json.loads(majid.resolve(ab))["resolved"] is True

    datum = (DATA / "datum_a2.json").read_text()
    assert json.loads(majid.verify_datum(datum, True))["pass"] is True
    assert majid.determine_cocycle(datum).a_l == [1, 1]
    assert json.loads(majid.yd_module(datum))["roundtrip"] is True

    a2 = json.loads(majid.construct_cartan((DATA / "cartan_a2.json").read_text()))
    assert a2["genuine"] is True
    q9 = json.loads(majid.construct_standard((DATA / "standard_q9.json").read_text()))
    assert q9["outcome"] == "built" and q9["m"] == 3
    q6 = json.loads(majid.construct_standard((DATA / "standard_q6.json").read_text()))
    assert q6["outcome"] == "refused"

    try:
        majid.classify_table(spec.tabulate(), budget=10)
    except majid.BudgetError:
        pass
    else:
        raise AssertionError("budget not enforced")
    try:
        majid.Group([0])
    except ValueError:
        pass
    else:
        raise AssertionError("zero modulus accepted")


def main():
    if "--no-build" not in sys.argv:
        build()
    with tempfile.TemporaryDirectory() as tmp:
        check(load(tmp))
    print("python smoke test: ok")


if __name__ == "__main__":
    main()
