"""Build the cuweno_py extension and exercise it from Python.

Usage: python3 python/smoke_test.py [--release] [--no-build]
"""

import argparse
import math
import pathlib
import shutil
import subprocess
import sys
import sysconfig
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def build(release: bool) -> pathlib.Path:
    cmd = ["cargo", "build", "-p", "cuweno-python", "--features", "extension-module"]
    if release:
        cmd.append("--release")
    subprocess.run(cmd, cwd=ROOT, check=True)
    profile = "release" if release else "debug"
    lib = ROOT / "target" / profile / "libcuweno_py.so"
    if not lib.exists():
        lib = ROOT / "target" / profile / "libcuweno_py.dylib"
    return lib


def load(lib: pathlib.Path):
    dest = pathlib.Path(tempfile.mkdtemp(prefix="cuweno_py_"))
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    shutil.copy(lib, dest / f"cuweno_py{suffix}")
    sys.path.insert(0, str(dest))
    import cuweno_py

    return cuweno_py


def check(cw) -> None:
    names = cw.schemes()
    for s in ["za4", "za6", "za8", "za10", "z5", "z7", "ct6"]:
        assert s in names, s
    assert len(cw.presets()) == 13

    exact = cw.coefficients(3, exact=True)
    assert exact["c_full"] == ["1/60", "-2/15", "37/60", "37/60", "-2/15", "1/60"], exact["c_full"]
    assert exact["d_central"] == ["1/20", "9/20", "9/20", "1/20"], exact["d_central"]
    floats = cw.coefficients(3)
    assert abs(sum(floats["d_central"]) - 1.0) < 1e-15

    smooth = [math.sin(0.1 * k) for k in range(6)]
    w = cw.weights("za6", smooth, dx=0.1)
    assert len(w) == 4 and abs(sum(w) - 1.0) < 1e-14
    assert all(abs(a - b) < 1e-3 for a, b in zip(w, floats["d_central"])), w
    jump = [1.0, 1.0, 1.0, 0.0, 0.0, 0.0]
    w = cw.weights("za6", jump)
    assert w[0] > 0.99, w
    assert cw.weights("ct6", smooth) is None
    assert cw.reconstruct("za6", [2.0] * 6) == 2.0

    sod = cw.run(problem="sod", n=200)
    assert len(sod["density"]) == 200 and len(sod["x"]) == 200
    assert abs(sod["t"] - 2.0) < 1e-12
    ref = cw.exact_riemann((0.125, 0.0, 0.1), (1.0, 0.0, 1.0), sod["x"], sod["t"])
    l1 = sum(abs(a - b[0]) for a, b in zip(sod["density"], ref)) / 200
    assert l1 < 0.02, l1

    dmr = cw.run(problem="dmr", nx=40, ny=10, t_final=0.01)
    assert dmr["nx"] == 40 and dmr["ny"] == 10 and len(dmr["density"]) == 400
    assert all(0.0 < d < 25.0 for d in dmr["density"])

    rows = cw.critical_points(1, p=1.0)
    assert rows[0][2] is None and abs(rows[2][2] - 6.0) < 0.15, rows

    pts = cw.adr("ct6", samples=16)
    assert len(pts) == 16 and all(abs(im) < 1e-6 for _, _, im in pts)

    for bad in [lambda: cw.run(problem="sdo"), lambda: cw.weights("za6", [1.0]), lambda: cw.coefficients(9)]:
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--release", action="store_true")
    ap.add_argument("--no-build", action="store_true")
    args = ap.parse_args()
    profile = "release" if args.release else "debug"
    lib = ROOT / "target" / profile / "libcuweno_py.so" if args.no_build else build(args.release)
    cw = load(lib)
    check(cw)
    print(f"cuweno_py {cw.__version__}: smoke test passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
