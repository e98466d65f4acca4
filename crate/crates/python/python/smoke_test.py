"""Imports the built extension and runs a short electrostatic sweep.

Build the extension first:

    cargo build --release -p pyfiberpeel --features extension-module
    python3 crates/python/python/smoke_test.py
"""

import math
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parents[3]


def load_extension():
    built = ROOT / "target" / "release" / "libpyfiberpeel.so"
    if not built.exists():
        sys.exit(f"extension not built: {built}")
    tmp = pathlib.Path(tempfile.mkdtemp())
    shutil.copy(built, tmp / "pyfiberpeel.so")
    sys.path.insert(0, str(tmp))
    import pyfiberpeel

    return pyfiberpeel


def main():
    fp = load_extension()
    assert "elstat-baseline-16" in fp.preset_names()

    config = fp.preset("elstat-baseline-16")
    config = config.replace("n_elements = 16", "n_elements = 8").replace("u_end = 6.0", "u_end = 0.05")
    with tempfile.TemporaryDirectory() as out:
        result = fp.run(config, "contact", out)
        header = (pathlib.Path(out) / "curve.csv").read_text().splitlines()[0]
    assert header == "step,u_x,u_x_over_l,F_x,F_x_normalized,newton_iters,branch", header
    assert result["u_x"][-1] == 0.05
    assert result["F_x_normalized"][0] < 0.0
    assert math.isclose(result["F_ref"], fp.reference_force(config))
    assert math.isclose(fp.lj_equilibrium_gap(), 8.3913e-4, rel_tol=1e-4)

    try:
        fp.preset("nope")
    except ValueError:
        pass
    else:
        raise AssertionError("unknown preset accepted")

    print(f"ok: {len(result['u_x'])} steps, F(0) = {result['F_x_normalized'][0]:.4f}, F_ref = {result['F_ref']:.6e}")


if __name__ == "__main__":
    main()
