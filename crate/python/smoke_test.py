"""Smoke test for the pyhydrostokes extension.

Build and install first:

    pip install -e crates/python --no-build-isolation
    python python/smoke_test.py
"""

import math
import os
import tempfile

import numpy as np

import pyhydrostokes as hs


def check(cond, msg):
    if not cond:
        raise SystemExit(f"FAIL: {msg}")
    print(f"ok   {msg}")


def main():
    g = hs.Grid(8, 6, 1.0)
    check(np.allclose(g.lambdas, (2 * np.arange(6) + 1) * math.pi / 2), "vertical eigenvalues")

    ones = hs.Field.from_values(g, np.ones((1, 8, 8, 6)))
    check(abs(ones.mixed_norm() - 1.0) < 1e-12, "mixed norm of the constant field")
    check(np.allclose(ones.values(), 1.0), "transform round trip")

    raw = hs.Field.from_values(g, np.random.default_rng(3).standard_normal((2, 8, 8, 6)))
    p = raw.project()
    check(p.solenoidal_defect() < 1e-12, "projection is solenoidal")
    check((p.project() - p).l2_norm() < 1e-13 * p.l2_norm(), "projection is idempotent")

    stokes = hs.Stokes(g)
    check(abs(stokes.spectral_bound() + math.pi ** 2 / 4) < 1e-8, "spectral bound -pi^2/4")
    v = hs.Field.random_solenoidal(g, 5)
    lhs = stokes.semigroup(0.2, v)
    rhs = stokes.semigroup(0.1, stokes.semigroup(0.1, v))
    check((lhs - rhs).l2_norm() < 1e-10 * v.l2_norm(), "semigroup law")
    r = stokes.resolvent(2.0, v)
    res = r.scaled(2.0) - stokes.apply(r) - v
    check(res.l2_norm() < 1e-10 * v.l2_norm(), "resolvent solves (2 - A) r = v")
    try:
        stokes.semigroup(-1.0, v)
        check(False, "negative time refused")
    except ValueError:
        check(True, "negative time refused")

    numeric, exact = hs.kernel_norm(complex(math.cos(math.pi / 3), math.sin(math.pi / 3)))
    check(abs(numeric - exact) < 1e-6, "kernel identity")
    ok, bound, fixed = hs.recursion_check(0.1, 1.0, 0.25)
    check(ok and fixed <= bound, "recursion bound")

    solver = hs.Solver(n=8, k=6, dt=1e-3, horizon=0.02)
    run = solver.solve(v.scaled(0.5 / v.mixed_norm()))
    e = run.energies
    check(run.converged and len(run.times) == 21, "solve converges")
    check(all(b <= a * (1 + 1e-10) for a, b in zip(e, e[1:])), "energy does not increase")

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "state.hstk")
        hs.save_snapshot(path, run.final_state, run.times[-1])
        back, t = hs.load_snapshot(path)
        check(t == run.times[-1] and np.array_equal(back.coeffs(), run.final_state.coeffs()), "snapshot round trip")
        with open(path, "r+b") as f:
            f.write(b"X")
        try:
            hs.load_snapshot(path)
            check(False, "corrupt snapshot refused")
        except OSError:
            check(True, "corrupt snapshot refused")
    print("all checks passed")


if __name__ == "__main__":
    main()
