"""The ten acceptance criteria, each at its stated tolerance and time budget.

Every test appends one PASS/FAIL line to ``ACCEPTANCE_LINES``; the lines are
printed in the terminal summary.
"""
import json
import os
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from scipy import integrate

from conftest import ACCEPTANCE_LINES
from pyramidfe.cli import main
from pyramidfe.compat import boundary_vanishing_subspace, factorization_witness, trace_space_report
from pyramidfe.dofs import build_dof_set, moment_weights
from pyramidfe.element import certify_unisolvence, nodal_basis, tabulate
from pyramidfe.geometry import faces
from pyramidfe.compat import conformity_nullspace_check
from pyramidfe.ratfun import ONE, integrate_reference, reference_polynomial, term_integral
from pyramidfe.spaces import Family, SpaceSpec, bubble, build_shape_basis, dimension

FAMILIES = (Family.YMINUS, Family.Y)


def _clear_caches():
    build_shape_basis.cache_clear()
    nodal_basis.cache_clear()
    moment_weights.cache_clear()


@contextmanager
def criterion(number: int, title: str, budget: float):
    """Time the body; record PASS only if it completed inside ``budget`` seconds."""
    info: dict = {}
    start = time.perf_counter()
    ok = False
    try:
        yield info
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        in_time = elapsed < budget
        status = "PASS" if ok and in_time else "FAIL"
        extra = f"; {info['detail']}" if "detail" in info else ""
        late = "" if in_time else " OVER BUDGET"
        ACCEPTANCE_LINES.append(
            f"[{status}] C{number:<2d} {title}: {elapsed:.2f}s (budget {budget:g}s){late}{extra}"
        )
    assert in_time, f"criterion {number} took {elapsed:.2f}s, budget {budget}s"


# dimension table rows for r = 1..7, transcribed
DIMENSION_ROWS = {
    "Y": [5, 13, 25, 42, 65, 95, 133],
    "YMinus": [5, 14, 30, 55, 91, 140, 204],
    "Phat_R0": [5, 14, 30, 55, 91, 140, 204],
    "U0": [5, 15, 37, 77, 141, 235, 365],
}


def test_c01_dimension_table(capsys):
    with criterion(1, "dimension table reproduction", 1.0) as info:
        assert main(["dims", "--max-order", "7", "--format", "json"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["r"] == list(range(1, 8))
        for row, values in DIMENSION_ROWS.items():
            assert out[row] == values, row
        info["detail"] = "4 rows x 7 orders equal"


def test_c02_dimension_identity():
    _clear_caches()
    with criterion(2, "dimension identity basis = closed form = DOFs", 1.0) as info:
        for fam in FAMILIES:
            for r in range(1, 8):
                spec = SpaceSpec(fam, r)
                closed = (r ** 3 + 6 * r ** 2 + 23 * r) // 6 if fam is Family.Y else (2 * r ** 3 + 9 * r ** 2 + 13 * r + 6) // 6
                assert len(build_shape_basis(spec)) == dimension(spec) == closed == len(build_dof_set(spec))
        info["detail"] = "14 specs"


def test_c03_unisolvence():
    _clear_caches()
    with criterion(3, "unisolvence, exact determinants r=1..6", 60.0) as info:
        sizes = []
        for fam in FAMILIES:
            for r in range(1, 7):
                cert = certify_unisolvence(SpaceSpec(fam, r))
                assert cert.size == dimension(SpaceSpec(fam, r))
                assert cert.invertible, f"{fam.value}{r} det = 0"
                sizes.append(cert.size)
        info["detail"] = f"12 nonzero determinants, largest {max(sizes)}x{max(sizes)}"


def test_c04_reproduction():
    _clear_caches()
    with criterion(4, "polynomial reproduction r=1..5", 120.0) as info:
        count = 0
        for fam in FAMILIES:
            for r in range(1, 6):
                el = nodal_basis(SpaceSpec(fam, r))
                for a in range(r + 1):
                    for b in range(r + 1 - a):
                        for c in range(r + 1 - a - b):
                            p = reference_polynomial(a, b, c)
                            assert el.interpolate(p) == p, (fam.value, r, a, b, c)
                            count += 1
        info["detail"] = f"{count} monomials reproduced exactly"


def test_c05_trace_spans():
    with criterion(5, "face trace spans r=1..6", 30.0) as info:
        n = 0
        for fam in FAMILIES:
            for r in range(1, 7):
                for f in faces():
                    rep = trace_space_report(SpaceSpec(fam, r), f)
                    assert rep.equal, (fam.value, r, f.name, rep)
                    n += 1
        info["detail"] = f"{n} face reports equal"


def test_c06_conformity():
    with criterion(6, "conformity nullspace r=1..5", 60.0) as info:
        n = 0
        for fam in FAMILIES:
            for r in range(1, 6):
                spec = SpaceSpec(fam, r)
                dofs = build_dof_set(spec)
                for f in faces():
                    assert conformity_nullspace_check(spec, f, dofs), (fam.value, r, f.name)
                    n += 1
        info["detail"] = f"{n} face checks"


def test_c07_interior_bubbles():
    with criterion(7, "boundary-vanishing subspace and factorization r=1..6", 30.0) as info:
        dims = {}
        for fam in FAMILIES:
            for r in range(1, 7):
                spec = SpaceSpec(fam, r)
                bv = boundary_vanishing_subspace(spec)
                if fam is Family.YMINUS:
                    expected = (2 * r - 3) * (r - 2) * (r - 1) // 6
                else:
                    expected = (r - 2) * (r - 3) * (r - 4) // 6 if r >= 2 else 0
                assert len(bv) == expected, (fam.value, r, len(bv))
                for u in bv:
                    assert factorization_witness(spec, u).in_quotient_space
                dims[f"{fam.value}{r}"] = len(bv)
        info["detail"] = " ".join(f"{k}:{v}" for k, v in dims.items())


def _sympy_reference_integrals():
    """Independent derivation on the infinite pyramid with the Jacobian (1+z)^-4."""
    x, y, z = sp.symbols("x y z", nonnegative=True)
    jac = (1 + z) ** -4
    b = x * (1 - x) * y * (1 - y) * z / (1 + z) ** 3

    def integral(f):
        return sp.integrate(sp.integrate(sp.integrate(f * jac, (x, 0, 1)), (y, 0, 1)), (z, 0, sp.oo))

    return [Fraction(str(integral(f))) for f in (sp.Integer(1), b, b ** 2)]


def test_c08_integration_oracle():
    with criterion(8, "closed-form integrals vs adaptive quadrature", 30.0) as info:
        rng = random.Random(2024)
        worst = 0.0
        for _ in range(100):
            a, b, c = rng.randint(0, 3), rng.randint(0, 3), rng.randint(-2, 6)
            e = c - a - b
            num, _ = integrate.tplquad(
                lambda xi, eta, zeta: xi ** a * eta ** b * (1 - zeta) ** e,
                0, 1, lambda zeta: 0, lambda zeta: 1 - zeta,
                lambda zeta, eta: 0, lambda zeta, eta: 1 - zeta,
                epsabs=1e-15, epsrel=1e-12,
            )
            exact = float(term_integral(a, b, c))
            rel = abs(num - exact) / abs(exact)
            worst = max(worst, rel)
            assert rel <= 1e-10, (a, b, c, num, exact)
        one, ib, ib2 = _sympy_reference_integrals()
        assert (one, ib, ib2) == (Fraction(1, 3), Fraction(1, 1080), Fraction(1, 226800))
        assert integrate_reference(ONE) == one
        assert integrate_reference(bubble()) == ib
        assert integrate_reference(bubble() * bubble()) == ib2
        info["detail"] = f"worst relative error {worst:.1e}; 1/3, 1/1080, 1/226800 exact"


def _uniform_interior_points(rng, n):
    pts = []
    while len(pts) < n:
        x, y, z = rng.random(), rng.random(), rng.random()
        if x < 1 - z and y < 1 - z:
            pts.append((x, y, z))
    return pts


def test_c09_gradients():
    with criterion(9, "tabulated gradients vs central differences (h=1e-5)", 10.0) as info:
        pts = _uniform_interior_points(random.Random(9), 20)
        h = 1e-5
        worst = 0.0
        for fam in FAMILIES:
            for r in range(1, 4):
                spec = SpaceSpec(fam, r)
                tab = tabulate(spec, pts)
                for d in range(3):
                    plus = [tuple(c + h * (i == d) for i, c in enumerate(p)) for p in pts]
                    minus = [tuple(c - h * (i == d) for i, c in enumerate(p)) for p in pts]
                    fd = (tabulate(spec, plus).values - tabulate(spec, minus).values) / (2 * h)
                    err = float(np.max(np.abs(fd - tab.gradients[:, :, d])))
                    worst = max(worst, err)
        info["detail"] = f"max abs error {worst:.1e} (tolerance 1e-7)"
        assert worst < 1e-7


def _run_cli(args, seed):
    env = dict(os.environ, PYTHONHASHSEED=str(seed))
    subprocess.run([sys.executable, "-m", "pyramidfe", *args], check=True, env=env, capture_output=True)


def test_c10_determinism(tmp_path):
    with criterion(10, "byte-identical basis and tabulate outputs", 60.0) as info:
        pts = tmp_path / "points.csv"
        pts.write_text("xi,eta,zeta\n0,0,0\n0.1,0.2,0.3\n0.25,0.5,0.5\n0,0,1\n0.125,0.125,0.75\n")
        files = []
        for run in range(2):
            b = tmp_path / f"basis{run}.json"
            t = tmp_path / f"tab{run}.json"
            c = tmp_path / f"tab{run}.csv"
            _run_cli(["basis", "--family", "y", "--order", "4", "--out", str(b)], seed=run)
            _run_cli(["tabulate", "--family", "ym", "--order", "3", "--points", str(pts), "--out", str(t)], seed=run)
            _run_cli(["tabulate", "--family", "ym", "--order", "3", "--points", str(pts), "--out", str(c),
                      "--format", "csv"], seed=run)
            files.append([b.read_bytes(), t.read_bytes(), c.read_bytes()])
        assert files[0] == files[1]
        info["detail"] = "two processes with different hash seeds, 3 files each"
