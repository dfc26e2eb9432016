"""Compare raw monomial moment weights with the orthogonalized ones.

For each spec, builds the element twice (raw index-space monomials as weights,
and the default orthogonalized weights) and reports the largest nodal value,
the largest gradient and the worst central-difference gradient error over
random interior points.  Both elements interpolate identically; only the
scaling of the nodal functions differs.
"""
import argparse
import random

import numpy as np

from pyramidfe.dofs import DOF_KIND, KIND_ORDER, Dof, build_dof_set, index_space_basis
from pyramidfe.element import build_element, tabulate_element
from pyramidfe.geometry import entities_of_kind
from pyramidfe.ratfun import reference_polynomial
from pyramidfe.spaces import Family, SpaceSpec


def raw_dofs(spec):
    """DOFs with the monomial index basis used directly as weights."""
    vertex = [d for d in build_dof_set(spec) if d.kind == "eval"]
    out = list(vertex)
    for kind in KIND_ORDER[1:]:
        weights = index_space_basis(kind, spec.family, spec.order)
        for ent in entities_of_kind(kind):
            for k, w in enumerate(weights):
                out.append(Dof(len(out), DOF_KIND[kind], ent, w, k))
    return out


def points(rng, n):
    pts = []
    while len(pts) < n:
        x, y, z = rng.random(), rng.random(), rng.random()
        if x < 1 - z and y < 1 - z:
            pts.append((x, y, z))
    return pts


def fd_error(el, pts, h):
    tab = tabulate_element(el, pts)
    worst = 0.0
    for d in range(3):
        plus = [tuple(c + h * (i == d) for i, c in enumerate(p)) for p in pts]
        minus = [tuple(c - h * (i == d) for i, c in enumerate(p)) for p in pts]
        fd = (tabulate_element(el, plus).values - tabulate_element(el, minus).values) / (2 * h)
        worst = max(worst, float(np.max(np.abs(fd - tab.gradients[:, :, d]))))
    return np.max(np.abs(tab.values)), np.max(np.abs(tab.gradients)), worst


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", type=int, default=4)
    ap.add_argument("--points", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    pts = points(random.Random(args.seed), args.points)
    target = reference_polynomial(2, 1, 1) + reference_polynomial(0, 0, 4)
    print(f"{'spec':6s} {'weights':8s} {'max|phi|':>10s} {'max|grad|':>10s} {'fd error':>10s}")
    for fam in Family:
        for r in range(1, args.max_order + 1):
            spec = SpaceSpec(fam, r)
            raw = build_element(spec, raw_dofs(spec))
            modal = build_element(spec)
            assert raw.interpolate(target) == modal.interpolate(target)
            for name, el in (("raw", raw), ("modal", modal)):
                v, g, e = fd_error(el, pts, 1e-5)
                print(f"{fam.value}{r:<4d} {name:8s} {v:10.3g} {g:10.3g} {e:10.2e}")


if __name__ == "__main__":
    main()
