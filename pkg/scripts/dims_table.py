"""Print the dimension table for r = 1..N and check it against the closed forms."""
import argparse

from pyramidfe.cli import dims_table, format_dims
from pyramidfe.dofs import build_dof_set
from pyramidfe.spaces import Family, SpaceSpec, build_shape_basis


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", type=int, default=7)
    args = ap.parse_args()
    table = dims_table(args.max_order)
    print(format_dims(table), end="")
    for fam, row in ((Family.Y, "Y"), (Family.YMINUS, "YMinus")):
        for r, d in zip(table["r"], table[row]):
            spec = SpaceSpec(fam, r)
            n_basis, n_dofs = len(build_shape_basis(spec)), len(build_dof_set(spec))
            if not n_basis == n_dofs == d:
                print(f"mismatch at {spec}: basis {n_basis}, dofs {n_dofs}, closed form {d}")
    print("basis sizes and DOF counts agree with the closed forms")


if __name__ == "__main__":
    main()
