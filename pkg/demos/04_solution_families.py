"""Solution families of the compatibility equations, case by case.

For a one-dimensional base eigenspace the family in (b1, b2) is a
quadrant, hyperbola, ray, point, or empty.  For a two-dimensional base
the case tree runs on the linear rows and the antisymmetric scalars; this
script walks representative systems through the solver and samples them.
"""

import numpy as np

from torusbundles import ConstraintSystem, sample_solutions, solve

Z = [0.0, 0.0]


def kodaira(lpp, lpm, lmp, lmm):
    return ConstraintSystem.from_blocks(1, 0.0, 0.0, [[0.0]], [lpp], [lpm], [lmp], [lmm])


def threefold(a_plus, a_minus, d_block, l_pp=Z, l_pm=Z, l_mp=Z, l_mm=Z):
    return ConstraintSystem.from_blocks(2, a_plus, a_minus, d_block, l_pp, l_pm, l_mp, l_mm)


def describe(title, sys):
    desc = solve(sys)
    consts = {k: round(v, 6) for k, v in desc.constants.items()
              if isinstance(v, float)}
    print(f"{title}:")
    print(f"  case {desc.case_label}, kind {desc.kind}, "
          f"B-slice dimension {desc.dimension}, b free: {desc.b_free}")
    if consts:
        print(f"  constants: {consts}")
    for note in desc.notes:
        print(f"  note: {note}")
    if not desc.is_empty:
        wit = sample_solutions(sys, 3, seed=1)
        for w in wit:
            b_mat = np.round(w.b_matrix, 4)
            print(f"  sample b = {w.b:.4f}, B = {b_mat.tolist()}, "
                  f"residuals {tuple(f'{r:.1e}' for r in w.residuals)}")
    print()
    return desc


def main():
    print("-- one-dimensional base --\n")
    describe("no constraints", kodaira(0, 0, 0, 0))
    describe("product pinned (hyperbola)", kodaira(0, 2, 1, 0))
    describe("ratio pinned (ray)", kodaira(1, 0, 0, -2))
    describe("isolated point", kodaira(-1, 2, 1, 1))
    describe("inconsistent", kodaira(1, 1, 1, 1))

    print("-- two-dimensional base --\n")
    describe("determinant quadric", threefold(1, 2, [[0.0, 0.0], [0.0, 0.0]]))
    describe("graph over the mixed block", threefold(1, 1, [[1.0, 1.0], [0.0, 1.0]]))
    desc = describe("degenerate stratum", threefold(0, 0, [[1.0, 0.0], [0.0, 1.0]]))
    print("  expected components for the stratum:", desc.constants["stratum_components"])
    print()
    describe("independent rows (isolated point)",
             threefold(-1, 2, [[-2.0, 0.0], [1.0, 0.0]],
                       [2.0, -1.0], [0.0, -2.0], [1.0, -1.0], [-2.0, 0.0]))
    describe("rows forcing emptiness",
             threefold(0, 0, [[0.0, 0.0], [0.0, 0.0]],
                       [2.0, 0.0], [2.0, 0.0], [0.0, 1.0], [0.0, -1.0]))


if __name__ == "__main__":
    main()
