# Equilibration scaling and the minimal presolve, both with exact inverse
# mappings.  Badly scaled matrices get their row/column norms pushed toward 1;
# presolve reductions replay backwards so a reduced-model solution can be
# reported on the original model.

import numpy as np

from hybridlp import (
    EQ,
    GE,
    GeneralLp,
    KktPoint,
    StandardLp,
    postsolve,
    presolve,
    ruiz_equilibrate,
    unscale_point,
)

# --- scaling ---------------------------------------------------------------

p = StandardLp(
    A=np.array([[1.0, 1e4, 0.0], [1e-3, 1.0, 2.0], [5.0, 0.0, 1e-2]]),
    b=[1.0, 2.0, 3.0],
    c=[1.0, 1.0, 1.0],
)
scaled, info = ruiz_equilibrate(p)
absA = np.abs(scaled.A.toarray())
print("equilibration after", info.applied_iterations, "passes:")
print("  row max-norms:", absA.max(axis=1))
print("  col max-norms:", absA.max(axis=0))

# A point on the scaled model maps back through x = C x_s, y = R y_s, z = z_s / C.
pt_scaled = KktPoint([1.0, 1.0, 1.0], [0.5, 0.5, 0.5], [0.1, 0.1, 0.1])
pt = unscale_point(info, pt_scaled)
print("  unscaled x:", pt.x)

# --- presolve --------------------------------------------------------------

# x3 is pinned by a singleton equality row; x4 is fixed by its bounds; the
# empty row is dropped after a consistency check.
g = GeneralLp(
    c=[1.0, 2.0, 3.0, 1.0],
    A=[
        [0.0, 0.0, 2.0, 0.0],   # 2 x3 = 10
        [1.0, 1.0, 1.0, 1.0],
        [0.0, 0.0, 0.0, 0.0],   # 0 = 0
    ],
    senses=[EQ, GE, EQ],
    rhs=[10.0, 8.0, 0.0],
    lower=[0.0, 0.0, 0.0, 0.5],
    upper=[np.inf, np.inf, np.inf, 0.5],
)
res = presolve(g)
print("\npresolve:", res.status.value)
for rec in res.stack.records:
    print("  ", type(rec).__name__, vars(rec))
red = res.model
print("reduced model:", red.n_rows, "rows x", red.n_vars, "vars,",
      "objective constant", red.obj_offset)

# Solve the reduced model by inspection (min x1 + 2 x2, x1 + x2 >= 2.5) and
# restore the full solution.
pt_red = KktPoint(x=[2.5, 0.0], y=[1.0], z=[0.0, 1.0])
restored = postsolve(res.stack, pt_red, g)
print("restored x:", restored.x)
print("restored y:", restored.y, " (singleton row dual zeroes the x3 reduced cost)")
print("objective:", g.objective_value(restored.x))
