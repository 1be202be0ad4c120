# Build a small LP, convert it to standard form, and inspect the optimality
# metrics: residuals, the three relative termination inequalities, and the
# max-violation summary.

import numpy as np

from hybridlp import (
    GeneralLp,
    KktPoint,
    LE,
    check_relative_termination,
    residuals,
    to_standard_form,
    violation_summary,
)

# max x1 + x2 subject to x1 + 2 x2 <= 4 and 3 x1 + x2 <= 6, written as a
# minimization of -x1 - x2.  The optimum sits at the vertex (1.6, 1.2).
g = GeneralLp(
    c=[-1.0, -1.0],
    A=[[1.0, 2.0], [3.0, 1.0]],
    senses=[LE, LE],
    rhs=[4.0, 6.0],
    lower=[0.0, 0.0],
    upper=[np.inf, np.inf],
)

p, fmap = to_standard_form(g)
print("standard form: min c'x  s.t.  Ax = b, x >= 0")
print("A =\n", p.A.toarray())
print("b =", p.b, " c =", p.c)
print("slack columns:", list(fmap.slack_columns()))

# The optimal point, with duals solved by hand from the active rows.
pt = KktPoint(x=[1.6, 1.2, 0.0, 0.0], y=[-0.4, -0.2], z=[0.0, 0.0, 0.4, 0.2])
r = residuals(p, pt)
print("\nat the optimum:")
print("  r_p =", r.r_p, " r_d =", r.r_d)
print("  primal obj =", r.primal_obj, " dual obj =", r.dual_obj, " x'z =", r.comp)

term = check_relative_termination(p, pt, eps_rel=1e-8)
print("  termination at 1e-8:", term.ok)

# Nudge the point off the optimum and watch the violation metric react.
off = KktPoint(x=[1.6 + 1e-5, 1.2, 0.0, 0.0], y=[-0.4, -0.2], z=[0.0, 0.0, 0.4, 0.2])
v = violation_summary(p, off)
print("\nperturbed x1 by 1e-5:")
print(f"  primal_inf={v.primal_inf:.2e} dual_inf={v.dual_inf:.2e} "
      f"rel_gap={v.rel_gap:.2e} -> max violation {v.max_violation:.2e}")
