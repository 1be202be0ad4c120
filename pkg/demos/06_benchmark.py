# The measurement harness: one record per (model, method), geometric-mean
# summaries with per-model relative runtimes, and the clamped scatter export.
# The same flow is available on MPS files via the CLI:
#   hybridlp bench <dir> --methods pdhg-1e4,ipm-cold,hybrid --out results.csv
#   hybridlp scatter results.csv --out scatter.csv

import io

import numpy as np
import scipy.sparse as sp

from hybridlp import EQ, GeneralLp
from hybridlp.bench import (
    format_summary,
    scatter_export,
    solve_with_method,
    summarize,
    write_records_csv,
    write_scatter_csv,
)


def planted(m, n, seed):
    rng = np.random.default_rng(seed)
    A = np.where(rng.random((m, n)) < 0.35, rng.uniform(-2, 2, (m, n)), 0.0)
    A[:, :m] += np.eye(m) * 3.0
    for j in range(n):
        if not A[:, j].any():
            A[rng.integers(m), j] = 1.0
    x_star = np.r_[rng.uniform(0.5, 2.0, m), np.zeros(n - m)]
    y_star = rng.standard_normal(m) * 0.5
    z_star = np.r_[np.zeros(m), rng.uniform(0.1, 2.0, n - m)]
    return GeneralLp(
        c=A.T @ y_star + z_star, A=sp.csr_matrix(A), senses=[EQ] * m,
        rhs=A @ x_star, lower=np.zeros(n), upper=np.full(n, np.inf),
    )


models = {f"planted_{m}x{n}": planted(m, n, seed)
          for m, n, seed in [(10, 18, 1), (20, 35, 2), (40, 70, 3)]}
methods = ["pdhg-1e4", "pdhg-1e6", "ipm-cold", "hybrid"]

records = []
for name, g in models.items():
    for method in methods:
        _, record = solve_with_method(g, method, model_name=name)
        records.append(record)
        print(f"{name:>14} {method:>9}: {record.status:<9} "
              f"wall={record.wall_seconds:6.2f}s "
              f"viol={record.max_violation:.1e} "
              f"ipm_iters={record.ipm_iterations}")

print("\n" + format_summary(summarize(records)))

csv_buf = io.StringIO()
write_records_csv(records, csv_buf)
print(f"\nresults CSV: {len(csv_buf.getvalue().splitlines())} lines "
      f"(header + {len(records)} records)")

scatter_buf = io.StringIO()
write_scatter_csv(scatter_export(records), scatter_buf)
print("scatter CSV head:")
for line in scatter_buf.getvalue().splitlines()[:5]:
    print("  ", line)
