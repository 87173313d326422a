#!/usr/bin/env python3
"""How the four-summand pipeline degrades toward the trace boundary.

The constructive split needs Re trace(T) > 0; its free parameters shrink
with the normalized margin Re trace(T) / n, and the similarity factors pay
for it in conditioning.  The study quantifies the trend (reported, not
asserted: individual draws fluctuate).
"""

import numpy as np

from opsum import condition_study, study_to_csv

records = condition_study(sizes=[4], trace_margins=[1.0, 0.1, 0.01],
                          trials=20, seed=8)
study_to_csv(records, "conditioning_study.csv")
print("wrote conditioning_study.csv")
print()
print(f"{'margin':>8} {'success':>8} {'median cond(S)':>16} {'median residual':>16}")
for margin in (1.0, 0.1, 0.01):
    cell = [r for r in records if r.trace_margin == margin]
    ok = [r for r in cell if r.success]
    med_cond = np.median([r.max_cond_s for r in ok]) if ok else float("nan")
    med_res = np.median([r.residual for r in ok]) if ok else float("nan")
    print(f"{margin:>8} {len(ok):>5}/{len(cell):<2} {med_cond:>16.1f} {med_res:>16.2e}")
