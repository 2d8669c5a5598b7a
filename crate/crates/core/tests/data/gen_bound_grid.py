"""Regenerates bound_grid.json with 60-digit arithmetic (mpmath).

Each row holds the four sample-size bounds evaluated independently of the
Rust implementation. Run: python3 gen_bound_grid.py > bound_grid.json
"""
import json
from mpmath import mp, mpf, log, floor, ceil

mp.dps = 60

NS = [1, 2, 5, 10, 100]
MS = [2, 3, 4, 10, 50]
EPS = ["0.05", "0.1", "0.2", "0.3", "0.5", "0.75", "0.9", "1.0"]

rows = []
for n in NS:
    for m in MS:
        for e in EPS:
            eps = mpf(e)
            ln_n, ln_m, ln2 = log(n), log(m), log(2)
            inner = ln_m + ln_n - log(eps) + log(16)
            rows.append({
                "n": n,
                "m": m,
                "epsilon": float(e),
                "cce_exist": int(floor(2 * (ln_m + ln_n) / eps**2)) + 1,
                "cce_alg": int(floor(2 * (ln_m + ln_n + ln2) / eps**2)) + 1,
                "ce_exist_k": int(floor(264 * ln_m * inner / eps**4)) + 1,
                "ce_exist_b": int(ceil(32 * inner / eps**2)),
                "ce_alg": int(floor(2 * (m * ln_m + ln_n + ln2) / eps**2)) + 1,
            })
print(json.dumps(rows, indent=1))
