"""
A small sweep across the coverage threshold
===========================================

Around p = sqrt(3 log n / (2n)) random graphs switch from having bare
edges (edges in no triangle) to admitting a fractional decomposition.
This runs a desk-scale version of that sweep and draws the bucket
fractions.
"""

import tempfile
from pathlib import Path

from ftdkit import ScanConfig, emit_plot, threshold_scan
from ftdkit.experiments import write_scan_csv
from ftdkit.graphs import triangle_density_threshold

n = 120
print(f"threshold density at n = {n}: {triangle_density_threshold(n):.4f}")

cfg = ScanConfig(
    n=n,
    c_grid=(0.7, 0.9, 1.0, 1.1, 1.3),
    trials=20,
    base_seed=0,
)
rows = threshold_scan(cfg)
print(f"{'c':>4} {'p':>7} {'uncovered':>10} {'ftd':>5} {'anomaly':>8}")
for row in rows:
    print(
        f"{row.c:4.1f} {row.p:7.4f} {row.count_uncovered:10d} "
        f"{row.count_ftd:5d} {row.count_anomaly:8d}"
    )

# The CSV and SVG are byte-reproducible for a fixed seed, apart from
# the timing column.
out = Path(tempfile.mkdtemp(prefix="ftdkit-scan-"))
csv_path = out / "scan.csv"
write_scan_csv(csv_path, cfg, rows)
svg_path = emit_plot(csv_path, "scan")
print(f"wrote {csv_path}")
print(f"wrote {svg_path}")
