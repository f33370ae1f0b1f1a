#!/usr/bin/env python3
# Benchmark corpora: a fixed six-area yard, calibrated travel and handling
# distributions, and a full configuration grid (two location ratios, three
# bay counts, five shipment counts, two inbound ratios, five replicates).

from collections import Counter

from ipctp.bench import run_bench, rows_to_text
from ipctp.generator import GenConfig, generate, generate_grid

one = generate(GenConfig(ul_ratio=2, bays=8, shipments=10, inbound_ratio=0.5, seed=1))
print("single instance:")
print(f"  quay cranes: {one.qc_count} (half the bays)")
print(f"  inbound shipments: {len(one.inbound_shipments)} of {len(one.shipments)}")
print(f"  candidate locations: {len(one.inbound_available_locations)}")
fields = Counter(k.field for k in one.yard_locations)
print(f"  yard locations per field: {dict(sorted(fields.items()))}")
transfer = sorted(one.yt_inbound_transfer.values())
print(f"  quay-to-yard transfer times: {transfer} (field C cheapest)")

entries = generate_grid(base_seed=2026)
print(f"\nfull grid: {len(entries)} instances")
shipment_counts = Counter(e.config.shipments for e in entries)
print(f"  instances per shipment count: {dict(sorted(shipment_counts.items()))}")
print(f"  first three names: {[e.name for e in entries[:3]]}")

# A dual-budget mini-benchmark over the three smallest replicates.  The
# short/long budgets mirror the usual quick-look versus full-run setup.
small = [
    (entry.name, entry.config.id_string(), entry.replicate, entry.instance)
    for entry in entries
    if entry.config.shipments == 5 and entry.config.bays == 4
    and entry.config.ul_ratio == 2 and entry.config.inbound_ratio == 0.2
][:3]
rows, _ = run_bench(small, budgets=(2.0, 10.0))
print("\nmini benchmark (budgets 2s / 10s):")
print(rows_to_text(rows))
