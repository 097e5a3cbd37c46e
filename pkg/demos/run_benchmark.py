"""Generate the synthetic corpus and run the full benchmark over it.

Writes ``report.csv`` and ``report.md`` under the chosen directory and prints
the Markdown report. Pass ``--parallelism`` to spread (image, attack) pairs
over worker processes; the numbers do not depend on it.
"""

import argparse
import os
from dataclasses import replace
from pathlib import Path

from hybridmark.bench import emit_tables, load_config, run_bench
from hybridmark.corpus import generate_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="bench_out")
    ap.add_argument("--parallelism", type=int, default=os.cpu_count() or 1)
    args = ap.parse_args()

    cfg_path = generate_corpus(args.out_dir)
    cfg = replace(load_config(cfg_path), parallelism=args.parallelism)
    print(f"{len(cfg.image_paths)} images x {len(cfg.attack_grid)} attacks, {cfg.parallelism} workers")
    report = run_bench(cfg)
    csv_path, md_path = emit_tables(report, cfg.output_dir)
    print(Path(md_path).read_text())
    print(f"wrote {csv_path} and {md_path}")


if __name__ == "__main__":
    main()
