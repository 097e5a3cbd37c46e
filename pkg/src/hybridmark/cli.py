"""Command line entry point: ``hybridmark <subcommand> ...``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import metrics
from .attacks import apply_attack, parse_attack
from .bench import emit_tables, load_config, run_bench, sweep_strength
from .codec import DEFAULT_ARNOLD_KEY, DEFAULT_STRENGTH, EmbedConfig, embed, extract
from .corpus import generate_corpus
from .imageio import read_pgm, read_watermark_pbm, write_pgm, write_watermark_pbm
from .pn import parse_key


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def cmd_embed(args) -> int:
    host = read_pgm(args.inp)
    wm = read_watermark_pbm(args.wm)
    cfg = EmbedConfig(
        pn_key=args.key1,
        arnold_key=args.key2,
        strength=args.k,
        watermark_rows=wm.shape[0],
        watermark_cols=wm.shape[1],
    )
    res = embed(host, wm, cfg)
    write_pgm(res.watermarked, args.out)
    print(f"psnr={_fmt(res.psnr)} ssim={_fmt(res.ssim)}")
    return 0


def cmd_extract(args) -> int:
    img = read_pgm(args.inp)
    cfg = EmbedConfig(
        pn_key=args.key1,
        arnold_key=args.key2,
        watermark_rows=args.rows,
        watermark_cols=args.cols,
    )
    write_watermark_pbm(extract(img, cfg), args.out)
    return 0


def cmd_attack(args) -> int:
    spec = parse_attack(args.spec)
    write_pgm(apply_attack(read_pgm(args.inp), spec), args.out)
    return 0


def cmd_metrics(args) -> int:
    if args.bits:
        a, b = read_watermark_pbm(args.a), read_watermark_pbm(args.b)
        print(f"nc={_fmt(metrics.nc(a, b))} ber={_fmt(metrics.ber(a, b))}")
    else:
        a, b = read_pgm(args.a), read_pgm(args.b)
        print(f"psnr={_fmt(metrics.psnr(a, b))} ssim={_fmt(metrics.ssim(a, b))}")
    return 0


def cmd_bench(args) -> int:
    cfg = load_config(args.config)
    if args.parallelism:
        cfg.parallelism = args.parallelism
    report = run_bench(cfg)
    for path in emit_tables(report, cfg.output_dir):
        print(f"wrote={path}")
    return 0


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    try:
        ks = [float(k) for k in args.k_list.split(",")]
    except ValueError:
        raise ValueError(f"cannot parse --k-list {args.k_list!r}") from None
    report = sweep_strength(cfg, ks)
    for path in emit_tables(report, cfg.output_dir):
        print(f"wrote={path}")
    return 0


def cmd_gen_corpus(args) -> int:
    cfg = generate_corpus(args.out_dir, seed=args.seed)
    print(f"wrote={cfg}")
    return 0


def _key(text: str) -> int:
    try:
        return parse_key(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybridmark", description="Blind DFT-DCT image watermarking toolkit."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="embed a PBM logo into a PGM host")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--wm", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--key1", type=_key, required=True, help="PN seed (decimal or 0x hex)")
    p.add_argument("--key2", type=int, default=DEFAULT_ARNOLD_KEY, help="Arnold iterations")
    p.add_argument("--k", type=float, default=DEFAULT_STRENGTH, help="embedding strength")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="blindly extract a logo to PBM")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--key1", type=_key, required=True)
    p.add_argument("--key2", type=int, default=DEFAULT_ARNOLD_KEY)
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("attack", help="apply an attack token to a PGM")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("metrics", help="compare two images, or two logos with --bits")
    p.add_argument("--bits", action="store_true")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("files", nargs="*", help="A and B as positionals instead of --a/--b")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("bench", help="run a benchmark config")
    p.add_argument("--config", required=True)
    p.add_argument("--parallelism", type=int, default=0)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sweep", help="sweep the embedding strength on the first image")
    p.add_argument("--config", required=True)
    p.add_argument("--k-list", required=True, help="comma-separated strengths")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gen-corpus", help="write the synthetic corpus and a bench config")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen_corpus)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "metrics":
        files = list(args.files)
        args.a = args.a or (files.pop(0) if files else None)
        args.b = args.b or (files.pop(0) if files else None)
        if args.a is None or args.b is None or files:
            parser.error("metrics needs exactly two inputs (--a/--b or positionals)")
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
