"""Trade imperceptibility against robustness by sweeping the strength k.

Larger k buys JPEG survival at the cost of PSNR. The default k=9600 sits in
the middle of the range shown here.
"""

import argparse

from hybridmark import EmbedConfig, corpus, embed, extract, metrics
from hybridmark.attacks import apply_attack, parse_attack
from hybridmark.imageio import read_pgm


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--host", help="8-bit PGM; defaults to a synthetic image")
    ap.add_argument("--attack", default="jpeg:qf=70")
    ap.add_argument("--k", type=float, nargs="+", default=[1200, 2400, 4800, 9600, 19200, 38400])
    args = ap.parse_args()

    host = read_pgm(args.host) if args.host else corpus.synthetic_images()[3]
    logo = corpus.logo_19x52()
    spec = parse_attack(args.attack)
    print(f"{'k':>8} {'PSNR':>7} {'SSIM':>7}  NC after {spec.token}")
    for k in args.k:
        cfg = EmbedConfig(pn_key=11, watermark_rows=19, watermark_cols=52, strength=k)
        res = embed(host, logo, cfg)
        bits = extract(apply_attack(res.watermarked, spec), cfg)
        print(f"{k:8g} {res.psnr:7.2f} {res.ssim:7.4f}  {metrics.nc(logo, bits):.4f}")


if __name__ == "__main__":
    main()
