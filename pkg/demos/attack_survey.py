"""Attack a watermarked image with the standard grid and report what survives.

Every attack is written as a token, e.g. ``jpeg:qf=50`` or
``chain:[he|gn:var=0.001,seed=7]``; extra tokens can be passed on the
command line.
"""

import argparse

from hybridmark import EmbedConfig, corpus, embed, extract, metrics
from hybridmark.attacks import apply_attack, parse_attack
from hybridmark.imageio import read_pgm


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--host", help="8-bit PGM; defaults to a synthetic image")
    ap.add_argument("tokens", nargs="*", help="attack tokens (default: the standard grid)")
    args = ap.parse_args()

    host = read_pgm(args.host) if args.host else corpus.synthetic_images()[0]
    logo = corpus.logo_19x52()
    cfg = EmbedConfig(pn_key=7, watermark_rows=19, watermark_cols=52)
    marked = embed(host, logo, cfg).watermarked

    tokens = args.tokens or ["none", *corpus.DEFAULT_ATTACK_GRID, "rot:deg=1", "jpeg:qf=30"]
    print(f"{'attack':<34} {'PSNR':>7} {'NC':>7} {'BER':>7}")
    for token in tokens:
        spec = parse_attack(token)
        attacked = apply_attack(marked, spec)
        bits = extract(attacked, cfg)
        print(f"{spec.token:<34} {metrics.psnr(marked, attacked):7.2f} "
              f"{metrics.nc(logo, bits):7.4f} {metrics.ber(logo, bits):7.4f}")


if __name__ == "__main__":
    main()
