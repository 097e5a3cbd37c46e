"""Blind, robust grayscale watermarking in the block DCT of the DFT magnitude."""

from .arnold import arnold_descramble, arnold_period, arnold_scramble
from .attacks import apply_attack, apply_chain, parse_attack
from .bench import BenchConfig, EvalReport, emit_tables, load_config, run_bench, sweep_strength
from .codec import CapacityError, EmbedConfig, EmbedResult, embed, extract
from .imageio import read_pgm, read_watermark_pbm, write_pgm, write_watermark_pbm
from .metrics import ber, nc, psnr, ssim
from .pn import generate_pn_pair
from .transforms import dct2_blocks, dft2, idct2_blocks, idft2, midband_mask

__version__ = "0.1.0"
