"""Experiment harness: embed, attack, extract and tabulate over a corpus.

Config files are line oriented ``key = value`` pairs; ``image`` and
``attack`` may repeat::

    image = lena.pgm
    watermark = logo.pbm
    key1 = 1
    key2 = 24
    k = 9600
    output_dir = report
    parallelism = 4
    attack = jpeg:qf=90
    attack = chain:[he|gn:var=0.001,seed=7]

Relative paths are resolved against the config file's directory.
"""

from __future__ import annotations

import csv
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from . import metrics
from .attacks import AttackSpec, apply_attack, parse_attack
from .codec import DEFAULT_ARNOLD_KEY, DEFAULT_STRENGTH, CapacityError, EmbedConfig, embed, extract
from .imageio import read_pgm, read_watermark_pbm
from .pn import parse_key

__all__ = [
    "ConfigError",
    "BenchConfig",
    "EvalRow",
    "EvalReport",
    "load_config",
    "run_bench",
    "sweep_strength",
    "emit_tables",
    "CSV_FIELDS",
    "TIMING_FIELDS",
]

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    pass


@dataclass
class BenchConfig:
    image_paths: list[Path]
    watermark_path: Path
    key1: int = 1
    key2: int = DEFAULT_ARNOLD_KEY
    strength: float = DEFAULT_STRENGTH
    attack_grid: list[AttackSpec] = field(default_factory=list)
    output_dir: Path = Path("report")
    parallelism: int = 1

    def __post_init__(self):
        if not self.image_paths:
            raise ConfigError("config lists no images")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")


@dataclass
class EvalRow:
    imageId: str
    attackToken: str
    nc: float
    ber: float
    psnrAfterAttack: float
    ssimAfterAttack: float
    embedPsnr: float
    embedSsim: float
    wallTimeMs: float


CSV_FIELDS = tuple(f.name for f in fields(EvalRow))
TIMING_FIELDS = ("wallTimeMs",)


@dataclass
class EvalReport:
    rows: list[EvalRow] = field(default_factory=list)
    errors: dict[str, str] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.rows)

    def row(self, image_id: str, token: str) -> EvalRow:
        for r in self.rows:
            if r.imageId == image_id and r.attackToken == token:
                return r
        raise KeyError((image_id, token))


def load_config(path: str | os.PathLike) -> BenchConfig:
    path = Path(path)
    base = path.parent
    images, attacks, values = [], [], {}
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        key, value = key.strip().lower(), value.strip()
        if not eq or not value:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        if key == "image":
            images.append(base / value)
        elif key == "attack":
            try:
                attacks.append(parse_attack(value))
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from None
        elif key in ("watermark", "key1", "key2", "k", "output_dir", "parallelism"):
            values[key] = value
        else:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
    if "watermark" not in values:
        raise ConfigError(f"{path}: missing 'watermark'")
    try:
        return BenchConfig(
            image_paths=images,
            watermark_path=base / values["watermark"],
            key1=parse_key(values.get("key1", "1")),
            key2=int(values.get("key2", DEFAULT_ARNOLD_KEY)),
            strength=float(values.get("k", DEFAULT_STRENGTH)),
            attack_grid=attacks,
            output_dir=base / values.get("output_dir", "report"),
            parallelism=int(values.get("parallelism", 1)),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _embed_job(args):
    image_id, img, wm, cfg = args
    t0 = time.perf_counter()
    res = embed(img, wm, cfg)
    return image_id, res, (time.perf_counter() - t0) * 1e3


def _attack_job(args):
    image_id, marked, wm, cfg, spec, embed_ms, embed_psnr, embed_ssim = args
    attacked = apply_attack(marked, spec)
    t0 = time.perf_counter()
    bits = extract(attacked, cfg)
    extract_ms = (time.perf_counter() - t0) * 1e3
    return EvalRow(
        imageId=image_id,
        attackToken=spec.token,
        nc=metrics.nc(wm, bits),
        ber=metrics.ber(wm, bits),
        psnrAfterAttack=metrics.psnr(marked, attacked),
        ssimAfterAttack=metrics.ssim(marked, attacked),
        embedPsnr=embed_psnr,
        embedSsim=embed_ssim,
        wallTimeMs=embed_ms + extract_ms,
    )


def _map(fn, jobs, parallelism):
    if parallelism == 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(parallelism, len(jobs))) as pool:
        return list(pool.map(fn, jobs))


def _evaluate(hosts, wm, embed_cfgs, grid, parallelism) -> list[EvalRow]:
    """``hosts`` and ``embed_cfgs`` are parallel lists keyed by image id."""
    grid = grid or [parse_attack("none")]
    embedded = _map(
        _embed_job,
        [(image_id, img, wm, cfg) for (image_id, img), cfg in zip(hosts, embed_cfgs)],
        parallelism,
    )
    jobs = []
    for (image_id, res, ms), cfg in zip(embedded, embed_cfgs):
        for spec in grid:
            jobs.append((image_id, res.watermarked, wm, cfg, spec, ms, res.psnr, res.ssim))
    return _map(_attack_job, jobs, parallelism)


def _error_rows(image_id: str, grid) -> list[EvalRow]:
    nan = math.nan
    return [
        EvalRow(image_id, spec.token, nan, nan, nan, nan, nan, nan, nan)
        for spec in (grid or [parse_attack("none")])
    ]


def run_bench(cfg: BenchConfig) -> EvalReport:
    """Embed once per image, then attack/extract/score every grid entry.

    Unreadable images yield NaN rows and the run continues; a logo that
    does not fit a host aborts with :class:`CapacityError`.
    """
    wm = read_watermark_pbm(cfg.watermark_path)
    embed_cfg = EmbedConfig(
        pn_key=cfg.key1,
        arnold_key=cfg.key2,
        strength=cfg.strength,
        watermark_rows=wm.shape[0],
        watermark_cols=wm.shape[1],
    )
    report = EvalReport()
    hosts, order = [], []
    for path in cfg.image_paths:
        image_id = Path(path).stem
        order.append(image_id)
        try:
            img = read_pgm(path)
        except (OSError, ValueError) as exc:
            log.error("skipping %s: %s", path, exc)
            report.errors[image_id] = str(exc)
            continue
        hosts.append((image_id, img))
    for image_id, img in hosts:
        blocks = (img.shape[0] // 8) * (img.shape[1] // 8)
        if wm.size > blocks:
            raise CapacityError(
                f"{image_id}: watermark has {wm.size} bits but the host has only {blocks} blocks"
            )

    rows = _evaluate(hosts, wm, [embed_cfg] * len(hosts), cfg.attack_grid, cfg.parallelism)
    for image_id in report.errors:
        rows += _error_rows(image_id, cfg.attack_grid)
    report.rows = _sorted(rows, order, cfg.attack_grid)
    return report


def _sorted(rows, image_order, grid):
    img_rank = {name: i for i, name in enumerate(image_order)}
    tok_rank = {spec.token: i for i, spec in enumerate(grid or [parse_attack("none")])}
    return sorted(rows, key=lambda r: (img_rank.get(r.imageId, len(img_rank)), r.imageId,
                                       tok_rank[r.attackToken]))


def sweep_strength(cfg: BenchConfig, k_values) -> EvalReport:
    """Cross ``k_values`` with the attack grid on the first image.

    Row ids are ``<image>@k=<k>``.
    """
    k_values = [float(k) for k in k_values]
    if not k_values or any(k <= 0 for k in k_values):
        raise ConfigError("k values must be a non-empty list of positive numbers")
    wm = read_watermark_pbm(cfg.watermark_path)
    path = cfg.image_paths[0]
    img = read_pgm(path)
    base = EmbedConfig(
        pn_key=cfg.key1,
        arnold_key=cfg.key2,
        watermark_rows=wm.shape[0],
        watermark_cols=wm.shape[1],
    )
    ids = [f"{Path(path).stem}@k={k:g}" for k in k_values]
    rows = _evaluate(
        [(i, img) for i in ids],
        wm,
        [replace(base, strength=k) for k in k_values],
        cfg.attack_grid,
        cfg.parallelism,
    )
    return EvalReport(rows=_sorted(rows, ids, cfg.attack_grid))


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.4f}"


def emit_tables(report: EvalReport, out_dir: str | os.PathLike) -> tuple[Path, Path]:
    """Write ``report.csv`` (RFC 4180) and ``report.md`` (a table per attack family)."""
    if not report.rows:
        raise ValueError("cannot emit tables for an empty report")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "report.csv"
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\r\n")
        writer.writerow(CSV_FIELDS)
        for r in report.rows:
            writer.writerow([_fmt(getattr(r, f)) for f in CSV_FIELDS])

    families: dict[str, list[EvalRow]] = {}
    for r in report.rows:
        families.setdefault(parse_attack(r.attackToken).family, []).append(r)
    lines = ["# Watermark evaluation report", ""]
    embed_rows = {r.imageId: r for r in report.rows}
    lines += ["## Imperceptibility", "", "| Image | PSNR (dB) | SSIM |", "|---|---|---|"]
    for image_id, r in embed_rows.items():
        lines.append(f"| {image_id} | {_fmt(r.embedPsnr)} | {_fmt(r.embedSsim)} |")
    times = [r.wallTimeMs for r in report.rows if not math.isnan(r.wallTimeMs)]
    if times:
        lines += ["", f"Mean embed + extract wall time: {_fmt(float(np.mean(times)))} ms", ""]
    head = "| Image | Attack | NC | BER | PSNR after attack (dB) | SSIM after attack |"
    for family, rows in families.items():
        lines += [f"## {family}", "", head, "|---|---|---|---|---|---|"]
        for r in rows:
            token = r.attackToken.replace("|", "\\|")
            lines.append(
                f"| {r.imageId} | `{token}` | {_fmt(r.nc)} | {_fmt(r.ber)} | "
                f"{_fmt(r.psnrAfterAttack)} | {_fmt(r.ssimAfterAttack)} |"
            )
        lines.append("")
    md_path = out / "report.md"
    md_path.write_text("\n".join(lines))
    return csv_path, md_path
