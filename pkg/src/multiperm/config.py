"""Run configuration and the on-disk caches behind the CLI."""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _bits
from .dsm import DsmLattice, enumerate_lattice
from .monoid import ENUM_CAP, MonoidTable, enumerate_multipermutations

log = logging.getLogger("multiperm")

MONOID_FORMAT = "multiperm-monoid v1"
LATTICE_FORMAT = "v1"


def default_cache_dir() -> Path:
    env = os.environ.get("MULTIPERM_CACHE_DIR")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "multiperm"


@dataclass
class Config:
    cache_dir: Path | None = None
    n_cap: int = ENUM_CAP
    force: bool = False
    threads: int = 1
    use_cache: bool = True

    def __post_init__(self):
        if self.n_cap < 1:
            raise ValueError("n_cap must be at least 1")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        if self.cache_dir is None:
            self.cache_dir = default_cache_dir()
        self.cache_dir = Path(self.cache_dir)


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text)
    tmp.replace(path)


# ---------------------------------------------------------------------------
# M_n as text: a header, then one element per line as space-separated rows


def monoid_path(cfg: Config, n: int) -> Path:
    return cfg.cache_dir / f"monoid-n{n}-v1.txt"


def dump_monoid(table: MonoidTable) -> str:
    lines = [f"{MONOID_FORMAT} n={table.n} count={len(table)}"]
    lines += [" ".join(e.matrix_lines()) for e in table]
    return "\n".join(lines) + "\n"


def load_monoid(text: str, n: int) -> MonoidTable:
    lines = text.splitlines()
    if not lines or lines[0] != f"{MONOID_FORMAT} n={n} count={len(lines) - 1}":
        raise ValueError("bad monoid cache header")
    codes = []
    for line in lines[1:]:
        rows = line.split()
        if len(rows) != n or any(len(r) != n or set(r) - {"0", "1"} for r in rows):
            raise ValueError(f"bad monoid cache line {line!r}")
        codes.append(sum(int(r[::-1], 2) << (n * i) for i, r in enumerate(rows)))
    arr = np.array(codes, dtype=_bits.DTYPE)
    if not _bits.is_multiperm(arr, n).all():
        raise ValueError("monoid cache holds a non-multipermutation")
    return MonoidTable.from_codes(n, arr)


def cached_monoid(n: int, cfg: Config) -> MonoidTable:
    if n > cfg.n_cap and not cfg.force:
        from .errors import CapExceeded
        raise CapExceeded(f"M_{n} exceeds cap {cfg.n_cap}", "--cap")
    path = monoid_path(cfg, n)
    if cfg.use_cache and path.exists():
        try:
            return load_monoid(path.read_text(), n)
        except (ValueError, OSError) as e:
            log.warning("ignoring corrupt cache %s (%s); recomputing", path, e)
    table = enumerate_multipermutations(n, cap=max(cfg.n_cap, n))
    if cfg.use_cache:
        try:
            _write(path, dump_monoid(table))
        except OSError as e:
            log.warning("could not write cache %s (%s)", path, e)
    return table


def lattice_path(cfg: Config, n: int) -> Path:
    return cfg.cache_dir / f"lattice-n{n}-{LATTICE_FORMAT}.json"


def cached_lattice(n: int, cfg: Config) -> DsmLattice:
    path = lattice_path(cfg, n)
    if cfg.use_cache and path.exists():
        try:
            lat = DsmLattice.from_json(path.read_text())
            if lat.n != n:
                raise ValueError("dimension mismatch")
            return lat
        except (ValueError, KeyError, TypeError, OSError) as e:
            log.warning("ignoring corrupt cache %s (%s); recomputing", path, e)
    lat = enumerate_lattice(n, force=cfg.force)
    if cfg.use_cache:
        try:
            _write(path, lat.to_json())
        except OSError as e:
            log.warning("could not write cache %s (%s)", path, e)
    return lat
