"""Variant generation: seeded, per-site Bernoulli application of transformations.

Levels are cumulative (an L3 run draws from every L1-L3 transformation). For
each transformation in catalog order, every valid site is drawn independently
with the configured chance; chosen sites are applied as a batch and the
program re-resolved before the next transformation sees it. The same
(base, config) pair always regenerates a byte-identical variant.
"""

from __future__ import annotations

import copy
import hashlib
import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import MutationError
from ..lang import SourceUnit, nodes as n, parse_unit, print_program, resolve_asts
from ..lang.printer import Style
from ..lang.resolver import ResolvedProgram
from .analysis import collect_identifiers
from .transforms import ALT_STYLES, CATALOG, Transformation

LEVELS = (1, 2, 3, 4, 5)
VALUE_INJECTING_NAMES = tuple(t.name for t in CATALOG if t.value_injecting)


@dataclass(frozen=True)
class MutationConfig:
    level: int
    chance: float  # percentage in [0, 100]
    seed: int
    exclude_value_injecting: bool = False

    def __post_init__(self):
        if self.level not in LEVELS:
            raise ValueError(f"level must be one of {LEVELS}")
        if not 0.0 <= self.chance <= 100.0:
            raise ValueError("chance must be a percentage in [0, 100]")


@dataclass
class VariantRecord:
    base_id: str
    variant_id: str
    level: int
    chance: float
    seed: int
    exclude_value_injecting: bool
    applied: list[dict] = field(default_factory=list)
    conflicts: list[str] = field(default_factory=list)

    @property
    def value_injecting(self) -> bool:
        return any(app["transformation"] in VALUE_INJECTING_NAMES
                   for app in self.applied)

    def to_doc(self) -> dict:
        return {
            "base_id": self.base_id,
            "variant_id": self.variant_id,
            "level": self.level,
            "chance": self.chance,
            "seed": self.seed,
            "exclude_value_injecting": self.exclude_value_injecting,
            "value_injecting": self.value_injecting,
            "applied": self.applied,
            "conflicts": self.conflicts,
        }


class MutableProgram:
    """A deep-copied program being rewritten, with a fresh-name registry."""

    def __init__(self, asts: list[n.Ast], paths: list[str]):
        self.asts = [copy.deepcopy(ast) for ast in asts]
        self.paths = list(paths)
        self.styles: list[Style] = [ALT_STYLES[0] for _ in self.asts]
        self.used_names = collect_identifiers(self.asts)
        self.conflicts: list[str] = []
        self._counters: dict[str, int] = {}
        self._program: ResolvedProgram | None = None

    @property
    def program(self) -> ResolvedProgram:
        if self._program is None:
            self._program = resolve_asts(self.asts, self.paths)
        return self._program

    def invalidate(self):
        self._program = None

    def fresh_name(self, prefix: str) -> str:
        k = self._counters.get(prefix, 0)
        while f"{prefix}{k}" in self.used_names:
            k += 1
        self._counters[prefix] = k + 1
        name = f"{prefix}{k}"
        self.used_names.add(name)
        return name

    def emit_units(self) -> list[SourceUnit]:
        return [SourceUnit(path, print_program(ast, style))
                for path, ast, style in zip(self.paths, self.asts, self.styles)]


def catalog_for(level: int, exclude_value_injecting: bool = False) -> list[Transformation]:
    """The cumulative transformation pool at a level, in table order."""
    return [t for t in CATALOG
            if t.level <= level and not (exclude_value_injecting and t.value_injecting)]


def transformation_named(name: str) -> Transformation:
    for t in CATALOG:
        if t.name == name:
            return t
    raise KeyError(f"unknown transformation {name!r}")


def list_sites(units: list[SourceUnit], transformation: str | Transformation) -> list[str]:
    """Descriptors of every valid location for one transformation."""
    t = transformation if isinstance(transformation, Transformation) \
        else transformation_named(transformation)
    mp = MutableProgram([parse_unit(u) for u in units], [u.path for u in units])
    mp.program  # validate
    return [site.descriptor for site in t.sites(mp)]


def mutate(units: list[SourceUnit], cfg: MutationConfig,
           base_id: str = "base", variant_id: str = "variant") -> tuple[list[SourceUnit], VariantRecord]:
    """Produce one variant and its ground-truth record."""
    mp = MutableProgram([parse_unit(u) for u in units], [u.path for u in units])
    mp.program  # the base must resolve
    rng = random.Random(cfg.seed)
    record = VariantRecord(base_id=base_id, variant_id=variant_id, level=cfg.level,
                           chance=cfg.chance, seed=cfg.seed,
                           exclude_value_injecting=cfg.exclude_value_injecting)
    for t in catalog_for(cfg.level, cfg.exclude_value_injecting):
        sites = t.sites(mp)
        chosen = [s for s in sites if rng.random() * 100.0 < cfg.chance]
        if not chosen:
            continue
        t.apply(mp, chosen, rng)
        mp.invalidate()
        try:
            mp.program
        except Exception as exc:
            raise MutationError(
                f"{t.name!r} broke the program at {chosen[0].descriptor}: {exc}") from exc
        record.applied.extend({"transformation": t.name, "site": s.descriptor}
                              for s in chosen)
    record.conflicts = list(mp.conflicts)
    variant_units = mp.emit_units()
    _validate_variant(mp, variant_units)
    return variant_units, record


def _validate_variant(mp: MutableProgram, units: list[SourceUnit]):
    """The emitted text must re-parse to exactly the rewritten tree and resolve."""
    for unit, ast in zip(units, mp.asts):
        reparsed = parse_unit(unit)
        if reparsed != ast:
            raise MutationError(f"variant does not round-trip: {unit.path}")
    resolve_asts([parse_unit(u) for u in units], [u.path for u in units])


def derive_seed(*parts) -> int:
    digest = hashlib.sha256(repr(parts).encode()).hexdigest()
    return int(digest[:16], 16)


def generate_corpus(bases: list[tuple[str, list[SourceUnit]]],
                    levels: list[int], chances: list[float],
                    counts_per_level: dict[int, int], seed: int,
                    out_dir: str | Path | None = None,
                    exclude_value_injecting: bool = False) -> dict:
    """Seeded variant corpus plus a manifest of variant records.

    Layout on disk (when out_dir is given):
        <out>/<base-id>/base/*.src
        <out>/<base-id>/variants/<variant-id>/*.src
        <out>/manifest.json
    """
    manifest: dict = {"schema": "corpus/1", "seed": seed, "levels": levels,
                      "chances": chances,
                      "counts_per_level": {str(k): v for k, v in counts_per_level.items()},
                      "exclude_value_injecting": exclude_value_injecting,
                      "variants": []}
    produced: list[tuple[str, str, list[SourceUnit]]] = []
    for base_id, units in bases:
        for level in levels:
            for chance in chances:
                for k in range(counts_per_level.get(level, 0)):
                    variant_id = f"{base_id}-L{level}-c{int(chance)}-{k:03d}"
                    sub_seed = derive_seed(seed, base_id, level, chance, k)
                    cfg = MutationConfig(level=level, chance=chance, seed=sub_seed,
                                         exclude_value_injecting=exclude_value_injecting)
                    try:
                        variant_units, record = mutate(units, cfg, base_id, variant_id)
                    except MutationError as exc:
                        raise MutationError(f"base {base_id}: {exc}") from exc
                    manifest["variants"].append(record.to_doc())
                    produced.append((base_id, variant_id, variant_units))
    if out_dir is not None:
        out = Path(out_dir)
        for base_id, units in bases:
            base_dir = out / base_id / "base"
            base_dir.mkdir(parents=True, exist_ok=True)
            for u in units:
                (base_dir / Path(u.path).name).write_text(u.text, encoding="utf-8")
        for base_id, variant_id, variant_units in produced:
            vdir = out / base_id / "variants" / variant_id
            vdir.mkdir(parents=True, exist_ok=True)
            for u in variant_units:
                (vdir / Path(u.path).name).write_text(u.text, encoding="utf-8")
        (out / "manifest.json").write_text(
            json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    manifest["_produced"] = produced
    return manifest
