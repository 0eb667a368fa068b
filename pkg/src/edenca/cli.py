"""Batch front-end: space/rule ingestion, subcommands, report emission.

Configs are single JSON documents (versioned with ``"schema": 1``) holding a
space descriptor, optionally a rule descriptor, and per-subcommand parameter
sections.  Outputs are JSON for structured reports and CSV for series; all
files are UTF-8 with LF line endings.  A fixed config and seed produce
byte-identical output.

Exit codes: 0 success/consistent, 1 usage or validation error, 2 a
main-theorem consistency violation (which indicates an implementation bug,
never new mathematics).
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from fractions import Fraction

import jsonschema

from . import analyzer, automaton, folner, geometry, tilings
from .errors import BudgetExceededError, RegionOverflowError
from .geometry import CellSet
from .spaces import cell_to_json, normalize_cell, space_from_json

_CELL = {"oneOf": [{"type": "integer"},
                   {"type": "array", "items": {"type": "integer"},
                    "minItems": 1, "maxItems": 4}]}
_CELL_LIST = {"type": "array", "items": _CELL}
_REGION = {"oneOf": [{"type": "object", "properties": {"box": {"type": "integer", "minimum": 1}},
                      "required": ["box"], "additionalProperties": False},
                     {"type": "object", "properties": {"cells": _CELL_LIST},
                      "required": ["cells"], "additionalProperties": False}]}
_OFFSETS = {"oneOf": [{"type": "object", "properties": {"named": {"enum": ["moore", "von-neumann"]}},
                       "required": ["named"], "additionalProperties": False},
                      {"type": "object", "properties": {"window": {"type": "integer", "minimum": 0}},
                       "required": ["window"], "additionalProperties": False},
                      {"type": "object", "properties": {"offsets": _CELL_LIST},
                       "required": ["offsets"], "additionalProperties": False}]}
_INDICES = {"oneOf": [{"type": "string", "pattern": r"^\d+:\d+$"},
                      {"type": "array", "items": {"type": "integer", "minimum": 1}}]}

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "schema": {"const": 1},
        "space": {
            "type": "object",
            "properties": {"kind": {"enum": ["zd", "p4m", "dihedral", "finite-perm"]}},
            "required": ["kind"],
        },
        "rule": {"type": "object"},
        "seed": {"type": "integer", "minimum": 0},
        "threads": {"type": "integer", "minimum": 1},
        "budget_patterns": {"type": "integer", "minimum": 1},
        "geometry": {
            "type": "object",
            "properties": {"a": _REGION, "e": _OFFSETS, "region": _REGION},
            "required": ["a", "e", "region"],
            "additionalProperties": False,
        },
        "folner": {
            "type": "object",
            "properties": {"indices": _INDICES, "cosets": _CELL_LIST, "e": _OFFSETS},
            "required": ["indices", "cosets", "e"],
            "additionalProperties": False,
        },
        "tile": {
            "type": "object",
            "properties": {"region": _REGION, "e": _OFFSETS,
                           "density_indices": _INDICES},
            "required": ["region", "e"],
            "additionalProperties": False,
        },
        "entropy": {
            "type": "object",
            "properties": {"subject": {"enum": ["full-shift", "image"]},
                           "q": {"type": "integer", "minimum": 1},
                           "indices": _INDICES,
                           "mode": {"enum": ["exact", "sampled"]},
                           "samples": {"type": "integer", "minimum": 1}},
            "required": ["subject", "indices"],
            "additionalProperties": False,
        },
        "analyze": {
            "type": "object",
            "properties": {"goe_indices": _INDICES, "me_indices": _INDICES,
                           "entropy_indices": _INDICES,
                           "entropy_mode": {"enum": ["exact", "sampled"]},
                           "samples": {"type": "integer", "minimum": 1}},
            "additionalProperties": False,
        },
    },
    "required": ["schema", "space"],
}


class _Parser(argparse.ArgumentParser):
    # usage errors exit 1; 2 is reserved for consistency violations
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


class CliError(Exception):
    pass


def _parse_indices(spec) -> list[int]:
    if isinstance(spec, list):
        return list(spec)
    lo, hi = spec.split(":")
    lo, hi = int(lo), int(hi)
    if lo < 1 or hi < lo:
        raise CliError(f"bad index range {spec!r}")
    return list(range(lo, hi + 1))


def _parse_region(space, doc) -> CellSet:
    if "box" in doc:
        return geometry.box(space, doc["box"])
    return CellSet(normalize_cell(space, c) for c in doc["cells"])


def _parse_offsets(space, doc) -> list:
    if "named" in doc:
        name = doc["named"]
        if space.kind not in ("zd", "p4m") or getattr(space, "dims", 2) != 2:
            raise CliError(f"named neighbourhood {name!r} needs a 2-d lattice")
        if name == "moore":
            return [(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1)]
        return [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)]
    if "window" in doc:
        r = doc["window"]
        if space.kind == "zd":
            from itertools import product

            return [tuple(v) for v in product(range(-r, r + 1), repeat=space.dims)]
        if space.kind == "p4m":
            from itertools import product

            return [tuple(v) for v in product(range(-r, r + 1), repeat=2)]
        if space.kind == "dihedral":
            return [k % space.n for k in range(-r, r + 1)]
        raise CliError("window neighbourhoods need a lattice or dihedral space")
    return [normalize_cell(space, c) for c in doc["offsets"]]


def _load_config(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise CliError(f"cannot read config {path}: {e}")
    try:
        jsonschema.validate(doc, CONFIG_SCHEMA)
    except jsonschema.ValidationError as e:
        raise CliError(f"config validation failed: {e.message}")
    return doc


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _build_ca(space, cfg):
    if "rule" not in cfg:
        raise CliError("this subcommand needs a rule descriptor")
    return automaton.make_automaton(space, cfg["rule"])


# ------------------------------------------------------------- subcommands


def cmd_geometry(cfg, args) -> int:
    space = space_from_json(cfg["space"])
    sec = cfg.get("geometry")
    if sec is None:
        raise CliError("config has no geometry section")
    region = _parse_region(space, sec["region"])
    a = _parse_region(space, sec["a"])
    e = geometry.coset_set_from_offsets(space, _parse_offsets(space, sec["e"]))
    inner = geometry.interior(space, a, e, region)
    outer = geometry.closure(space, a, e, region)
    rim = geometry.boundary(space, a, e, region)
    doc = {"schema": 1, "space": cfg["space"]}
    for name, cs in (("interior", inner), ("closure", outer), ("boundary", rim)):
        doc[name] = {"size": len(cs),
                     "cells": [cell_to_json(space, c) for c in cs]}
    _emit(_json_text(doc), args.out)
    return 0


def cmd_folner(cfg, args) -> int:
    space = space_from_json(cfg["space"])
    sec = cfg.get("folner")
    if sec is None:
        raise CliError("config has no folner section")
    indices = _parse_indices(args.windows or sec["indices"])
    cosets = [space.cell_to_coset(normalize_cell(space, c)) for c in sec["cosets"]]
    e = geometry.coset_set_from_offsets(space, _parse_offsets(space, sec["e"]))
    buf = io.StringIO()
    names = [f"defect_{cell_to_json(space, space.coset_to_cell(c))}" for c in cosets]
    buf.write(",".join(["i", "size"] + names + ["boundary_ratio"]) + "\n")
    for i in indices:
        F = folner.folner_box(space, i)
        row = [str(i), str(len(F))]
        for c in cosets:
            row.append(_frac(folner.folner_defect(space, F, c)))
        row.append(_frac(folner.boundary_ratio(space, F, e)))
        buf.write(",".join(row) + "\n")
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_tile(cfg, args) -> int:
    space = space_from_json(cfg["space"])
    sec = cfg.get("tile")
    if sec is None:
        raise CliError("config has no tile section")
    region = _parse_region(space, sec["region"])
    e = geometry.coset_set_from_offsets(space, _parse_offsets(space, sec["e"]))
    tiling = tilings.greedy_tiling(space, region, e)
    report = tilings.verify_tiling(space, tiling)
    doc = {"schema": 1, "space": cfg["space"],
           "centers": [cell_to_json(space, c) for c in tiling.centers],
           "verified": report.ok,
           "cover_set_size": len(tiling.cover)}
    density_rows = []
    if "density_indices" in sec or args.windows:
        indices = _parse_indices(args.windows or sec["density_indices"])
        for i in indices:
            F = folner.folner_box(space, i)
            d = tilings.tiling_density(space, tiling, F)
            density_rows.append((i, len(F), _frac(d)))
        doc["density"] = [{"i": i, "size": s, "density": d}
                          for i, s, d in density_rows]
    _emit(_json_text(doc), args.out)
    if args.csv_out and density_rows:
        buf = io.StringIO()
        buf.write("i,size,density\n")
        for i, s, d in density_rows:
            buf.write(f"{i},{s},{d}\n")
        _emit(buf.getvalue(), args.csv_out)
    return 0


def cmd_entropy(cfg, args) -> int:
    space = space_from_json(cfg["space"])
    sec = cfg.get("entropy")
    if sec is None:
        raise CliError("config has no entropy section")
    indices = _parse_indices(args.windows or sec["indices"])
    seq = folner.folner_sequence(space)
    budget = args.budget_patterns or cfg.get("budget_patterns",
                                             analyzer.DEFAULT_PATTERN_BUDGET)
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    threads = args.threads or cfg.get("threads", 1)
    if sec["subject"] == "full-shift":
        series = analyzer.entropy_series(space, seq, indices,
                                         q=sec.get("q", 2))
    else:
        ca = _build_ca(space, cfg)
        series = analyzer.entropy_series(space, seq, indices, ca=ca,
                                         mode=sec.get("mode", "exact"),
                                         budget=budget,
                                         samples=sec.get("samples", 4096),
                                         seed=seed, threads=threads)
    buf = io.StringIO()
    buf.write("i,size,count,bits_per_cell,status,mode\n")
    for r in series.rows:
        count = "" if r.count is None else str(r.count)
        bits = "" if r.bits_per_cell is None else repr(r.bits_per_cell)
        buf.write(f"{r.index},{r.size},{count},{bits},{r.status},{r.mode}\n")
    _emit(buf.getvalue(), args.out)
    return 0


def _eca_sweep(space, cfg, args) -> int:
    surj, pre = [], []
    for code in range(256):
        ca = automaton.make_automaton(space, {"builtin": f"eca:{code}"})
        if analyzer.surjectivity_oracle_1d(ca):
            surj.append(code)
        if analyzer.pre_injectivity_oracle_1d(ca):
            pre.append(code)
    consistent = surj == pre
    doc = {"schema": 1, "sweep": "eca",
           "surjective_rules": surj, "pre_injective_rules": pre,
           "surjective_count": len(surj), "pre_injective_count": len(pre),
           "consistent": consistent}
    _emit(_json_text(doc), args.out)
    return 0 if consistent else 2


def cmd_analyze(cfg, args) -> int:
    space = space_from_json(cfg["space"])
    if cfg.get("rule", {}).get("builtin") == "eca:all":
        return _eca_sweep(space, cfg, args)
    ca = _build_ca(space, cfg)
    sec = cfg.get("analyze", {})
    budgets = analyzer.AnalysisBudgets(
        pattern_budget=args.budget_patterns or cfg.get(
            "budget_patterns", analyzer.DEFAULT_PATTERN_BUDGET),
        goe_indices=tuple(_parse_indices(args.windows or sec.get("goe_indices", "1:8"))),
        me_indices=tuple(_parse_indices(sec.get("me_indices", "1:8"))),
        entropy_indices=tuple(_parse_indices(sec.get("entropy_indices", "1:6"))),
        entropy_mode=sec.get("entropy_mode", "exact"),
        samples=sec.get("samples", 4096),
        seed=args.seed if args.seed is not None else cfg.get("seed", 0),
        threads=args.threads or cfg.get("threads", 1),
    )
    report = analyzer.goe_report(ca, budgets)
    _emit(_json_text(report.as_json()), args.out)
    return 2 if report.consistency_flag else 0


def cmd_verify(args) -> int:
    try:
        with open(args.report, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise CliError(f"cannot read report {args.report}: {e}")
    if "sweep" in doc:
        raise CliError("sweep reports carry no witnesses to verify")
    try:
        ca = automaton.automaton_from_descriptor(doc["ca"])
    except (KeyError, ValueError) as e:
        raise CliError(f"bad automaton descriptor: {e}")
    results = {}
    witnesses = doc.get("witness") or {}
    for key, name in (("goe", "goe"), ("mutually_erasable", "mutually_erasable")):
        wdoc = witnesses.get(key)
        if wdoc is None:
            continue
        w = analyzer.GoeWitness.from_json(ca.space, wdoc)
        results[name] = analyzer.verify_witness(ca, w)
    _emit(_json_text({"schema": 1, "verified": results,
                      "ok": all(results.values())}), args.out)
    return 0 if all(results.values()) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="edenca",
                     description="cellular automata on cell spaces: geometry, "
                                 "Følner diagnostics, tilings, entropy, and "
                                 "Garden-of-Eden analysis")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", required=True, help="config JSON path")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--seed", type=int, default=None, help="RNG seed override")
        p.add_argument("--budget-patterns", type=int, default=None,
                       dest="budget_patterns", help="pattern budget override")
        p.add_argument("--windows", default=None,
                       help="index range override, e.g. 1:8 or 2,4,6")
        p.add_argument("--threads", type=int, default=None, help="worker cap")

    for name, fn in (("geometry", cmd_geometry), ("folner", cmd_folner),
                     ("tile", cmd_tile), ("entropy", cmd_entropy),
                     ("analyze", cmd_analyze)):
        p = sub.add_parser(name)
        common(p)
        if name == "tile":
            p.add_argument("--csv-out", default=None, dest="csv_out",
                           help="density table CSV path")
        p.set_defaults(fn=fn)

    pv = sub.add_parser("verify", help="replay the witness checks of a report")
    pv.add_argument("--report", required=True, help="analyze report JSON path")
    common(pv, needs_config=False)
    pv.set_defaults(fn=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.windows is not None and ":" not in args.windows:
        args.windows = [int(x) for x in args.windows.split(",")]
    try:
        if args.command == "verify":
            return cmd_verify(args)
        cfg = _load_config(args.config)
        return args.fn(cfg, args)
    except (CliError, RegionOverflowError, BudgetExceededError, ValueError) as e:
        print(f"edenca: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
