"""Command line interface: configuration ingestion, command dispatch, and
machine-readable reports.

Configurations and reports are JSON.  A configuration document looks like::

    {
      "strings": [{"neg_period": "Z+", "core": "", "pos_period": "Z+",
                   "base": [0, 0, 0]}],
      "charges": [[0, 0, 0], [2, 2, 2]],
      "loops":   [{"start": [0, 0, 0], "steps": "X+Y+X-Y-"}]
    }

Step words are two-character atoms over X+ X- Y+ Y- Z+ Z-.  Regions are
given as inclusive corner pairs ``x0,y0,z0:x1,y1,z1``; the same corners are
read in dual coordinates for flux energy and in primal coordinates for
charge counting, and both readings are echoed in the report.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import stabilizer, transforms
from .errors import (
    ConfigSemanticError,
    ConfigSyntaxError,
    Toric3dError,
)
from .lattice import (
    AXES,
    AXIS_NAMES,
    Face,
    Region,
    add,
    direction_name,
    direction_vector,
    format_steps,
    parse_steps,
    region_of,
)
from .paths import (
    InfinitePathSpec,
    SelfIntersecting,
    path_from_steps,
    validate_surface,
)
from .sectors import (
    SectorVerdict,
    charge_parity,
    classify,
    enumerate_gsc_solutions,
    sector_label,
)
from .transforms import Configuration, energy, make_configuration, surgery

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# document parsing and serialization
# ---------------------------------------------------------------------------


def parse_config(text: str) -> dict:
    """Parse and shape-check a configuration document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as ex:
        raise ConfigSyntaxError(str(ex), line=ex.lineno, column=ex.colno) from ex
    if not isinstance(doc, dict):
        raise ConfigSyntaxError("top level must be an object")
    out = {"strings": [], "charges": [], "loops": []}
    for i, s in enumerate(doc.get("strings", [])):
        entry = {}
        for key in ("neg_period", "core", "pos_period"):
            word = s.get(key, "")
            try:
                parse_steps(word)
            except ValueError as ex:
                raise ConfigSyntaxError(f"strings[{i}].{key}: {ex}") from ex
            entry[key] = word.upper()
        base = s.get("base", [0, 0, 0])
        if len(base) != 3 or not all(isinstance(c, int) for c in base):
            raise ConfigSyntaxError(f"strings[{i}].base must be 3 integers")
        entry["base"] = list(base)
        out["strings"].append(entry)
    for i, c in enumerate(doc.get("charges", [])):
        if len(c) != 3 or not all(isinstance(x, int) for x in c):
            raise ConfigSyntaxError(f"charges[{i}] must be 3 integers")
        out["charges"].append(list(c))
    for i, l in enumerate(doc.get("loops", [])):
        try:
            parse_steps(l.get("steps", ""))
        except ValueError as ex:
            raise ConfigSyntaxError(f"loops[{i}].steps: {ex}") from ex
        start = l.get("start", [0, 0, 0])
        if len(start) != 3 or not all(isinstance(x, int) for x in start):
            raise ConfigSyntaxError(f"loops[{i}].start must be 3 integers")
        out["loops"].append({"start": list(start), "steps": l.get("steps", "").upper()})
    return out


def document_to_configuration(doc: dict) -> Configuration:
    strings = []
    for i, s in enumerate(doc["strings"]):
        try:
            strings.append(
                InfinitePathSpec(
                    parse_steps(s["neg_period"]),
                    parse_steps(s["core"]),
                    parse_steps(s["pos_period"]),
                    tuple(s["base"]),
                )
            )
        except Toric3dError as ex:
            raise ConfigSemanticError(f"strings[{i}]: {ex}", index=i) from ex
    loops = []
    for i, l in enumerate(doc["loops"]):
        try:
            loop = path_from_steps(tuple(l["start"]), parse_steps(l["steps"]))
        except Toric3dError as ex:
            raise ConfigSemanticError(f"loops[{i}]: {ex}", index=i) from ex
        if not loop.closed:
            raise ConfigSemanticError(f"loops[{i}] is not closed", index=i)
        loops.append(loop)
    return make_configuration(doc["charges"], strings, loops)


def configuration_to_document(cfg: Configuration) -> dict:
    return {
        "strings": [
            {
                "neg_period": format_steps(s.neg_period),
                "core": format_steps(s.core),
                "pos_period": format_steps(s.pos_period),
                "base": list(s.base),
            }
            for s in cfg.strings
        ],
        "charges": [list(c) for c in cfg.charges],
        "loops": [
            {"start": list(l.start), "steps": format_steps(l.steps)}
            for l in cfg.loops
        ],
    }


def parse_region(text: str) -> Region:
    try:
        lo_s, hi_s = text.split(":")
        lo = tuple(int(x) for x in lo_s.split(","))
        hi = tuple(int(x) for x in hi_s.split(","))
        if len(lo) != 3 or len(hi) != 3:
            raise ValueError("corners need three coordinates")
        return region_of(lo, hi)
    except (ValueError, TypeError) as ex:
        raise ConfigSyntaxError(f"bad region {text!r}: {ex}") from ex


def parse_surface_file(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    faces = []
    for i, f in enumerate(data):
        base = tuple(f["base"])
        normal = f["normal"].lower()
        if normal not in AXIS_NAMES:
            raise ConfigSyntaxError(f"faces[{i}].normal must be one of x, y, z")
        faces.append(Face(base, AXIS_NAMES.index(normal)))
    return validate_surface(faces)


def _verdict_json(v: SectorVerdict) -> dict:
    out = {"kind": v.kind.value, "frustration_free": v.frustration_free}
    if v.witness is not None:
        w = {}
        if v.witness.string_index is not None:
            w["string_index"] = v.witness.string_index
        if v.witness.pair is not None:
            w["pair"] = list(v.witness.pair)
        if v.witness.direction is not None:
            w["direction"] = direction_name(v.witness.direction)
        out["witness"] = w
    if v.script:
        out["script"] = [
            {
                "kind": s.kind,
                "index": s.index,
                **(
                    {"region": [list(s.region.lo), list(s.region.hi)]}
                    if s.region is not None
                    else {}
                ),
            }
            for s in v.script
        ]
    return out


def _label_json(label) -> dict:
    return {
        "g": label.g,
        "tags": [
            {
                "kind": t.kind,
                "directions": sorted(direction_name(d) for d in t.directions),
                "anchors": sorted(
                    [direction_name(d), list(tau)] for d, tau in t.anchors
                ),
            }
            for t in label.tags
        ],
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _cmd_validate(cfg: Configuration, args) -> tuple[dict, int]:
    return {"ok": True, "config": configuration_to_document(cfg)}, 0


def _cmd_classify(cfg: Configuration, args) -> tuple[dict, int]:
    verdict = classify(cfg, strict_gss=args.strict_gss)
    report = {"verdict": _verdict_json(verdict), "charge_parity": charge_parity(cfg)}
    if verdict.is_ground_sector:
        report["label"] = _label_json(sector_label(cfg, strict_gss=args.strict_gss))
    code = 0
    if args.expect_ground and not verdict.is_ground_sector:
        code = 1
    return report, code


def _cmd_energy(cfg: Configuration, args) -> tuple[dict, int]:
    region = parse_region(args.region)
    rep = energy(cfg, region)
    return {
        "region_dual_flux": [list(region.lo), list(region.hi)],
        "region_primal_charge": [list(region.lo), list(region.hi)],
        "flux_energy": rep.flux_energy,
        "charge_energy": rep.charge_energy,
        "total": rep.total,
    }, 0


def _cmd_straighten(cfg: Configuration, args) -> tuple[dict, int]:
    region = parse_region(args.region)
    results = []
    strings = list(cfg.strings)
    for i, spec in enumerate(strings):
        try:
            fixed, steps = transforms.straighten_fixpoint(spec, region)
            strings[i] = fixed
            results.append({"string": i, "steps": steps})
        except Toric3dError as ex:
            results.append({"string": i, "skipped": type(ex).__name__})
    out = Configuration(cfg.charges, tuple(strings), cfg.loops)
    return {
        "results": results,
        "config": configuration_to_document(out),
    }, 0


def _cmd_surgery(cfg: Configuration, args) -> tuple[dict, int]:
    surface = parse_surface_file(args.surface)
    out = surgery(cfg, surface)
    return {"config": configuration_to_document(out)}, 0


def _cmd_enumerate(args) -> tuple[dict, int]:
    rep = enumerate_gsc_solutions(args.strings)
    return {
        "n_strings": rep.n_strings,
        "raw_count": rep.raw_count,
        "raw_count_alt": rep.raw_count_alt,
        "case_inventory": rep.case_inventory,
        "orbit_count": len(rep.orbits),
        "reductions": {k: sorted(v) for k, v in rep.reduction_targets.items()},
    }, 0


# ---------------------------------------------------------------------------
# verify: cross-validate the combinatorial layer against the F2 verifier
# ---------------------------------------------------------------------------


def _random_verify_configuration(rng) -> Configuration:
    lo, hi = 0, 4
    strings = []
    for _ in range(int(rng.integers(0, 3))):
        for _attempt in range(20):
            base = tuple(int(x) for x in rng.integers(lo + 1, hi, 3))
            neg = ((int(rng.integers(0, 3)), int(rng.choice((-1, 1)))),)
            pos = ((int(rng.integers(0, 3)), int(rng.choice((-1, 1)))),)
            core = []
            v = base
            for _ in range(int(rng.integers(0, 6))):
                d = (int(rng.integers(0, 3)), int(rng.choice((-1, 1))))
                w = add(v, direction_vector(d))
                if all(lo <= w[a] <= hi for a in AXES):
                    core.append(d)
                    v = w
            try:
                strings.append(InfinitePathSpec(neg, tuple(core), pos, base))
                break
            except SelfIntersecting:
                continue
    loops = []
    for _ in range(int(rng.integers(0, 3))):
        a1, a2 = sorted(rng.choice(3, size=2, replace=False))
        w, h = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        base = tuple(int(x) for x in rng.integers(lo, hi - 2, 3))
        steps = (
            [(int(a1), 1)] * w + [(int(a2), 1)] * h + [(int(a1), -1)] * w + [(int(a2), -1)] * h
        )
        loops.append(path_from_steps(base, steps))
    charges = [tuple(int(x) for x in rng.integers(lo, hi + 1, 3)) for _ in range(int(rng.integers(0, 4)))]
    return make_configuration(charges, strings, loops)


def _check_commutation(n: int) -> dict:
    lat = stabilizer.FiniteLattice(n)
    bad = 0
    checked = 0
    for v in lat.vertices:
        sv = stabilizer.star(lat, v)
        for f in lat.faces:
            checked += 1
            if not stabilizer.commutes(sv, stabilizer.plaquette(lat, f)):
                bad += 1
    return {"name": "commutation", "pairs": checked, "violations": bad, "pass": bad == 0}


def _check_energy(samples: int, seed: int) -> dict:
    rng = np.random.default_rng(seed)
    lat = stabilizer.FiniteLattice(13)
    region = region_of((0, 0, 0), (4, 4, 4))
    clip = region.inflate(2)
    mismatches = 0
    for _ in range(samples):
        cfg = _random_verify_configuration(rng)
        combinatorial = energy(cfg, region).total
        flip = stabilizer.configuration_flip(lat, cfg, region, clip)
        exact = stabilizer.syndrome_energy(lat, flip, region)
        if combinatorial != exact:
            mismatches += 1
    return {
        "name": "energy",
        "samples": samples,
        "mismatches": mismatches,
        "pass": mismatches == 0,
    }


def _check_gauge() -> dict:
    ranks = {n: stabilizer.gauge_rank(n) for n in (1, 2, 3)}
    ok = all(r == n**3 for n, r in ranks.items())
    return {"name": "gauge", "ranks": {str(k): v for k, v in ranks.items()}, "pass": ok}


def _check_nets() -> dict:
    reports = [stabilizer.surface_net_checks(n) for n in (1, 2)]
    ok = all(
        r.gauge_supports_distinct
        and r.gauge_supports_are_nets
        and r.single_orbit
        and r.ground_space_dim == 1
        for r in reports
    )
    ok = ok and reports[0].fiber_sizes_equal and reports[0].bitflip_bijection
    return {
        "name": "nets",
        "dims": [r.ground_space_dim for r in reports],
        "boundary_conditions_n1": reports[0].boundary_conditions,
        "pass": bool(ok),
    }


def _check_truncation(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    lat = stabilizer.FiniteLattice(11)
    failures = 0
    cases = 0
    for _ in range(40):
        m = int(rng.integers(1, 3))
        v = tuple(int(x) for x in rng.integers(-(m // 2), m - m // 2, 3))
        obs = stabilizer.pauli_from_keys(
            lat,
            x_keys=[k for k in stabilizer.FiniteLattice(m).interior_edges if rng.random() < 0.4],
            z_keys=[k for k in stabilizer.FiniteLattice(m).interior_edges if rng.random() < 0.4],
        )
        n1 = int(rng.integers(m + 1, 4))
        n2 = int(rng.integers(n1 + 1, 5))
        s1 = stabilizer.straight_string_pauli(lat, v, n1)
        s2 = stabilizer.straight_string_pauli(lat, v, n2)
        cases += 1
        if not stabilizer.truncation_stable(obs, s1, s2):
            failures += 1
        m1 = stabilizer.growing_membrane_pauli(lat, (0, 0, 2), n1)
        m2 = stabilizer.growing_membrane_pauli(lat, (0, 0, 2), n2)
        cases += 1
        if not stabilizer.truncation_stable(obs, m1, m2):
            failures += 1
    return {"name": "truncation", "cases": cases, "failures": failures, "pass": failures == 0}


_CHECKS = ("commutation", "energy", "gauge", "nets", "truncation")


def _cmd_verify(args) -> tuple[dict, int]:
    wanted = _CHECKS if args.checks == "all" else (args.checks,)
    results = []
    for name in wanted:
        if name == "commutation":
            results.append(_check_commutation(min(args.n, 3)))
        elif name == "energy":
            results.append(_check_energy(samples=args.samples, seed=args.seed))
        elif name == "gauge":
            results.append(_check_gauge())
        elif name == "nets":
            results.append(_check_nets())
        elif name == "truncation":
            results.append(_check_truncation(seed=args.seed))
    ok = all(r["pass"] for r in results)
    return {"checks": results, "pass": ok}, 0 if ok else 1


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def _read_config(args) -> Configuration:
    if args.config == "-":
        text = sys.stdin.read()
    else:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    return document_to_configuration(parse_config(text))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toric3d",
        description="Ground-sector decisions for charges and infinite flux strings on Z^3",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_arg(p):
        p.add_argument("--config", default="-", help="configuration JSON file, or - for stdin")

    p = sub.add_parser("validate", help="parse and echo a configuration")
    add_config_arg(p)

    p = sub.add_parser("classify", help="sector verdict and label")
    add_config_arg(p)
    p.add_argument("--strict-gss", action="store_true", help="use the literal total-intersection reading")
    p.add_argument("--expect-ground", action="store_true", help="exit 1 unless in a ground sector")

    p = sub.add_parser("energy", help="excitation energy inside a region")
    add_config_arg(p)
    p.add_argument("--region", required=True, help="x0,y0,z0:x1,y1,z1")

    p = sub.add_parser("straighten", help="straighten all strings inside a region")
    add_config_arg(p)
    p.add_argument("--region", required=True, help="x0,y0,z0:x1,y1,z1")

    p = sub.add_parser("surgery", help="resplice strings along a membrane boundary")
    add_config_arg(p)
    p.add_argument("--surface", required=True, help="JSON file with a list of dual faces")

    p = sub.add_parser("enumerate", help="classify tail-direction assignments")
    p.add_argument("--strings", type=int, choices=(2, 3), required=True)

    p = sub.add_parser("verify", help="cross-validate against the F2 verifier")
    p.add_argument("--n", type=int, default=3, help="block side for commutation checks")
    p.add_argument("--checks", default="all", choices=_CHECKS + ("all",))
    p.add_argument("--samples", type=int, default=50, help="random samples for the energy check")
    p.add_argument("--seed", type=int, default=0)
    return parser


def run(argv=None) -> tuple[dict, int]:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "enumerate":
            report, code = _cmd_enumerate(args)
        elif args.command == "verify":
            report, code = _cmd_verify(args)
        else:
            cfg = _read_config(args)
            handler = {
                "validate": _cmd_validate,
                "classify": _cmd_classify,
                "energy": _cmd_energy,
                "straighten": _cmd_straighten,
                "surgery": _cmd_surgery,
            }[args.command]
            report, code = handler(cfg, args)
    except Toric3dError as ex:
        report = {
            "error": type(ex).__name__,
            "message": str(ex),
            "schema_version": SCHEMA_VERSION,
            "command": args.command,
        }
        return report, 2
    except OSError as ex:
        return {
            "error": "IOError",
            "message": str(ex),
            "schema_version": SCHEMA_VERSION,
            "command": args.command,
        }, 2
    report["schema_version"] = SCHEMA_VERSION
    report["command"] = args.command
    return report, code


def main(argv=None) -> int:
    report, code = run(argv)
    print(json.dumps(report, sort_keys=True, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
