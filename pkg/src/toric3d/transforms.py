"""Constructive moves on configurations: energy accounting, straightening,
surgery, and linking parity.

A configuration is a finite set of charges (primal vertices), infinite flux
strings (eventually periodic dual-path specs), and finite closed flux loops
(dual paths).  Regions follow the package convention: the same integer corner
pair is read in dual coordinates for flux counting and in primal coordinates
for charge counting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    AlreadyMonotonicInRegion,
    EndpointMismatch,
    InvalidConfiguration,
    InvalidSurface,
    MultipleCrossings,
    MultipleOverlapRuns,
    NoOverlap,
    SelfIntersecting,
)
from .lattice import (
    AXES,
    Direction,
    Edge,
    EdgeKey,
    Region,
    Vertex,
    add,
    boundary_edge,
    bounding_region,
    direction_vector,
    dual_face_of_edge,
    edge_direction,
    edge_from,
    face_edges,
    sub,
)
from .paths import (
    FinitePath,
    InfinitePathSpec,
    Surface,
    monotone_staircase,
    path_from_steps,
    replace_window,
    reverse_spec,
    word_is_monotone,
)


# ---------------------------------------------------------------------------
# configurations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Configuration:
    charges: tuple[Vertex, ...]
    strings: tuple[InfinitePathSpec, ...]
    loops: tuple[FinitePath, ...]

    def __post_init__(self):
        for i, loop in enumerate(self.loops):
            if not loop.closed:
                raise InvalidConfiguration(f"loop {i} is not closed")


def make_configuration(
    charges: Iterable[Vertex] = (),
    strings: Iterable[InfinitePathSpec] = (),
    loops: Iterable[FinitePath] = (),
) -> Configuration:
    return Configuration(
        tuple(tuple(c) for c in charges), tuple(strings), tuple(loops)
    )


@dataclass(frozen=True)
class EnergyReport:
    region: Region
    flux_energy: int
    charge_energy: int

    @property
    def total(self) -> int:
        return self.flux_energy + self.charge_energy


def _string_edges_in_region(spec: InfinitePathSpec, region: Region) -> list[Edge]:
    """Realized edges of ``spec`` with both endpoints inside ``region``."""
    out: list[Edge] = []
    nc = len(spec.core)
    v = spec.base
    for t in range(nc):
        e = edge_from(v, spec.step(t))
        if region.contains_edge(e):
            out.append(e)
        v = boundary_edge(e)[1]

    def walk(start_t, direction):
        disp = spec.pos_displacement if direction > 0 else spec.neg_displacement
        axis = max(AXES, key=lambda a: abs(disp[a]))
        period = len(spec.pos_period) if direction > 0 else len(spec.neg_period)
        t0 = start_t
        while True:
            coords = []
            for i in range(period):
                t = t0 + i * direction
                te = t if direction > 0 else t - 1
                e = edge_from(spec.vertex(te), spec.step(te))
                a, b = boundary_edge(e)
                coords.extend((a[axis], b[axis]))
                if region.contains_edge(e):
                    out.append(e)
            if disp[axis] > 0 and min(coords) > region.hi[axis]:
                return
            if disp[axis] < 0 and max(coords) < region.lo[axis]:
                return
            t0 += period * direction

    walk(nc, +1)
    walk(0, -1)
    return out


def flux_chain_in_region(cfg: Configuration, region: Region) -> set[EdgeKey]:
    """Mod-2 sum of all flux edges inside ``region`` (shared edges cancel)."""
    chain: set[EdgeKey] = set()
    for spec in cfg.strings:
        for e in _string_edges_in_region(spec, region):
            chain.symmetric_difference_update({e.key})
    for loop in cfg.loops:
        for e in loop.edges:
            if region.contains_edge(e):
                chain.symmetric_difference_update({e.key})
    return chain


def energy(cfg: Configuration, region: Region) -> EnergyReport:
    """Energy of the excitation pattern inside ``region``: 2 per violated
    stabilizer (flux edge in dual reading, charge vertex in primal reading).

    Coincident excitations fuse away: shared flux edges and doubled charges
    cancel mod 2 before counting."""
    flux = 2 * len(flux_chain_in_region(cfg, region))
    live: set[Vertex] = set()
    for c in cfg.charges:
        live.symmetric_difference_update({tuple(c)})
    charge = 2 * sum(1 for c in live if region.contains_vertex(c))
    return EnergyReport(region, flux, charge)


# ---------------------------------------------------------------------------
# projection and lift
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Projection:
    """In-plane shadow of a path: the steps along ``drop_axis`` removed.

    ``dropped`` records ``(original_index, direction)`` for each removed step.
    """

    start: Vertex
    steps: tuple[Direction, ...]
    drop_axis: int
    dropped: tuple[tuple[int, Direction], ...]

    @property
    def is_empty(self) -> bool:
        return not self.steps

    @property
    def displacement(self) -> Vertex:
        v = (0, 0, 0)
        for d in self.steps:
            v = add(v, direction_vector(d))
        return v


def project(path: FinitePath, nu: int) -> Projection:
    """Drop all steps along axis ``nu``, keeping order and a drop record."""
    kept: list[Direction] = []
    dropped: list[tuple[int, Direction]] = []
    for i, d in enumerate(path.steps):
        if d[0] == nu:
            dropped.append((i, d))
        else:
            kept.append(d)
    return Projection(path.start, tuple(kept), nu, tuple(dropped))


def _plane_displacement(steps: Iterable[Direction], nu: int) -> Vertex:
    v = (0, 0, 0)
    for d in steps:
        if d[0] != nu:
            v = add(v, direction_vector(d))
    return v


def lift(
    original: FinitePath,
    rerouted: "Projection | FinitePath | Sequence[Direction]",
    drop_record: Sequence[tuple[int, Direction]] | None = None,
) -> FinitePath:
    """Reinsert dropped steps into a rerouted projection.

    Each dropped step goes back after the same number of in-plane steps it
    originally followed (clamped to the rerouted length).  The result starts
    at the original start vertex and ends at its original end.
    """
    if isinstance(rerouted, Projection):
        steps = rerouted.steps
        record = rerouted.dropped if drop_record is None else tuple(drop_record)
        nu = rerouted.drop_axis
    else:
        if drop_record is None:
            raise ValueError("drop_record required when rerouted is a bare path")
        steps = rerouted.steps if isinstance(rerouted, FinitePath) else tuple(rerouted)
        record = tuple(drop_record)
        nu = record[0][1][0] if record else -1

    if nu >= 0:
        if _plane_displacement(original.steps, nu) != _plane_displacement(steps, nu):
            raise EndpointMismatch("rerouted projection does not match the original shadow")
    else:
        # nothing was dropped: the reroute must connect the endpoints itself
        if _plane_displacement(original.steps, -1) != _plane_displacement(steps, -1):
            raise EndpointMismatch("rerouted path does not connect the original endpoints")

    # anchor = number of kept steps before the dropped one in the original
    kept_before = []
    kept_count = 0
    rec_iter = {i for i, _ in record}
    for i, d in enumerate(original.steps):
        if i in rec_iter:
            kept_before.append(kept_count)
        else:
            kept_count += 1
    merged: list[Direction] = []
    ri = 0
    for pos in range(len(steps) + 1):
        while ri < len(record) and min(kept_before[ri], len(steps)) == pos:
            merged.append(record[ri][1])
            ri += 1
        if pos < len(steps):
            merged.append(steps[pos])
    return path_from_steps(original.start, merged)


# ---------------------------------------------------------------------------
# straightening
# ---------------------------------------------------------------------------


def _region_params(spec: InfinitePathSpec, region: Region):
    """Parameters of in-region edges plus parameters of in-region vertices."""
    edge_ts: list[int] = []
    vertex_ts: list[int] = []
    nc = len(spec.core)

    def scan(t):
        e = edge_from(spec.vertex(t), spec.step(t))
        if region.contains_edge(e):
            edge_ts.append(t)
        if region.contains_vertex(spec.vertex(t)):
            vertex_ts.append(t)

    for t in range(nc):
        scan(t)

    def walk(start_t, direction):
        disp = spec.pos_displacement if direction > 0 else spec.neg_displacement
        axis = max(AXES, key=lambda a: abs(disp[a]))
        period = len(spec.pos_period) if direction > 0 else len(spec.neg_period)
        t0 = start_t
        while True:
            coords = []
            for i in range(period):
                t = (t0 + i * direction) if direction > 0 else (t0 - 1 - i)
                scan(t)
                a, b = boundary_edge(edge_from(spec.vertex(t), spec.step(t)))
                coords.extend((a[axis], b[axis]))
            if disp[axis] > 0 and min(coords) > region.hi[axis]:
                return
            if disp[axis] < 0 and max(coords) < region.lo[axis]:
                return
            t0 += period * direction

    walk(nc, +1)
    walk(0, -1)
    return sorted(edge_ts), sorted(vertex_ts)


def _segment_steps(spec: InfinitePathSpec, region: Region) -> tuple[int, int, tuple[Direction, ...]]:
    """The single in-region stretch of the path, or raise MultipleCrossings."""
    edge_ts, vertex_ts = _region_params(spec, region)
    if not edge_ts:
        raise MultipleCrossings("path has no edge inside the region")
    t_lo, t_hi = edge_ts[0], edge_ts[-1]
    if edge_ts != list(range(t_lo, t_hi + 1)):
        raise MultipleCrossings("path crosses the region more than once")
    if any(t < t_lo or t > t_hi + 1 for t in vertex_ts):
        raise MultipleCrossings("path touches the region outside its crossing")
    return t_lo, t_hi + 1, spec.realize_steps(t_lo, t_hi)


def _bad_axes(steps: Sequence[Direction]) -> list[int]:
    signs: dict[int, set[int]] = {}
    for a, s in steps:
        signs.setdefault(a, set()).add(s)
    return [a for a, ss in signs.items() if len(ss) == 2]


def _reroute_single_bad_axis(start: Vertex, steps: Sequence[Direction]) -> tuple[Direction, ...]:
    """Monotone replacement for a stretch that oscillates along one axis only."""
    used = {d[0] for d in steps}
    end = start
    for d in steps:
        end = add(end, direction_vector(d))
    if len(used) <= 2:
        # in-plane: a direct monotone reroute between the endpoints
        return monotone_staircase(start, end)
    bad = _bad_axes(steps)[0]
    # drop a monotone axis, straighten the shadow, then lift the dropped steps
    counts = {a: 0 for a in used if a != bad}
    for a, _ in steps:
        if a in counts:
            counts[a] += 1
    nu = max(sorted(counts), key=lambda a: counts[a])
    path = path_from_steps(start, steps)
    proj = project(path, nu)
    shadow_end = add(proj.start, proj.displacement)
    rerouted = Projection(proj.start, monotone_staircase(proj.start, shadow_end), nu, proj.dropped)
    return tuple(lift(path, rerouted).steps)


def straighten_once(spec: InfinitePathSpec, region: Region) -> InfinitePathSpec:
    """One straightening pass inside ``region``; strictly lowers the in-region
    edge count and never changes edges outside the region."""
    t_lo, t_hi, steps = _segment_steps(spec, region)
    if word_is_monotone(steps):
        raise AlreadyMonotonicInRegion("segment is already monotone in the region")
    start = spec.vertex(t_lo)
    end = spec.vertex(t_hi)
    bad = _bad_axes(steps)
    if len(bad) == 1:
        new_steps = _reroute_single_bad_axis(start, steps)
    else:
        new_steps = _case_three(start, steps)
        if new_steps is None:
            new_steps = monotone_staircase(start, end)
    if len(new_steps) >= len(steps):
        # guaranteed progress: the whole-segment monotone reroute is shorter
        new_steps = monotone_staircase(start, end)
    return replace_window(spec, t_lo, t_hi, new_steps)


def _case_three(start: Vertex, steps: Sequence[Direction]):
    """Straighten the longest run that misbehaves along a single axis."""
    runs = []
    n = len(steps)
    for i in range(n):
        for j in range(n, i, -1):
            sub_bad = _bad_axes(steps[i:j])
            if len(sub_bad) == 1:
                runs.append((j - i, i, j))
                break
    if not runs:
        return None
    runs.sort(key=lambda r: (-r[0], r[1]))
    for _, i, j in runs[:8]:
        run_start = start
        for d in steps[:i]:
            run_start = add(run_start, direction_vector(d))
        replacement = _reroute_single_bad_axis(run_start, steps[i:j])
        candidate = tuple(steps[:i]) + replacement + tuple(steps[j:])
        if len(candidate) >= len(steps):
            continue
        try:
            path_from_steps(start, candidate)
        except SelfIntersecting:
            continue
        return candidate
    return None


def straighten_fixpoint(spec: InfinitePathSpec, region: Region) -> tuple[InfinitePathSpec, int]:
    """Iterate :func:`straighten_once` until the in-region segment is monotone."""
    count = 0
    while True:
        try:
            spec = straighten_once(spec, region)
        except AlreadyMonotonicInRegion:
            return spec, count
        count += 1


# ---------------------------------------------------------------------------
# surgery
# ---------------------------------------------------------------------------


def _overlap_params(spec: InfinitePathSpec, keys: set[EdgeKey], window: Region) -> list[int]:
    params = []
    edge_ts, _ = _region_params(spec, window)
    for t in edge_ts:
        if spec.edge_at(t).key in keys:
            params.append(t)
    return params


def _aligned_low(spec: InfinitePathSpec, t: int) -> int:
    nn = len(spec.neg_period)
    lo = min(t, 0)
    return -nn * math.ceil(-lo / nn) if lo < 0 else 0


def _aligned_high(spec: InfinitePathSpec, t: int) -> int:
    nc = len(spec.core)
    npp = len(spec.pos_period)
    hi = max(t, nc)
    return nc + npp * math.ceil((hi - nc) / npp)


def deoverlap(cfg: Configuration) -> Configuration:
    """Perturb later strings by unit detours until no two share an edge."""
    strings = list(cfg.strings)
    for _attempt in range(12):
        shared = _shared_runs(strings)
        if not shared:
            return Configuration(cfg.charges, tuple(strings), cfg.loops)
        j, t_lo, t_hi = shared[0]
        run = strings[j].realize_steps(t_lo, t_hi - 1)
        used = {d[0] for d in run}
        fixed = False
        for axis in AXES:
            if axis in used:
                continue
            for sign in (+1, -1):
                detour = ((axis, sign),) + tuple(run) + ((axis, -sign),)
                try:
                    strings[j] = replace_window(strings[j], t_lo, t_hi, detour)
                    fixed = True
                    break
                except SelfIntersecting:
                    continue
            if fixed:
                break
        if not fixed:
            raise InvalidConfiguration("could not detour overlapping strings apart")
    if _shared_runs(strings):
        raise InvalidConfiguration("strings keep overlapping after detours")
    return Configuration(cfg.charges, tuple(strings), cfg.loops)


def _shared_runs(strings: Sequence[InfinitePathSpec]):
    """First contiguous run of edges shared by two strings, as (j, t_lo, t_hi)."""
    out = []
    for i in range(len(strings)):
        for j in range(i + 1, len(strings)):
            vs = [strings[i].vertex(t) for t in range(0, len(strings[i].core) + 1)]
            vs += [strings[j].vertex(t) for t in range(0, len(strings[j].core) + 1)]
            pad = 2 * (
                len(strings[i].neg_period)
                + len(strings[i].pos_period)
                + len(strings[j].neg_period)
                + len(strings[j].pos_period)
            ) + 2
            window = bounding_region(vs).inflate(pad)
            keys_i = {strings[i].edge_at(t).key for t in _region_params(strings[i], window)[0]}
            ts = [t for t in _region_params(strings[j], window)[0] if strings[j].edge_at(t).key in keys_i]
            if ts:
                runs = _contiguous_runs(ts)
                t_lo, t_hi = runs[0]
                out.append((j, t_lo, t_hi + 1))
    return out


def _contiguous_runs(ts: Sequence[int]) -> list[tuple[int, int]]:
    runs = []
    for t in sorted(ts):
        if runs and runs[-1][1] == t - 1:
            runs[-1][1] = t
        else:
            runs.append([t, t])
    return [tuple(r) for r in runs]


def surgery(cfg: Configuration, surface: Surface) -> Configuration:
    """Cut every string along its overlap with the surface boundary and
    resplice across the boundary arcs.  The output edge chain equals the
    input chain XOR the boundary chain."""
    if surface.closed:
        raise InvalidSurface("surgery needs an open surface")
    if not _faces_connected(surface):
        raise InvalidSurface("surface faces are not edge-connected")
    cfg = deoverlap(cfg)
    boundary = surface.boundary
    bkeys = {e.key for e in boundary.edges}
    window = bounding_region(
        [v for e in boundary.edges for v in boundary_edge(e)]
    ).inflate(2)

    touched: list[dict] = []
    strings = list(cfg.strings)
    for idx, spec in enumerate(strings):
        params = _overlap_params(spec, bkeys, window)
        if not params:
            continue
        runs = _contiguous_runs(params)
        if len(runs) != 1:
            raise MultipleOverlapRuns(f"string {idx} meets the boundary in {len(runs)} runs")
        t_lo, t_hi = runs[0]
        # align orientations: the string must traverse the overlap against
        # the boundary's own traversal
        key0 = spec.edge_at(t_lo).key
        b_edge = next(e for e in boundary.edges if e.key == key0)
        if spec.edge_at(t_lo).sign == b_edge.sign:
            spec = reverse_spec(spec)
            strings[idx] = spec
            params = _overlap_params(spec, bkeys, window)
            runs = _contiguous_runs(params)
            if len(runs) != 1:
                raise MultipleOverlapRuns(f"string {idx} meets the boundary in {len(runs)} runs")
            t_lo, t_hi = runs[0]
        positions = sorted(
            i for i, e in enumerate(boundary.edges) if e.key in
            {spec.edge_at(t).key for t in range(t_lo, t_hi + 1)}
        )
        touched.append(
            {"index": idx, "p": t_lo, "q": t_hi, "positions": positions, "spec": spec}
        )
    if not touched:
        raise NoOverlap("surface boundary meets no string")

    L = len(boundary.edges)
    for info in touched:
        pos = info["positions"]
        if not _cyclically_contiguous(pos, L):
            raise MultipleOverlapRuns(
                f"string {info['index']} overlap is not contiguous along the boundary"
            )
        info["b_start"], info["b_end"] = _cyclic_run(pos, L)

    # order runs by first encounter walking the boundary cycle
    touched.sort(key=lambda info: info["b_start"])
    n = len(touched)
    new_specs = {}
    for k, info in enumerate(touched):
        nxt = touched[(k + 1) % n]
        arc = []
        i = (info["b_end"] + 1) % L
        while i != nxt["b_start"]:
            arc.append(edge_direction(boundary.edges[i]))
            i = (i + 1) % L
        spec_i, spec_j = info["spec"], nxt["spec"]
        a_lo = _aligned_low(spec_i, info["p"])
        b_hi = _aligned_high(spec_j, nxt["q"] + 1)
        core = (
            tuple(spec_i.step(t) for t in range(a_lo, info["p"]))
            + tuple(arc)
            + tuple(spec_j.step(t) for t in range(nxt["q"] + 1, b_hi))
        )
        new_specs[info["index"]] = InfinitePathSpec(
            spec_i.neg_period, core, spec_j.pos_period, spec_i.vertex(a_lo)
        )

    out_strings = [new_specs.get(i, s) for i, s in enumerate(strings)]
    return Configuration(cfg.charges, tuple(out_strings), cfg.loops)


def _cyclically_contiguous(positions: Sequence[int], L: int) -> bool:
    k = len(positions)
    if k == L:
        return True
    pos_set = set(positions)
    starts = [p for p in positions if (p - 1) % L not in pos_set]
    return len(starts) == 1


def _cyclic_run(positions: Sequence[int], L: int) -> tuple[int, int]:
    pos_set = set(positions)
    start = next(p for p in positions if (p - 1) % L not in pos_set)
    return start, (start + len(positions) - 1) % L


def _faces_connected(surface: Surface) -> bool:
    faces = list(surface.faces)
    key_to_faces: dict[EdgeKey, list[int]] = {}
    for i, f in enumerate(faces):
        for e in face_edges(f):
            key_to_faces.setdefault(e.key, []).append(i)
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for e in face_edges(faces[i]):
            for j in key_to_faces[e.key]:
                if j not in seen:
                    seen.add(j)
                    frontier.append(j)
    return len(seen) == len(faces)


# ---------------------------------------------------------------------------
# linking
# ---------------------------------------------------------------------------


def linking_parity(loop: FinitePath, surface: Surface) -> int:
    """Parity of the number of loop edges piercing the surface."""
    if not loop.closed:
        raise InvalidConfiguration("linking parity needs a closed loop")
    hits = sum(1 for e in loop.edges if dual_face_of_edge(e) in surface.faces)
    return hits & 1
