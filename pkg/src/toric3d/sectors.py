"""Ground-state and ground-sector decisions, sector labels, and the
exhaustive classification of tail-direction assignments.

A configuration is a ground state iff every string is monotone, the strings'
tail-direction sets are pairwise disjoint, and there are no finite loops.
Charges never affect membership: they cost a fixed energy of 2 wherever they
sit and only contribute the charge parity to the label (they do break
frustration-freeness, which is reported separately).

Membership in a ground *sector* only constrains the tails: each string must
have conflict-free tail directions (no axis walked both ways infinitely
often) and the strings' direction sets must be pairwise disjoint.  For every
positive verdict a finite repair script (region straightenings plus loop
removals) is emitted and verified to land on an actual ground state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import permutations, product

from .errors import MultipleCrossings, NotAGroundSector
from .lattice import AXES, Direction, Region, reverse_direction
from .paths import DirectionSet, InfinitePathSpec, infinity_directions, is_monotonic
from .transforms import Configuration, straighten_fixpoint


class VerdictKind(Enum):
    GROUND_STATE = "GroundState"
    GROUND_SECTOR_NOT_GROUND_STATE = "GroundSectorNotGroundState"
    NOT_GROUND_SECTOR = "NotGroundSector"


@dataclass(frozen=True)
class Witness:
    """Why a configuration is outside every ground sector."""

    string_index: int | None = None
    pair: tuple[int, int] | None = None
    direction: Direction | None = None


@dataclass(frozen=True)
class ScriptStep:
    kind: str  # "straighten" or "drop_loop"
    index: int
    region: Region | None = None


@dataclass(frozen=True)
class SectorVerdict:
    kind: VerdictKind
    witness: Witness | None = None
    script: tuple[ScriptStep, ...] = ()
    frustration_free: bool = False

    @property
    def is_ground_state(self) -> bool:
        return self.kind is VerdictKind.GROUND_STATE

    @property
    def is_ground_sector(self) -> bool:
        return self.kind is not VerdictKind.NOT_GROUND_SECTOR


def charge_parity(cfg: Configuration) -> int:
    return len(cfg.charges) % 2


def tail_conflict(ds: DirectionSet) -> Direction | None:
    """A direction witnessing that some axis is walked both ways forever.

    The outward bookkeeping folds back into forward steps: the tails' forward
    letters are ``d_plus`` and the reverses of ``d_minus``.
    """
    letters = set(ds.d_plus) | {reverse_direction(d) for d in ds.d_minus}
    for a in AXES:
        if (a, +1) in letters and (a, -1) in letters:
            shared = ds.d_plus & ds.d_minus
            if shared:
                return sorted(shared)[0]
            if (a, +1) in ds.d_plus and (a, -1) in ds.d_plus:
                return (a, +1)
            return (a, +1) if (a, +1) in ds.d_minus else (a, -1)
    return None


def _script_region(spec: InfinitePathSpec, pad_factor: int) -> Region:
    from .paths import enclosing_region

    pad = pad_factor * (len(spec.neg_period) + len(spec.pos_period) + 2)
    return enclosing_region(spec).inflate(pad)


def run_script(cfg: Configuration, script: tuple[ScriptStep, ...]) -> Configuration:
    """Execute a repair script: straighten strings in place, drop loops."""
    strings = list(cfg.strings)
    drop: set[int] = set()
    for step in script:
        if step.kind == "straighten":
            strings[step.index], _ = straighten_fixpoint(strings[step.index], step.region)
        elif step.kind == "drop_loop":
            drop.add(step.index)
        else:
            raise ValueError(f"unknown script step {step.kind!r}")
    loops = tuple(l for i, l in enumerate(cfg.loops) if i not in drop)
    return Configuration(cfg.charges, tuple(strings), loops)


def classify(cfg: Configuration, strict_gss: bool = False) -> SectorVerdict:
    """Full decision: ground state / ground sector with repair script / neither.

    ``strict_gss`` switches the multi-string condition to the literal
    total-intersection reading instead of pairwise disjointness.
    """
    frustration_free = not cfg.charges and not cfg.loops and not cfg.strings
    dsets = [infinity_directions(s) for s in cfg.strings]

    for i, ds in enumerate(dsets):
        bad = tail_conflict(ds)
        if bad is not None:
            return SectorVerdict(
                VerdictKind.NOT_GROUND_SECTOR,
                Witness(string_index=i, direction=bad),
                frustration_free=frustration_free,
            )

    if strict_gss:
        if len(dsets) >= 2:
            common = set(dsets[0].all)
            for ds in dsets[1:]:
                common &= ds.all
            if common:
                return SectorVerdict(
                    VerdictKind.NOT_GROUND_SECTOR,
                    Witness(direction=sorted(common)[0]),
                    frustration_free=frustration_free,
                )
    else:
        for i in range(len(dsets)):
            for j in range(i + 1, len(dsets)):
                common = dsets[i].all & dsets[j].all
                if common:
                    return SectorVerdict(
                        VerdictKind.NOT_GROUND_SECTOR,
                        Witness(pair=(i, j), direction=sorted(common)[0]),
                        frustration_free=frustration_free,
                    )
        # pairwise-disjoint direction sets of size >= 2 cannot exceed three
        # strings over six directions
        assert len(cfg.strings) <= 3

    script: list[ScriptStep] = []
    all_monotone = True
    for i, spec in enumerate(cfg.strings):
        mono, _ = is_monotonic(spec)
        if not mono:
            all_monotone = False
            for pad in (1, 2, 4, 8):
                region = _script_region(spec, pad)
                try:
                    fixed, _ = straighten_fixpoint(spec, region)
                except MultipleCrossings:
                    continue
                if is_monotonic(fixed)[0]:
                    script.append(ScriptStep("straighten", i, region))
                    break
            else:
                raise AssertionError(
                    f"no straightening region found for sector-valid string {i}"
                )
    for k in range(len(cfg.loops)):
        script.append(ScriptStep("drop_loop", k))

    if all_monotone and not cfg.loops:
        return SectorVerdict(VerdictKind.GROUND_STATE, frustration_free=frustration_free)
    return SectorVerdict(
        VerdictKind.GROUND_SECTOR_NOT_GROUND_STATE,
        script=tuple(script),
        frustration_free=frustration_free,
    )


def is_ground_state(cfg: Configuration) -> SectorVerdict:
    return classify(cfg)


def is_ground_sector(cfg: Configuration, strict_gss: bool = False) -> SectorVerdict:
    return classify(cfg, strict_gss=strict_gss)


# ---------------------------------------------------------------------------
# sector labels
# ---------------------------------------------------------------------------

Tau = tuple[int, int]


@dataclass(frozen=True)
class StringClassTag:
    """Tail class of one string.

    ``P``: both tails pinned to straight rays (two anchors),
    ``Q``: exactly one tail pinned (one anchor),
    ``R``: neither tail pinned (no anchors).
    An anchor is ``(direction, tau)`` with ``tau`` the two transverse
    coordinates of the supporting line of the pinned ray.
    """

    kind: str
    directions: frozenset[Direction]
    anchors: frozenset[tuple[Direction, Tau]]


@dataclass(frozen=True)
class SectorLabel:
    g: int
    tags: tuple[StringClassTag, ...]


def _transverse(v, axis: int) -> Tau:
    return tuple(v[a] for a in AXES if a != axis)


def _string_tag(spec: InfinitePathSpec) -> StringClassTag:
    ds = infinity_directions(spec)
    anchors = []
    if len(ds.d_plus) == 1:
        d = next(iter(ds.d_plus))
        anchors.append((d, _transverse(spec.junction, d[0])))
    if len(ds.d_minus) == 1:
        d = next(iter(ds.d_minus))
        anchors.append((d, _transverse(spec.base, d[0])))
    kind = {2: "P", 1: "Q", 0: "R"}[len(anchors)]
    return StringClassTag(kind, frozenset(ds.all), frozenset(anchors))


def sector_label(cfg: Configuration, strict_gss: bool = False) -> SectorLabel:
    verdict = classify(cfg, strict_gss=strict_gss)
    if not verdict.is_ground_sector:
        raise NotAGroundSector("configuration is outside every ground sector")
    return SectorLabel(charge_parity(cfg), tuple(_string_tag(s) for s in cfg.strings))


# ---------------------------------------------------------------------------
# exhaustive classification of tail-direction assignments
# ---------------------------------------------------------------------------

# direction index: axis*2 for +, axis*2+1 for -
_DIR_OF_BIT = [(a, +1 if b == 0 else -1) for a in AXES for b in (0, 1)]
_BIT_OF_DIR = {d: i for i, d in enumerate(_DIR_OF_BIT)}


def _dirset_mask(dirs) -> int:
    m = 0
    for d in dirs:
        m |= 1 << _BIT_OF_DIR[d]
    return m


Assignment = tuple[int, int]  # (mask of D+, mask of D-)
Solution = tuple[Assignment, ...]


def _candidates() -> list[Assignment]:
    out = []
    for p in range(1, 64):
        for m in range(1, 64):
            if p & m == 0:
                out.append((p, m))
    return out


def _octahedral_tables() -> list[list[int]]:
    """Mask-transform tables for the 48 signed axis permutations."""
    tables = []
    for perm in permutations(AXES):
        for flips in product((0, 1), repeat=3):
            bitmap = []
            for i, (a, s) in enumerate(_DIR_OF_BIT):
                na = perm[a]
                ns = -s if flips[a] else s
                bitmap.append(_BIT_OF_DIR[(na, ns)])
            table = []
            for mask in range(64):
                t = 0
                for i in range(6):
                    if mask >> i & 1:
                        t |= 1 << bitmap[i]
                table.append(t)
            tables.append(table)
    return tables


_TABLES = _octahedral_tables()


def canonical_solution(sol: Solution) -> Solution:
    """Minimum over octahedral symmetry, string order, and D+/D- swaps.

    Swap and order minimize independently per string, so each assignment
    contributes its smaller encoding and the tuple is sorted.
    """
    best = None
    for table in _TABLES:
        cand = tuple(
            sorted(
                min((table[p], table[m]), (table[m], table[p])) for p, m in sol
            )
        )
        if best is None or cand < best:
            best = cand
    return best


def _case_two(sol: Solution) -> str:
    (p1, m1), (p2, m2) = sol
    d1, d2 = p1 | m1, p2 | m2
    if bin(d1).count("1") > bin(d2).count("1"):
        d1, d2 = d2, d1
    s1, s2 = bin(d1).count("1"), bin(d2).count("1")

    def axis_pair(mask):
        return any(mask == 0b11 << (2 * a) for a in AXES)

    def comp(mask):
        out = 0
        for i in range(6):
            if mask >> i & 1:
                out |= 1 << (i ^ 1)
        return out

    if (s1, s2) == (2, 2):
        return "I"
    if (s1, s2) == (2, 3):
        if axis_pair(d1):
            return "II.C"
        return "II.A" if comp(d1) & d2 == comp(d1) else "II.B"
    if (s1, s2) == (2, 4):
        return "III.A" if axis_pair(d1) else "III.B"
    if (s1, s2) == (3, 3):
        return "IV.A"
    raise AssertionError(f"unexpected size profile {(s1, s2)}")


def _case_three(sol: Solution) -> str:
    masks = [p | m for p, m in sol]
    assert all(bin(d).count("1") == 2 for d in masks)
    pairs = sum(1 for d in masks if any(d == 0b11 << (2 * a) for a in AXES))
    return {3: "A", 1: "B", 0: "C"}[pairs]


def surgery_move(sol: Solution, i: int, j: int) -> Solution:
    """Direction-set effect of splicing strings i and j across a membrane:
    the rewired strings pair i's positive side with j's positive side and
    i's negative side with j's negative side."""
    out = list(sol)
    (pi, mi), (pj, mj) = sol[i], sol[j]
    out[i] = (pi, pj)
    out[j] = (mi, mj)
    return tuple(out)


@dataclass
class EnumerationReport:
    n_strings: int
    raw_count: int
    raw_count_alt: int
    orbits: dict[Solution, str] = field(default_factory=dict)
    case_inventory: dict[str, int] = field(default_factory=dict)
    reduction_targets: dict[str, frozenset[str]] = field(default_factory=dict)


def _raw_solutions(n_strings: int) -> list[Solution]:
    cands = _candidates()
    by_allowed: dict[int, list[Assignment]] = {}

    def allowed(universe_mask):
        if universe_mask not in by_allowed:
            by_allowed[universe_mask] = [
                (p, m) for (p, m) in cands if (p | m) & ~universe_mask == 0
            ]
        return by_allowed[universe_mask]

    sols: list[Solution] = []
    if n_strings == 2:
        for c1 in cands:
            u = 63 & ~(c1[0] | c1[1])
            for c2 in allowed(u):
                sols.append((c1, c2))
    elif n_strings == 3:
        for c1 in cands:
            u1 = 63 & ~(c1[0] | c1[1])
            for c2 in allowed(u1):
                u2 = u1 & ~(c2[0] | c2[1])
                for c3 in allowed(u2):
                    sols.append((c1, c2, c3))
    else:
        raise ValueError("only 2- and 3-string enumerations are supported")
    return sols


def _raw_count_alt(n_strings: int) -> int:
    """Independent ordering: choose disjoint direction sets first, then count
    the ways to split each into two nonempty sides."""

    def splits(mask):
        return 2 ** bin(mask).count("1") - 2

    total = 0
    if n_strings == 2:
        for d1 in range(64):
            if bin(d1).count("1") < 2:
                continue
            for d2 in range(64):
                if bin(d2).count("1") < 2 or d1 & d2:
                    continue
                total += splits(d1) * splits(d2)
    else:
        for d1 in range(64):
            if bin(d1).count("1") < 2:
                continue
            for d2 in range(64):
                if bin(d2).count("1") < 2 or d1 & d2:
                    continue
                for d3 in range(64):
                    if bin(d3).count("1") < 2 or d3 & (d1 | d2):
                        continue
                    total += splits(d1) * splits(d2) * splits(d3)
    return total


def _reduction_closure(rep: Solution, classify_fn, depth: int = 3) -> frozenset[str]:
    """Cases reachable from ``rep`` by repeated surgery moves."""
    seen = {canonical_solution(rep)}
    frontier = [rep]
    cases = {classify_fn(rep)}
    for _ in range(depth):
        nxt = []
        for sol in frontier:
            n = len(sol)
            variants = []
            for swaps in product((0, 1), repeat=n):
                variants.append(
                    tuple((m, p) if sw else (p, m) for (p, m), sw in zip(sol, swaps))
                )
            for var in variants:
                for i in range(n):
                    for j in range(n):
                        if i == j:
                            continue
                        moved = surgery_move(var, i, j)
                        canon = canonical_solution(moved)
                        if canon not in seen:
                            seen.add(canon)
                            nxt.append(moved)
                            cases.add(classify_fn(moved))
        frontier = nxt
    return frozenset(cases)


def enumerate_gsc_solutions(n_strings: int) -> EnumerationReport:
    """Brute-force all tail-direction assignments satisfying the ground
    sector condition, fold them under octahedral symmetry, and name the
    surviving cases."""
    sols = _raw_solutions(n_strings)
    report = EnumerationReport(
        n_strings=n_strings,
        raw_count=len(sols),
        raw_count_alt=_raw_count_alt(n_strings),
    )
    classify_fn = _case_two if n_strings == 2 else _case_three
    orbits: dict[Solution, str] = {}
    for sol in sols:
        canon = canonical_solution(sol)
        if canon not in orbits:
            orbits[canon] = classify_fn(canon)
    report.orbits = orbits
    inventory: dict[str, int] = {}
    for case in orbits.values():
        inventory[case] = inventory.get(case, 0) + 1
    report.case_inventory = dict(sorted(inventory.items()))

    reducible = {"IV.A"} if n_strings == 2 else {"B", "C"}
    targets: dict[str, set[str]] = {}
    for canon, case in orbits.items():
        if case in reducible:
            reached = _reduction_closure(canon, classify_fn)
            targets.setdefault(case, set()).update(reached)
    report.reduction_targets = {k: frozenset(v) for k, v in targets.items()}
    return report
