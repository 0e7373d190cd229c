"""Finite and infinite paths and surfaces on the dual lattice.

Infinite paths are restricted to the eventually periodic class: a finite core
word framed by two nonempty periodic tail words.  A spec realises the
bi-infinite walk

* ``steps(t) = core[t]`` for ``0 <= t < len(core)``, starting at ``base``,
* ``steps(t)`` cycles ``pos_period`` for ``t >= len(core)``,
* ``steps(t)`` cycles ``neg_period`` read right-to-left for ``t < 0``.

``vertex(0) == base`` and ``vertex(t+1) == vertex(t) + steps(t)``.  Validation
certifies non-self-intersection with a finite argument: period displacements
must be nonzero, a truncation window sized from the tail geometry is checked
for repeated vertices, and parallel same-heading tails get an exact periodic
overlap check.  Specs whose tails defeat the window bounds are rejected rather
than guessed at.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import MalformedBoundary, NotConnected, SelfIntersecting
from . import _kernels
from .lattice import (
    AXES,
    Direction,
    Edge,
    EdgeKey,
    Face,
    Region,
    Vertex,
    add,
    boundary_edge,
    bounding_region,
    direction_vector,
    edge_from,
    face_edges,
    parse_steps,
    reverse_direction,
    scale,
    sub,
    unit,
)

StepWord = tuple[Direction, ...]


# ---------------------------------------------------------------------------
# finite paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FinitePath:
    """A validated edge walk; ``vertices`` has one more entry than ``edges``."""

    edges: tuple[Edge, ...]
    vertices: tuple[Vertex, ...]
    closed: bool

    @property
    def start(self) -> Vertex:
        return self.vertices[0]

    @property
    def end(self) -> Vertex:
        return self.vertices[-1]

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def edge_keys(self) -> tuple[EdgeKey, ...]:
        return tuple(e.key for e in self.edges)

    @property
    def steps(self) -> StepWord:
        return tuple((e.axis, e.sign) for e in self.edges)


def validate_finite_path(edges: Iterable[Edge]) -> FinitePath:
    """Check consecutiveness and non-self-intersection of an edge walk."""
    edges = tuple(edges)
    if not edges:
        raise NotConnected("a path needs at least one edge")
    vertices = [boundary_edge(edges[0])[0]]
    keys = set()
    for e in edges:
        s, t = boundary_edge(e)
        if s != vertices[-1]:
            raise NotConnected(f"edge {e} starts at {s}, expected {vertices[-1]}")
        if e.key in keys:
            raise SelfIntersecting(f"edge {e.key} walked twice")
        keys.add(e.key)
        vertices.append(t)
    closed = vertices[-1] == vertices[0] and len(edges) > 1
    interior = vertices[:-1] if closed else vertices
    if len(set(interior)) != len(interior):
        raise SelfIntersecting("vertex visited twice")
    if not closed and vertices[-1] in set(vertices[:-1]):
        raise SelfIntersecting("vertex visited twice")
    return FinitePath(edges, tuple(vertices), closed)


def path_from_steps(start: Vertex, steps: Sequence[Direction]) -> FinitePath:
    """Walk ``steps`` from ``start`` and validate the resulting path."""
    edges = []
    v = start
    for d in steps:
        e = edge_from(v, d)
        edges.append(e)
        v = boundary_edge(e)[1]
    return validate_finite_path(edges)


def monotone_staircase(a: Vertex, b: Vertex) -> StepWord:
    """Axis-ordered (x, then y, then z) monotone step word from ``a`` to ``b``."""
    steps = []
    for axis in AXES:
        d = b[axis] - a[axis]
        steps.extend([(axis, 1 if d > 0 else -1)] * abs(d))
    return tuple(steps)


def word_is_monotone(steps: Iterable[Direction]) -> bool:
    signs: dict[int, int] = {}
    for a, s in steps:
        if signs.setdefault(a, s) != s:
            return False
    return True


# ---------------------------------------------------------------------------
# surfaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Surface:
    """A validated face set; ``boundary`` is None exactly for closed surfaces."""

    faces: frozenset[Face]
    boundary: FinitePath | None

    @property
    def closed(self) -> bool:
        return self.boundary is None


def _boundary_chain(faces: Sequence[Face]) -> set[EdgeKey]:
    odd: set[EdgeKey] = set()
    for f in faces:
        for e in face_edges(f):
            odd.symmetric_difference_update({e.key})
    return odd


def _order_cycle(keys: set[EdgeKey]) -> FinitePath:
    by_vertex: dict[Vertex, list[EdgeKey]] = {}
    for (base, axis) in keys:
        for v in (base, add(base, unit(axis))):
            by_vertex.setdefault(v, []).append((base, axis))
    if any(len(ks) != 2 for ks in by_vertex.values()):
        raise MalformedBoundary("boundary chain is not a union of simple cycles")
    start = min(by_vertex)
    walk: list[Edge] = []
    v = start
    prev_key = None
    while True:
        options = [k for k in by_vertex[v] if k != prev_key]
        key = options[0]
        base, axis = key
        sign = +1 if base == v else -1
        e = Edge(base, axis, sign)
        walk.append(e)
        v = boundary_edge(e)[1]
        prev_key = key
        if v == start:
            break
    if len(walk) != len(keys):
        raise MalformedBoundary("boundary chain has more than one component")
    return validate_finite_path(walk)


def validate_surface(faces: Iterable[Face]) -> Surface:
    """Classify a face set as an open or closed non-self-intersecting surface."""
    face_list = list(faces)
    if not face_list:
        raise MalformedBoundary("a surface needs at least one face")
    if len(set(face_list)) != len(face_list):
        raise SelfIntersecting("face repeated in surface")

    edge_index: dict[EdgeKey, int] = {}
    rows_bits = []
    for f in face_list:
        idx = []
        for e in face_edges(f):
            idx.append(edge_index.setdefault(e.key, len(edge_index)))
        rows_bits.append(idx)
    nbits = len(edge_index)
    rows = [_kernels.bits_from_indices(idx, nbits) for idx in rows_bits]
    matrix = np.stack(rows)
    rank = _kernels.np_f2_rank(matrix)

    chain = _boundary_chain(face_list)
    if not chain:
        # closed: the only null combination may be the full face set
        kernel = _kernels.f2_nullspace_basis(matrix)
        full = _kernels.bits_from_indices(range(len(face_list)), len(face_list))
        if kernel.shape[0] != 1 or not np.array_equal(kernel[0], full):
            raise SelfIntersecting("closed surface contains a closed proper sub-surface")
        return Surface(frozenset(face_list), None)
    if rank != len(face_list):
        raise SelfIntersecting("surface contains a closed proper sub-surface")
    boundary = _order_cycle(chain)
    return Surface(frozenset(face_list), boundary)


# ---------------------------------------------------------------------------
# infinite path specs
# ---------------------------------------------------------------------------


def _word_displacement(word: StepWord) -> Vertex:
    v = (0, 0, 0)
    for d in word:
        v = add(v, direction_vector(d))
    return v


def _cumulative(word: StepWord) -> list[Vertex]:
    out = [(0, 0, 0)]
    for d in word:
        out.append(add(out[-1], direction_vector(d)))
    return out


@dataclass(frozen=True)
class DirectionSet:
    """Tail directions split into the positive and negative side."""

    d_plus: frozenset[Direction]
    d_minus: frozenset[Direction]

    @property
    def all(self) -> frozenset[Direction]:
        return self.d_plus | self.d_minus

    def swapped(self) -> "DirectionSet":
        return DirectionSet(self.d_minus, self.d_plus)


@dataclass(frozen=True)
class InfinitePathSpec:
    neg_period: StepWord
    core: StepWord
    pos_period: StepWord
    base: Vertex

    def __post_init__(self):
        _validate_spec(self)

    # -- realization ---------------------------------------------------

    @cached_property
    def _core_cum(self) -> list[Vertex]:
        return _cumulative(self.core)

    @cached_property
    def _pos_cum(self) -> list[Vertex]:
        return _cumulative(self.pos_period)

    @cached_property
    def _neg_suffix(self) -> list[Vertex]:
        # _neg_suffix[r] = displacement of the last r letters of neg_period
        rev = _cumulative(tuple(reversed(self.neg_period)))
        return rev

    @property
    def pos_displacement(self) -> Vertex:
        return self._pos_cum[-1]

    @property
    def neg_displacement(self) -> Vertex:
        """Displacement per period walking the negative tail outward (to -inf)."""
        return scale(self._neg_suffix[-1], -1)

    @property
    def junction(self) -> Vertex:
        return add(self.base, self._core_cum[-1])

    def step(self, t: int) -> Direction:
        nc = len(self.core)
        if t >= nc:
            return self.pos_period[(t - nc) % len(self.pos_period)]
        if t >= 0:
            return self.core[t]
        return self.neg_period[t % len(self.neg_period)]

    def vertex(self, t: int) -> Vertex:
        nc = len(self.core)
        if 0 <= t <= nc:
            return add(self.base, self._core_cum[t])
        if t > nc:
            q, r = divmod(t - nc, len(self.pos_period))
            return add(add(self.junction, scale(self.pos_displacement, q)), self._pos_cum[r])
        q, r = divmod(-t, len(self.neg_period))
        v = add(self.base, scale(self.neg_displacement, q))
        return sub(v, self._neg_suffix[r])

    def edge_at(self, t: int) -> Edge:
        return edge_from(self.vertex(t), self.step(t))

    def realize_steps(self, a: int, b: int) -> StepWord:
        return tuple(self.step(t) for t in range(a, b + 1))

    def edges(self, a: int, b: int) -> list[Edge]:
        out = []
        v = self.vertex(a)
        for t in range(a, b + 1):
            e = edge_from(v, self.step(t))
            out.append(e)
            v = boundary_edge(e)[1]
        return out


def spec_from_strings(neg: str, core: str, pos: str, base: Vertex = (0, 0, 0)) -> InfinitePathSpec:
    return InfinitePathSpec(parse_steps(neg), parse_steps(core), parse_steps(pos), tuple(base))


def truncate(spec: InfinitePathSpec, a: int, b: int) -> FinitePath:
    """The realized steps on ``[a, b]`` (inclusive) as a validated path."""
    if a > b:
        raise ValueError("truncation window out of order")
    return validate_finite_path(spec.edges(a, b))


def reverse_spec(spec: InfinitePathSpec) -> InfinitePathSpec:
    """Orientation reversal t -> -t; realizes the same edge set."""
    return InfinitePathSpec(
        tuple(reverse_direction(d) for d in reversed(spec.pos_period)),
        tuple(reverse_direction(d) for d in reversed(spec.core)),
        tuple(reverse_direction(d) for d in reversed(spec.neg_period)),
        spec.junction,
    )


def replace_window(
    spec: InfinitePathSpec, t_lo: int, t_hi: int, new_steps: Sequence[Direction]
) -> InfinitePathSpec:
    """Replace the realized steps on ``[t_lo, t_hi)`` by ``new_steps``.

    The replacement must connect ``vertex(t_lo)`` to ``vertex(t_hi)``; tails
    are preserved by aligning the cut points with full periods.
    """
    nn, nc, npp = len(spec.neg_period), len(spec.core), len(spec.pos_period)
    lo = min(t_lo, 0)
    a = -nn * math.ceil(-lo / nn) if lo < 0 else 0
    hi = max(t_hi, nc)
    b = nc + npp * math.ceil((hi - nc) / npp)
    disp = sub(spec.vertex(t_hi), spec.vertex(t_lo))
    if _word_displacement(tuple(new_steps)) != disp:
        raise ValueError("replacement steps do not connect the window endpoints")
    core = (
        tuple(spec.step(t) for t in range(a, t_lo))
        + tuple(new_steps)
        + tuple(spec.step(t) for t in range(t_hi, b))
    )
    return InfinitePathSpec(spec.neg_period, core, spec.pos_period, spec.vertex(a))


# ---------------------------------------------------------------------------
# spec validation
# ---------------------------------------------------------------------------


def _extent(vertices: Sequence[Vertex], axis: int) -> int:
    vals = [v[axis] for v in vertices]
    return max(vals) - min(vals)


def _escape_axis(disp: Vertex) -> int:
    return max(AXES, key=lambda a: abs(disp[a]))


def _primitive(v: Vertex) -> tuple[Vertex, int]:
    g = math.gcd(math.gcd(abs(v[0]), abs(v[1])), abs(v[2]))
    return tuple(c // g for c in v), g


def _parallel_factor(u: Vertex, v: Vertex) -> int | None:
    """q with v == q*u, or None if v is not an integer multiple of u."""
    q = None
    for a in AXES:
        if u[a] == 0:
            if v[a] != 0:
                return None
        else:
            if v[a] % u[a] != 0:
                return None
            qa = v[a] // u[a]
            if q is None:
                q = qa
            elif q != qa:
                return None
    return q


def _validate_spec(spec: InfinitePathSpec) -> None:
    if not spec.neg_period or not spec.pos_period:
        raise SelfIntersecting("period words must be nonempty")
    dpos = _word_displacement(spec.pos_period)
    dneg_out = scale(_word_displacement(spec.neg_period), -1)
    if dpos == (0, 0, 0) or dneg_out == (0, 0, 0):
        raise SelfIntersecting("period word has zero net displacement")

    nc = len(spec.core)
    nn, npp = len(spec.neg_period), len(spec.pos_period)

    # window vertex sets of the first tail period on each side
    base = tuple(spec.base)
    core_cum = _cumulative(spec.core)
    junction = add(base, core_cum[-1])
    w_pos = _cumulative(spec.pos_period)
    w_pos = [add(junction, v) for v in w_pos]
    w_neg = []
    v = base
    for d in reversed(spec.neg_period):
        v = sub(v, direction_vector(d))
        w_neg.append(v)
    w_neg = [base] + w_neg
    core_vs = [add(base, v) for v in core_cum]

    def _windows_needed(disp, window, other_vertices):
        axis = _escape_axis(disp)
        step = abs(disp[axis])
        ext = _extent(window, axis)
        self_bound = ext // step + 1
        span = _extent(window + list(other_vertices), axis)
        core_bound = span // step + 1
        return max(self_bound, core_bound)

    k_pos = _windows_needed(dpos, w_pos, core_vs + w_neg)
    k_neg = _windows_needed(dneg_out, w_neg, core_vs + w_pos)

    u_pos, g_pos = _primitive(dpos)
    q = _parallel_factor(u_pos, dneg_out)
    if q is None:
        # independent tail headings: Cramer bound over a nonsingular axis pair
        best = None
        for a in AXES:
            for b in AXES:
                if a < b:
                    det = dpos[a] * dneg_out[b] - dpos[b] * dneg_out[a]
                    if det != 0:
                        best = (a, b, det)
        a, b, det = best
        all_vs = core_vs + w_pos + w_neg
        ra = _extent(all_vs, a) + 2
        rb = _extent(all_vs, b) + 2
        jmax = (ra * abs(dneg_out[b]) + rb * abs(dneg_out[a])) // abs(det) + 1
        kmax = (ra * abs(dpos[b]) + rb * abs(dpos[a])) // abs(det) + 1
        k_pos = max(k_pos, jmax)
        k_neg = max(k_neg, kmax)
    elif q < 0:
        # tails head opposite ways along a common line: bounded interaction
        axis = _escape_axis(u_pos)
        span = _extent(core_vs + w_pos + w_neg, axis) + 2
        bound = span // min(abs(dpos[axis]), abs(dneg_out[axis])) + 1
        k_pos = max(k_pos, bound)
        k_neg = max(k_neg, bound)
    else:
        # Same heading: exact periodic overlap test on the far tails.
        # A collision of window copies depends only on m = j*p - k*q (in
        # units of the primitive vector u), and every multiple of gcd(p, q)
        # is realized arbitrarily far out, so any hit is a genuine
        # self-intersection.
        g = math.gcd(g_pos, q)
        axis = _escape_axis(u_pos)
        span = (
            _extent(w_pos, axis)
            + _extent(w_neg, axis)
            + abs(junction[axis] - base[axis])
            + 2
        )
        m_max = span // abs(u_pos[axis]) + 1
        neg_set = set(w_neg)
        for m in range(-m_max, m_max + 1):
            if m % g != 0:
                continue
            shift = scale(u_pos, m)
            if any(add(w, shift) in neg_set for w in w_pos):
                raise SelfIntersecting("tail windows collide on a shared line")

    k_pos = max(3, k_pos) + 1
    k_neg = max(3, k_neg) + 1

    # walk the certified truncation once, checking vertex/edge distinctness
    lo = -k_neg * nn
    hi = nc + k_pos * npp - 1
    cur = spec.vertex(lo)
    keys = set()
    seen_v = {cur}
    for t in range(lo, hi + 1):
        e = edge_from(cur, spec.step(t))
        if e.key in keys:
            raise SelfIntersecting(f"edge revisited at parameter {t}")
        keys.add(e.key)
        cur = boundary_edge(e)[1]
        if cur in seen_v:
            raise SelfIntersecting(f"vertex revisited at parameter {t}")
        seen_v.add(cur)


# ---------------------------------------------------------------------------
# tail analysis
# ---------------------------------------------------------------------------


def infinity_directions(spec: InfinitePathSpec) -> DirectionSet:
    """Directions walked infinitely often, measured outward on each tail."""
    d_plus = frozenset(spec.pos_period)
    d_minus = frozenset(reverse_direction(d) for d in spec.neg_period)
    return DirectionSet(d_plus, d_minus)


def is_monotonic(spec: InfinitePathSpec) -> tuple[bool, dict[int, int] | None]:
    """Whether every realized step uses a single sign per axis.

    Returns the per-axis sign assignment for the axes actually used; unused
    axes are free and omitted.
    """
    used = set(spec.neg_period) | set(spec.core) | set(spec.pos_period)
    signs: dict[int, int] = {}
    for a, s in used:
        if signs.setdefault(a, s) != s:
            return False, None
    return True, signs


def enclosing_region(spec: InfinitePathSpec) -> Region:
    """A cuboid outside which every step heads along a tail direction."""
    nc = len(spec.core)
    return bounding_region([spec.vertex(t) for t in range(0, nc + 1)])


def count_edges_in_region(spec: InfinitePathSpec, region: Region) -> int:
    """Exact number of realized edges with both endpoints inside ``region``."""
    count = 0
    nc = len(spec.core)
    v = spec.base
    for t in range(nc):
        w = add(v, direction_vector(spec.step(t)))
        if region.contains_vertex(v) and region.contains_vertex(w):
            count += 1
        v = w

    def walk_tail(start_t, direction):
        nonlocal count
        disp = spec.pos_displacement if direction > 0 else spec.neg_displacement
        axis = _escape_axis(disp)
        period = len(spec.pos_period) if direction > 0 else len(spec.neg_period)
        t0 = start_t
        while True:
            window = []
            for i in range(period):
                t = t0 + i if direction > 0 else t0 - i
                a = spec.vertex(t) if direction > 0 else spec.vertex(t - 1)
                b = spec.vertex(t + 1) if direction > 0 else spec.vertex(t)
                window.extend((a, b))
                if region.contains_vertex(a) and region.contains_vertex(b):
                    count += 1
            coords = [w[axis] for w in window]
            if disp[axis] > 0 and min(coords) > region.hi[axis]:
                return
            if disp[axis] < 0 and max(coords) < region.lo[axis]:
                return
            t0 += period * direction

    walk_tail(nc, +1)
    walk_tail(0, -1)
    return count


# ---------------------------------------------------------------------------
# path equivalence
# ---------------------------------------------------------------------------


def _comparison_window(p: InfinitePathSpec, q: InfinitePathSpec) -> Region:
    vs = [p.vertex(t) for t in range(0, len(p.core) + 1)]
    vs += [q.vertex(t) for t in range(0, len(q.core) + 1)]
    pad = len(p.neg_period) + len(p.pos_period) + len(q.neg_period) + len(q.pos_period) + 1
    return bounding_region(vs).inflate(pad)


def _tail_rays(spec: InfinitePathSpec, window: Region, length: int):
    """(anchor, outward edge keys) for the positive and negative ray."""

    def touched(t):
        return window.contains_vertex(spec.vertex(t)) or window.contains_vertex(
            spec.vertex(t + 1)
        )

    nc = len(spec.core)
    axis_p = _escape_axis(spec.pos_displacement)
    t = nc
    last_in = None
    while True:
        if touched(t):
            last_in = t
        vp = spec.vertex(t)
        if (
            spec.pos_displacement[axis_p] > 0
            and vp[axis_p] > window.hi[axis_p] + _extent_bound(spec, +1)
        ) or (
            spec.pos_displacement[axis_p] < 0
            and vp[axis_p] < window.lo[axis_p] - _extent_bound(spec, +1)
        ):
            break
        t += 1
    exit_pos = (last_in if last_in is not None else nc - 1) + 1
    pos_anchor = spec.vertex(exit_pos)
    pos_keys = tuple(e.key for e in spec.edges(exit_pos, exit_pos + length - 1))

    axis_n = _escape_axis(spec.neg_displacement)
    t = -1
    last_in = None
    while True:
        if touched(t):
            last_in = t
        vn = spec.vertex(t)
        if (
            spec.neg_displacement[axis_n] > 0
            and vn[axis_n] > window.hi[axis_n] + _extent_bound(spec, -1)
        ) or (
            spec.neg_displacement[axis_n] < 0
            and vn[axis_n] < window.lo[axis_n] - _extent_bound(spec, -1)
        ):
            break
        t -= 1
    exit_neg = (last_in if last_in is not None else 0) - 1
    neg_anchor = spec.vertex(exit_neg + 1)
    neg_keys = tuple(
        e.key for e in reversed(spec.edges(exit_neg - length + 1, exit_neg))
    )
    return (pos_anchor, pos_keys), (neg_anchor, neg_keys)


def _extent_bound(spec: InfinitePathSpec, side: int) -> int:
    word = spec.pos_period if side > 0 else spec.neg_period
    cum = _cumulative(word)
    return max(_extent(cum, a) for a in AXES) + 1


def path_equivalent(p: InfinitePathSpec, q: InfinitePathSpec) -> bool:
    """Whether the realized edge sets differ in only finitely many edges.

    Outside a window containing both cores plus full tail periods, both paths
    are exact periodic rays; equivalence reduces to the four rays pairing up
    with identical edge sets, decided from anchors and period words.
    """
    window = _comparison_window(p, q)
    length = 2 * (
        len(p.pos_period) + len(p.neg_period) + len(q.pos_period) + len(q.neg_period)
    ) + 4
    p_pos, p_neg = _tail_rays(p, window, length)
    q_pos, q_neg = _tail_rays(q, window, length)
    straight = p_pos == q_pos and p_neg == q_neg
    flipped = p_pos == q_neg and p_neg == q_pos
    return straight or flipped
