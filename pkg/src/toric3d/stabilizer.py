"""Exact F2 stabilizer verifier on finite blocks.

Everything here works with Pauli supports only: an operator is a pair of
packed bit vectors (x flips, z flips) over the qubit edges of a finite block,
and all statements reduce to symplectic parities and F2 ranks.  This module
is the independent cross-check for the combinatorial energy and linking
computations: it never looks at path specs' tail analysis, only at explicit
edge sets.

The block of side ``n`` contains the ``n^3`` vertices nearest the origin,
every edge with at least one endpoint among them, every face with at least
one corner among them, and the extra edges of those faces as a boundary
fringe.  Qubits live on all these edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, OutOfRegion, TooLarge
from .lattice import (
    AXES,
    Edge,
    EdgeKey,
    Face,
    Region,
    Vertex,
    add,
    boundary_edge,
    edge_from,
    edges_of_vertex,
    face_edges,
    primal_edge_of_face,
    primal_face_of_edge,
    unit,
)
from .paths import FinitePath, Surface
from .transforms import Configuration, _segment_steps


class FiniteLattice:
    """Finite block with dense edge indexing."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("lattice side must be >= 1")
        self.n = n
        lo = -(n // 2)
        self.lo = (lo, lo, lo)
        self.hi = (lo + n - 1, lo + n - 1, lo + n - 1)
        self.vertices: list[Vertex] = [
            v
            for v in product(
                range(lo, lo + n), range(lo, lo + n), range(lo, lo + n)
            )
        ]
        vset = set(self.vertices)
        interior: dict[EdgeKey, None] = {}
        for v in self.vertices:
            for e in edges_of_vertex(v):
                interior.setdefault(e.key, None)
        faces: dict[Face, None] = {}
        for v in self.vertices:
            for normal in AXES:
                a1, a2 = [a for a in AXES if a != normal]
                for da, db in product((0, -1), (0, -1)):
                    base = add(add(v, tuple(da * c for c in unit(a1))), tuple(db * c for c in unit(a2)))
                    faces.setdefault(Face(base, normal), None)
        boundary: dict[EdgeKey, None] = {}
        for f in faces:
            for e in face_edges(f):
                if e.key not in interior:
                    boundary.setdefault(e.key, None)
        self.vertex_set = vset
        self.interior_edges: list[EdgeKey] = sorted(interior)
        self.boundary_edges: list[EdgeKey] = sorted(boundary)
        self.faces: list[Face] = sorted(faces)
        self.qubits: list[EdgeKey] = self.interior_edges + self.boundary_edges
        self.edge_index: dict[EdgeKey, int] = {k: i for i, k in enumerate(self.qubits)}
        self.n_qubits = len(self.qubits)
        self.words = _kernels.n_words(self.n_qubits)

    def __repr__(self):
        return f"FiniteLattice(n={self.n}, qubits={self.n_qubits})"

    @cached_property
    def star_matrix(self) -> np.ndarray:
        rows = []
        for v in self.vertices:
            rows.append(
                _kernels.bits_from_indices(
                    [self.edge_index[e.key] for e in edges_of_vertex(v)], self.n_qubits
                )
            )
        return np.stack(rows)

    @cached_property
    def face_matrix(self) -> np.ndarray:
        rows = []
        for f in self.faces:
            rows.append(
                _kernels.bits_from_indices(
                    [self.edge_index[e.key] for e in face_edges(f)], self.n_qubits
                )
            )
        return np.stack(rows)


def build_lattice(n: int) -> FiniteLattice:
    return FiniteLattice(n)


@dataclass(frozen=True)
class PauliOperator:
    """Phase-free Pauli: packed x and z supports over a lattice's qubits."""

    x: np.ndarray
    z: np.ndarray
    n_qubits: int

    def __eq__(self, other):
        return (
            isinstance(other, PauliOperator)
            and self.n_qubits == other.n_qubits
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def compose(self, other: "PauliOperator") -> "PauliOperator":
        if self.n_qubits != other.n_qubits:
            raise DimensionMismatch("operators live on different lattices")
        return PauliOperator(self.x ^ other.x, self.z ^ other.z, self.n_qubits)

    @property
    def x_weight(self) -> int:
        return _kernels.popcount(self.x)

    @property
    def z_weight(self) -> int:
        return _kernels.popcount(self.z)

    @property
    def is_identity(self) -> bool:
        return not (self.x.any() or self.z.any())


def identity_op(lat: FiniteLattice) -> PauliOperator:
    return PauliOperator(
        _kernels.zero_vector(lat.n_qubits), _kernels.zero_vector(lat.n_qubits), lat.n_qubits
    )


def _indices(lat: FiniteLattice, keys: Iterable[EdgeKey]) -> list[int]:
    out = []
    for k in keys:
        idx = lat.edge_index.get(k)
        if idx is None:
            raise OutOfRegion(f"edge {k} is outside the lattice block")
        out.append(idx)
    return out


def pauli_from_keys(
    lat: FiniteLattice, x_keys: Iterable[EdgeKey] = (), z_keys: Iterable[EdgeKey] = ()
) -> PauliOperator:
    x = _kernels.bits_from_indices(_indices(lat, x_keys), lat.n_qubits)
    z = _kernels.bits_from_indices(_indices(lat, z_keys), lat.n_qubits)
    return PauliOperator(x, z, lat.n_qubits)


def star(lat: FiniteLattice, v: Vertex) -> PauliOperator:
    if tuple(v) not in lat.vertex_set:
        raise OutOfRegion(f"vertex {v} is outside the lattice block")
    return pauli_from_keys(lat, x_keys=[e.key for e in edges_of_vertex(tuple(v))])


def plaquette(lat: FiniteLattice, f: Face) -> PauliOperator:
    return pauli_from_keys(lat, z_keys=[e.key for e in face_edges(f)])


def string_op(lat: FiniteLattice, path: FinitePath) -> PauliOperator:
    """Z-type operator along a primal path."""
    return pauli_from_keys(lat, z_keys=[e.key for e in path.edges])


def membrane_op(lat: FiniteLattice, faces: Iterable[Face]) -> PauliOperator:
    """X-type operator on the primal edges piercing a set of dual faces."""
    keys = [primal_edge_of_face(f).key for f in faces]
    return pauli_from_keys(lat, x_keys=keys)


def commutes(p: PauliOperator, q: PauliOperator) -> bool:
    if p.n_qubits != q.n_qubits:
        raise DimensionMismatch("operators live on different lattices")
    return _kernels.symplectic_parity(p.x, p.z, q.x, q.z) == 0


def conjugation_sign(p: PauliOperator, observable: PauliOperator) -> int:
    """Sign picked up by ``observable`` under conjugation by ``p`` (0 or 1).

    Conjugation by a Pauli never changes a Pauli's support, only its sign,
    which is the symplectic pairing of the two.
    """
    if p.n_qubits != observable.n_qubits:
        raise DimensionMismatch("operators live on different lattices")
    return _kernels.symplectic_parity(p.x, p.z, observable.x, observable.z)


def truncation_stable(
    observable: PauliOperator, op_short: PauliOperator, op_long: PauliOperator
) -> bool:
    """Whether two truncations of the same operator act identically on the
    observable: equal conjugation signs (supports are untouched either way)."""
    return conjugation_sign(op_short, observable) == conjugation_sign(op_long, observable)


def orientation_independence(lat: FiniteLattice, obj) -> bool:
    """Conjugation is blind to traversal orientation: the operator built from
    a reversed path or surface is the same operator."""
    if isinstance(obj, FinitePath):
        fwd = string_op(lat, obj)
        rev = pauli_from_keys(lat, z_keys=[e.reversed().key for e in reversed(obj.edges)])
        return fwd == rev
    if isinstance(obj, Surface):
        faces = list(obj.faces)
        return membrane_op(lat, faces) == membrane_op(lat, list(reversed(faces)))
    raise TypeError("expected a FinitePath or Surface")


# ---------------------------------------------------------------------------
# syndromes
# ---------------------------------------------------------------------------


def syndrome_energy(lat: FiniteLattice, flip: PauliOperator, region: Region) -> int:
    """2 x number of stabilizers in ``region`` anticommuting with ``flip``.

    Stars are attributed to their vertex read in primal coordinates;
    plaquettes to their dual edge read in dual coordinates, counted when both
    dual endpoints lie in the region.
    """
    if flip.n_qubits != lat.n_qubits:
        raise DimensionMismatch("flip built on a different lattice")
    violated = 0
    for v in region.vertices():
        if v not in lat.vertex_set:
            continue
        parity = 0
        for e in edges_of_vertex(v):
            parity ^= _kernels.get_bit(flip.z, lat.edge_index[e.key])
        violated += parity
    for axis in AXES:
        hi = list(region.hi)
        hi[axis] -= 1
        if hi[axis] < region.lo[axis]:
            continue
        for base in Region(region.lo, tuple(hi)).vertices():
            f = primal_face_of_edge(Edge(base, axis))
            parity = 0
            ok = True
            for e in face_edges(f):
                idx = lat.edge_index.get(e.key)
                if idx is None:
                    ok = False
                    break
                parity ^= _kernels.get_bit(flip.x, idx)
            if not ok:
                raise OutOfRegion(f"plaquette {f} extends outside the lattice block")
            violated += parity
    return 2 * violated


def gauge_rank(n: int) -> int:
    """F2 rank of the star generators on the side-``n`` block."""
    lat = n if isinstance(n, FiniteLattice) else FiniteLattice(n)
    return int(_kernels.f2_rank(lat.star_matrix))


# ---------------------------------------------------------------------------
# configuration -> explicit flip operator (the verification bridge)
# ---------------------------------------------------------------------------


def _curtain_faces(lat: FiniteLattice, dual_edges: Sequence[Edge]) -> set[Face]:
    """Vertical dual faces hanging below the horizontal edges of a dual path,
    clipped at the block's lower fringe.  The membrane's boundary is the path
    itself plus descender and floor junk near the block frontier."""
    faces: set[Face] = set()
    for e in dual_edges:
        if e.axis == 2:
            continue
        other = 1 - e.axis  # normal of the hanging face
        b = e.base
        z = b[2] - 1
        while True:
            f = Face((b[0], b[1], z), other)
            if primal_edge_of_face(f).key not in lat.edge_index:
                break
            faces.symmetric_difference_update({f})
            z -= 1
    return faces


def _extend_clear_of(path_edges: list[Edge], region: Region) -> list[Edge]:
    """Append +x steps at a top exit until the hanging descender would fall
    outside the region's footprint."""
    out = list(path_edges)
    for endpoint, attach in ((boundary_edge(out[-1])[1], "end"), (boundary_edge(out[0])[0], "start")):
        v = endpoint
        if v[2] <= region.hi[2]:
            continue
        ext = []
        while region.lo[0] - 1 <= v[0] <= region.hi[0] + 1 and region.lo[1] - 1 <= v[1] <= region.hi[1] + 1:
            e = edge_from(v, (0, +1))
            ext.append(e)
            v = boundary_edge(e)[1]
        if attach == "end":
            out = out + ext
        else:
            out = [e.reversed() for e in reversed(ext)] + out
    return out


def configuration_flip(
    lat: FiniteLattice, cfg: Configuration, region: Region, clip: Region
) -> PauliOperator:
    """Explicit Pauli whose excitation pattern inside ``region`` matches the
    configuration: curtain membranes for strings and loops, straight charge
    tails dropped to the block frontier.

    ``clip`` is the truncation box for the infinite strings; it must contain
    ``region`` with margin and each string must cross it exactly once.
    """
    faces: set[Face] = set()
    for spec in cfg.strings:
        t_lo, t_hi, _ = _segment_steps(spec, clip)
        edges = spec.edges(t_lo, t_hi - 1)
        edges = _extend_clear_of(edges, region)
        faces.symmetric_difference_update(_curtain_faces(lat, edges))
    for loop in cfg.loops:
        faces.symmetric_difference_update(_curtain_faces(lat, list(loop.edges)))
    x_keys = [primal_edge_of_face(f).key for f in faces]

    z_chain: set[EdgeKey] = set()
    for c in cfg.charges:
        z = c[2] - 1
        while True:
            e = Edge((c[0], c[1], z), 2)
            if e.key not in lat.edge_index:
                break
            z_chain.symmetric_difference_update({e.key})
            z -= 1
    return pauli_from_keys(lat, x_keys=x_keys, z_keys=sorted(z_chain))


# ---------------------------------------------------------------------------
# exhaustive block checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NetCheckReport:
    n: int
    gauge_order: int
    gauge_supports_distinct: bool
    gauge_supports_are_nets: bool
    interior_nullity: int
    ground_space_dim: int
    single_orbit: bool
    boundary_conditions: int | None
    fiber_sizes_equal: bool | None
    bitflip_bijection: bool | None


def _edge_rows_over_faces(lat: FiniteLattice, edge_keys: Sequence[EdgeKey]) -> np.ndarray:
    face_index = {f: i for i, f in enumerate(lat.faces)}
    incident: dict[EdgeKey, list[int]] = {k: [] for k in edge_keys}
    for f, i in face_index.items():
        for e in face_edges(f):
            if e.key in incident:
                incident[e.key].append(i)
    rows = [
        _kernels.bits_from_indices(incident[k], len(lat.faces)) for k in edge_keys
    ]
    return np.stack(rows)


def surface_net_checks(n: int) -> NetCheckReport:
    """Exhaustive gauge-orbit and boundary-condition checks on a small block.

    Verifies that the ``2^(n^3)`` star products flip pairwise distinct edge
    sets (orthogonality of the resulting product states), that the closed
    interior flip sets form a single gauge orbit (one ground vector per
    boundary condition), and, at n = 1, that every boundary condition carries
    the same number of nets with the boundary bit-flip map as the explicit
    pairing.
    """
    lat = FiniteLattice(n)
    if 2 ** (n**3) > 256:
        raise TooLarge("gauge enumeration limited to 2^(n^3) <= 256")

    supports = _kernels.gray_code_span(lat.star_matrix)
    uniq = np.unique(supports, axis=0)
    distinct = uniq.shape[0] == supports.shape[0]

    # every gauge support must satisfy all plaquette parities
    are_nets = True
    for row in supports:
        sig = _kernels.anticommute_batch(
            np.zeros_like(lat.face_matrix), lat.face_matrix, row, _kernels.zero_vector(lat.n_qubits)
        )
        if sig.any():
            are_nets = False
            break

    interior_rows = _edge_rows_over_faces(lat, lat.interior_edges)
    nullity = int(_kernels.f2_nullspace_basis(interior_rows).shape[0])
    gauge_order = 2 ** (n**3)
    dim = 2**nullity // gauge_order
    single_orbit = 2**nullity == gauge_order

    boundary_conditions = None
    fibers_equal = None
    bijection = None
    if n == 1:
        all_rows = _edge_rows_over_faces(lat, lat.qubits)
        basis = _kernels.f2_nullspace_basis(all_rows)
        nets = _kernels.gray_code_span(basis)  # packed over qubit index space
        n_interior = len(lat.interior_edges)
        interior_mask = _kernels.bits_from_indices(range(n_interior), lat.n_qubits)
        boundary_mask = _kernels.bits_from_indices(
            range(n_interior, lat.n_qubits), lat.n_qubits
        )
        if lat.words != 1:
            raise TooLarge("n=1 boundary check expects single-word packing")
        flat = nets[:, 0]
        b_part = flat & boundary_mask[0]
        order = np.argsort(b_part, kind="stable")
        b_sorted = b_part[order]
        nets_sorted = flat[order]
        _, starts, counts = np.unique(b_sorted, return_index=True, return_counts=True)
        boundary_conditions = int(starts.size)
        fiber = 2**nullity
        fibers_equal = bool(np.all(counts == fiber))
        # the boundary bit-flip pairs each fiber with the interior coset:
        # stripping boundary bits must land every fiber on a coset of the
        # interior net group, bijectively
        interior_group = np.sort(
            _kernels.gray_code_span(
                _kernels.f2_nullspace_basis(interior_rows)
            )[:, 0]
        )
        bijection = True
        if fibers_equal:
            interiors = nets_sorted & interior_mask[0]
            for s, c in zip(starts, counts):
                grp = np.sort(interiors[s : s + c])
                if np.unique(grp).size != c:
                    bijection = False
                    break
                rep = grp[0]
                coset = np.sort(np.bitwise_xor(interior_group, rep))
                if not np.array_equal(coset, grp):
                    bijection = False
                    break
        else:
            bijection = False

    return NetCheckReport(
        n=n,
        gauge_order=gauge_order,
        gauge_supports_distinct=bool(distinct),
        gauge_supports_are_nets=are_nets,
        interior_nullity=nullity,
        ground_space_dim=dim,
        single_orbit=bool(single_orbit),
        boundary_conditions=boundary_conditions,
        fiber_sizes_equal=fibers_equal,
        bitflip_bijection=bijection,
    )


# ---------------------------------------------------------------------------
# truncation families (straight charge strings, growing membranes)
# ---------------------------------------------------------------------------


def straight_string_pauli(lat: FiniteLattice, v: Vertex, length: int) -> PauliOperator:
    """Z-string from ``v`` stretching ``length`` steps straight down."""
    keys = []
    for k in range(1, length + 1):
        keys.append(Edge((v[0], v[1], v[2] - k), 2).key)
    return pauli_from_keys(lat, z_keys=keys)


def growing_membrane_pauli(lat: FiniteLattice, line_start: Vertex, length: int) -> PauliOperator:
    """Membrane hanging below a dual +x segment of the given length."""
    edges = []
    v = tuple(line_start)
    for _ in range(length):
        e = edge_from(v, (0, +1))
        edges.append(e)
        v = boundary_edge(e)[1]
    return membrane_op(lat, sorted(_curtain_faces(lat, edges)))
