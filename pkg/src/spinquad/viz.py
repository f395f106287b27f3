"""Stereographic projection of sampled spin-quadrics and OBJ/CSV emission."""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from .errors import AtPole, EmptyMesh
from .param import SampleSet

AXES = ("e12", "e23", "e31", "e0")
UNIT_TOL = 1e-9
POLE_TOL = 1e-9


@dataclass(frozen=True)
class ProjectionSpec:
    pole: str = "-e0"
    scale: float = 1.0

    def __post_init__(self):
        self.axis  # validates

    @property
    def sign(self) -> int:
        return -1 if self.pole.startswith("-") else 1

    @property
    def axis(self) -> int:
        name = self.pole.lstrip("+-")
        if name not in AXES or self.pole[:1] not in "+-e":
            raise ValueError(f"pole must be [+-]{{{','.join(AXES)}}}, got {self.pole!r}")
        return AXES.index(name)

    def pole_vector(self) -> np.ndarray:
        p = np.zeros(4)
        p[self.axis] = self.sign
        return p


def stereographic_project(s, spec: ProjectionSpec = ProjectionSpec()) -> np.ndarray:
    """Project a unit spinor from the pole onto the 3-space orthogonal to it."""
    s = np.asarray(s, dtype=float)
    if abs(np.linalg.norm(s) - 1.0) > UNIT_TOL:
        raise ValueError(f"spinor is not unit length (|s| = {np.linalg.norm(s):.12g})")
    k = spec.axis
    if np.linalg.norm(s - spec.pole_vector()) <= POLE_TOL:
        raise AtPole(f"spinor coincides with the projection pole {spec.pole}")
    rest = np.delete(s, k)
    return spec.scale * rest / (1.0 - spec.sign * s[k])


def inverse_stereographic(x, spec: ProjectionSpec = ProjectionSpec()) -> np.ndarray:
    y = np.asarray(x, dtype=float) / spec.scale
    n2 = float(y @ y)
    rest = 2.0 * y / (1.0 + n2)
    s = np.insert(rest, spec.axis, spec.sign * (n2 - 1.0) / (n2 + 1.0))
    return s


@dataclass
class MeshBuffer:
    vertices: np.ndarray
    faces: List[Tuple[int, ...]] = field(default_factory=list)
    edges: List[Tuple[int, int]] = field(default_factory=list)
    vertex_chart: List[str] = field(default_factory=list)
    face_chart: List[str] = field(default_factory=list)
    edge_chart: List[str] = field(default_factory=list)
    merged_pairs: int = 0

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def charts(self) -> List[str]:
        seen: Dict[str, None] = {}
        for c in self.vertex_chart:
            seen.setdefault(c, None)
        return list(seen)


def _wsign(chart: str) -> Optional[int]:
    if chart.endswith(".w+"):
        return 1
    if chart.endswith(".w-"):
        return -1
    return None


def emit_mesh(samples: SampleSet, spec: ProjectionSpec = ProjectionSpec(), prefix: str = "") -> MeshBuffer:
    """Grid-quad mesh of a sampled surface in stereographic coordinates.

    Periodic parameters close their seam; samples at the pole are dropped along
    with every face or edge touching them. One-parameter charts become closed
    polylines.
    """
    verts: List[np.ndarray] = []
    vchart: List[str] = []
    mesh = MeshBuffer(vertices=np.zeros((0, 3)))
    for grid in samples.grids:
        n1, n2 = grid.shape
        chart = prefix + grid.chart
        index = np.full((n1, n2), -1, dtype=int)
        for i in range(n1):
            for j in range(n2):
                smp = samples.samples[grid.start + i * n2 + j]
                try:
                    p = stereographic_project(smp.spinor, spec)
                except AtPole:
                    continue
                index[i, j] = len(verts)
                verts.append(p)
                vchart.append(chart)

        if n1 * n2 == 1:
            continue
        if n2 == 1:
            n_edges = n1 if grid.periodic[0] else n1 - 1
            for i in range(n_edges):
                e = (index[i, 0], index[(i + 1) % n1, 0])
                if min(e) >= 0:
                    mesh.edges.append(e)
                    mesh.edge_chart.append(chart)
            continue
        rows = n1 if grid.periodic[0] else n1 - 1
        cols = n2 if grid.periodic[1] else n2 - 1
        for i in range(rows):
            i1 = (i + 1) % n1
            for j in range(cols):
                j1 = (j + 1) % n2
                quad = (index[i, j], index[i1, j], index[i1, j1], index[i, j1])
                if min(quad) >= 0:
                    mesh.faces.append(tuple(int(q) for q in quad))
                    mesh.face_chart.append(chart)

    if not verts:
        raise EmptyMesh("no samples survived projection")
    mesh.vertices = np.array(verts)
    mesh.vertex_chart = vchart
    return mesh


def merge_meshes(meshes: Sequence[MeshBuffer]) -> MeshBuffer:
    out = MeshBuffer(vertices=np.zeros((0, 3)))
    blocks = []
    offset = 0
    for m in meshes:
        blocks.append(m.vertices)
        out.vertex_chart += m.vertex_chart
        out.faces += [tuple(i + offset for i in f) for f in m.faces]
        out.face_chart += m.face_chart
        out.edges += [(a + offset, b + offset) for a, b in m.edges]
        out.edge_chart += m.edge_chart
        out.merged_pairs += m.merged_pairs
        offset += m.n_vertices
    if blocks:
        out.vertices = np.vstack(blocks)
    return out


def _collapse(cycle: Iterable[int]) -> Tuple[int, ...]:
    out: List[int] = []
    for v in cycle:
        if not out or out[-1] != v:
            out.append(v)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return tuple(out)


def weld_domain_holes(mesh: MeshBuffer, epsilon: float) -> MeshBuffer:
    """Merge vertices of opposite w-branches lying within ``epsilon`` of each other."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    n = mesh.n_vertices
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    signs = [_wsign(c) for c in mesh.vertex_chart]
    merged = 0
    if n:
        tree = cKDTree(mesh.vertices)
        for i, j in sorted(tree.query_pairs(r=epsilon)):
            if signs[i] is None or signs[j] is None or signs[i] == signs[j]:
                continue
            if mesh.vertex_chart[i].rsplit(".", 1)[0] != mesh.vertex_chart[j].rsplit(".", 1)[0]:
                continue
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
                merged += 1

    if merged == 0:
        return mesh
    keep = [i for i in range(n) if find(i) == i]
    new_index = {old: k for k, old in enumerate(keep)}
    remap = [new_index[find(i)] for i in range(n)]

    out = MeshBuffer(
        vertices=mesh.vertices[keep],
        vertex_chart=[mesh.vertex_chart[i] for i in keep],
        merged_pairs=mesh.merged_pairs + merged,
    )
    for f, chart in zip(mesh.faces, mesh.face_chart):
        g = _collapse(remap[i] for i in f)
        if len(g) >= 3:
            out.faces.append(g)
            out.face_chart.append(chart)
    for (a, b), chart in zip(mesh.edges, mesh.edge_chart):
        if remap[a] != remap[b]:
            out.edges.append((remap[a], remap[b]))
            out.edge_chart.append(chart)
    return out


def to_obj(mesh: MeshBuffer) -> str:
    buf = io.StringIO()
    buf.write(f"# spinquad mesh: {mesh.n_vertices} vertices, {len(mesh.faces)} faces\n")
    for x, y, z in mesh.vertices:
        buf.write(f"v {x:.17g} {y:.17g} {z:.17g}\n")
    faces_by_chart: Dict[str, List[Tuple[int, ...]]] = {}
    edges_by_chart: Dict[str, List[Tuple[int, int]]] = {}
    for f, c in zip(mesh.faces, mesh.face_chart):
        faces_by_chart.setdefault(c, []).append(f)
    for e, c in zip(mesh.edges, mesh.edge_chart):
        edges_by_chart.setdefault(c, []).append(e)
    points_by_chart: Dict[str, List[int]] = {}
    for i, c in enumerate(mesh.vertex_chart):
        points_by_chart.setdefault(c, []).append(i)
    for chart in mesh.charts():
        buf.write(f"g chart-{chart}\n")
        faces = faces_by_chart.get(chart, [])
        edges = edges_by_chart.get(chart, [])
        for f in faces:
            buf.write("f " + " ".join(str(i + 1) for i in f) + "\n")
        for a, b in edges:
            buf.write(f"l {a + 1} {b + 1}\n")
        if not faces and not edges:
            buf.write("p " + " ".join(str(i + 1) for i in points_by_chart[chart]) + "\n")
    return buf.getvalue()


def read_obj_counts(text: str) -> Dict[str, int]:
    counts = {"v": 0, "f": 0, "l": 0, "g": 0}
    for line in text.splitlines():
        key = line.split(" ", 1)[0]
        if key in counts:
            counts[key] += 1
    return counts


CSV_HEADER = "s12,s23,s31,s0,chart,alpha,beta_or_h"


def samples_to_csv_rows(samples: SampleSet, prefix: str = "") -> List[str]:
    rows = []
    for smp in samples.samples:
        s = ",".join(f"{v:.17g}" for v in smp.spinor)
        p = smp.params
        second = "" if p.second is None else f"{p.second:.17g}"
        rows.append(f"{s},{prefix}{smp.chart},{p.alpha:.17g},{second}")
    return rows
