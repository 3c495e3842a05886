"""Oriented knot diagrams built from planar-diagram (PD) codes.

A PD code lists one quadruple ``X[i,j,k,l]`` per crossing.  Labels are the
segment (edge) numbers ``1..2n``, read counterclockwise starting from the
incoming under-strand, and increase along the orientation of the knot
(``2n`` is followed by ``1``).

Positions inside a quadruple are numbered 0..3.  Corner (sector) ``p`` of a
crossing is the sector swept counterclockwise from position ``p`` to
position ``p+1``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

__all__ = [
    "DiagramError",
    "Crossing",
    "Segment",
    "Region",
    "Diagram",
    "parse_pd",
    "build_regions",
    "under_pass_order",
    "to_pd",
    "CrossingFrame",
    "local_frames",
    "segment_case",
]

_TOKEN = re.compile(r"X\s*\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]")


class DiagramError(ValueError):
    """Raised for malformed or unsupported PD input."""


@dataclass(frozen=True)
class Crossing:
    index: int
    labels: tuple[int, int, int, int]
    sign: int
    over_in_pos: int  # 1 or 3

    @property
    def over_out_pos(self) -> int:
        return 4 - self.over_in_pos

    @property
    def under_in(self) -> int:
        return self.labels[0]

    @property
    def under_out(self) -> int:
        return self.labels[2]

    @property
    def over_in(self) -> int:
        return self.labels[self.over_in_pos]

    @property
    def over_out(self) -> int:
        return self.labels[self.over_out_pos]

    @property
    def is_kink(self) -> bool:
        return len(set(self.labels)) < 4


@dataclass(frozen=True)
class Segment:
    """An edge of the 4-valent diagram graph, oriented along the knot.

    ``tail`` is the crossing the segment leaves, ``head`` the one it enters.
    ``tail_role``/``head_role`` are ``"over"`` or ``"under"``.
    """

    label: int
    tail: int
    tail_pos: int
    head: int
    head_pos: int
    tail_role: str
    head_role: str
    left_region: int = 0
    right_region: int = 0

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class Region:
    """A complementary face; ``corners`` are ``(crossing, sector)`` pairs in
    boundary order, ``boundary`` the segment labels met between them."""

    id: int
    corners: tuple[tuple[int, int], ...]
    boundary: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.corners)


@dataclass(frozen=True)
class Diagram:
    crossings: tuple[Crossing, ...]
    segments: dict[int, Segment] = field(compare=False)
    regions: tuple[Region, ...] = field(compare=False)
    corner_region: dict[tuple[int, int], int] = field(compare=False)

    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def writhe(self) -> int:
        return sum(c.sign for c in self.crossings)

    @property
    def has_kink(self) -> bool:
        return any(s.is_loop for s in self.segments.values())

    def next_label(self, label: int) -> int:
        return label % (2 * self.n) + 1

    def region_at(self, crossing: int, sector: int) -> int:
        return self.corner_region[(crossing, sector % 4)]

    @cached_property
    def arcs(self) -> tuple[tuple[int, ...], ...]:
        """Over-arcs as tuples of segment labels, ordered along the knot
        starting from the arc that leaves the default base crossing."""
        order, arcs = under_pass_order(self)
        return arcs

    def arc_of_segment(self, label: int) -> int:
        """0-based index into :attr:`arcs` of the arc containing ``label``."""
        for k, arc in enumerate(self.arcs):
            if label in arc:
                return k
        raise KeyError(label)


def _parse_quads(text: str) -> list[tuple[int, int, int, int]]:
    stripped = text.strip()
    if stripped.startswith("PD"):
        stripped = stripped[2:].strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            stripped = stripped[1:-1]
    quads = []
    pos = 0
    parts = [p for p in re.split(r"[;]", stripped)]
    if len(parts) == 1 and stripped.count("X") > 1:
        # tolerate comma-separated lists such as Mathematica's PD[...]
        parts = re.findall(r"X\s*\[[^\]]*\]", stripped)
    for part in parts:
        part = part.strip()
        if not part:
            continue
        m = _TOKEN.fullmatch(part)
        if m is None:
            raise DiagramError(f"malformed crossing token {part!r}")
        quads.append(tuple(int(g) for g in m.groups()))
        pos += 1
    if not quads:
        raise DiagramError("empty PD code")
    return quads


def parse_pd(text: str | list) -> Diagram:
    """Parse a PD code into a :class:`Diagram`.

    ``text`` may be a string such as ``"X[1,5,2,4]; X[3,1,4,6]; X[5,3,6,2]"``
    or an already split list of quadruples.
    """
    quads = [tuple(int(x) for x in q) for q in text] if not isinstance(text, str) else _parse_quads(text)
    for q in quads:
        if len(q) != 4:
            raise DiagramError(f"crossing {q!r} does not have four labels")
    n = len(quads)
    m = 2 * n
    counts: dict[int, int] = {}
    for q in quads:
        for x in q:
            counts[x] = counts.get(x, 0) + 1
    if set(counts) != set(range(1, m + 1)) or any(v != 2 for v in counts.values()):
        raise DiagramError(f"labels must be 1..{m}, each appearing exactly twice")

    def nxt(s: int) -> int:
        return s % m + 1

    for q in quads:
        if nxt(q[0]) != q[2]:
            raise DiagramError(
                f"crossing X{list(q)}: under-strand {q[0]} -> {q[2]} is not consecutive "
                "(multi-component or misoriented input)"
            )

    # Resolve which over position is incoming.  Ambiguity only arises when
    # 2n == 2; heads/tails must then pair up globally.
    options = []
    for q in quads:
        opts = []
        if nxt(q[3]) == q[1]:
            opts.append(3)
        if nxt(q[1]) == q[3]:
            opts.append(1)
        if not opts:
            raise DiagramError(
                f"crossing X{list(q)}: over-strand labels are not consecutive "
                "(multi-component or misoriented input)"
            )
        options.append(opts)

    chosen = _resolve_over(quads, options)
    if chosen is None:
        raise DiagramError("labels cannot be oriented as a single knot component")

    crossings = []
    for idx, (q, oin) in enumerate(zip(quads, chosen)):
        # over-strand moving from position 3 to 1 crosses the upward under-strand
        # left to right: positive
        sign = 1 if oin == 3 else -1
        crossings.append(Crossing(idx, q, sign, oin))

    tails: dict[int, tuple[int, int, str]] = {}
    heads: dict[int, tuple[int, int, str]] = {}
    for c in crossings:
        heads[c.under_in] = (c.index, 0, "under")
        tails[c.under_out] = (c.index, 2, "under")
        heads[c.over_in] = (c.index, c.over_in_pos, "over")
        tails[c.over_out] = (c.index, c.over_out_pos, "over")
    if len(heads) != m or len(tails) != m:
        raise DiagramError("segment ends do not pair up: labels cannot be oriented as one knot")

    # single component: following head -> out-label must return after 2n steps
    seen = set()
    s = 1
    for _ in range(m):
        if s in seen:
            break
        seen.add(s)
        hc, hp, role = heads[s]
        c = crossings[hc]
        s = c.under_out if role == "under" else c.over_out
    if len(seen) != m:
        raise DiagramError("PD code describes more than one component")

    raw_segments = {}
    for lab in range(1, m + 1):
        tc, tp, tr = tails[lab]
        hc, hp, hr = heads[lab]
        raw_segments[lab] = Segment(lab, tc, tp, hc, hp, tr, hr)

    regions, corner_region = _faces(crossings, raw_segments)
    if len(regions) != n + 2:
        raise DiagramError(
            f"face traversal found {len(regions)} regions, expected {n + 2}: "
            "the PD code is not a connected planar diagram"
        )

    segments = {}
    for lab, seg in raw_segments.items():
        # leaving the tail crossing, the sector counterclockwise of the tail
        # position is on the left
        left = corner_region[(seg.tail, seg.tail_pos)]
        right = corner_region[(seg.tail, (seg.tail_pos - 1) % 4)]
        segments[lab] = Segment(lab, seg.tail, seg.tail_pos, seg.head, seg.head_pos,
                                seg.tail_role, seg.head_role, left, right)
    d = Diagram(tuple(crossings), segments, tuple(regions), corner_region)
    for seg in segments.values():
        if seg.left_region == seg.right_region and not _is_isthmus_ok(d, seg):
            raise DiagramError(f"segment {seg.label} borders a single region")
    return d


def _is_isthmus_ok(d: Diagram, seg: Segment) -> bool:
    # a knot diagram graph has no bridges, so this never holds for valid input
    return False


def _resolve_over(quads, options):
    if all(len(o) == 1 for o in options):
        return [o[0] for o in options]
    # brute force the (tiny) ambiguous set
    amb = [k for k, o in enumerate(options) if len(o) > 1]
    if len(amb) > 8:
        return None
    for mask in range(1 << len(amb)):
        pick = [o[0] for o in options]
        for bit, k in enumerate(amb):
            pick[k] = options[k][(mask >> bit) & 1]
        heads = [q[0] for q in quads] + [q[p] for q, p in zip(quads, pick)]
        if len(set(heads)) == len(heads):
            return pick
    return None


def _faces(crossings, segments):
    """Trace faces.  Corner ``(c, p)`` continues along the segment at position
    ``p+1``; at its other end, position ``q``, the face occupies corner
    ``(c', q)``."""
    ends: dict[tuple[int, int], tuple[int, int]] = {}
    for seg in segments.values():
        ends[(seg.tail, seg.tail_pos)] = (seg.head, seg.head_pos)
        ends[(seg.head, seg.head_pos)] = (seg.tail, seg.tail_pos)

    corner_region: dict[tuple[int, int], int] = {}
    regions = []
    for c in crossings:
        for p in range(4):
            start = (c.index, p)
            if start in corner_region:
                continue
            rid = len(regions) + 1
            corners = []
            boundary = []
            cur = start
            while True:
                if cur in corner_region:
                    if cur != start:
                        raise DiagramError("inconsistent PD code: face traversal failed")
                    break
                corner_region[cur] = rid
                corners.append(cur)
                ci, pi = cur
                exit_pos = (pi + 1) % 4
                boundary.append(crossings[ci].labels[exit_pos])
                cur = ends[(ci, exit_pos)]
            regions.append(Region(rid, tuple(corners), tuple(boundary)))
    return regions, corner_region


def build_regions(d: Diagram) -> tuple[Region, ...]:
    """The faces of ``d``; computed at parse time by left-turn traversal."""
    return d.regions


def _default_base(d: Diagram) -> int:
    lab = 1
    for _ in range(2 * d.n):
        seg = d.segments[lab]
        if seg.head_role == "under":
            return seg.head
        lab = d.next_label(lab)
    raise DiagramError("diagram has no under-passes")


def under_pass_order(d: Diagram, base: int | None = None):
    """Crossings in the order they are under-passed, starting at ``base``.

    Returns ``(order, arcs)`` where ``order[i]`` is the 0-based crossing index
    of ``c_{i+1}`` and ``arcs[i]`` the tuple of segment labels
    running from ``order[i]`` to ``order[i+1]``.  ``base`` defaults to the
    first crossing under-passed when walking forward from segment 1.
    """
    if base is None:
        base = _default_base(d)
    if not 0 <= base < d.n:
        raise DiagramError(f"base crossing {base} out of range")
    order = [base]
    arcs = []
    lab = d.crossings[base].under_out
    current: list[int] = []
    while True:
        current.append(lab)
        seg = d.segments[lab]
        c = d.crossings[seg.head]
        if seg.head_role == "under":
            arcs.append(tuple(current))
            current = []
            if seg.head == base:
                break
            order.append(seg.head)
            lab = c.under_out
        else:
            lab = c.over_out
    if sorted(order) != list(range(d.n)):
        raise DiagramError("under-pass traversal did not visit every crossing once")
    return tuple(order), tuple(arcs)


def to_pd(d: Diagram) -> str:
    return "; ".join("X[{},{},{},{}]".format(*c.labels) for c in d.crossings)


def crossing_graph_bfs(d: Diagram, root: int):
    """Breadth-first spanning tree of crossings joined by segments.

    Yields ``(segment_label, parent, child)`` tree edges in discovery order.
    """
    adj: dict[int, list[tuple[int, int]]] = {i: [] for i in range(d.n)}
    for lab in sorted(d.segments):
        s = d.segments[lab]
        if s.tail != s.head:
            adj[s.tail].append((lab, s.head))
            adj[s.head].append((lab, s.tail))
    seen = {root}
    queue = deque([root])
    edges = []
    while queue:
        u = queue.popleft()
        for lab, v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
                edges.append((lab, u, v))
    return edges


# Local frame conventions, the same for both crossing signs.  z-mode: the
# letters a, b, c, d are the PD positions 0..3, so a is the incoming
# under-segment and the rest follow counterclockwise.  w-mode: letter of the
# sector between positions p and p+1 is _W_SECTORS[sign][p].
_Z_LETTERS = "abcd"
_W_SECTORS = {1: "abcd", -1: "abcd"}


@dataclass(frozen=True)
class CrossingFrame:
    """Ids at the local positions a, b, c, d of one crossing.

    ``ids`` holds segment labels (z-mode) or region ids (w-mode).  ``kink``
    flags repeated ids, which happens for regions at a kinked crossing.
    """

    crossing: int
    sign: int
    mode: str
    ids: dict
    kink: bool = False

    def values(self, assignment) -> tuple:
        v = assignment.values
        return tuple(v[self.ids[k]] for k in "abcd")


def local_frames(d: Diagram, mode: str) -> list[CrossingFrame]:
    """Per-crossing local frames for ``mode`` ``"z"`` or ``"w"``."""
    frames = []
    for c in d.crossings:
        if mode == "z":
            ids = {k: c.labels[pos] for pos, k in enumerate(_Z_LETTERS)}
        elif mode == "w":
            letters = _W_SECTORS[c.sign]
            ids = {letters[sec]: d.region_at(c.index, sec) for sec in range(4)}
        else:
            raise ValueError(f"unknown mode {mode!r}")
        frames.append(CrossingFrame(c.index, c.sign, mode, ids, len(set(ids.values())) < 4))
    return frames


def segment_case(seg: Segment) -> str:
    """Local case of a segment by its end roles (tail end, head end):
    ``a`` over/under, ``b`` under/over, ``c`` over/over, ``d`` under/under."""
    return {
        ("over", "under"): "a",
        ("under", "over"): "b",
        ("over", "over"): "c",
        ("under", "under"): "d",
    }[(seg.tail_role, seg.head_role)]
