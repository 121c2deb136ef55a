"""Brute-force ground truth: exhaustive prudent-polygon enumeration.

A walk on the square lattice is *prudent* when no step points toward an
already occupied vertex (the ray condition).  Its endpoint then always lies
on the boundary of the walk's bounding box, which classifies walks by the
sides the endpoint may touch: north/east (2-sided), north/east/west
(3-sided, with the south-then-lateral exclusion below), or any side
(4-sided).  Side membership is inclusive: corners belong to both adjacent
sides, and a degenerate box puts the endpoint on both opposite sides.  This
is the unique reading that reproduces the area-1 counts 4 / 6 / 8.

A polygon is a walk of length >= 3 ending at a lattice neighbor of the
origin; it is counted once per walk (rooted, oriented) with area = enclosed
unit cells (shoelace).

The 3-sided exclusion: when the box has nonzero width, a south step may not
be followed by a west step while on the east side (or an east step while on
the west side).  At area 1 it removes exactly the two unit-cell walks
E,S,W and W,S,E.

``walk_class="boundary"`` drops the ray condition and keeps only the side
conditions.  For k = 4 this counts every self-avoiding walk whose prefix
endpoints stay on the bounding-box boundary; see the README for why that
non-prudent class matters.
"""

from __future__ import annotations

from dataclasses import dataclass

from .enumeration import CountTable

_STEPS = {"N": (0, 1), "S": (0, -1), "E": (1, 0), "W": (-1, 0)}

# A generous cap: area n needs a walk of length <= 2n+1 (perimeter <= 2n+2),
# and the DFS over all prudent extensions grows ~2.5^length.
_MAX_ORACLE_AREA = 12


@dataclass(frozen=True)
class SideMembership:
    """Inclusive side flags of a point relative to a bounding box."""

    on_north: bool
    on_east: bool
    on_west: bool
    on_south: bool

    @staticmethod
    def of(point, box) -> "SideMembership":
        x, y = point
        xmin, xmax, ymin, ymax = box
        return SideMembership(y == ymax, x == xmax, x == xmin, y == ymin)

    def allows(self, k: int) -> bool:
        if k == 1:
            return self.on_north
        if k == 2:
            return self.on_north or self.on_east
        if k == 3:
            return self.on_north or self.on_east or self.on_west
        return self.on_north or self.on_east or self.on_west or self.on_south


class LatticeWalk:
    """A step sequence with vertices, occupancy set and bounding-box history."""

    def __init__(self, steps: str = ""):
        self.steps: list[str] = []
        self.vertices: list[tuple[int, int]] = [(0, 0)]
        self.occupied = {(0, 0)}
        self.box = [0, 0, 0, 0]  # xmin, xmax, ymin, ymax
        for s in steps:
            ok = self.push(s)
            if not ok:
                raise ValueError(f"walk revisits a vertex at step {s!r}")

    def end(self) -> tuple[int, int]:
        return self.vertices[-1]

    def push(self, step: str) -> bool:
        """Append a step; returns False (and does nothing) if self-avoidance fails."""
        dx, dy = _STEPS[step]
        x, y = self.vertices[-1]
        nxt = (x + dx, y + dy)
        if nxt in self.occupied:
            return False
        self.steps.append(step)
        self.vertices.append(nxt)
        self.occupied.add(nxt)
        b = self.box
        b[0] = min(b[0], nxt[0])
        b[1] = max(b[1], nxt[0])
        b[2] = min(b[2], nxt[1])
        b[3] = max(b[3], nxt[1])
        return True

    def step_is_prudent(self, step: str) -> bool:
        """Ray condition: no occupied vertex anywhere along the step direction.

        Occupied vertices all lie inside the current box, so the scan stops
        at the box boundary.
        """
        dx, dy = _STEPS[step]
        x, y = self.vertices[-1]
        xmin, xmax, ymin, ymax = self.box
        x += dx
        y += dy
        while xmin <= x <= xmax and ymin <= y <= ymax:
            if (x, y) in self.occupied:
                return False
            x += dx
            y += dy
        return True


@dataclass(frozen=True)
class WalkClassification:
    is_prudent: bool
    sidedness: dict
    excluded_3sided: bool

    def is_k_sided(self, k: int) -> bool:
        return self.sidedness[k]


def classify_walk(steps: str) -> WalkClassification:
    """Replay a walk and classify it.

    ``sidedness[k]`` holds iff every prefix endpoint satisfies the k-sided
    side condition (for k=3, including the exclusion rule).  For a
    non-self-avoiding or imprudent walk, is_prudent is False and the
    sidedness flags are undefined (returned empty).
    """
    if not steps:
        raise ValueError("walk must be nonempty")
    w = LatticeWalk()
    sided = {1: True, 2: True, 3: True, 4: True}
    excluded = False
    prudent = True
    prev = None
    for s in steps:
        if s not in _STEPS:
            raise ValueError(f"unknown step {s!r}")
        if prudent:
            prudent = w.step_is_prudent(s)
        # 3-sided exclusion is decided from the state *before* the step
        if prev == "S" and w.box[1] > w.box[0]:
            x = w.end()[0]
            if (s == "W" and x == w.box[1]) or (s == "E" and x == w.box[0]):
                excluded = True
        if not w.push(s):
            return WalkClassification(False, {}, False)
        m = SideMembership.of(w.end(), w.box)
        for k in sided:
            if sided[k] and not m.allows(k):
                sided[k] = False
        prev = s
    if not prudent:
        return WalkClassification(False, {}, False)
    sided[3] = sided[3] and not excluded
    return WalkClassification(True, sided, excluded)


def polygon_area(steps: str) -> int:
    """Enclosed unit cells of the closed cycle walk + (end -> origin) edge."""
    w = LatticeWalk(steps)
    x, y = w.end()
    if abs(x) + abs(y) != 1:
        raise ValueError("walk endpoint must be a lattice neighbor of the origin")
    return abs(_shoelace(w.vertices)) // 2


def _shoelace(vertices) -> int:
    s = 0
    for (x1, y1), (x2, y2) in zip(vertices, vertices[1:] + vertices[:1]):
        s += x1 * y2 - x2 * y1
    return s


def enumerate_prudent_polygons(
    k: int,
    max_area: int,
    walk_class: str = "prudent",
    apply_3sided_exclusion: bool = True,
) -> CountTable:
    """Count k-sided polygons of area 1..max_area by depth-first search.

    The DFS extends walks step by step, pruning by self-avoidance, the
    prudence ray condition (unless ``walk_class="boundary"``), the k-sided
    prefix side condition, the 3-sided exclusion rule, and a box bound
    (a polygon whose box spans w x h cells has area >= w+h-1).  Every walk
    of length >= 3 ending at a neighbor of the origin is tallied by area.
    """
    if k not in (2, 3, 4):
        raise ValueError("sidedness k must be 2, 3 or 4")
    if walk_class not in ("prudent", "boundary"):
        raise ValueError("walk_class must be 'prudent' or 'boundary'")
    if max_area < 1:
        raise ValueError("max_area must be >= 1")
    if max_area > _MAX_ORACLE_AREA:
        raise ValueError(
            f"max_area {max_area} exceeds the oracle budget "
            f"({_MAX_ORACLE_AREA}); the search is exponential in walk length")
    ray = walk_class == "prudent"
    maxlen = 2 * max_area + 1
    tally = [0] * (max_area + 1)

    occupied = {(0, 0)}
    vertices = [(0, 0)]
    box = [0, 0, 0, 0]
    prev_step = [None]

    def side_ok(p) -> bool:
        return SideMembership.of(p, box).allows(k)

    def ray_ok(p, dx, dy) -> bool:
        x, y = p[0] + dx, p[1] + dy
        while box[0] <= x <= box[1] and box[2] <= y <= box[3]:
            if (x, y) in occupied:
                return False
            x += dx
            y += dy
        return True

    def rec():
        p = vertices[-1]
        length = len(vertices) - 1
        if length >= 3 and abs(p[0]) + abs(p[1]) == 1:
            area = abs(_shoelace(vertices)) // 2
            if 1 <= area <= max_area:
                tally[area] += 1
        if length >= maxlen:
            return
        if (box[1] - box[0]) + (box[3] - box[2]) - 1 > max_area:
            return
        for step, (dx, dy) in _STEPS.items():
            nxt = (p[0] + dx, p[1] + dy)
            if nxt in occupied:
                continue
            if ray and not ray_ok(p, dx, dy):
                continue
            if (k == 3 and apply_3sided_exclusion and prev_step[-1] == "S"
                    and box[1] > box[0]):
                if (step == "W" and p[0] == box[1]) or \
                        (step == "E" and p[0] == box[0]):
                    continue
            saved = box[:]
            occupied.add(nxt)
            vertices.append(nxt)
            prev_step.append(step)
            box[0] = min(box[0], nxt[0])
            box[1] = max(box[1], nxt[0])
            box[2] = min(box[2], nxt[1])
            box[3] = max(box[3], nxt[1])
            # prudent walks always end on their box boundary; check it
            if ray and not (nxt[0] in (box[0], box[1]) or nxt[1] in (box[2], box[3])):
                raise AssertionError("prudent walk endpoint left the box boundary")
            if side_ok(nxt):
                rec()
            box[:] = saved
            prev_step.pop()
            vertices.pop()
            occupied.remove(nxt)

    rec()
    return CountTable(k, tally[1:], "oracle")
