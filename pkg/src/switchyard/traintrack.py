"""Trivalent track neighborhoods on closed oriented surfaces.

Combinatorial model: a track of genus g has 12g-12 switches and 18g-18
rectangles.  Each switch is a tie segment with one wide side (``big``) and
two narrow sides (``small_first``, ``small_second``); each rectangle end
plugs into exactly one (switch, port) slot.  Complementary cells (plaques)
must all be trigons: their boundary crosses exactly three switch cusps.

Planar frame used throughout: at every switch the big rectangle attaches on
the west, the smalls on the east, ties run vertically, and the canonical tie
orientation points north (big side on the left).  small_first is the lower
small port.  All boundary walks keep the surface on the left.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

BIG = "big"
SMALL_FIRST = "small_first"
SMALL_SECOND = "small_second"
PORTS = (BIG, SMALL_FIRST, SMALL_SECOND)

LEFT = "left"
RIGHT = "right"

Slot = Tuple[int, str]


class TrackError(ValueError):
    """Structural defect in a track; ``code`` is a stable identifier."""

    code = "track_error"


class PortCollision(TrackError):
    code = "port_collision"


class CellShapeError(TrackError):
    code = "cell_shape"


class GenusMismatch(TrackError):
    code = "genus_mismatch"


class DisconnectedTrack(TrackError):
    code = "disconnected"


class TreeStructureError(TrackError):
    code = "tree_structure"


class FixtureSearchError(TrackError):
    code = "fixture_search"


def is_big(port: str) -> bool:
    return port == BIG


@dataclass(frozen=True)
class Rect:
    id: int
    end0: Slot
    end1: Slot

    def end(self, e: int) -> Slot:
        return self.end0 if e == 0 else self.end1

    @property
    def ends(self) -> Tuple[Slot, Slot]:
        return (self.end0, self.end1)


@dataclass(frozen=True)
class Plaque:
    """Trigon cell; switches stored counterclockwise along its boundary."""

    id: int
    switches_ccw: Tuple[int, int, int]

    def position(self, t: int) -> int:
        return self.switches_ccw.index(t)

    # Successor in the clockwise boundary order is the previous ccw entry.
    def plus(self, t: int) -> int:
        return self.switches_ccw[(self.position(t) - 1) % 3]

    def minus(self, t: int) -> int:
        return self.switches_ccw[(self.position(t) + 1) % 3]


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    genus: int
    n_switches: int
    n_rectangles: int
    n_plaques: int
    errors: Tuple[Tuple[str, str], ...]


# Boundary-walk corners.  y bit: 0 = low, 1 = high.  A walk with the surface
# on its left leaves a switch block into a rectangle at out_corner and
# re-enters at in_corner.
def out_corner(s: int, port: str) -> Tuple[int, str, int]:
    return (s, port, 1 if is_big(port) else 0)


def in_corner(s: int, port: str) -> Tuple[int, str, int]:
    return (s, port, 0 if is_big(port) else 1)


def exit_side(port: str, bit: int) -> str:
    """Side of an exit tie: tree on the right means a left exit."""
    if is_big(port):
        return LEFT if bit == 0 else RIGHT
    return RIGHT if bit == 0 else LEFT


def transport_preserves(p0: str, p1: str) -> bool:
    # Crossing a rectangle keeps the canonical frame iff the port kinds differ.
    return is_big(p0) != is_big(p1)


class TrainTrack:
    def __init__(self, genus: int, switch_ids: Sequence[int], rects: Sequence[Rect]):
        self.genus = int(genus)
        self.switch_ids: Tuple[int, ...] = tuple(sorted(switch_ids))
        self.rects: Tuple[Rect, ...] = tuple(sorted(rects, key=lambda r: r.id))
        self.rect_by_id: Dict[int, Rect] = {r.id: r for r in self.rects}
        self._plaques: Optional[Tuple[Plaque, ...]] = None
        self._plaque_of_switch: Dict[int, int] = {}
        self._slot_map: Optional[Dict[Slot, Tuple[int, int]]] = None

    # -- structure ---------------------------------------------------------

    def slot_map(self) -> Dict[Slot, Tuple[int, int]]:
        """(switch, port) -> (rect id, end index); raises on collisions."""
        if self._slot_map is not None:
            return self._slot_map
        m: Dict[Slot, Tuple[int, int]] = {}
        sset = set(self.switch_ids)
        for r in self.rects:
            for e, slot in enumerate(r.ends):
                s, p = slot
                if s not in sset or p not in PORTS:
                    raise PortCollision(f"rectangle {r.id} end {e} targets unknown slot {slot}")
                if slot in m:
                    raise PortCollision(f"slot {slot} used by rectangles {m[slot][0]} and {r.id}")
                m[slot] = (r.id, e)
        for s in self.switch_ids:
            for p in PORTS:
                if (s, p) not in m:
                    raise PortCollision(f"slot {(s, p)} is unused")
        self._slot_map = m
        return m

    def other_end(self, rid: int, e: int) -> Slot:
        return self.rect_by_id[rid].end(1 - e)

    def _trace_cells(self) -> List[List[int]]:
        """Trace full boundary; returns each cell's switch cycle in cw order."""
        slots = self.slot_map()
        succ: Dict[Tuple[int, str, int], Tuple[str, object]] = {}
        for s in self.switch_ids:
            succ[(s, BIG, 0)] = ("h", (s, SMALL_FIRST, 0))
            succ[(s, SMALL_FIRST, 1)] = ("cusp", (s, SMALL_SECOND, 0))
            succ[(s, SMALL_SECOND, 1)] = ("h", (s, BIG, 1))
            for p in PORTS:
                rid, e = slots[(s, p)]
                s1, p1 = self.other_end(rid, e)
                succ[out_corner(s, p)] = ("h", in_corner(s1, p1))
        cells: List[List[int]] = []
        seen = set()
        for start in sorted(succ):
            if start in seen:
                continue
            cusps: List[int] = []
            c = start
            while True:
                seen.add(c)
                kind, nxt = succ[c]
                if kind == "cusp":
                    cusps.append(c[0])
                c = nxt  # type: ignore[assignment]
                if c == start:
                    break
            cells.append(cusps)
        return cells

    def finalize(self) -> None:
        """Check all structural invariants; compute plaques."""
        if self._plaques is not None:
            return
        slots = self.slot_map()
        if self.genus < 2:
            raise GenusMismatch(f"genus {self.genus} < 2")
        g = self.genus
        if len(self.switch_ids) != 12 * g - 12 or len(self.rects) != 18 * g - 18:
            raise GenusMismatch(
                f"expected {12 * g - 12} switches / {18 * g - 18} rectangles, "
                f"got {len(self.switch_ids)} / {len(self.rects)}"
            )
        # Connectivity of the switch graph.
        adj: Dict[int, List[int]] = {s: [] for s in self.switch_ids}
        for r in self.rects:
            adj[r.end0[0]].append(r.end1[0])
            adj[r.end1[0]].append(r.end0[0])
        todo = [self.switch_ids[0]]
        reach = {self.switch_ids[0]}
        while todo:
            for n in adj[todo.pop()]:
                if n not in reach:
                    reach.add(n)
                    todo.append(n)
        if len(reach) != len(self.switch_ids):
            raise DisconnectedTrack(f"only {len(reach)} of {len(self.switch_ids)} switches reachable")
        cells = self._trace_cells()
        for cusps in cells:
            if len(cusps) != 3:
                raise CellShapeError(f"cell crosses {len(cusps)} switch cusps, expected 3")
        euler = (len(self.switch_ids) - len(self.rects)) + len(cells)
        if euler != 2 - 2 * g:
            raise GenusMismatch(f"euler characteristic {euler} != {2 - 2 * g}")
        plaques = []
        for cusps in cells:
            ccw = tuple(reversed(cusps))
            k = ccw.index(min(ccw))
            plaques.append(tuple(ccw[k:] + ccw[:k]))
        plaques.sort()
        self._plaques = tuple(Plaque(i, sw) for i, sw in enumerate(plaques))
        for pl in self._plaques:
            for t in pl.switches_ccw:
                self._plaque_of_switch[t] = pl.id

    @property
    def plaques(self) -> Tuple[Plaque, ...]:
        self.finalize()
        assert self._plaques is not None
        return self._plaques

    def plaque_of_switch(self, t: int) -> Plaque:
        self.finalize()
        return self.plaques[self._plaque_of_switch[t]]


def validate(track: TrainTrack) -> ValidationReport:
    errors: List[Tuple[str, str]] = []
    try:
        track.finalize()
    except TrackError as err:
        errors.append((err.code, str(err)))
    n_plaques = len(track._plaques) if track._plaques is not None else 0
    return ValidationReport(
        valid=not errors,
        genus=track.genus,
        n_switches=len(track.switch_ids),
        n_rectangles=len(track.rects),
        n_plaques=n_plaques,
        errors=tuple(errors),
    )


# -- fixtures ---------------------------------------------------------------


def generate_fixture(g: int, seed: int, max_nodes: int = 30_000, attempts: int = 200) -> TrainTrack:
    """Seeded backtracking search for a valid genus-g track.

    Slots are paired one at a time.  Open boundary chains are maintained
    incrementally; a branch is cut as soon as a chain accumulates more than
    three cusps or closes on a number other than three.  A stuck search is
    restarted with fresh randomization, deterministically in the seed.
    """
    if g < 2:
        raise GenusMismatch(f"genus {g} < 2")
    last = None
    for attempt in range(attempts):
        try:
            return _generate_once(g, random.Random(seed * 1_000_003 + attempt), max_nodes)
        except FixtureSearchError as err:
            last = err
    raise FixtureSearchError(f"no valid track after {attempts} attempts: {last}")


def _generate_once(g: int, rng: random.Random, max_nodes: int) -> TrainTrack:
    n_sw = 12 * g - 12
    switch_ids = list(range(n_sw))
    slots: List[Slot] = [(s, p) for s in switch_ids for p in PORTS]

    # Open chains keyed by endpoints: head_of[tail] = head, tail_of[head] =
    # tail, cusps[head] = count.  The static switch arcs seed one 0-cusp
    # chain per horizontal edge and one 1-cusp chain per cusp.
    tail_of: Dict[Tuple[int, str, int], Tuple[int, str, int]] = {}
    head_of: Dict[Tuple[int, str, int], Tuple[int, str, int]] = {}
    cusps: Dict[Tuple[int, str, int], int] = {}

    def add_chain(head, tail, c):
        tail_of[head] = tail
        head_of[tail] = head
        cusps[head] = c

    for s in switch_ids:
        add_chain((s, BIG, 0), (s, SMALL_FIRST, 0), 0)
        add_chain((s, SMALL_FIRST, 1), (s, SMALL_SECOND, 0), 1)
        add_chain((s, SMALL_SECOND, 1), (s, BIG, 1), 0)

    def connect(u, v):
        """Join the chain ending at u to the one starting at v.

        Returns an undo token, or None if the trigon condition is violated.
        """
        head = head_of[u]
        tail = tail_of[v]
        if head == v:
            # closes a cycle; it must be a trigon
            if cusps[head] != 3:
                return None
            del head_of[u], tail_of[v]
            c = cusps.pop(head)
            return ("cycle", u, v, c)
        c1, c2 = cusps[head], cusps[v]
        if c1 + c2 > 3:
            return None
        del head_of[u], tail_of[v], cusps[v]
        tail_of[head] = tail
        head_of[tail] = head
        cusps[head] = c1 + c2
        return ("merge", u, v, head, tail, c1, c2)

    def undo(token):
        if token[0] == "cycle":
            _, u, v, c = token
            head_of[u] = v
            tail_of[v] = u
            cusps[v] = c
        else:
            _, u, v, head, tail, c1, c2 = token
            tail_of[head] = u
            head_of[u] = head
            cusps[head] = c1
            tail_of[v] = tail
            head_of[tail] = v
            cusps[v] = c2

    pairing: Dict[Slot, Slot] = {}
    nodes = 0

    def try_pair(a: Slot, b: Slot):
        t1 = connect(out_corner(*a), in_corner(*b))
        if t1 is None:
            return None
        t2 = connect(out_corner(*b), in_corner(*a))
        if t2 is None:
            undo(t1)
            return None
        return (t1, t2)

    def search(unmatched: List[Slot]) -> bool:
        nonlocal nodes
        if not unmatched:
            return True
        nodes += 1
        if nodes > max_nodes:
            raise FixtureSearchError(f"search exceeded {max_nodes} nodes; retry with a new seed")
        a = unmatched[0]
        rest = unmatched[1:]
        order = rest[:]
        rng.shuffle(order)
        for b in order:
            tokens = try_pair(a, b)
            if tokens is None:
                continue
            pairing[a] = b
            pairing[b] = a
            if search([x for x in rest if x != b]):
                return True
            del pairing[a], pairing[b]
            undo(tokens[1])
            undo(tokens[0])
        return False

    if not search(slots):
        raise FixtureSearchError("no pairing found")

    rects = []
    used = set()
    rid = 0
    for a in slots:
        if a in used:
            continue
        b = pairing[a]
        used.add(a)
        used.add(b)
        rects.append(Rect(rid, a, b))
        rid += 1
    track = TrainTrack(g, switch_ids, rects)
    report = validate(track)
    if not report.valid:
        # connectivity is not pruned during the search
        raise FixtureSearchError(f"search produced invalid track: {report.errors}")
    return track


# -- oriented spanning trees -------------------------------------------------


@dataclass(frozen=True)
class OrientedTree:
    track: TrainTrack
    edges: FrozenSet[int]
    root: int
    root_bit: int
    orientation: Mapping[int, int]  # switch -> 0 canonical / 1 reversed

    def bit(self, s: int) -> int:
        return self.orientation[s]

    def flipped(self) -> "OrientedTree":
        flipped = {s: b ^ 1 for s, b in self.orientation.items()}
        return OrientedTree(self.track, self.edges, self.root, self.root_bit ^ 1, flipped)

    def tree_switches(self) -> Tuple[int, ...]:
        return tuple(sorted(self.orientation.keys()))


def _propagate(track: TrainTrack, edges: FrozenSet[int], root: int, root_bit: int) -> Dict[int, int]:
    o = {root: root_bit}
    todo = [root]
    incident: Dict[int, List[Rect]] = {}
    for rid in edges:
        r = track.rect_by_id[rid]
        incident.setdefault(r.end0[0], []).append(r)
        incident.setdefault(r.end1[0], []).append(r)
    while todo:
        s = todo.pop()
        for r in incident.get(s, []):
            (s0, p0), (s1, p1) = r.ends
            if s1 == s:
                s0, p0, s1, p1 = s1, p1, s0, p0
            nb = o[s0] if transport_preserves(p0, p1) else o[s0] ^ 1
            if s1 not in o:
                o[s1] = nb
                todo.append(s1)
            elif o[s1] != nb:
                raise TreeStructureError(f"edge set not acyclic near switch {s1}")
    return o


def maximal_tree(
    track: TrainTrack,
    seed: Optional[int] = None,
    edges: Optional[Iterable[int]] = None,
    root: Optional[int] = None,
    root_bit: int = 0,
) -> OrientedTree:
    track.finalize()
    n = len(track.switch_ids)
    if edges is None:
        rng = random.Random(seed)
        order = list(track.rects)
        rng.shuffle(order)
        parent = {s: s for s in track.switch_ids}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        chosen = []
        for r in order:
            a, b = find(r.end0[0]), find(r.end1[0])
            if a != b:
                parent[a] = b
                chosen.append(r.id)
        edge_set = frozenset(chosen)
    else:
        edge_set = frozenset(edges)
    if len(edge_set) != n - 1:
        raise TreeStructureError(f"{len(edge_set)} edges cannot span {n} switches")
    if root is None:
        root = track.switch_ids[0]
    o = _propagate(track, edge_set, root, root_bit)
    if len(o) != n:
        raise TreeStructureError(f"edge set spans only {len(o)} of {n} switches")
    return OrientedTree(track, edge_set, root, root_bit, o)


def subtree(track: TrainTrack, switches: Iterable[int], edges: Iterable[int],
            root: Optional[int] = None, root_bit: int = 0) -> OrientedTree:
    """Oriented tree on a subset of switches (not necessarily spanning)."""
    track.finalize()
    sw = sorted(set(switches))
    edge_set = frozenset(edges)
    if root is None:
        root = sw[0]
    o = _propagate(track, edge_set, root, root_bit)
    for s in sw:
        o.setdefault(s, root_bit)  # isolated stumpy switch
    if set(o) != set(sw) or len(edge_set) != len(sw) - 1:
        raise TreeStructureError("edge set does not form a tree on the given switches")
    return OrientedTree(track, edge_set, root, root_bit, o)


@dataclass(frozen=True)
class Classification:
    orientable: FrozenSet[int]
    u_left: FrozenSet[int]
    u_right: FrozenSet[int]
    s_left: FrozenSet[int]
    s_right: FrozenSet[int]
    e_left: Tuple[Tuple[int, int], ...]
    e_right: Tuple[Tuple[int, int], ...]

    @property
    def unorientable(self) -> FrozenSet[int]:
        return self.u_left | self.u_right


def classify(tree: OrientedTree) -> Classification:
    track = tree.track
    o = tree.orientation
    orientable_set = set()
    u_left = set()
    u_right = set()
    e_left: List[Tuple[int, int]] = []
    e_right: List[Tuple[int, int]] = []
    for r in track.rects:
        if r.id in tree.edges:
            continue
        sides = {}
        for e, (s, p) in enumerate(r.ends):
            if s not in o:
                continue
            side = exit_side(p, o[s])
            sides[e] = side
            (e_left if side == LEFT else e_right).append((r.id, e))
        if len(sides) < 2:
            continue
        (s0, p0), (s1, p1) = r.ends
        transported = o[s0] if transport_preserves(p0, p1) else o[s0] ^ 1
        if transported == o[s1]:
            orientable_set.add(r.id)
            assert sides[0] != sides[1]
        elif sides[0] == LEFT:
            assert sides[1] == LEFT
            u_left.add(r.id)
        else:
            assert sides[1] == RIGHT
            u_right.add(r.id)
    s_left = frozenset(s for s in o if o[s] == 1)
    s_right = frozenset(s for s in o if o[s] == 0)
    return Classification(
        orientable=frozenset(orientable_set),
        u_left=frozenset(u_left),
        u_right=frozenset(u_right),
        s_left=s_left,
        s_right=s_right,
        e_left=tuple(sorted(e_left)),
        e_right=tuple(sorted(e_right)),
    )


@dataclass(frozen=True)
class CoverLifts:
    """Chosen lifts in the orientation double cover.

    A lift of a rectangle is encoded by its tie-orientation bit in the frame
    of its end0 switch; the covering involution flips the bit.  The chosen
    lift of every tree or orientable rectangle restricts to the tree
    orientation; for unorientable rectangles the recorded choice is the lift
    agreeing with the tree orientation at end0.
    """

    tree: OrientedTree
    r_bit: Mapping[int, int]

    def end_bit(self, rid: int, lift_bit: int, e: int) -> int:
        r = self.tree.track.rect_by_id[rid]
        if e == 0:
            return lift_bit
        (_, p0), (_, p1) = r.ends
        return lift_bit if transport_preserves(p0, p1) else lift_bit ^ 1

    def end_in_m_o(self, rid: int, lift_bit: int, e: int) -> bool:
        s = self.tree.track.rect_by_id[rid].end(e)[0]
        return self.end_bit(rid, lift_bit, e) == self.tree.bit(s)

    def m_o(self) -> FrozenSet[Tuple[int, int]]:
        return frozenset((s, b) for s, b in self.tree.orientation.items())

    def t_cw_bit(self, s: int) -> int:
        # The clockwise orientation around the adjacent plaque is canonical.
        return 0

    def t_o_bit(self, s: int) -> int:
        return self.tree.bit(s)


def orientation_cover(tree: OrientedTree) -> CoverLifts:
    r_bit = {}
    for r in tree.track.rects:
        s0 = r.end0[0]
        if s0 in tree.orientation:
            r_bit[r.id] = tree.bit(s0)
        else:
            r_bit[r.id] = 0
    lifts = CoverLifts(tree, r_bit)
    cls = classify(tree)
    for s in tree.orientation:
        assert (lifts.t_o_bit(s) == lifts.t_cw_bit(s)) == (s in cls.s_right)
    return lifts


# -- boundary walk -----------------------------------------------------------


@dataclass(frozen=True)
class Step:
    type: str  # "leaf" | "switch" | "rectangle"
    switch: Optional[int] = None
    side: Optional[str] = None
    plaque: Optional[int] = None
    rect: Optional[int] = None
    end: Optional[int] = None
    arcs: int = 0


def boundary_walk(tree: OrientedTree) -> List[Step]:
    """Counterclockwise boundary of the tree as typed steps.

    Crossings (switch cusps and exit ties) alternate with leaf steps; each
    leaf step is a maximal horizontal run.
    """
    track = tree.track
    track.finalize()
    slots = track.slot_map()
    o = tree.orientation
    sw = set(o.keys())

    succ: Dict[Tuple[int, str, int], Tuple[str, object, Tuple[int, str, int]]] = {}
    for s in sw:
        succ[(s, BIG, 0)] = ("h", None, (s, SMALL_FIRST, 0))
        succ[(s, SMALL_FIRST, 1)] = ("cusp", s, (s, SMALL_SECOND, 0))
        succ[(s, SMALL_SECOND, 1)] = ("h", None, (s, BIG, 1))
        for p in PORTS:
            rid, e = slots[(s, p)]
            if rid in tree.edges:
                s1, p1 = track.other_end(rid, e)
                succ[out_corner(s, p)] = ("h", None, in_corner(s1, p1))
            else:
                succ[out_corner(s, p)] = ("exit", (rid, e), in_corner(s, p))

    start = min(succ)
    arcs = []
    c = start
    while True:
        kind, payload, nxt = succ[c]
        arcs.append((kind, payload))
        c = nxt
        if c == start:
            break
    if len(arcs) != len(succ):
        raise TreeStructureError("tree boundary is not a single loop")

    first_cross = next(i for i, (k, _) in enumerate(arcs) if k != "h")
    arcs = arcs[first_cross:] + arcs[:first_cross]
    steps: List[Step] = []
    run = 0
    for kind, payload in arcs:
        if kind == "h":
            run += 1
            continue
        if steps:
            steps.append(Step(type="leaf", arcs=run))
        run = 0
        if kind == "cusp":
            s = payload  # type: ignore[assignment]
            side = RIGHT if o[s] == 0 else LEFT
            steps.append(Step(type="switch", switch=s, side=side, plaque=track.plaque_of_switch(s).id))
        else:
            rid, e = payload  # type: ignore[misc]
            s, p = track.rect_by_id[rid].end(e)
            steps.append(Step(type="rectangle", rect=rid, end=e, side=exit_side(p, o[s])))
    steps.append(Step(type="leaf", arcs=run))
    return steps


# -- serialization -----------------------------------------------------------


def track_to_json(track: TrainTrack, tree: Optional[OrientedTree] = None) -> dict:
    doc = {
        "genus": track.genus,
        "switches": [{"id": s} for s in track.switch_ids],
        "rectangles": [
            {
                "id": r.id,
                "end0": {"switch": r.end0[0], "port": r.end0[1]},
                "end1": {"switch": r.end1[0], "port": r.end1[1]},
            }
            for r in track.rects
        ],
    }
    if tree is not None:
        doc["tree"] = {"edges": sorted(tree.edges), "root": tree.root, "root_bit": tree.root_bit}
    return doc


def track_from_json(doc: dict) -> Tuple[TrainTrack, Optional[OrientedTree]]:
    switches = [s["id"] for s in doc["switches"]]
    rects = [
        Rect(r["id"], (r["end0"]["switch"], r["end0"]["port"]), (r["end1"]["switch"], r["end1"]["port"]))
        for r in doc["rectangles"]
    ]
    track = TrainTrack(doc["genus"], switches, rects)
    tree = None
    if "tree" in doc:
        t = doc["tree"]
        tree = maximal_tree(track, edges=t["edges"], root=t.get("root"), root_bit=t.get("root_bit", 0))
    return track, tree


def load_track(path: str) -> Tuple[TrainTrack, Optional[OrientedTree]]:
    with open(path) as fh:
        return track_from_json(json.load(fh))


def dump_track(path: str, track: TrainTrack, tree: Optional[OrientedTree] = None) -> None:
    with open(path, "w") as fh:
        json.dump(track_to_json(track, tree), fh, indent=1)
        fh.write("\n")
