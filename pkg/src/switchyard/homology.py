"""Chain calculus on the orientation double cover of a track.

Degree-one chains are supported on oriented rectangle lifts, degree-zero
chains on oriented vertical-boundary lifts; both carry coefficient vectors
indexed by the pair set A.  Keys use the absolute lift bit (0 = canonical
frame at the reference end), so chains are meaningful before any tree is
chosen.

Coefficient conventions: the hat involution on an A-indexed vector reverses
it; on a triple index it reverses the triple (this pairs with reversing a
vertex labeling, which also flips the sign of the stored value).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Tuple

from . import algebra as al
from .algebra import GroupElement
from .traintrack import (
    CoverLifts,
    OrientedTree,
    PORTS,
    TrainTrack,
    classify,
    is_big,
)

GA = Tuple[GroupElement, ...]


class SolvabilityViolated(ValueError):
    pass


def ga_zero(kind: str, d: int) -> GA:
    return tuple(al.zero(kind) for _ in range(d - 1))


def ga_add(a: GA, b: GA) -> GA:
    return tuple(al.group_add(x, y) for x, y in zip(a, b))


def ga_neg(a: GA) -> GA:
    return tuple(al.group_neg(x) for x in a)


def ga_sub(a: GA, b: GA) -> GA:
    return tuple(al.group_sub(x, y) for x, y in zip(a, b))


def ga_hat(a: GA) -> GA:
    # position k holds the entry for (k+1, d-k-1); swapping the pair reverses
    return tuple(reversed(a))


def ga_is_zero(a: GA, tol: float = al.DEFAULT_TOL) -> bool:
    return all(al.is_zero(x, tol) for x in a)


def ga_equal(a: GA, b: GA, tol: float = al.DEFAULT_TOL) -> bool:
    return all(al.elements_equal(x, y, tol) for x, y in zip(a, b))


def ga_random(kind: str, d: int, rng) -> GA:
    return tuple(al.random_element(kind, rng) for _ in range(d - 1))


@dataclass
class _Chain:
    kind: str
    d: int
    coeffs: Dict[Tuple[int, int], GA] = field(default_factory=dict)

    def get(self, key: Tuple[int, int]) -> GA:
        return self.coeffs.get(key, ga_zero(self.kind, self.d))

    def accumulate(self, key: Tuple[int, int], val: GA) -> None:
        self.coeffs[key] = ga_add(self.get(key), val)

    def support(self) -> List[Tuple[int, int]]:
        return sorted(k for k, v in self.coeffs.items() if not ga_is_zero(v))

    def is_zero(self, tol: float = al.DEFAULT_TOL) -> bool:
        return all(ga_is_zero(v, tol) for v in self.coeffs.values())

    def _like(self, coeffs) -> "_Chain":
        return type(self)(self.kind, self.d, coeffs)

    def add(self, other: "_Chain") -> "_Chain":
        out = dict(self.coeffs)
        res = self._like(out)
        for k, v in other.coeffs.items():
            res.accumulate(k, v)
        return res

    def neg(self) -> "_Chain":
        return self._like({k: ga_neg(v) for k, v in self.coeffs.items()})

    def sub(self, other: "_Chain") -> "_Chain":
        return self.add(other.neg())

    def equal(self, other: "_Chain", tol: float = al.DEFAULT_TOL) -> bool:
        return self.sub(other).is_zero(tol)

    def display(self) -> List[Tuple[Tuple[int, int], List[object]]]:
        return [(k, [al.element_to_json(x) for x in self.coeffs[k]]) for k in self.support()]


class Chain1(_Chain):
    """Supported on rectangle lifts (rectangle id, bit)."""


class Chain0(_Chain):
    """Supported on vertical-boundary lifts (switch id, bit)."""


def iota_star(c: _Chain) -> _Chain:
    if isinstance(c, Chain1):
        return Chain1(c.kind, c.d, {(r, b ^ 1): ga_neg(v) for (r, b), v in c.coeffs.items()})
    return Chain0(c.kind, c.d, {(t, b ^ 1): v for (t, b), v in c.coeffs.items()})


def hat(c: _Chain) -> _Chain:
    return type(c)(c.kind, c.d, {k: ga_hat(v) for k, v in c.coeffs.items()})


def forward_end(track: TrainTrack, lifts: CoverLifts, rid: int, lift_bit: int) -> int:
    """End index at which the oriented core of this lift terminates.

    The core is oriented to cross each tie from its right to its left; in
    the canonical frame it therefore travels toward the big side of the end
    switch.
    """
    r = track.rect_by_id[rid]
    for e in (0, 1):
        p = r.end(e)[1]
        bit = lifts.end_bit(rid, lift_bit, e)
        if (not is_big(p) and bit == 0) or (is_big(p) and bit == 1):
            return e
    raise AssertionError("no forward end found")


def boundary(lifts: CoverLifts, c: Chain1) -> Chain0:
    track = lifts.tree.track
    out = Chain0(c.kind, c.d)
    for (rid, b), g in c.coeffs.items():
        fwd = forward_end(track, lifts, rid, b)
        r = track.rect_by_id[rid]
        for e in (0, 1):
            s = r.end(e)[0]
            key = (s, lifts.end_bit(rid, b, e))
            out.accumulate(key, g if e == fwd else ga_neg(g))
    return out


def beta(lifts: CoverLifts, u_tree: Mapping[int, GA], u_free: Mapping[int, GA],
         kind: str, d: int) -> Chain1:
    track = lifts.tree.track
    overlap = set(u_tree) & set(u_free)
    if overlap:
        raise ValueError(f"rectangle coefficients given twice: {sorted(overlap)}")
    u = {**u_tree, **u_free}
    missing = [r.id for r in track.rects if r.id not in u]
    if missing:
        raise ValueError(f"missing rectangle coefficients: {missing}")
    out = Chain1(kind, d)
    for r in track.rects:
        b = lifts.r_bit[r.id]
        out.accumulate((r.id, b), u[r.id])
        out.accumulate((r.id, b ^ 1), ga_hat(u[r.id]))
    return out


def delta(tree: OrientedTree, w: Mapping[int, GA], kind: str, d: int) -> Chain0:
    missing = [s for s in tree.track.switch_ids if s not in w]
    if missing:
        raise ValueError(f"missing switch coefficients: {missing}")
    out = Chain0(kind, d)
    for s in tree.track.switch_ids:
        b = tree.bit(s)
        out.accumulate((s, b), w[s])
        out.accumulate((s, b ^ 1), ga_neg(ga_hat(w[s])))
    return out


# -- theta-type coordinates ---------------------------------------------------

ZField = Mapping[int, Mapping[Tuple[int, int, int], GroupElement]]


def check_diamond(track: TrainTrack, z: ZField, d: int, tol: float = al.DEFAULT_TOL) -> None:
    """Rotation compatibility: the value at a switch equals the value at the
    next switch clockwise around the plaque under the index rotation."""
    tables = al.index_tables(d)
    for pl in track.plaques:
        for t in pl.switches_ccw:
            tp = pl.plus(t)
            for j in tables.B:
                if not al.elements_equal(z[t][j], z[tp][al.rot_plus(j)], tol):
                    raise ValueError(f"rotation relation fails at switch {t}, index {j}")


def k_theta(track: TrainTrack, z: ZField, kind: str, d: int, tol: float = al.DEFAULT_TOL) -> Chain0:
    """Endpoint class of the theta-type data, computed lift by lift."""
    check_diamond(track, z, d, tol)
    tables = al.index_tables(d)
    out = Chain0(kind, d)
    for t in track.switch_ids:
        canon = tuple(
            al.group_neg(al.group_sum(kind, (z[t][j] for j in tables.B if j[1] == i[0])))
            for i in tables.A
        )
        rev = tuple(
            al.group_sum(kind, (z[t][j] for j in tables.B if j[1] == i[1]))
            for i in tables.A
        )
        out.accumulate((t, 0), canon)
        out.accumulate((t, 1), rev)
    return out


def w_from_z(tree: OrientedTree, z: ZField, kind: str, d: int) -> Dict[int, GA]:
    """Per-switch A-vectors whose delta-chain matches k_theta."""
    tables = al.index_tables(d)
    cls = classify(tree)
    w: Dict[int, GA] = {}
    for t in tree.track.switch_ids:
        if t in cls.s_left:
            w[t] = tuple(
                al.group_sum(kind, (z[t][j] for j in tables.B if j[1] == i[1]))
                for i in tables.A
            )
        else:
            w[t] = tuple(
                al.group_neg(al.group_sum(kind, (z[t][j] for j in tables.B if j[1] == i[0])))
                for i in tables.A
            )
    return w


# -- tree solver --------------------------------------------------------------


def balance_defect(tree: OrientedTree, v_free: Mapping[int, GA], w: Mapping[int, GA],
                   kind: str, d: int) -> GA:
    """Left side minus right side of the solvability condition."""
    cls = classify(tree)
    acc = ga_zero(kind, d)
    for rid in cls.u_right:
        acc = ga_add(acc, ga_add(v_free[rid], ga_hat(v_free[rid])))
    for rid in cls.u_left:
        acc = ga_sub(acc, ga_add(v_free[rid], ga_hat(v_free[rid])))
    for t in tree.track.switch_ids:
        acc = ga_sub(acc, w[t])
    return acc


def solve_tree(
    lifts: CoverLifts,
    v_free: Mapping[int, GA],
    w: Mapping[int, GA],
    kind: str,
    d: int,
    order: str = "low_first",
    tol: float = al.DEFAULT_TOL,
) -> Dict[int, GA]:
    """Unique tree coefficients whose boundary matches the target chain.

    Solves switch by switch, stripping degree-one switches of the tree; the
    balance condition is checked first and the final switch is verified.
    """
    tree = lifts.tree
    track = tree.track
    defect = balance_defect(tree, v_free, w, kind, d)
    if not ga_is_zero(defect, tol):
        raise SolvabilityViolated(f"balance defect {[al.element_to_json(x) for x in defect]}")

    slots = track.slot_map()
    # rhs of the equation at lift (s, 0)
    rhs: Dict[int, GA] = {}
    for s in track.switch_ids:
        rhs[s] = w[s] if tree.bit(s) == 0 else ga_neg(ga_hat(w[s]))

    # each incident end contributes sign(port) * (u or hat(u)) at (s, 0)
    def end_term(rid: int, e: int, u_val: GA) -> GA:
        r = track.rect_by_id[rid]
        s, p = r.end(e)
        b_here = 0 if e == 0 else lifts.end_bit(rid, 0, 1)  # lift keyed 0 at this end
        coeff = u_val if b_here == lifts.r_bit[rid] else ga_hat(u_val)
        return ga_neg(coeff) if is_big(p) else coeff

    deg: Dict[int, int] = {s: 0 for s in track.switch_ids}
    tree_edge_at: Dict[int, List[Tuple[int, int]]] = {s: [] for s in track.switch_ids}
    for rid in tree.edges:
        r = track.rect_by_id[rid]
        for e in (0, 1):
            s = r.end(e)[0]
            deg[s] += 1
            tree_edge_at[s].append((rid, e))

    acc: Dict[int, GA] = {s: ga_zero(kind, d) for s in track.switch_ids}
    for s in track.switch_ids:
        for p in PORTS:
            rid, e = slots[(s, p)]
            if rid not in tree.edges:
                acc[s] = ga_add(acc[s], end_term(rid, e, v_free[rid]))

    solved: Dict[int, GA] = {}
    alive = set(track.switch_ids)
    leaves = sorted(s for s in alive if deg[s] == 1)
    reverse = order == "high_first"
    while len(solved) < len(tree.edges):
        leaves.sort(reverse=reverse)
        s = leaves.pop(0)
        if s not in alive or deg[s] != 1:
            continue
        alive.discard(s)
        pending = [(rid, e) for rid, e in tree_edge_at[s] if rid not in solved]
        assert len(pending) == 1
        rid, e = pending[0]
        # residual = rhs - known contributions; unknown term is sign * coeff
        residual = ga_sub(rhs[s], acc[s])
        for rid2, e2 in tree_edge_at[s]:
            if rid2 in solved:
                residual = ga_sub(residual, end_term(rid2, e2, solved[rid2]))
        r = track.rect_by_id[rid]
        _, p = r.end(e)
        val = ga_neg(residual) if is_big(p) else residual
        b_here = 0 if e == 0 else lifts.end_bit(rid, 0, 1)
        if b_here != lifts.r_bit[rid]:
            val = ga_hat(val)
        solved[rid] = val
        s_other = r.end(1 - e)[0]
        if s_other in alive:
            deg[s_other] -= 1
            if deg[s_other] == 1:
                leaves.append(s_other)

    assert len(alive) == 1
    # the last equation must close by the balance condition
    s_last = alive.pop()
    residual = ga_sub(rhs[s_last], acc[s_last])
    for rid2, e2 in tree_edge_at[s_last]:
        residual = ga_sub(residual, end_term(rid2, e2, solved[rid2]))
    if not ga_is_zero(residual, max(tol, 1e-7)):
        raise AssertionError(f"final switch residual {[al.element_to_json(x) for x in residual]}")
    return solved
