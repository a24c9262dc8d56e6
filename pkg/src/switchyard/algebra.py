"""Abelian coefficient groups and the index tables shared by every coordinate module.

Four group kinds are supported, selected by a runtime string tag:

    "real"      additive reals
    "circle"    reals mod 2*pi
    "cylinder"  a real part plus an angle mod 2*pi (complex numbers mod 2*pi*i)
    "zd:<n>"    integers mod n

Mixed-kind arithmetic is an error, never a coercion.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

TWO_PI = 2.0 * math.pi

DEFAULT_TOL = 1e-9

PairIndex = Tuple[int, int]
TripleIndex = Tuple[int, int, int]


class GroupKindError(ValueError):
    pass


def _norm_angle(a: float) -> float:
    a = math.fmod(a, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    # fmod can land exactly on 2*pi after the correction
    if a >= TWO_PI:
        a -= TWO_PI
    return a


def _cyclic_modulus(kind: str) -> Optional[int]:
    if kind.startswith("zd:"):
        n = int(kind[3:])
        if n < 1:
            raise GroupKindError(f"bad cyclic modulus in kind {kind!r}")
        return n
    return None


def check_kind(kind: str) -> str:
    if kind in ("real", "circle", "cylinder"):
        return kind
    if _cyclic_modulus(kind) is not None:
        return kind
    raise GroupKindError(f"unknown group kind {kind!r}")


@dataclass(frozen=True)
class GroupElement:
    """A value in one of the supported coefficient groups, normalized on construction.

    value is a float for "real" and "circle", a (real, angle) pair for
    "cylinder", and an int residue for "zd:<n>".
    """

    kind: str
    value: object

    def __post_init__(self):
        check_kind(self.kind)
        n = _cyclic_modulus(self.kind)
        if n is not None:
            object.__setattr__(self, "value", int(self.value) % n)
        elif self.kind == "circle":
            object.__setattr__(self, "value", _norm_angle(float(self.value)))
        elif self.kind == "cylinder":
            re, ang = self.value
            object.__setattr__(self, "value", (float(re), _norm_angle(float(ang))))
        else:
            object.__setattr__(self, "value", float(self.value))


def real(x: float) -> GroupElement:
    return GroupElement("real", x)


def circle(angle: float) -> GroupElement:
    return GroupElement("circle", angle)


def cylinder(re: float, angle: float) -> GroupElement:
    return GroupElement("cylinder", (re, angle))


def cyclic(n: int, residue: int) -> GroupElement:
    return GroupElement(f"zd:{n}", residue)


def zero(kind: str) -> GroupElement:
    check_kind(kind)
    if kind == "cylinder":
        return GroupElement(kind, (0.0, 0.0))
    return GroupElement(kind, 0)


def _require_same_kind(a: GroupElement, b: GroupElement):
    if a.kind != b.kind:
        raise GroupKindError(f"kind mismatch: {a.kind!r} vs {b.kind!r}")


def group_add(a: GroupElement, b: GroupElement) -> GroupElement:
    _require_same_kind(a, b)
    if a.kind == "cylinder":
        return GroupElement("cylinder", (a.value[0] + b.value[0], a.value[1] + b.value[1]))
    return GroupElement(a.kind, a.value + b.value)


def group_neg(a: GroupElement) -> GroupElement:
    if a.kind == "cylinder":
        return GroupElement("cylinder", (-a.value[0], -a.value[1]))
    return GroupElement(a.kind, -a.value)


def group_sub(a: GroupElement, b: GroupElement) -> GroupElement:
    return group_add(a, group_neg(b))


def int_scale(n: int, a: GroupElement) -> GroupElement:
    if a.kind == "cylinder":
        return GroupElement("cylinder", (n * a.value[0], n * a.value[1]))
    return GroupElement(a.kind, n * a.value)


def group_sum(kind: str, elements) -> GroupElement:
    acc = zero(kind)
    for e in elements:
        acc = group_add(acc, e)
    return acc


def _angle_dist(a: float, b: float) -> float:
    d = abs(_norm_angle(a) - _norm_angle(b))
    return min(d, TWO_PI - d)


def elements_equal(a: GroupElement, b: GroupElement, tol: float = DEFAULT_TOL) -> bool:
    _require_same_kind(a, b)
    n = _cyclic_modulus(a.kind)
    if n is not None:
        return a.value == b.value
    if a.kind == "real":
        return abs(a.value - b.value) <= tol
    if a.kind == "circle":
        return _angle_dist(a.value, b.value) <= tol
    return abs(a.value[0] - b.value[0]) <= tol and _angle_dist(a.value[1], b.value[1]) <= tol


def is_zero(a: GroupElement, tol: float = DEFAULT_TOL) -> bool:
    return elements_equal(a, zero(a.kind), tol)


def is_d_torsion(a: GroupElement, d: int, tol: float = DEFAULT_TOL) -> bool:
    """True iff d*a is the identity (exact for cyclic kinds)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return is_zero(int_scale(d, a), tol)


def torsion_element(kind: str, d: int, k: int = 1) -> GroupElement:
    """The k-th multiple of the canonical generator of the d-torsion subgroup.

    For "real" only the identity exists.  For "zd:<n>" the d-torsion is
    generated by n/gcd(n,d).
    """
    check_kind(kind)
    if kind == "real":
        return zero(kind)
    if kind == "circle":
        return circle(TWO_PI * k / d)
    if kind == "cylinder":
        return cylinder(0.0, TWO_PI * k / d)
    n = _cyclic_modulus(kind)
    g = math.gcd(n, d)
    return cyclic(n, (n // g) * k)


def torsion_order(kind: str, d: int) -> int:
    """Number of d-torsion elements reachable as multiples of the canonical generator."""
    if kind == "real":
        return 1
    if kind in ("circle", "cylinder"):
        return d
    n = _cyclic_modulus(kind)
    return math.gcd(n, d)


def cyclic_to_cylinder(a: GroupElement) -> GroupElement:
    n = _cyclic_modulus(a.kind)
    if n is None:
        raise GroupKindError(f"expected a zd:<n> element, got {a.kind!r}")
    return cylinder(0.0, TWO_PI * a.value / n)


def random_element(kind: str, rng: random.Random, scale: float = 1.0) -> GroupElement:
    check_kind(kind)
    if kind == "real":
        return real(rng.gauss(0.0, scale))
    if kind == "circle":
        return circle(rng.uniform(0.0, TWO_PI))
    if kind == "cylinder":
        return cylinder(rng.gauss(0.0, scale), rng.uniform(0.0, TWO_PI))
    n = _cyclic_modulus(kind)
    return cyclic(n, rng.randrange(n))


# serialization used by the CLI and the JSON coordinate files

def element_to_json(a: GroupElement):
    if a.kind == "cylinder":
        return [a.value[0], a.value[1]]
    return a.value


def element_from_json(kind: str, data) -> GroupElement:
    check_kind(kind)
    if kind == "cylinder":
        re, ang = data
        return cylinder(re, ang)
    return GroupElement(kind, data)


# ---------------------------------------------------------------------------
# index tables

def hat_pair(i: PairIndex) -> PairIndex:
    return (i[1], i[0])


def hat_triple(j: TripleIndex) -> TripleIndex:
    return (j[1], j[0], j[2])


def rot_plus(j: TripleIndex) -> TripleIndex:
    return (j[1], j[2], j[0])


def rot_minus(j: TripleIndex) -> TripleIndex:
    return (j[2], j[0], j[1])


def op_triple(j: TripleIndex) -> TripleIndex:
    return (j[2], j[1], j[0])


@dataclass(frozen=True)
class IndexTables:
    """Enumerations of the pair/triple index sets for a fixed dimension d.

    All lists are in lexicographic order.  B_zero, i_zero and j_zero are
    populated only for even d; j_prime requires d >= 3.
    """

    d: int
    A: Tuple[PairIndex, ...] = ()
    B: Tuple[TripleIndex, ...] = ()
    A_prime: Tuple[PairIndex, ...] = ()
    A_dprime: Tuple[PairIndex, ...] = ()
    B_prime: Tuple[TripleIndex, ...] = ()
    B_dprime: Tuple[TripleIndex, ...] = ()
    B_star: Tuple[TripleIndex, ...] = ()
    B_zero: Tuple[TripleIndex, ...] = ()
    i_zero: Optional[PairIndex] = None
    j_zero: Optional[TripleIndex] = None
    j_prime: Optional[TripleIndex] = None


def index_tables(d: int) -> IndexTables:
    if d < 2:
        raise ValueError("d must be >= 2")
    A = [(i1, d - i1) for i1 in range(1, d)]
    B = [
        (j1, j2, d - j1 - j2)
        for j1 in range(1, d - 1)
        for j2 in range(1, d - j1)
    ]
    half_lo = (d - 1) // 2
    half_hi = -(-(d - 1) // 2)  # ceil
    A_prime = [i for i in A if i[0] <= half_lo]
    A_dprime = [i for i in A if i[0] <= half_hi]
    cut_lo = (d - 3) // 2 if d >= 3 else 0
    cut_hi = -(-(d - 3) // 2) if d >= 3 else 0
    B_prime = [j for j in B if j[1] == 1 and j[2] <= cut_lo]
    B_dprime = [j for j in B if j[1] == 1 and j[2] <= cut_hi]
    B_star = [j for j in B if max(j) <= half_lo]
    even = d % 2 == 0
    B_zero = [j for j in B if j[1] == d // 2] if even else []
    i_zero = (d // 2, d // 2) if even else None
    j_zero = (d // 2, 1, (d - 2) // 2) if even and d >= 4 else None
    j_prime: Optional[TripleIndex] = None
    if d >= 3:
        if even:
            j_prime = ((d - 2) // 2, 2, (d - 2) // 2)
        else:
            j_prime = ((d - 1) // 2, 1, (d - 1) // 2)
    return IndexTables(
        d=d,
        A=tuple(A),
        B=tuple(B),
        A_prime=tuple(A_prime),
        A_dprime=tuple(A_dprime),
        B_prime=tuple(B_prime),
        B_dprime=tuple(B_dprime),
        B_star=tuple(B_star),
        B_zero=tuple(B_zero),
        i_zero=i_zero,
        j_zero=j_zero,
        j_prime=j_prime,
    )


def dimension_count(d: int, g: int) -> int:
    """Free coordinate count |A|(6g-5) + |B|(4g-4) - (|A'|+|B''|) - 1.

    Asserts agreement with (d^2-1)(2g-2); a mismatch means the index
    enumerations are wrong.
    """
    if d < 2 or g < 2:
        raise ValueError("need d >= 2 and g >= 2")
    t = index_tables(d)
    count = len(t.A) * (6 * g - 5) + len(t.B) * (4 * g - 4) - (len(t.A_prime) + len(t.B_dprime)) - 1
    expected = (d * d - 1) * (2 * g - 2)
    if count != expected:
        raise AssertionError(f"dimension count {count} != (d^2-1)(2g-2) = {expected}")
    return count
