"""Lifting obstruction for projective surface-group representations.

A closed genus-g surface group has one-relator presentations whose relator
word uses each generator exactly twice, once inverted.  Given unit
determinant matrix lifts of the generator images, the product along the
relator is a scalar matrix, and the scalar is a d-th root of unity whose
log is independent of every choice made (lifts, ordering, conjugation).
That log is the obstruction to lifting the representation from the
projective group to the special linear group.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import algebra as al
from .cocyclic import TorsionValue
from .flags import matrix_from_json, matrix_to_json

DET_TOL = 1e-8
SCALAR_TOL = 1e-6


@dataclass(frozen=True)
class RelatorWord:
    """Cyclic word of signed generators; each generator occurs twice, once
    inverted."""

    symbols: Tuple[Tuple[str, int], ...]

    def __post_init__(self):
        seen: Dict[str, List[int]] = {}
        for name, exp in self.symbols:
            if exp not in (1, -1):
                raise ValueError(f"exponent must be +-1, got {exp}")
            seen.setdefault(name, []).append(exp)
        for name, exps in seen.items():
            if sorted(exps) != [-1, 1]:
                raise ValueError(f"generator {name} must occur exactly twice, once inverted")

    def __len__(self) -> int:
        return len(self.symbols)

    def generators(self) -> Tuple[str, ...]:
        out: List[str] = []
        for name, _ in self.symbols:
            if name not in out:
                out.append(name)
        return tuple(out)

    def pairing(self) -> Dict[int, int]:
        where: Dict[str, List[int]] = {}
        for k, (name, _) in enumerate(self.symbols):
            where.setdefault(name, []).append(k)
        out: Dict[int, int] = {}
        for a, b in where.values():
            out[a] = b
            out[b] = a
        return out

    def rotated(self, k: int) -> "RelatorWord":
        k %= len(self.symbols)
        return RelatorWord(self.symbols[k:] + self.symbols[:k])


def standard_relator(g: int) -> RelatorWord:
    if g < 2:
        raise ValueError(f"genus {g} < 2")
    syms: List[Tuple[str, int]] = []
    for i in range(1, g + 1):
        syms += [(f"a{i}", 1), (f"b{i}", 1), (f"a{i}", -1), (f"b{i}", -1)]
    return RelatorWord(tuple(syms))


def unit_determinant(m: np.ndarray) -> np.ndarray:
    """Rescale to determinant one by a principal d-th root."""
    m = np.asarray(m, dtype=complex)
    d = m.shape[0]
    det = np.linalg.det(m)
    if abs(det) < 1e-12:
        raise ValueError("matrix is singular")
    return m / det ** (1.0 / d)


@dataclass(frozen=True)
class LiftedRep:
    """One unit-determinant lift per generator; inverted occurrences use the
    matrix inverse, so paired positions agree by construction."""

    relator: RelatorWord
    d: int
    matrices: Mapping[str, np.ndarray]

    def position_matrix(self, i: int) -> np.ndarray:
        name, exp = self.relator.symbols[i]
        m = self.matrices[name]
        return m if exp == 1 else np.linalg.inv(m)

    def product(self) -> np.ndarray:
        out = np.eye(self.d, dtype=complex)
        for i in range(len(self.relator)):
            out = out @ self.position_matrix(i)
        return out


def lifted_rep(relator: RelatorWord, matrices: Mapping[str, np.ndarray],
               tol: float = DET_TOL) -> LiftedRep:
    mats: Dict[str, np.ndarray] = {}
    d = None
    for name in relator.generators():
        if name not in matrices:
            raise ValueError(f"missing matrix for generator {name}")
        m = np.asarray(matrices[name], dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"matrix for {name} is not square")
        if d is None:
            d = m.shape[0]
        elif m.shape[0] != d:
            raise ValueError("generator matrices have mixed sizes")
        if abs(np.linalg.det(m) - 1.0) > tol:
            raise ValueError(f"matrix for {name} does not have unit determinant")
        mats[name] = m
    assert d is not None
    return LiftedRep(relator=relator, d=d, matrices=mats)


@dataclass(frozen=True)
class ObValue:
    torsion: TorsionValue
    residue: int
    residual: float

    @property
    def value(self) -> al.GroupElement:
        return self.torsion.value


def ob(rep: LiftedRep, scalar_tol: float = SCALAR_TOL) -> ObValue:
    d = rep.d
    p = rep.product()
    s = np.trace(p) / d
    off = np.linalg.norm(p - s * np.eye(d)) / max(np.linalg.norm(p), 1e-30)
    if off > scalar_tol:
        raise ValueError(f"relator product is not scalar (off-scalar residual {off:.3e})")
    phase = cmath.phase(complex(s))
    k = round(d * phase / al.TWO_PI) % d
    snapped = al.TWO_PI * k / d
    residual = max(abs(math.log(abs(s))),
                   abs((phase - snapped + math.pi) % al.TWO_PI - math.pi))
    if residual > scalar_tol:
        raise ValueError(f"scalar {s} is not a {d}-th root of unity (residual {residual:.3e})")
    return ObValue(torsion=TorsionValue(value=al.torsion_element("cylinder", d, k), d=d),
                   residue=k, residual=max(residual, off))


# -- builders -----------------------------------------------------------------


def identity_rep(d: int, g: int = 2) -> LiftedRep:
    rel = standard_relator(g)
    eye = np.eye(d, dtype=complex)
    return lifted_rep(rel, {name: eye for name in rel.generators()})


def clock_shift_rep(d: int, g: int = 2) -> LiftedRep:
    if d < 2:
        raise ValueError(f"d={d} < 2")
    rel = standard_relator(g)
    omega = cmath.exp(2j * math.pi / d)
    shift = unit_determinant(np.roll(np.eye(d, dtype=complex), 1, axis=0))
    clock = unit_determinant(np.diag([omega ** k for k in range(d)]))
    mats = {name: np.eye(d, dtype=complex) for name in rel.generators()}
    mats["a1"] = shift
    mats["b1"] = clock
    return lifted_rep(rel, mats)


def diagonal_rep(d: int, g: int, rng: random.Random) -> LiftedRep:
    rel = standard_relator(g)
    mats = {}
    for name in rel.generators():
        entries = [cmath.exp(complex(rng.gauss(0, 0.5), rng.uniform(0, al.TWO_PI)))
                   for _ in range(d - 1)]
        entries.append(1.0 / np.prod(entries))
        mats[name] = np.diag(entries)
    return lifted_rep(rel, mats)


def symmetric_power(m: np.ndarray, d: int) -> np.ndarray:
    """Induced action on degree d-1 binary forms, in the binomial-weighted
    monomial basis."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    if abs(np.linalg.det(m) - 1.0) > 1e-10:
        raise ValueError("determinant violation: input must be unimodular")
    a, b = m[0, 0], m[0, 1]
    c, e = m[1, 0], m[1, 1]
    out = np.zeros((d, d), dtype=complex)
    for col in range(1, d + 1):
        first = np.array([math.comb(d - col, p) * a ** (d - col - p) * c ** p
                          for p in range(d - col + 1)])
        second = np.array([math.comb(col - 1, q) * b ** (col - 1 - q) * e ** q
                           for q in range(col)])
        coeffs = np.convolve(first, second)
        for t in range(1, d + 1):
            out[t - 1, col - 1] = (math.comb(d - 1, col - 1) / math.comb(d - 1, t - 1)
                                   ) * coeffs[t - 1]
    return out


_OCTAGON_WORD = RelatorWord((("g0", 1), ("g1", -1), ("g2", 1), ("g3", -1),
                             ("g0", -1), ("g1", 1), ("g2", -1), ("g3", 1)))


def fuchsian_octagon(d: int = 2) -> LiftedRep:
    """Hyperbolic-translation generators of a regular-octagon genus-2 group,
    optionally pushed through the degree d-1 symmetric power.

    The relator product is verified to be the identity before returning.
    """
    s2 = math.sqrt(2.0)
    base = np.array([[1 + s2, math.sqrt(2 + 2 * s2)],
                     [math.sqrt(2 + 2 * s2), 1 + s2]], dtype=complex)

    def rot(phi: float) -> np.ndarray:
        ch, sh = math.cos(phi / 2), math.sin(phi / 2)
        return np.array([[ch, sh], [-sh, ch]], dtype=complex)

    gens = {}
    for k in range(4):
        r = rot(k * math.pi / 4)
        m = unit_determinant(r @ base @ r.T)
        gens[f"g{k}"] = m if d == 2 else symmetric_power(m, d)
    rep = lifted_rep(_OCTAGON_WORD, gens)
    resid = np.linalg.norm(rep.product() - np.eye(d)) / math.sqrt(d)
    if resid > 1e-6:
        raise AssertionError(f"octagon relator residual degraded to {resid:.3e}")
    return rep


# -- invariance checks ----------------------------------------------------------


def lift_independence(rep: LiftedRep, rng: Optional[random.Random] = None,
                      tol: float = 1e-9) -> bool:
    rng = rng or random.Random(0)
    reference = ob(rep)
    d = rep.d
    rescaled = {name: m * cmath.exp(2j * math.pi * rng.randrange(d) / d)
                for name, m in rep.matrices.items()}
    variants = [LiftedRep(rep.relator, d, rescaled)]
    for k in (1, 4, len(rep.relator) - 1):
        variants.append(LiftedRep(rep.relator.rotated(k), d, rep.matrices))
    return all(
        ob(v).residue == reference.residue
        and al.elements_equal(ob(v).value, reference.value, tol)
        for v in variants
    )


# -- serialization ----------------------------------------------------------------


def rep_to_json(rep: LiftedRep) -> dict:
    genus = len(rep.relator) // 4
    return {
        "d": rep.d,
        "genus": genus,
        "matrices": {name: matrix_to_json(m) for name, m in sorted(rep.matrices.items())},
    }


def rep_from_json(doc: dict) -> LiftedRep:
    rel = standard_relator(int(doc["genus"]))
    mats = {name: matrix_from_json(cols) for name, cols in doc["matrices"].items()}
    rep = lifted_rep(rel, mats)
    if rep.d != int(doc["d"]):
        raise ValueError(f"matrix size {rep.d} does not match declared d={doc['d']}")
    return rep
