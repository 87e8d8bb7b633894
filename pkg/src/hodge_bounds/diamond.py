"""Hodge diamonds, manifold profiles and the Hodge/Serre symmetry group."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from math import comb
from typing import Mapping, Optional, Union

from .algebra import HodgeVar, MultiPoly, Q


class Infinity(enum.Enum):
    """m(X) when every nonzero holomorphic 1-form is nowhere vanishing."""

    INFINITY = "inf"

    def __str__(self) -> str:
        return "inf"


INFINITY = Infinity.INFINITY
MValue = Union[int, Infinity]


class ProfileError(ValueError):
    pass


class DiamondError(ValueError):
    pass


def parse_m(text: str) -> MValue:
    if str(text).lower() in ("inf", "infinity", "oo"):
        return INFINITY
    return int(text)


@dataclass(frozen=True)
class ManifoldProfile:
    """Discrete invariants of X.

    ``q=None`` means the irregularity stays symbolic. ``albanese`` is the pair
    (k, f): generic and maximal fiber dimension of the Albanese map.
    """

    d: int
    q: Optional[int]
    m: MValue
    albanese: Optional[tuple] = None

    def __post_init__(self):
        if self.d < 1:
            raise ProfileError(f"dimension must be positive, got {self.d}")
        if self.q is not None and self.q < 1:
            raise ProfileError(f"irregularity must be positive, got {self.q}")
        if self.m is not INFINITY and not (isinstance(self.m, int) and 1 <= self.m <= self.d):
            raise ProfileError(f"m must lie in [1, {self.d}] or be INFINITY, got {self.m}")
        if self.albanese is not None:
            k, f = self.albanese
            if not 0 <= k <= f <= self.d:
                raise ProfileError(f"Albanese data needs 0 <= k <= f <= d, got k={k}, f={f}")

    @property
    def l(self) -> Optional[int]:
        if self.albanese is None:
            return None
        k, f = self.albanese
        return max(k, f - 1)

    @property
    def m_finite(self) -> bool:
        return self.m is not INFINITY


# --- symmetry --------------------------------------------------------------


def orbit(d: int, p: int, j: int) -> frozenset:
    """Orbit of (p, j) under Hodge symmetry and Serre duality."""
    return frozenset({(p, j), (j, p), (d - p, d - j), (d - j, d - p)})


def all_orbits(d: int) -> list:
    seen = set()
    out = []
    for p in range(d + 1):
        for j in range(d + 1):
            if (p, j) not in seen:
                orb = orbit(d, p, j)
                seen |= orb
                out.append(orb)
    return out


def representative(d: int, p: int, j: int) -> tuple:
    return min(orbit(d, p, j))


def canonical_var(d: int, v: HodgeVar) -> Union[HodgeVar, int]:
    """Orbit representative of ``v``; h^{0,0} collapses to the constant 1."""
    if not (0 <= v.p <= d and 0 <= v.j <= d):
        raise DiamondError(f"{v} lies outside a diamond of dimension {d}")
    rep = representative(d, v.p, v.j)
    if rep == (0, 0):
        return 1
    return HodgeVar(*rep)


def canonicalize(poly: MultiPoly, d: int) -> MultiPoly:
    return poly.rename(lambda v: canonical_var(d, v))


def free_variables(d: int) -> list:
    """Orbit representatives other than h^{0,0}, in canonical order (q first)."""
    reps = sorted(min(o) for o in all_orbits(d))
    return [HodgeVar(*r) for r in reps if r != (0, 0)]


# --- diamonds --------------------------------------------------------------


@dataclass(frozen=True)
class HodgeDiamond:
    """Table h[p][j] = h^{p,j}. Entries are ints, or MultiPoly for free orbits."""

    d: int
    h: tuple = field(repr=False)

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.h)
        if len(rows) != self.d + 1 or any(len(r) != self.d + 1 for r in rows):
            raise DiamondError(f"diamond of dimension {self.d} needs a {self.d + 1}x{self.d + 1} table")
        object.__setattr__(self, "h", rows)

    def __getitem__(self, pj: tuple):
        p, j = pj
        return self.h[p][j]

    @property
    def q(self):
        return self.h[1][0] if self.d >= 1 else None

    def is_numeric(self) -> bool:
        return all(isinstance(x, int) for row in self.h for x in row)

    def free(self) -> list:
        return sorted({(p, j) for p in range(self.d + 1) for j in range(self.d + 1)
                       if isinstance(self.h[p][j], MultiPoly)})

    def assignment(self) -> dict:
        """Values of the canonical variables; requires a numeric diamond."""
        if not self.is_numeric():
            raise DiamondError(f"diamond has free entries {self.free()}")
        return {v: self.h[v.p][v.j] for v in free_variables(self.d)}

    def to_json(self) -> dict:
        if not self.is_numeric():
            raise DiamondError("only numeric diamonds serialize")
        return {"d": self.d, "h": [list(r) for r in self.h]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, obj) -> "HodgeDiamond":
        if not isinstance(obj, dict) or set(obj) != {"d", "h"}:
            raise DiamondError('diamond JSON must be an object with keys "d" and "h"')
        d, h = obj["d"], obj["h"]
        if not isinstance(d, int) or isinstance(d, bool):
            raise DiamondError('"d" must be an integer')
        if not isinstance(h, list) or not all(isinstance(r, list) for r in h):
            raise DiamondError('"h" must be a list of lists')
        for row in h:
            for x in row:
                if not isinstance(x, int) or isinstance(x, bool):
                    raise DiamondError('"h" entries must be integers')
        return cls(d, h)

    @classmethod
    def loads(cls, text: str) -> "HodgeDiamond":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DiamondError(f"malformed diamond JSON: {exc}") from exc
        return cls.from_json(obj)


@dataclass
class ValidationReport:
    violations: list

    @property
    def valid(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        return "valid" if self.valid else "; ".join(self.violations)


def validate_diamond(dm: HodgeDiamond, pf: ManifoldProfile) -> ValidationReport:
    if dm.d != pf.d:
        raise DiamondError(f"diamond dimension {dm.d} does not match profile dimension {pf.d}")
    d = dm.d
    out = []
    if dm[0, 0] != 1:
        out.append("h^{0,0} must be 1")
    for p in range(d + 1):
        for j in range(d + 1):
            x = dm[p, j]
            if isinstance(x, int) and x < 0:
                out.append(f"negative entry at ({p},{j})")
    for p in range(d + 1):
        for j in range(p + 1, d + 1):
            if dm[p, j] != dm[j, p]:
                out.append(f"Hodge symmetry violated at ({p},{j}): h^{{{p},{j}}}={dm[p, j]} but h^{{{j},{p}}}={dm[j, p]}")
    for p in range(d + 1):
        for j in range(d + 1):
            if (p, j) < (d - p, d - j) and dm[p, j] != dm[d - p, d - j]:
                out.append(f"Serre duality violated at ({p},{j}): h^{{{p},{j}}}={dm[p, j]} but h^{{{d - p},{d - j}}}={dm[d - p, d - j]}")
    if pf.q is not None and d >= 1 and dm[1, 0] != pf.q:
        out.append(f"h^{{1,0}}={dm[1, 0]} differs from profile irregularity q={pf.q}")
    return ValidationReport(out)


def abelian_diamond(d: int) -> HodgeDiamond:
    """Hodge table of a d-dimensional complex torus."""
    if d < 1:
        raise DiamondError("dimension must be positive")
    return HodgeDiamond(d, [[comb(d, p) * comb(d, j) for j in range(d + 1)] for p in range(d + 1)])


def partial_diamond(d: int, assignments: Mapping[tuple, int]) -> HodgeDiamond:
    """Close a partial table under the symmetry group.

    Orbits without an assigned entry hold the symbolic variable of their
    representative. h^{0,0} is always 1.
    """
    values: dict = {}
    for (p, j), val in assignments.items():
        if not (0 <= p <= d and 0 <= j <= d):
            raise DiamondError(f"index ({p},{j}) outside a diamond of dimension {d}")
        rep = representative(d, p, j)
        if rep in values and values[rep][1] != val:
            other = values[rep][0]
            raise DiamondError(f"entries ({other[0]},{other[1]})={values[rep][1]} and ({p},{j})={val} share an orbit but disagree")
        values[rep] = ((p, j), val)
    if (0, 0) in values and values[(0, 0)][1] != 1:
        raise DiamondError("h^{0,0} must be 1")
    table = [[None] * (d + 1) for _ in range(d + 1)]
    for p in range(d + 1):
        for j in range(d + 1):
            rep = representative(d, p, j)
            if rep == (0, 0):
                table[p][j] = 1
            elif rep in values:
                table[p][j] = values[rep][1]
            else:
                table[p][j] = MultiPoly.var(HodgeVar(*rep))
    return HodgeDiamond(d, table)


def diamond_from_assignment(d: int, assignment: Mapping[HodgeVar, int]) -> HodgeDiamond:
    return partial_diamond(d, {(v.p, v.j): int(x) for v, x in assignment.items()})


__all__ = [
    "INFINITY", "Infinity", "ManifoldProfile", "HodgeDiamond", "ValidationReport",
    "ProfileError", "DiamondError", "validate_diamond", "abelian_diamond",
    "partial_diamond", "orbit", "all_orbits", "representative", "canonical_var",
    "canonicalize", "free_variables", "parse_m", "diamond_from_assignment", "Q",
]
