"""Published inequality forms for m = d, stored as data.

These are typed in by hand and never derived from the engine, so the
reproduction table compares two independent sources. Polynomials use the
``MultiPoly.parse`` syntax; Hodge numbers may be written with any index pair in
their symmetry orbit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class InequalityFixture:
    """``lhs >= rhs`` as published."""

    label: str
    d: int
    lhs: str
    rhs: str
    note: str = ""


@dataclass(frozen=True)
class QuadraticFixture:
    """``target >= linear + coef * sqrt(radicand)`` as published."""

    label: str
    d: int
    target: tuple
    linear: str
    coef: str
    radicand: str
    checkable: bool = True
    note: str = ""


FIRST_ORDER = (
    InequalityFixture("threefold h^{0,2} first-order", 3, "h[0,2]", "2*q - 3"),
    InequalityFixture("threefold h^{1,1} first-order", 3, "h[1,1]", "2*q"),
    InequalityFixture("fourfold h^{1,2} from h^{1,1}", 4, "h[1,2]", "2*h[1,1] - 3*q"),
    InequalityFixture("fourfold h^{1,2} from h^{0,2}", 4, "h[1,2]", "2*h[0,2]"),
    InequalityFixture("fourfold h^{0,3} first-order", 4, "h[0,3]", "2*h[0,2] - 3*q + 4"),
    InequalityFixture("fivefold h^{0,4} first-order", 5, "h[0,4]", "4*q - 3*h[0,2] + 2*h[0,3] - 5"),
    InequalityFixture("fivefold h^{1,4} first-order", 5, "h[1,4]", "4*h[1,1] - 3*h[1,2] + 2*h[1,3]",
                      note="no first coefficient of any defined series has this form; the closest is "
                           "h[1,3] - 2*h[1,2] + 3*h[1,1] - 4*q"),
    InequalityFixture("fivefold h^{2,2} first-order", 5, "h[2,2]", "2*h[1,2] - 3*h[0,2]"),
)

QUADRATIC = (
    QuadraticFixture("threefold h^{0,2} second-order", 3, (0, 2), "2*q - 7/2", "1/2", "8*q - 23"),
    QuadraticFixture("threefold h^{1,1} second-order", 3, (1, 1), "2*q - 1/2", "1/2", "8*q + 1"),
    QuadraticFixture("fourfold h^{0,3} second-order", 4, (0, 3), "2*h[0,2] - 3*q + 7/2", "1/2",
                     "8*h[0,2] - 24*q + 49"),
    QuadraticFixture("fourfold h^{1,2} second-order from h^{1,1}", 4, (1, 2), "2*h[1,1] - 3*q", "1",
                     "4*h[1,1] - 9*q",
                     note="the second coefficient solves to 2*h[1,1] - 3*q - 1/2 + sqrt(8*h[1,1] - 24*q + 1)/2"),
    QuadraticFixture("fourfold h^{1,2} second-order from h^{0,2}", 4, (1, 2), "2*h[0,2] - 1/2", "1/2",
                     "8*h[0,2] + 1"),
    QuadraticFixture("fivefold h^{0,4} second-order", 5, (0, 4), "4*q - 3*h[0,2] + 2*h[0,3] - 11/2", "1/2",
                     "48*q - 24*h[0,2] + 8*h[0,3] - 79"),
    QuadraticFixture("fivefold h^{1,4} second-order", 5, (1, 4), "2*h[1,3] + 4*h[1,1] - 3*h[1,2] - 1/2", "1/2",
                     "48*h[1,1] - 24*h[1,2] + 8*h[1,3] + 1", checkable=False,
                     note="built on the first-order h^{1,4} form, which no defined series produces"),
    QuadraticFixture("fivefold h^{2,2} second-order", 5, (2, 2), "2*h[1,2] - 3*h[0,2] - 1/2", "1/2",
                     "8*h[1,2] - 24*h[0,2] + 1"),
)

# chi(omega) is written out: (-1)^d * sum_j (-1)^j h^{0,j}
RANK = (
    InequalityFixture("threefold chi(omega) bound", 3, "h[0,3] - h[0,2] + q - 1", "q - 3"),
    InequalityFixture("threefold h^{1,1} rank bound", 3, "h[1,1]", "2*q - 1"),
    InequalityFixture("threefold h^{1,2} from h^{1,1}", 3, "h[1,2]", "h[1,1] - 2"),
    InequalityFixture("threefold h^{1,2} from h^{0,2}", 3, "h[1,2]", "h[0,2] + q - 1"),
    InequalityFixture("fourfold chi(omega) bound", 4, "1 - q + h[0,2] - h[0,3] + h[0,4]", "q - 4"),
    InequalityFixture("fourfold h^{2,2} rank bound", 4, "h[2,2]", "h[1,2] - h[0,2] + q - 2"),
    InequalityFixture("fourfold h^{1,3} from h^{1,2}", 4, "h[1,3]", "h[1,2] - h[1,1] + 2*q - 3"),
    InequalityFixture("fourfold h^{1,1} rank bound", 4, "h[1,1]", "2*q - 1"),
    InequalityFixture("fourfold h^{1,2} rank bound", 4, "h[1,2]", "h[2,0] + q - 1"),
    InequalityFixture("fourfold h^{1,3} from h^{0,3}", 4, "h[1,3]", "h[0,3] + q - 1"),
    InequalityFixture("fivefold chi(omega) bound", 5, "-1 + q - h[0,2] + h[0,3] - h[0,4] + h[0,5]", "q - 5"),
    InequalityFixture("fivefold h^{1,4} from h^{1,3}", 5, "h[1,4]", "h[1,3] - h[1,2] + h[1,1] - 4"),
    InequalityFixture("fivefold h^{1,1} rank bound", 5, "h[1,1]", "2*q - 1"),
    InequalityFixture("fivefold h^{2,2} rank bound", 5, "2*h[1,2]", "h[2,2] + h[0,2] + q - 3",
                      note="the rank bound derived from Omega^2 reads h[2,3] + h[1,2] >= h[2,2] + h[0,2] + q - 3"),
    InequalityFixture("fivefold h^{1,2} rank bound", 5, "h[1,2]", "h[0,2] + q - 1"),
    InequalityFixture("fivefold h^{1,2} from h^{1,3}", 5, "h[1,2]", "h[1,3] - h[0,3] + q - 2",
                      note="the rank bound derived from Omega^3 reads h[2,3] >= h[1,3] - h[0,3] + q - 2"),
    InequalityFixture("fivefold h^{1,3} rank bound", 5, "h[1,3]", "h[0,3] + q - 1"),
    InequalityFixture("fivefold h^{1,4} rank bound", 5, "h[1,4]", "h[0,4] + q - 1"),
)


def find(label: str) -> Optional[object]:
    for row in FIRST_ORDER + QUADRATIC + RANK:
        if row.label == label:
            return row
    return None
