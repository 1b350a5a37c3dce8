"""Match the invariants of a defective 4-fold against the known case list.

The table below records, for each case (i)-(xviii), the invariant values it
is compatible with.  A report is matched against every row; structural tags
("scroll", "smooth-claimed") only remove candidates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

__all__ = ["CaseRule", "CaseMatch", "CASE_TABLE", "ClassificationError", "classify_fourfold"]

CASE_ORDER = ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi", "xii",
              "xiii", "xiv", "xv", "xvi", "xvii", "xviii")


class ClassificationError(ValueError):
    """The report is outside the classifier's domain (wrong dimension or not defective)."""


@dataclass(frozen=True)
class CaseRule:
    case: str
    description: str
    basis: str
    cone: bool
    fgamma: frozenset  # allowed (f, gamma) pairs
    r_min: int = 0
    r_max: int = 10**9
    epsilon: frozenset | None = None
    vertex_dims: frozenset | None = None
    scroll_case: bool = False
    smooth_case: bool = False
    note: str = ""

    def mismatches(self, rep) -> list[str]:
        out = []
        if rep.is_cone != self.cone:
            out.append("cone" if self.cone else "not a cone")
        if (rep.f, rep.gamma) not in self.fgamma:
            pairs = ", ".join(f"(f={f}, gamma={g})" for f, g in sorted(self.fgamma))
            out.append(f"needs {pairs}")
        if not self.r_min <= rep.r <= self.r_max:
            out.append(f"needs {self.r_min} <= r <= {self.r_max}" if self.r_max < 10**9
                       else f"needs r >= {self.r_min}")
        if self.epsilon is not None and rep.epsilon not in self.epsilon:
            out.append(f"needs epsilon in {sorted(self.epsilon)}")
        if self.vertex_dims is not None and rep.vertex_dim not in self.vertex_dims:
            out.append(f"needs vertex dimension in {sorted(self.vertex_dims)}")
        return out


def _pairs(*pairs: tuple[int, int]) -> frozenset:
    return frozenset(pairs)


ALL_F1 = _pairs((1, 1), (1, 2), (1, 3))

CASE_TABLE: tuple[CaseRule, ...] = (
    CaseRule("i", "cone", "cones", True,
             _pairs((1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)), scroll_case=True),
    CaseRule("ii", "sits in a 5- or 6-dimensional cone over a curve",
             "f = n-2 bucket; first species, reducible", False, _pairs((2, 3), (1, 3))),
    CaseRule("iii", "sits in a 5-dimensional cone over a surface",
             "f = n-2 bucket; second and first species", False, _pairs((2, 3), (1, 2), (1, 3))),
    CaseRule("iv", "Seg(2,2) in P^8", "f = n-2 bucket", False, _pairs((2, 2)), 8, 8,
             smooth_case=True),
    CaseRule("v", "scroll in 3-spaces as in the first scroll example", "scrolls in 3-spaces",
             False, ALL_F1, 9, scroll_case=True),
    CaseRule("vi", "scroll in 3-spaces as in the second scroll example", "scrolls in 3-spaces",
             False, ALL_F1, 9, scroll_case=True),
    CaseRule("vii", "scroll in 3-spaces as in the third scroll example, r = 9",
             "scrolls in 3-spaces", False, ALL_F1, 9, 9, scroll_case=True),
    CaseRule("viii", "internal projection of V(4,2) from finitely many points", "top species",
             False, _pairs((1, 1)), 9, 14, smooth_case=True),
    CaseRule("ix", "projection of V(4,2) from the plane of a conic, r = 11", "top species", False,
             _pairs((1, 1)), 11, 11, epsilon=frozenset({2}), smooth_case=True),
    CaseRule("x", "projection of V(4,2) from the span of a rational normal quartic, r = 9",
             "top species", False, _pairs((1, 1)), 9, 9, smooth_case=True),
    CaseRule("xi", "hyperplane section of Seg(2,3), r = 10", "top species, reducible", False,
             _pairs((1, 1)), 10, 10, epsilon=frozenset({2}), smooth_case=True),
    CaseRule("xii", "r = 9, in a cone over a section of Seg(2,2) or a point-cone over Seg(2,2)",
             "second species", False, _pairs((1, 2)), 9, 9, smooth_case=True,
             note="smooth only in the point-cone over Seg(2,2) subcase"),
    CaseRule("xiii", "in a line-vertex cone over a projection of V(3,2), 9 <= r <= 11",
             "second species", False, _pairs((1, 2)), 9, 11),
    CaseRule("xiv", "r = 9, in a 6-dimensional cone over V(2,2)", "first species, irreducible",
             False, _pairs((1, 3)), 9, 9),
    CaseRule("xv", "r = 9, in a line-vertex cone over a defective 3-fold in P^7",
             "second species", False, _pairs((1, 2)), 9, 9),
    CaseRule("xvi", "swept by a 3-dimensional family of lines, singular along a linear space",
             "second species", False, _pairs((1, 2)), 9, 13, epsilon=frozenset({2, 3})),
    CaseRule("xvii", "swept by a 4-dimensional family of surfaces spanning 4-spaces",
             "second species", False, _pairs((1, 2)), 9, smooth_case=True,
             note="no known example"),
    CaseRule("xviii", "general projection to P^9 sits in a 6-dimensional cone over V(2,2)",
             "first species", False, _pairs((1, 3)), 9),
)


@dataclass
class CaseMatch:
    cases: list
    confidence: str
    rationale: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    @property
    def determined(self) -> bool:
        return self.confidence == "determined"

    def to_dict(self) -> dict:
        return {"cases": list(self.cases), "confidence": self.confidence,
                "rationale": dict(self.rationale), "notes": dict(self.notes)}

    def __str__(self) -> str:
        labels = ", ".join(f"({c})" for c in self.cases)
        if self.determined:
            return f"case {labels}"
        return f"candidate cases {labels}" if self.cases else "no matching case"


def classify_fourfold(rep, tags: Iterable[str] | None = None) -> CaseMatch:
    """Cases of the 4-fold classification compatible with ``rep``.

    ``tags`` defaults to the tags recorded in the report.
    """
    if rep.n != 4:
        raise ClassificationError(f"only 4-folds are classified (n = {rep.n})")
    if not rep.delta or rep.delta <= 0:
        raise ClassificationError("non-defective varieties are not classified")
    if rep.gamma is None:
        raise ClassificationError("report lacks the contact defect")
    tags = set(rep.tags if tags is None else tags)
    rationale: dict[str, str] = {}
    notes: dict[str, str] = {}
    eps_gamma_violation = rep.epsilon == rep.n - 1 and rep.gamma < rep.n - 1
    keep = []
    for rule in CASE_TABLE:
        why = rule.mismatches(rep)
        if eps_gamma_violation:
            why.append("epsilon = n-1 forces gamma = n-1")
        if "scroll" in tags and rep.f == 1 and not rule.scroll_case:
            why.append("tagged scroll")
        if "smooth-claimed" in tags and not rule.smooth_case:
            why.append("tagged smooth")
        if why:
            rationale[rule.case] = "excluded: " + "; ".join(why)
            continue
        rationale[rule.case] = f"compatible ({rule.basis})"
        keep.append(rule.case)
        if rule.note:
            notes[rule.case] = rule.note
        if rule.case == "i" and rep.f == 3:
            notes["i"] = ("cone over a curve" if rep.vertex_dim == 2
                          else "cone over V(2,2)" if rep.vertex_dim == 1 else "cone")
    keep.sort(key=CASE_ORDER.index)
    confidence = "determined" if len(keep) == 1 else "candidate set" if keep else "inconsistent"
    return CaseMatch(keep, confidence, rationale, notes)
