"""Classification of Pearson pairs into the H and Q families.

After dividing by ``d`` (so ``psi = z + e``) the case is decided by the degree
of ``phi = a z^2 + b z + c``:

* degree 0: ``H(-1, -c)`` shifted by ``-e``;
* degree 1: ``H(b^2 - 1, b e - c)`` with ``sqrt(a+1) = b``, shifted by ``-e``;
* degree 2: ``Q(1/(2a), r1/(2a), r2/(2a))`` shifted by ``-b/(2a)``, where
  ``r1 = (sqrt(D1) + sqrt(D2))/2``, ``r2 = (sqrt(D1) - sqrt(D2))/2``,
  ``D1 = (b+1)^2 - 4a(e+c)`` and ``D2 = (b-1)^2 - 4a(c-e)``.

The shift is the affine ``mu`` of :mod:`bilattice.families`, so for instance
degree 0 gives ``B_n = -e``.

Branch rule for the degree-2 roots: ``sqrt(D1)`` is the principal root (or
the extension generator), ``sqrt(D2)`` is principal, expressed in the same
extension when needed.  Other branches permute or negate ``(r1, r2)``, which
the Q-family symmetry ``Q(a,b,c) = Q(a,c,b) = Q(a,-c,-b)`` absorbs.  When the
two roots need independent extensions the family is still identified, via
``r1 r2`` and ``r1^2 + r2^2``, which are rational in the pair's coefficients.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .classical import PearsonPair
from .errors import NeedsTwoExtensions, RegularityError
from .families import (AffineMap, FamilyDescriptor, H, Q, affine_transform,
                       family_recurrence, q_values, table_from_values)
from .poly import Poly, limit_at_zero, perturbed
from .scalar import ONE, ExactScalar, root_of
from .table import RecurrenceTable

DEG_PHI0, DEG_PHI1, DEG_PHI2 = "DegPhi0", "DegPhi1", "DegPhi2"


def _normalized_coeffs(p: PearsonPair):
    if p.d.is_zero():
        raise RegularityError("deg psi != 1: such a pair has no regular solution")
    q, factor = p.normalized()
    return q.a, q.b, q.c, q.e, factor


def quartic_coefficients(p: PearsonPair) -> list:
    """Ascending coefficients of the degree-4 factor of C_{n+1} (normalized pair)."""
    a, b, c, e, _ = _normalized_coeffs(p)
    return [c - b * e + a * e * e, 1 - b * b + 4 * a * c,
            a * (5 + 4 * a * c - b * b), 8 * a * a, 4 * a * a * a]


def discriminants(p: PearsonPair) -> tuple[ExactScalar, ExactScalar]:
    a, b, c, e, _ = _normalized_coeffs(p)
    return (b + 1) * (b + 1) - 4 * a * (e + c), (b - 1) * (b - 1) - 4 * a * (c - e)


def _roots(p: PearsonPair) -> tuple[ExactScalar, ExactScalar]:
    d1, d2 = discriminants(p)
    s1 = root_of(d1)
    try:
        s2 = root_of(d2, s1.ext)
    except NeedsTwoExtensions:
        raise NeedsTwoExtensions([d1, d2]) from None
    return s1, s2


def quartic_roots(p: PearsonPair) -> tuple:
    """``(alpha1, alpha2, alpha3, alpha4)`` with
    ``phi4(n) = 4 (a n + alpha1)(a n + alpha2)(a n + alpha3)(n + alpha4)``.
    """
    a, _, _, _, _ = _normalized_coeffs(p)
    if a.is_zero():
        raise ValueError("quartic roots need deg phi = 2")
    s1, s2 = _roots(p)
    quarter = ONE / 4
    a1 = ONE / 2 + (s1 + s2) * quarter
    a2 = ONE / 2 + (s1 - s2) * quarter
    return a1, a2, 1 - a2, (1 - a1) / a


def quartic_from_roots(a: ExactScalar, alphas) -> Poly:
    a1, a2, a3, a4 = alphas
    return (Poly([a1, a]) * Poly([a2, a]) * Poly([a3, a]) * Poly([a4, 1])) * 4


def case3_values(p: PearsonPair, n: int) -> tuple[ExactScalar, ExactScalar]:
    """B_n and C_{n+1} of a degree-2 pair from
    ``B_n = -(2ab n^2 + 2(1-a) b n + (1-2a) e) / ((2an - 2a + 1)(2an + 1))`` and
    ``C_{n+1} = -(n+1)(an - a + 1) phi4(n) / ((2an - a + 1)(2an + 1)^2 (2an + a + 1))``
    for the normalized pair, rescaled by the normalizing factor.
    """
    a0, b, c, e, factor = _normalized_coeffs(p)
    a = perturbed(a0)
    b_n = -(2 * a * b * n * n + 2 * (1 - a) * b * n + (1 - 2 * a) * e) / (
        (2 * a * n - 2 * a + 1) * (2 * a * n + 1))
    phi4 = c - b * e + a * e * e + (1 - b * b + 4 * a * c) * n + a * (5 + 4 * a * c - b * b) * n ** 2 \
        + 8 * a * a * n ** 3 + 4 * a * a * a * n ** 4
    c_next = -(n + 1) * (a * n - a + 1) * phi4 / (
        (2 * a * n - a + 1) * (2 * a * n + 1) ** 2 * (2 * a * n + a + 1))
    return limit_at_zero(b_n), limit_at_zero(c_next)


@dataclass(frozen=True)
class Classification:
    case: str
    descriptor: Optional[FamilyDescriptor]
    amap: AffineMap
    normalization: ExactScalar
    roots: Optional[tuple] = None
    quartic: Optional[tuple] = None
    symmetric: Optional[tuple] = None          # (a_Q, r1 r2, r1^2 + r2^2) for DegPhi2
    note: str = ""

    @property
    def family(self) -> str:
        return "Q" if self.case == DEG_PHI2 else "H"

    def family_table(self, N: int) -> RecurrenceTable:
        """The untransformed H or Q table."""
        if self.descriptor is not None:
            return family_recurrence(self.descriptor, N)
        a_q, prod, sq = self.symmetric
        # Q(aQ, r1/(2a), r2/(2a)) has bc = r1 r2 * aQ^2 and b^2 + c^2 = (r1^2 + r2^2) aQ^2
        return table_from_values(
            lambda n: q_values(a_q, prod * a_q * a_q, sq * a_q * a_q, n), N)

    def table(self, N: int) -> RecurrenceTable:
        """The recurrence table of the classified pair, rebuilt from the family."""
        return affine_transform(self.family_table(N), self.amap)

    def to_json(self) -> dict:
        out = {
            "case": self.case,
            "family": self.family,
            "params": ({k: str(v) for k, v in self.descriptor.params}
                       if self.descriptor is not None else None),
            "map": self.amap.to_json(),
            "normalization": str(self.normalization),
        }
        if self.descriptor is not None and self.descriptor.kind == "H":
            out["branch"] = self.descriptor.branch
        if self.symmetric is not None:
            out["symmetric_params"] = {"a": str(self.symmetric[0]),
                                       "r1r2": str(self.symmetric[1]),
                                       "r1sq_plus_r2sq": str(self.symmetric[2])}
        if self.roots is not None:
            out["roots"] = {"r1": str(self.roots[0]), "r2": str(self.roots[1])}
        if self.quartic is not None:
            out["quartic"] = [str(x) for x in self.quartic]
        if self.note:
            out["note"] = self.note
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def classify(p: PearsonPair) -> Classification:
    a, b, c, e, factor = _normalized_coeffs(p)
    if a.is_zero() and b.is_zero():
        return Classification(DEG_PHI0, H(-1, -c), AffineMap(1, -e), factor)
    if a.is_zero():
        root = root_of(b * b)
        branch = 1 if root == b else -1
        desc = H(b * b - 1, b * e - c, branch, root.ext)
        return Classification(DEG_PHI1, desc, AffineMap(1, -e), factor)
    a_q = ONE / (2 * a)
    amap = AffineMap(1, -b * a_q)
    symmetric = (a_q, b - 2 * a * e, b * b + 1 - 4 * a * c)
    quartic = tuple(quartic_coefficients(p))
    try:
        s1, s2 = _roots(p)
    except NeedsTwoExtensions as exc:
        note = ("sqrt(D1) and sqrt(D2) need independent extensions "
                f"(D1={exc.discriminants[0]}, D2={exc.discriminants[1]}); "
                "family given through symmetric parameters")
        return Classification(DEG_PHI2, None, amap, factor, None, quartic, symmetric, note)
    r1, r2 = (s1 + s2) / 2, (s1 - s2) / 2
    desc = Q(a_q, r1 * a_q, r2 * a_q)
    return Classification(DEG_PHI2, desc, amap, factor, (r1, r2), quartic, symmetric)


def q_equivalent(x: FamilyDescriptor, y: FamilyDescriptor) -> bool:
    """Equality up to ``Q(a,b,c) = Q(a,c,b) = Q(a,-c,-b)`` (and their composites)."""
    if x.kind != "Q" or y.kind != "Q":
        return x == y
    a, b, c = (x[k] for k in ("a", "b", "c"))
    orbit = {(b, c), (c, b), (-c, -b), (-b, -c)}
    return y["a"] == a and (y["b"], y["c"]) in orbit
