"""Named orthogonal families, affine maps between them and identity checks.

Every family is given by closed forms for ``B_n`` and ``C_{n+1}``.  One
parameter is nudged by a formal epsilon and the value taken at epsilon = 0,
so removable singularities (which occur for the finite families) evaluate
correctly.

Affine convention: for a map with scale ``lam`` and shift ``mu``,
``P_n(z) = lam^n Q_n((z - mu)/lam)`` has ``B'_n = lam B_n + mu`` and
``C'_n = lam^2 C_n``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

from .classical import PearsonPair
from .errors import DenominatorError, RegularityError
from .poly import limit_at_zero, perturbed
from .scalar import ONE, ExactScalar, Extension, as_scalar, root_of
from .table import RecurrenceTable

PARAMS: dict[str, tuple] = {
    "H": ("a", "b"),
    "Q": ("a", "b", "c"),
    "Meixner": ("beta", "c"),
    "Charlier": ("a",),
    "Krawtchouk": ("p", "N"),
    "Hahn": ("alpha", "beta", "N"),
    "ParaKrawtchouk": ("mu", "N"),
}

FINITE = ("Krawtchouk", "Hahn", "ParaKrawtchouk")


def _nonneg_int(x: ExactScalar) -> Optional[int]:
    if x.is_rational():
        q = x.to_fraction()
        if q.denominator == 1 and q >= 0:
            return int(q)
    return None


@dataclass(frozen=True)
class FamilyDescriptor:
    """A family kind with exact parameters.

    ``branch`` (+1 or -1) picks the sign of ``sqrt(a + 1)`` in the H family;
    ``ext`` is the quadratic extension that root should live in, if any.
    """

    kind: str
    params: tuple
    branch: int = 1
    ext: Optional[Extension] = None

    @classmethod
    def make(cls, kind: str, branch: int = 1, ext: Optional[Extension] = None,
             **params) -> "FamilyDescriptor":
        if kind not in PARAMS:
            raise ValueError(f"unknown family {kind!r}; expected one of {', '.join(PARAMS)}")
        names = PARAMS[kind]
        missing = [n for n in names if n not in params]
        extra = [n for n in params if n not in names]
        if missing or extra:
            raise ValueError(f"{kind} takes parameters {names}; missing {missing}, unexpected {extra}")
        if branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")
        return cls(kind, tuple((n, as_scalar(params[n])) for n in names), branch, ext)

    def __getitem__(self, name: str) -> ExactScalar:
        return dict(self.params)[name]

    @property
    def param_map(self) -> dict:
        return dict(self.params)

    @property
    def max_index(self) -> Optional[int]:
        """Largest n with P_n defined, for the finite families."""
        if self.kind in FINITE:
            return _nonneg_int(self["N"])
        return None

    def with_branch(self, branch: int) -> "FamilyDescriptor":
        return FamilyDescriptor(self.kind, self.params, branch, self.ext)

    def h_root(self) -> ExactScalar:
        """``branch * sqrt(a + 1)`` for the H family."""
        if self.kind != "H":
            raise ValueError("only the H family has a square-root parameter")
        return root_of(self["a"] + 1, self.ext) * self.branch

    def to_json(self) -> dict:
        out = {"kind": self.kind, "params": {k: str(v) for k, v in self.params}}
        if self.kind == "H":
            out["branch"] = self.branch
        return out

    def __str__(self) -> str:
        body = ", ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.kind}({body})"


def H(a, b, branch: int = 1, ext: Optional[Extension] = None) -> FamilyDescriptor:
    return FamilyDescriptor.make("H", branch, ext, a=a, b=b)


def Q(a, b, c) -> FamilyDescriptor:
    return FamilyDescriptor.make("Q", a=a, b=b, c=c)


# -- closed forms ------------------------------------------------------------------
#
# Each formula is written once with ordinary arithmetic.  It is evaluated at a
# fixed n with one parameter replaced by ``p + eps`` and then at eps = 0, so a
# factor vanishing in both numerator and denominator (for instance
# ``(n + 2a - 1)/(2n + 2a - 1)`` at n = 0, a = 1/2) takes its limiting value.

def _h_forms(n, p, root):
    return -2 * n * root, (p["a"] * n + p["b"]) * (n + 1)


def _q_forms(n, a, bc, q):
    na = a + n
    b_n = (a - 1) * bc / (na * (na - 1))
    quartic = na ** 4 - q * na ** 2 + bc * bc
    c_next = -(n + 1) * quartic * (2 * a + n - 1) / ((2 * a + 2 * n - 1) * na ** 2 * (2 * a + 2 * n + 1))
    return b_n, c_next


# The Meixner and Krawtchouk forms below are the ones the identities with the
# square-root scale are built on.  The recurrences of the actual weights carry
# one more factor in C_{n+1}: c for Meixner, p for Krawtchouk.

def _meixner_forms(n, p):
    beta, c = p["beta"], p["c"]
    return (c * (beta + n) + n) / (1 - c), (beta + n) * (n + 1) / ((1 - c) ** 2)


def _charlier_forms(n, p):
    a = p["a"]
    return a + n, a * (n + 1)


def _krawtchouk_forms(n, p):
    pp, N = p["p"], p["N"]
    return (1 - pp) * n + pp * (N - n), (pp - 1) * (n + 1) * (n - N)


def _hahn_forms(n, p):
    al, be, N = p["alpha"], p["beta"], p["N"]
    s = al + be
    first = (al + n + 1) * (N - n) * (s + n + 1) / ((s + 2 * n + 1) * (s + 2 * n + 2))
    # the second term carries a factor n and is absent for n = 0
    second = 0 if n == 0 else (
        (be + n) * n * (s + N + n + 1) / ((s + 2 * n) * (s + 2 * n + 1)))
    c_next = ((s + n + 1) * (al + n + 1) * (be + n + 1) * (s + N + n + 2) * (N - n) * (n + 1)
              / ((s + 2 * n + 1) * (s + 2 * n + 2) ** 2 * (s + 2 * n + 3)))
    return first + second, c_next


def _para_forms(n, p):
    mu, N = p["mu"], p["N"]
    c_next = (-(n + 1) * (n - N) * (2 * n + 1 - N - mu) * (2 * n + 1 - N + mu)
              / (4 * (2 * n - N) * (2 * n - N + 2)))
    return (N + mu - 1) / 2, c_next


_FORMS = {
    "Meixner": (_meixner_forms, "c"),
    "Charlier": (_charlier_forms, "a"),
    "Krawtchouk": (_krawtchouk_forms, "p"),
    "Hahn": (_hahn_forms, "alpha"),
    "ParaKrawtchouk": (_para_forms, "mu"),
}


def _limits(pair, label: str, n: int):
    out = []
    for name, x in zip(("B", "C"), pair):
        try:
            out.append(limit_at_zero(x))
        except ZeroDivisionError:
            sub = n if name == "B" else n + 1
            raise DenominatorError(f"{label}: {name}_{sub} has a pole", n) from None
    return out


def family_values(desc: FamilyDescriptor, n: int) -> tuple[ExactScalar, ExactScalar]:
    """``(B_n, C_{n+1})`` of the family at index n."""
    p = desc.param_map
    if desc.kind == "H":
        return _limits(_h_forms(n, p, desc.h_root()), str(desc), n)
    if desc.kind == "Q":
        return q_values(p["a"], p["b"] * p["c"], p["b"] ** 2 + p["c"] ** 2, n, str(desc))
    forms, moving = _FORMS[desc.kind]
    p = dict(p)
    p[moving] = perturbed(p[moving])
    try:
        values = forms(n, p)
    except ZeroDivisionError:
        raise DenominatorError(f"{desc}: closed form undefined at n={n}", n) from None
    return _limits(values, str(desc), n)


def q_values(a, bc, b2_plus_c2, n: int, label: str = "Q") -> tuple[ExactScalar, ExactScalar]:
    """Q-family ``(B_n, C_{n+1})`` through ``bc`` and ``b^2 + c^2`` only.

    ``((n+a)^2 - b^2)((n+a)^2 - c^2) = (n+a)^4 - (b^2+c^2)(n+a)^2 + (bc)^2``,
    so no square root of the parameters is ever needed.  The perturbed
    parameter is ``a``.
    """
    try:
        values = _q_forms(n, perturbed(a), as_scalar(bc), as_scalar(b2_plus_c2))
    except ZeroDivisionError:
        raise DenominatorError(f"{label}: closed form undefined at n={n}", n) from None
    return _limits(values, label, n)


def table_from_values(values: Callable[[int], tuple], N: int, m0=1) -> RecurrenceTable:
    """Evaluate ``n -> (B_n, C_{n+1})`` up to N, stopping at a vanishing C."""
    B, C = [], []
    for n in range(N + 1):
        b_n, c_next = values(n)
        B.append(b_n)
        if n == N or c_next.is_zero():
            break
        C.append(c_next)
    return RecurrenceTable.build(B, C, m0, len(B) - 1)


def invariant_violations(desc: FamilyDescriptor, N: int) -> list:
    """Declared parameter constraints broken for indices up to N.

    H: ``a n + b != 0``.  Q: none of ``-2a, -a-b, -a+b, -a-c, -a+c`` is a
    nonnegative integer (only integers <= N are reported).
    """
    p = desc.param_map
    out = []
    if desc.kind == "H":
        for n in range(N + 1):
            if (p["a"] * n + p["b"]).is_zero():
                out.append((n, f"a*n + b = 0 at n={n}"))
    elif desc.kind == "Q":
        a, b, c = p["a"], p["b"], p["c"]
        for label, x in (("-2a", -2 * a), ("-a-b", -a - b), ("-a+b", -a + b),
                         ("-a-c", -a - c), ("-a+c", -a + c)):
            k = _nonneg_int(x)
            if k is not None and k <= N:
                out.append((k, f"{label} = {k} is a nonnegative integer"))
    return sorted(out)


def family_recurrence(desc: FamilyDescriptor, N: int, m0=1, strict: bool = False) -> RecurrenceTable:
    """B_0..B_N, C_1..C_N, stopping early at the first vanishing C.

    A finite family (or a Q family with a nonnegative-integer ``-a+c``, say)
    stops at its cutoff; ``checked_to`` then records the last valid n.
    ``strict=True`` raises :class:`RegularityError` on any broken parameter
    constraint instead.  A denominator that stays zero after cancellation
    raises :class:`DenominatorError`.
    """
    if strict:
        bad = invariant_violations(desc, N)
        if bad:
            raise RegularityError(f"{desc}: {bad[0][1]}", bad[0][0])
    return table_from_values(lambda n: family_values(desc, n), N, m0)


def c_next(desc: FamilyDescriptor, n: int) -> ExactScalar:
    """The closed-form value C_{n+1}, even past a cutoff."""
    return family_values(desc, n)[1]


# -- affine maps -----------------------------------------------------------------

@dataclass(frozen=True)
class AffineMap:
    """``z -> lam z + mu`` acting on monic orthogonal sequences."""

    lam: ExactScalar
    mu: ExactScalar

    def __init__(self, lam=1, mu=0):
        lam, mu = as_scalar(lam), as_scalar(mu)
        if lam.is_zero():
            raise ValueError("the scale of an affine map must be nonzero")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)

    def inverse(self) -> "AffineMap":
        return AffineMap(ONE / self.lam, -self.mu / self.lam)

    def then(self, other: "AffineMap") -> "AffineMap":
        """Apply ``self`` first, then ``other``."""
        return AffineMap(self.lam * other.lam, other.lam * self.mu + other.mu)

    def to_json(self) -> dict:
        return {"lambda": str(self.lam), "mu": str(self.mu)}


def affine_transform(table: RecurrenceTable, amap: AffineMap) -> RecurrenceTable:
    lam2 = amap.lam * amap.lam
    B = [amap.lam * b + amap.mu for b in table.B]
    C = [lam2 * c for c in table.C]
    m0 = table.h[0] if table.h else 1
    return RecurrenceTable.build(B, C, m0, table.checked_to)


# -- the named identities ---------------------------------------------------------

@dataclass(frozen=True)
class IdentityRule:
    name: str
    source_kind: str
    target: Callable      # params -> (target descriptor without ext, map, discriminant or None)
    description: str


def _meixner_target(p):
    beta, c = p["beta"], p["c"]
    k = (c + 3) * (c - 1)
    disc = (c + 3) / (c - 1)
    return H(4 / k, 4 * beta / k), (ONE / 2, beta * c / (1 - c)), disc


def _charlier_target(p):
    a = p["a"]
    return H(0, 4 * a), (-ONE / 2, a), None


def _krawtchouk_target(p):
    pp, N = p["p"], p["N"]
    E = 4 * (pp - 1) * (pp - 1) + 1
    return H(4 * (pp - 1) / E, 4 * (1 - pp) * N / E), (-ONE / 2, pp * N), E


def _hahn_target(p):
    al, be, N = p["alpha"], p["beta"], p["N"]
    target = Q((al + be + 2) / 2, (al - be) / 2, (al + be + 2 * N + 2) / 2)
    return target, (ONE / 2, N / 2 - (al - be) / 4), None


def _para_target(p):
    mu, N = p["mu"], p["N"]
    return Q((1 - N) / 2, mu / 2, 0), (ONE, (N + mu - 1) / 2), None


IDENTITIES: dict[str, IdentityRule] = {
    "meixner-h": IdentityRule("meixner-h", "Meixner", _meixner_target,
                              "Meixner(beta, c) from H(4/((c+3)(c-1)), 4 beta/((c+3)(c-1)))"),
    "charlier-h": IdentityRule("charlier-h", "Charlier", _charlier_target,
                               "Charlier(a) from H(0, 4a)"),
    "krawtchouk-h": IdentityRule("krawtchouk-h", "Krawtchouk", _krawtchouk_target,
                                 "Krawtchouk(p, N) from H(4(p-1)/E, 4(1-p)N/E), E = 4(p-1)^2 + 1"),
    "hahn-q": IdentityRule("hahn-q", "Hahn", _hahn_target,
                           "Hahn(alpha, beta, N) from Q((alpha+beta+2)/2, (alpha-beta)/2, "
                           "(alpha+beta+2N+2)/2)"),
    "para-krawtchouk-q": IdentityRule("para-krawtchouk-q", "ParaKrawtchouk", _para_target,
                                      "para-Krawtchouk(mu, N) from Q((1-N)/2, mu/2, 0)"),
}

ALIASES = {
    "meixner": "meixner-h", "charlier": "charlier-h", "krawtchouk": "krawtchouk-h",
    "hahn": "hahn-q", "para-krawtchouk": "para-krawtchouk-q", "parakrawtchouk": "para-krawtchouk-q",
}


def identity_names() -> list:
    return list(IDENTITIES)


def resolve_identity(name: str) -> IdentityRule:
    key = ALIASES.get(name.lower(), name.lower())
    if key not in IDENTITIES:
        raise ValueError(f"unknown identity {name!r}; choose from {', '.join(IDENTITIES)}")
    return IDENTITIES[key]


@dataclass(frozen=True)
class BranchResult:
    branch: int
    checked_to: int
    failures: tuple
    target_table: Optional[RecurrenceTable] = None

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"branch": self.branch, "checked_to": self.checked_to,
                "passed": self.passed, "failures": list(self.failures)}


@dataclass(frozen=True)
class IdentityReport:
    identity: str
    params: tuple
    checked_to: int
    failures: tuple
    rows: tuple                       # (n, B ok, C ok) for the selected branch
    amap: AffineMap
    target: FamilyDescriptor
    discriminant: Optional[ExactScalar] = None
    branches: tuple = ()
    selected_branch: Optional[int] = None
    notes: tuple = field(default=())

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        out = {
            "identity": self.identity,
            "params": {k: str(v) for k, v in self.params},
            "checked_to": self.checked_to,
            "failures": list(self.failures),
            "map": self.amap.to_json(),
            "target": self.target.to_json(),
            "rows": [{"n": n, "B": b, "C": c} for n, b, c in self.rows],
        }
        if self.discriminant is not None:
            out["extension"] = str(self.discriminant)
        if self.branches:
            out["branches"] = [b.to_json() for b in self.branches]
            out["selected_branch"] = self.selected_branch
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _compare(source: RecurrenceTable, image: RecurrenceTable, N: int):
    rows, failures = [], []
    for n in range(N + 1):
        b_ok = n <= image.order and source.B[n] == image.B[n]
        c_ok = True
        if n >= 1:
            c_ok = n - 1 < len(image.C) and source.C[n - 1] == image.C[n - 1]
        rows.append((n, b_ok, c_ok))
        if not b_ok:
            got = image.B[n] if n <= image.order else "missing"
            failures.append(f"B_{n}: {source.B[n]} != {got}")
        if not c_ok:
            got = image.C[n - 1] if n - 1 < len(image.C) else "missing"
            failures.append(f"C_{n}: {source.C[n - 1]} != {got}")
    return tuple(rows), tuple(failures)


def verify_identity(name: str, params: Mapping, N: int = 10) -> IdentityReport:
    """Check a named identity at the level of recurrence coefficients.

    The source family's table is compared with the image of the target
    family's table under the identity's affine map, for n up to N or the
    source family's cutoff.  Identities with a square root are evaluated in
    the quadratic extension of the map's discriminant (unless that is a
    perfect square); for H targets both signs of ``sqrt(a+1)`` are tried and
    the one matching ``B'_1`` is selected.
    """
    rule = resolve_identity(name)
    source = FamilyDescriptor.make(rule.source_kind, **{k: as_scalar(v) for k, v in params.items()})
    target, (lam_coeff, mu), disc = rule.target(source.param_map)
    ext, lam = None, lam_coeff
    notes = []
    if disc is not None:
        root = root_of(disc)
        ext = root.ext
        lam = lam_coeff * root
        notes.append(f"scale uses sqrt({disc})" + (" in an extension" if ext else " (rational)"))
    amap = AffineMap(lam, mu)
    src_table = family_recurrence(source, N)
    top = src_table.order
    if source.max_index is not None and top < min(N, source.max_index):
        notes.append(f"source table stops at n={top}")

    branch_results = []
    signs = (1, -1) if target.kind == "H" else (1,)
    for sign in signs:
        tdesc = FamilyDescriptor(target.kind, target.params, sign, ext)
        image = affine_transform(family_recurrence(tdesc, top), amap)
        rows, failures = _compare(src_table, image, top)
        branch_results.append((BranchResult(sign, top, failures, image), rows))

    chosen = branch_results[0]
    if len(branch_results) > 1 and top >= 1:
        for res, rows in branch_results:
            if res.target_table.B[1] == src_table.B[1]:
                chosen = (res, rows)
                break
    res, rows = chosen
    return IdentityReport(
        rule.name, source.params, top, res.failures, rows, amap,
        FamilyDescriptor(target.kind, target.params, res.branch, ext), disc,
        tuple(r for r, _ in branch_results) if target.kind == "H" else (),
        res.branch if target.kind == "H" else None, tuple(notes))


@dataclass(frozen=True)
class SymmetryReport:
    params: tuple
    checked_to: int
    identical: bool
    tables: tuple

    def to_json(self) -> dict:
        return {"params": [str(x) for x in self.params], "checked_to": self.checked_to,
                "identical": self.identical,
                "tables": [t.to_json() for t in self.tables]}


def q_symmetry_check(a, b, c, N: int = 10) -> SymmetryReport:
    """Tables of Q(a,b,c), Q(a,c,b) and Q(a,-c,-b) up to N."""
    a, b, c = as_scalar(a), as_scalar(b), as_scalar(c)
    tables = tuple(family_recurrence(Q(a, x, y), N) for x, y in ((b, c), (c, b), (-c, -b)))
    first = tables[0]
    identical = all(t.B == first.B and t.C == first.C for t in tables[1:])
    return SymmetryReport((a, b, c), first.order, identical, tables)


def pair_from_descriptor(desc: FamilyDescriptor, gamma=0) -> PearsonPair:
    """The Pearson pair whose closed-form table is the H or Q family.

    H(a, b): ``(sqrt(a+1) z - b, z)``; Q(a, b, c):
    ``(z^2 + a^2 - b^2 - c^2, 2a z - 2bc)``.
    """
    p = desc.param_map
    if desc.kind == "H":
        return PearsonPair([-p["b"], desc.h_root()], [0, 1], gamma)
    if desc.kind == "Q":
        a, b, c = p["a"], p["b"], p["c"]
        return PearsonPair([a * a - b * b - c * c, 0, 1], [-2 * b * c, 2 * a], gamma)
    raise ValueError(f"no Pearson pair is defined for the {desc.kind} family")
