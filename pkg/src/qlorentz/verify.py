"""Relation-checking engine: every algebraic claim becomes a quantified residual.

Each check produces `RelationResidual` records collected into deterministic
`VerificationReport`s.  Two tiers of checks are distinguished:

* tier 1: analytically guaranteed by the construction (rotation subalgebra,
  weight relations, selection rules, the relation that defines the second
  diagonal boost, elementwise adjoint identities, recurrences, termination).
  These gate exit codes at tight tolerance.
* tier 2: the remaining relations on general two-constant representations at
  generic q, whose status the source text leaves open.  They are measured
  and reported at the same tolerance, and additionally gated through the
  classical limit q -> 1 by the acceptance suite.  (Numerically they hold to
  machine precision as well.)

Residual norm: max|entry| of (LHS - RHS) over interior columns; scale is the
product of the max-norms of the operators on the commutator side, floored
at 1.  A record passes iff residual <= tolerance * scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _jsonfmt
from .qarith import Deformation, HalfInt, half_range, q_number
from .repcore import (
    RepLabel,
    classify,
    casimir_eigenvalue,
    check_recurrences,
)
from .matrep import (
    Basis,
    ConstructionInconsistencyError,
    ConventionId,
    DEFAULT_CONVENTION,
    GeneratorSet,
    OperatorMatrix,
    SuQ2Triple,
    TensorOperator,
    build_generator_set,
    build_ST_vectors,
    diag_from_m,
    pattern_violation,
    suq2_matrices,
)

__all__ = [
    "RelationResidual",
    "set_tolerances",
    "TOLERANCES",
    "VerificationReport",
    "TIER1_TOL",
    "TIER2_TOL",
    "check_lorentz_relations",
    "check_casimir",
    "check_tensor_operator",
    "check_q_adjoint",
    "check_unitary_coeffs",
    "check_recurrence_suite",
    "ClassicalGeneratorSet",
    "classical_oracle",
    "classical_limit_compare",
    "resolve_conventions",
]

TIER1_TOL = 1e-10
TIER2_TOL = 1e-10
ADJOINT_ELEMENTWISE_TOL = 1e-13

# Live tolerance table; the CLI's override flags mutate this shared object,
# and the checking code (here and in the chiral module) reads through it.
TOLERANCES = {"tier1": TIER1_TOL, "tier2": TIER2_TOL, "adjoint": ADJOINT_ELEMENTWISE_TOL}


def set_tolerances(tier1=None, tier2=None, adjoint=None) -> None:
    if tier1 is not None:
        TOLERANCES["tier1"] = float(tier1)
    if tier2 is not None:
        TOLERANCES["tier2"] = float(tier2)
    if adjoint is not None:
        TOLERANCES["adjoint"] = float(adjoint)


def _t(tier: int) -> float:
    return TOLERANCES["tier1"] if tier == 1 else TOLERANCES["tier2"]


# Relation lines whose generic-q validity on general labels is analytically
# guaranteed (tier 1); the rest of the defining relations are tier 2 there.
_TIER1_LINES = {"line01", "line02", "line06", "line07", "other1", "other2", "other3"}


@dataclass(frozen=True)
class RelationResidual:
    relation_id: str
    residual: float
    scale: float
    tolerance: float
    tier: int
    columns: str = "all columns"
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance * self.scale

    def to_record(self) -> dict:
        rec = {
            "id": self.relation_id,
            "residual": float(self.residual),
            "scale": float(self.scale),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
            "tier": self.tier,
            "columns": self.columns,
        }
        if self.note:
            rec["note"] = self.note
        return rec


@dataclass
class VerificationReport:
    """Residual records for one suite, with deterministic serialized form."""

    suite: str
    subject: dict
    convention: ConventionId
    environment: dict
    residuals: list[RelationResidual] = field(default_factory=list)

    def add(self, rr: RelationResidual) -> None:
        self.residuals.append(rr)

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for rr in other.residuals:
            rid = prefix + rr.relation_id if prefix else rr.relation_id
            self.add(
                RelationResidual(
                    rid, rr.residual, rr.scale, rr.tolerance, rr.tier, rr.columns, rr.note
                )
            )

    @property
    def tier1_pass(self) -> bool:
        return all(r.passed for r in self.residuals if r.tier == 1)

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.residuals)

    def failed(self) -> list[RelationResidual]:
        return [r for r in self.residuals if not r.passed]

    def worst_relative(self) -> float:
        return max((r.residual / r.scale for r in self.residuals), default=0.0)

    def to_record(self) -> dict:
        ordered = sorted(self.residuals, key=lambda r: r.relation_id)
        return {
            "suite": self.suite,
            "input": self.subject,
            "convention": self.convention.to_list(),
            "environment": self.environment,
            "relations": [r.to_record() for r in ordered],
            "verdict": {
                "tier1_pass": self.tier1_pass,
                "all_pass": self.all_pass,
                "n_relations": len(self.residuals),
                "n_failed": len(self.failed()),
            },
        }

    def to_json(self, indent: bool = False) -> str:
        return _jsonfmt.dumps(self.to_record(), indent=indent)


# --------------------------------------------------------------------------
# helpers


def _subject(gens: GeneratorSet) -> dict:
    return {
        "tag": gens.tag,
        "label": gens.label.to_record(),
        "dim": gens.basis.dim,
        "truncated": gens.basis.truncated,
    }


def _masked_max(diff: np.ndarray, mask: np.ndarray) -> float:
    sub = diff[:, mask]
    return float(np.max(np.abs(sub))) if sub.size else 0.0


def _pair_scale(a: OperatorMatrix, b: OperatorMatrix) -> float:
    return max(1.0, a.max_norm * b.max_norm)


def _env(gens: GeneratorSet, **extra) -> dict:
    env = {
        "q": gens.d.q,
        "j_max": str(gens.basis.j_max) if gens.basis.j_max is not None else None,
        "tier1_tol": TOLERANCES["tier1"],
        "tier2_tol": TOLERANCES["tier2"],
    }
    env.update(extra)
    return env


def _is_realization(gens: GeneratorSet) -> bool:
    return gens.tag.startswith("suq2") or len(gens.basis.spins) == 1


def _line_tier(line: str, gens: GeneratorSet) -> int:
    if _is_realization(gens):
        return 1
    return 1 if line in _TIER1_LINES else 2


# --------------------------------------------------------------------------
# defining-relation suite


def check_lorentz_relations(
    gens: GeneratorSet, c_scalar: Optional[complex] = None, d: Optional[Deformation] = None
) -> VerificationReport:
    """Residuals for all ten defining relation lines, the vanishing
    commutators among the remaining pairs, and the selection-rule patterns."""
    d = d or gens.d
    if c_scalar is None:
        c_scalar = gens.c_scalar
    q = d.q
    rq = math.sqrt(q)
    delta = d.delta
    basis = gens.basis
    eye = np.eye(basis.dim, dtype=np.complex128)
    two = q_number(HalfInt.from_int(2), d)
    two_m3 = diag_from_m(basis, lambda m: q_number(m + m, d))

    mp, mm, m3 = gens.m_plus, gens.m_minus, gens.m3
    np_, nm = gens.n_plus, gens.n_minus
    n3, n3t = gens.n3, gens.n3_tilde
    if gens.convention.line45_swap:
        d4, d5 = n3t, n3
    else:
        d4, d5 = n3, n3t

    quad = basis.interior_columns(2)
    col_quad = "interior (quadratic)" if basis.truncated else "all columns"

    rep = VerificationReport(
        suite="lorentz_relations",
        subject=_subject(gens),
        convention=gens.convention,
        environment=_env(gens),
    )

    def add(line_id: str, lhs: np.ndarray, rhs: np.ndarray, a: OperatorMatrix, b: OperatorMatrix):
        tier = _line_tier(line_id, gens)
        rep.add(
            RelationResidual(
                f"eq4.{line_id}",
                _masked_max(lhs - rhs, quad),
                _pair_scale(a, b),
                _t(tier),
                tier,
                col_quad,
            )
        )

    A = lambda op: op.data  # noqa: E731

    add("line01", A(mp) @ A(mm) - A(mm) @ A(mp), two_m3, mp, mm)
    r2a = _masked_max(A(m3) @ A(mp) - A(mp) @ A(m3) - A(mp), quad)
    r2b = _masked_max(A(m3) @ A(mm) - A(mm) @ A(m3) + A(mm), quad)
    rep.add(
        RelationResidual(
            "eq4.line02", max(r2a, r2b), _pair_scale(m3, mp), _t(1), 1, col_quad, "both signs"
        )
    )
    add("line03", A(np_) @ A(nm) - A(nm) @ A(np_), -two_m3, np_, nm)
    add("line04", A(d4) @ A(np_) * rq - A(np_) @ A(d4) / rq, -A(mp), d4, np_)
    add("line05", A(d5) @ A(nm) * rq - A(nm) @ A(d5) / rq, A(mm), d5, nm)
    r6a = _masked_max(A(m3) @ A(np_) - A(np_) @ A(m3) - A(np_), quad)
    r6b = _masked_max(A(m3) @ A(nm) - A(nm) @ A(m3) + A(nm), quad)
    rep.add(
        RelationResidual(
            "eq4.line06", max(r6a, r6b), _pair_scale(m3, np_), _t(1), 1, col_quad, "both signs"
        )
    )
    add(
        "line07",
        A(mp) @ A(nm) / rq - rq * A(nm) @ A(mp),
        two * A(n3t) + delta * c_scalar * eye,
        mp,
        nm,
    )
    add(
        "line08",
        A(mm) @ A(np_) / rq - rq * A(np_) @ A(mm),
        -two * A(n3) + delta * c_scalar * eye,
        mm,
        np_,
    )
    add("line09", A(mp) @ A(n3t) * rq - A(n3t) @ A(mp) / rq, -A(np_), mp, n3t)
    add("line10", A(mm) @ A(n3) * rq - A(n3) @ A(mm) / rq, A(nm), mm, n3)

    # "all other (usual) commutators vanish"
    zero = np.zeros_like(eye)
    add("other1", A(n3) @ A(n3t) - A(n3t) @ A(n3), zero, n3, n3t)
    add("other2", A(m3) @ A(n3) - A(n3) @ A(m3), zero, m3, n3)
    add("other3", A(m3) @ A(n3t) - A(n3t) @ A(m3), zero, m3, n3t)

    # declared (delta_j, delta_m) patterns: exact zeros outside, tolerance 0
    for name, op in gens.matrices().items():
        rep.add(
            RelationResidual(
                f"struct.{name}",
                pattern_violation(op, basis),
                1.0,
                0.0,
                1,
                "all entries",
                "selection rule, exact",
            )
        )
    return rep


def check_casimir(gens: GeneratorSet, c_scalar: Optional[complex] = None) -> VerificationReport:
    """Scalar action and centrality of the quadratic invariant matrix."""
    if c_scalar is None:
        c_scalar = gens.c_scalar
    basis = gens.basis
    cas = gens.casimir
    eye = np.eye(basis.dim, dtype=np.complex128)
    quad = basis.interior_columns(2)
    cubic = basis.interior_columns(3)
    col_quad = "interior (quadratic)" if basis.truncated else "all columns"
    col_cubic = "interior (cubic)" if basis.truncated else "all columns"
    tier = 1 if _is_realization(gens) else 2

    rep = VerificationReport(
        suite="casimir",
        subject=_subject(gens),
        convention=gens.convention,
        environment=_env(gens, c_scalar={"re": c_scalar.real, "im": c_scalar.imag}),
    )
    rep.add(
        RelationResidual(
            "eq5.scalar",
            _masked_max(cas.data - c_scalar * eye, quad),
            max(1.0, cas.max_norm),
            _t(tier),
            tier,
            col_quad,
        )
    )
    for name, op in gens.matrices().items():
        if name == "casimir":
            continue
        rep.add(
            RelationResidual(
                f"eq5.central.{name}",
                _masked_max(cas.data @ op.data - op.data @ cas.data, cubic),
                _pair_scale(cas, op),
                _t(tier),
                tier,
                col_cubic,
            )
        )
    return rep


# --------------------------------------------------------------------------
# tensor-operator suite


def check_tensor_operator(
    tri: SuQ2Triple, tensor: TensorOperator, d: Deformation, name: str = "T"
) -> VerificationReport:
    """Check the deformed tensor-operator relations in both variants.

    The primary variant dresses the right side with q^(+M3/2) and weights the
    commutator by q^(-mu/2); the alternative is the same with q -> 1/q.  Both
    are evaluated; which one the operator satisfies is recorded, and only the
    matching variant's records are tier 1.
    """
    if tensor.l.twice % 2 != 0 or tensor.l.twice < 0:
        raise ValueError("only integer-rank tensor operators are checked")
    rank = tensor.l.twice // 2
    mp, mm, m3 = tri.m_plus.data, tri.m_minus.data, tri.m3.data
    basis = tri.basis

    def variant_rows(sign: float) -> list[tuple[str, float, float]]:
        dress = diag_from_m(basis, lambda m: math.pow(d.q, sign * float(m) / 2))
        rows = []
        for mu in range(-rank, rank + 1):
            t_mu = tensor.component(mu).data
            res = float(np.max(np.abs(m3 @ t_mu - t_mu @ m3 - mu * t_mu)))
            rows.append((f"weight.m{mu:+d}", res, max(1.0, float(np.max(np.abs(t_mu))))))
            for pm, mat, tagc in ((1, mp, "raise"), (-1, mm, "lower")):
                lhs = mat @ t_mu - math.pow(d.q, -sign * mu / 2.0) * (t_mu @ mat)
                tgt = mu + pm
                if abs(tgt) <= rank:
                    amp = math.sqrt(
                        q_number(HalfInt.from_int(rank - pm * mu), d)
                        * q_number(HalfInt.from_int(rank + pm * mu + 1), d)
                    )
                    rhs = amp * tensor.component(tgt).data @ dress
                else:
                    rhs = np.zeros_like(lhs)
                scale = max(1.0, float(np.max(np.abs(mat))) * float(np.max(np.abs(t_mu))))
                rows.append((f"{tagc}.m{mu:+d}", float(np.max(np.abs(lhs - rhs))), scale))
        return rows

    primary = variant_rows(+1.0)
    alternative = variant_rows(-1.0)
    tot_p = sum(r / s for _i, r, s in primary)
    tot_a = sum(r / s for _i, r, s in alternative)
    satisfied = "primary" if tot_p <= tot_a else "alternative"

    rep = VerificationReport(
        suite="tensor_operator",
        subject={"tag": f"vector operator {name}", "dim": basis.dim, "satisfies": satisfied},
        convention=DEFAULT_CONVENTION,
        environment={"q": d.q, "tier1_tol": TOLERANCES["tier1"], "tier2_tol": TOLERANCES["tier2"]},
    )
    for variant, rows in (("primary", primary), ("alternative", alternative)):
        tier = 1 if variant == satisfied else 2
        for rid, res, scale in rows:
            rep.add(
                RelationResidual(
                    f"eq1.{variant}.{rid}",
                    res,
                    scale,
                    _t(tier),
                    tier,
                    "all columns",
                )
            )
    return rep


# --------------------------------------------------------------------------
# q-adjoint suite


def check_q_adjoint(
    label: RepLabel, j_max: HalfInt, conv: ConventionId = DEFAULT_CONVENTION
) -> VerificationReport:
    """Adjoint involution checks between the builds at q and at 1/q.

    Elementwise identities: the rotation pair is dagger-related across
    q -> 1/q for every label; the boost pair and the Hermiticity of the
    diagonal boost additionally need real a_j / imaginary c_j, i.e. a
    unitary-series label (tier 2 otherwise).  The role swap of the two
    diagonal boosts under q -> 1/q is exact for every label, and the
    inverse-q build must satisfy the whole defining suite.
    """
    g = build_generator_set(label, j_max, conv)
    label_inv = RepLabel(label.l0, label.l1, label.d.inverse())
    gi = build_generator_set(label_inv, j_max, conv)
    unitary = classify(label).unitary != "non_unitary"
    n_tier = 1 if unitary else 2

    rep = VerificationReport(
        suite="q_adjoint",
        subject=_subject(g),
        convention=conv,
        environment=_env(g, q_inverse=label_inv.d.q, unitary_series=unitary),
    )

    def dag(a: np.ndarray) -> np.ndarray:
        return a.conj().T

    pairs = [
        ("eq6.m_plus_dagger", dag(g.m_plus.data), gi.m_minus.data, g.m_plus, 1),
        ("eq6.m_minus_dagger", dag(g.m_minus.data), gi.m_plus.data, g.m_minus, 1),
        ("eq6.m3_dagger", dag(g.m3.data), g.m3.data, g.m3, 1),
        ("eq6.n_plus_dagger", dag(g.n_plus.data), gi.n_minus.data, g.n_plus, n_tier),
        ("eq6.n_minus_dagger", dag(g.n_minus.data), gi.n_plus.data, g.n_minus, n_tier),
        ("eq6.n3_hermitian", dag(g.n3.data), g.n3.data, g.n3, n_tier),
        ("eq6.n3_swap", gi.n3.data, g.n3_tilde.data, g.n3_tilde, 1),
        ("eq6.n3_tilde_swap", gi.n3_tilde.data, g.n3.data, g.n3, 1),
    ]
    for rid, lhs, rhs, op, tier in pairs:
        rep.add(
            RelationResidual(
                rid,
                float(np.max(np.abs(lhs - rhs))),
                max(1.0, op.max_norm),
                TOLERANCES["adjoint"] if tier == 1 else _t(2),
                tier,
                "all entries",
                "elementwise",
            )
        )

    inv_suite = check_lorentz_relations(gi)
    rep.add(
        RelationResidual(
            "eq6.suite_at_inverse_q",
            inv_suite.worst_relative(),
            1.0,
            _t(2),
            2,
            "interior (quadratic)",
            "worst relative residual of the defining suite at 1/q",
        )
    )
    return rep


# --------------------------------------------------------------------------
# unitarity conditions on the coefficients


def check_unitary_coeffs(label: RepLabel, j_max: HalfInt) -> VerificationReport:
    """Reality of a_j and anti-reality of c_j versus the series classification.

    For principal/complementary labels every coefficient condition must hold
    (tier 1); for non-unitary labels the per-j conditions are informational
    and the tier-1 statement is that at least one of them fails, agreeing
    with the classification.
    """
    from .repcore import coeff_a, coeff_c

    cls = classify(label)
    unitary = cls.unitary != "non_unitary"
    rep = VerificationReport(
        suite="unitary_coeffs",
        subject={"label": label.to_record(), "classification": cls.to_record()},
        convention=DEFAULT_CONVENTION,
        environment={"q": label.d.q, "j_max": str(j_max), "tier1_tol": TOLERANCES["tier1"]},
    )
    any_fail = False
    for j in half_range(label.l0, j_max):
        a = coeff_a(j, label)
        c = coeff_c(j, label)
        ra = RelationResidual(
            f"unit.a_real.j={j}",
            abs(a.imag),
            max(1.0, abs(a)),
            _t(1),
            1 if unitary else 2,
            "coefficient",
        )
        rc = RelationResidual(
            f"unit.c_imag.j={j}",
            abs(c.real),
            max(1.0, abs(c)),
            _t(1),
            1 if unitary else 2,
            "coefficient",
        )
        any_fail = any_fail or not ra.passed or not rc.passed
        rep.add(ra)
        rep.add(rc)
    consistent = (not any_fail) if unitary else any_fail
    rep.add(
        RelationResidual(
            "unit.matches_classification",
            0.0 if consistent else 1.0,
            1.0,
            0.5,
            1,
            "summary",
            f"classified {cls.unitary}",
        )
    )
    return rep


def check_recurrence_suite(label: RepLabel, j_max: HalfInt) -> VerificationReport:
    """Difference-equation residuals as a report (the coefficient oracle)."""
    rep = VerificationReport(
        suite="recurrences",
        subject={"label": label.to_record()},
        convention=DEFAULT_CONVENTION,
        environment={"q": label.d.q, "j_max": str(j_max), "tier1_tol": TOLERANCES["tier1"]},
    )
    for row in check_recurrences(label, j_max):
        j = row["j"]
        rep.add(
            RelationResidual(
                f"rec.ladder.j={j}", row["residual_ladder"], 1.0, _t(1), 1, "coefficient"
            )
        )
        rep.add(
            RelationResidual(
                f"rec.norm.j={j}", row["residual_norm"], 1.0, _t(1), 1, "coefficient"
            )
        )
    return rep


# --------------------------------------------------------------------------
# classical oracle and limit comparison


@dataclass(frozen=True)
class ClassicalGeneratorSet:
    """Classical (undeformed) generator matrices built from the closed-form
    matrix elements with every bracket [x] replaced by x and every q-power
    by 1.  Completely independent of the deformed code paths."""

    basis: Basis
    l0: float
    l1: complex
    m_plus: OperatorMatrix
    m_minus: OperatorMatrix
    m3: OperatorMatrix
    n_plus: OperatorMatrix
    n_minus: OperatorMatrix
    n3: OperatorMatrix
    n3_tilde: OperatorMatrix
    casimir: OperatorMatrix

    def matrices(self) -> dict[str, OperatorMatrix]:
        return {
            "m_plus": self.m_plus,
            "m_minus": self.m_minus,
            "m3": self.m3,
            "n_plus": self.n_plus,
            "n_minus": self.n_minus,
            "n3": self.n3,
            "n3_tilde": self.n3_tilde,
            "casimir": self.casimir,
        }


def _classical_c(j: float, l0: float, l1: complex) -> complex:
    if j <= 0.0:
        return 0j
    rad = (j * j - l0 * l0) * (j * j - l1 * l1) / ((2 * j - 1.0) * (2 * j + 1.0))
    from .qarith import sqrt_principal

    return 1j / j * sqrt_principal(rad)


def classical_oracle(l0: HalfInt, l1: complex, j_max: HalfInt) -> ClassicalGeneratorSet:
    """Classical matrices: a_j = i l0 l1 / (j(j+1)), c_j from the classical
    square root, rotation elements sqrt((j-+m)(j+-m+1)).  Spin content mirrors
    the deformed case: full ladder for real l1 with |l1| - l0 a positive
    integer, truncated at j_max otherwise."""
    l1 = complex(l1)
    fl0 = float(l0)
    spins: Sequence[HalfInt]
    finite = False
    if abs(l1.imag) < 1e-12:
        span = abs(l1.real) - fl0
        n = round(span) - 1
        if n >= 0 and abs(span - (n + 1)) < 1e-9:
            finite = True
            spins = half_range(l0, l0 + n)
    if not finite:
        spins = half_range(l0, j_max)
    basis = Basis(spins=tuple(spins), truncated=not finite, j_max=None if finite else j_max)

    dim = basis.dim
    mats = {k: np.zeros((dim, dim), dtype=np.complex128) for k in
            ("m_plus", "m_minus", "m3", "n_plus", "n_minus", "n3")}

    def a_of(j: float) -> complex:
        if j == 0.0:
            return 0j
        return 1j * fl0 * l1 / (j * (j + 1.0))

    def c_of(j: HalfInt) -> complex:
        if j == l0:
            return 0j
        return _classical_c(float(j), fl0, l1)

    for j in basis.spins:
        fj = float(j)
        aj, cj, cj1 = a_of(fj), c_of(j), c_of(j + 1)
        for m in half_range(-j, j):
            col = basis.index(j, m)
            fm = float(m)
            mats["m3"][col, col] = fm
            if m < j:
                mats["m_plus"][basis.index(j, m + 1), col] = math.sqrt((fj - fm) * (fj + fm + 1))
            if -j < m:
                mats["m_minus"][basis.index(j, m - 1), col] = math.sqrt((fj + fm) * (fj - fm + 1))
            # raising boost
            if basis.has(j - 1, m + 1):
                mats["n_plus"][basis.index(j - 1, m + 1), col] += cj * math.sqrt(
                    (fj - fm) * (fj - fm - 1)
                )
            if basis.has(j, m + 1):
                mats["n_plus"][basis.index(j, m + 1), col] += -aj * math.sqrt(
                    (fj - fm) * (fj + fm + 1)
                )
            if basis.has(j + 1, m + 1):
                mats["n_plus"][basis.index(j + 1, m + 1), col] += cj1 * math.sqrt(
                    (fj + fm + 1) * (fj + fm + 2)
                )
            # lowering boost
            if basis.has(j - 1, m - 1):
                mats["n_minus"][basis.index(j - 1, m - 1), col] += -cj * math.sqrt(
                    (fj + fm) * (fj + fm - 1)
                )
            if basis.has(j, m - 1):
                mats["n_minus"][basis.index(j, m - 1), col] += -aj * math.sqrt(
                    (fj + fm) * (fj - fm + 1)
                )
            if basis.has(j + 1, m - 1):
                mats["n_minus"][basis.index(j + 1, m - 1), col] += -cj1 * math.sqrt(
                    (fj - fm + 1) * (fj - fm + 2)
                )
            # diagonal boost
            if basis.has(j - 1, m):
                mats["n3"][basis.index(j - 1, m), col] += cj * math.sqrt(
                    (fj - fm) * (fj + fm)
                )
            mats["n3"][col, col] += -aj * fm
            if basis.has(j + 1, m):
                mats["n3"][basis.index(j + 1, m), col] += -cj1 * math.sqrt(
                    (fj + fm + 1) * (fj - fm + 1)
                )

    from .matrep import GENERATOR_PATTERNS

    ops = {k: OperatorMatrix(v, GENERATOR_PATTERNS[k]) for k, v in mats.items()}
    # quadratic invariant, normalized to the deformed one: brute-force
    # evaluation shows the plain rotation-boost contraction M.N is scalar
    # with eigenvalue i l0 l1 / 2 in this coefficient normalization, so the
    # counterpart of the deformed invariant (eigenvalue i l0 l1) is -2 M.N
    cas = -(
        2.0 * ops["m3"].data @ ops["n3"].data
        + ops["m_plus"].data @ ops["n_minus"].data
        + ops["m_minus"].data @ ops["n_plus"].data
    )
    return ClassicalGeneratorSet(
        basis=basis,
        l0=fl0,
        l1=l1,
        n3_tilde=ops["n3"],
        casimir=OperatorMatrix(cas, GENERATOR_PATTERNS["casimir"]),
        **ops,
    )


def classical_limit_compare(
    label_l0: HalfInt,
    label_l1: complex,
    j_max: HalfInt,
    eps: float,
    conv: ConventionId = DEFAULT_CONVENTION,
) -> VerificationReport:
    """Entrywise deviation of the q = 1 + eps build from the classical oracle.

    Deviations scale linearly in eps; the shrink check rebuilds at eps/10 and
    requires at least a 3x reduction.  Tolerance for the deviation records is
    100 * eps (smooth first-order dependence on q across the whole grid).
    """
    if not (0.0 < eps <= 1e-3):
        raise ValueError(f"eps must be in (0, 1e-3], got {eps}")
    oracle = classical_oracle(label_l0, label_l1, j_max)

    # Entrywise comparison covers the seven generators.  The invariant
    # matrix is left out: its assembly divides by q^(1/2) - q^(-1/2), which
    # amplifies roundoff as 1/eps near the classical point; its limit is
    # checked through the well-conditioned scalar i[l0][l1] instead.
    def deviations(e: float) -> dict[str, float]:
        lab = RepLabel(label_l0, label_l1, Deformation(1.0 + e))
        g = build_generator_set(lab, j_max, conv)
        out = {}
        for name, op in g.matrices().items():
            if name == "casimir":
                continue
            out[name] = float(np.max(np.abs(op.data - oracle.matrices()[name].data)))
        out["casimir_scalar"] = abs(
            casimir_eigenvalue(lab) - 1j * float(label_l0) * complex(label_l1)
        )
        return out

    dev1 = deviations(eps)
    dev2 = deviations(eps / 10.0)
    tol = 100.0 * eps

    rep = VerificationReport(
        suite="classical_limit",
        subject={
            "label": {"l0": str(label_l0), "l1": {"re": label_l1.real, "im": label_l1.imag}},
            "dim": oracle.basis.dim,
        },
        convention=conv,
        environment={"eps": eps, "j_max": str(j_max), "deviation_tol": tol},
    )
    for name in sorted(dev1):
        rep.add(
            RelationResidual(f"limit.dev.{name}", dev1[name], 1.0, tol, 1, "all entries")
        )
    worst1 = max(dev1.values())
    worst2 = max(dev2.values())
    rep.add(
        RelationResidual(
            "limit.shrink",
            worst2,
            max(worst1, 1e-300),
            1.0 / 3.0,
            1,
            "all entries",
            f"deviation at eps/10 vs eps ({worst1:.6g} -> {worst2:.6g})",
        )
    )
    return rep


# --------------------------------------------------------------------------
# convention resolution


def _table_row(axis: str, conv: ConventionId, score: float) -> dict:
    """Score-table row; inconsistent variants carry a null score and a flag."""
    if math.isinf(score):
        return {"axis": axis, "convention": str(conv), "score": None, "valid": False}
    return {"axis": axis, "convention": str(conv), "score": score, "valid": True}


def _eq4_score(label: RepLabel, j_max: HalfInt, conv: ConventionId) -> float:
    try:
        g = build_generator_set(label, j_max, conv)
    except ConstructionInconsistencyError:
        return math.inf
    rep = check_lorentz_relations(g)
    return sum(r.residual / r.scale for r in rep.residuals if r.relation_id.startswith("eq4."))


def _eq1_score(two_j: int, d: Deformation, conv: ConventionId) -> float:
    s, t = build_ST_vectors(two_j, d, conv)
    tri = suq2_matrices(two_j, d)
    total = 0.0
    for tensor, name in ((s, "S"), (t, "T")):
        rep = check_tensor_operator(tri, tensor, d, name)
        total += sum(r.residual / r.scale for r in rep.residuals if r.tier == 1)
    return total


def resolve_conventions(
    label: Optional[RepLabel] = None,
    two_j: Optional[int] = None,
    d: Optional[Deformation] = None,
    j_max: Optional[HalfInt] = None,
    catalog: Optional[list[ConventionId]] = None,
) -> tuple[ConventionId, list[dict]]:
    """Pick the reading of every catalogued ambiguity that minimizes residuals.

    Generator-construction axes are scored by the summed relative residual of
    the defining-relation suite on the given label; the vector-operator
    prefactor by the tensor-relation suite at the given spin; the coproduct
    grouplike choice by the homomorphism residual on the mixed two-dimensional
    product (where the two readings differ).  Deterministic tie-break: the
    lexicographically smallest convention list.  Returns the winner and the
    full score table.
    """
    if d is None:
        d = label.d if label is not None else Deformation(1.3)
    table: list[dict] = []
    chosen = {}

    if catalog is not None:
        if not catalog:
            raise ValueError("empty convention catalog")
        if len(catalog) > 256:
            raise ValueError("convention catalog too large")
        lab = label or RepLabel(HalfInt(1), 1.5, d)
        jm = j_max if j_max is not None else lab.l0 + 4
        scored = []
        for conv in catalog:
            s = _eq4_score(lab, jm, conv)
            table.append(_table_row("catalog", conv, s))
            scored.append((s, conv.to_list(), conv))
        scored.sort(key=lambda t: (t[0], t[1]))
        return scored[0][2], table

    # axis group 1: boost-matrix exponents and the relation pairing
    if label is not None:
        jm = j_max if j_max is not None else label.l0 + 4
        variants = []
        for mid in (0, 1):
            for dm in (0, 1):
                for fs in (0, 1, 2):
                    for ts in (0, 1, 2):
                        for sw in (0, 1):
                            variants.append(
                                ConventionId(
                                    n_mid_exp=mid,
                                    n_down_dm=dm,
                                    n_first_shift=fs,
                                    n_third_shift=ts,
                                    line45_swap=sw,
                                )
                            )
        scored = []
        for conv in variants:
            s = _eq4_score(label, jm, conv)
            table.append(_table_row("boost_exponents", conv, s))
            scored.append((s, conv.to_list(), conv))
        scored.sort(key=lambda t: (t[0], t[1]))
        win = scored[0][2]
        chosen.update(
            n_mid_exp=win.n_mid_exp,
            n_down_dm=win.n_down_dm,
            n_first_shift=win.n_first_shift,
            n_third_shift=win.n_third_shift,
            line45_swap=win.line45_swap,
        )

    # axis group 2: vector-operator scalar prefactor
    if two_j is not None:
        scored = []
        from .matrep import _ST_QUARTER_OPTIONS

        for quarters in _ST_QUARTER_OPTIONS:
            conv = ConventionId(st_quarters=quarters)
            s = _eq1_score(two_j, d, conv)
            table.append(_table_row("st_prefactor", conv, s))
            scored.append((s, conv.to_list(), quarters))
        scored.sort(key=lambda t: (t[0], t[1]))
        chosen.update(st_quarters=scored[0][2])

    # axis group 3: coproduct grouplike for the lowering right generator,
    # scored on the mixed spinor product where the readings differ
    from .chiral import build_chiral, check_chiral_relations, coproduct

    scored = []
    for rg in (0, 1):
        conv = ConventionId(cop_r_grouplike=rg)
        tau = build_generator_set(RepLabel(HalfInt(1), 1.5, d), HalfInt(1))
        taut = build_generator_set(RepLabel(HalfInt(1), -1.5, d), HalfInt(1))
        dc = coproduct(build_chiral(tau), build_chiral(taut), conv)
        rep = check_chiral_relations(dc)
        s = sum(r.residual / r.scale for r in rep.residuals)
        table.append(_table_row("cop_r_grouplike", conv, s))
        scored.append((s, conv.to_list(), rg))
    scored.sort(key=lambda t: (t[0], t[1]))
    chosen.update(cop_r_grouplike=scored[0][2])

    return ConventionId(**chosen), table
