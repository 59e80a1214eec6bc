"""Explicit generator matrices on the (j, m) ladder basis.

Builds dense complex matrices for the seven generators: the rotation triple
M+, M-, M3 (a deformed su(2) subalgebra, block-diagonal in j), the boosts
N+, N-, N3 and the second diagonal boost N3-tilde (block-tridiagonal in j),
and the quadratic invariant.  Also builds the deformed-rotation realization
(boosts proportional to rotations on a single spin block), the two rank-1
tensor operators S and T, and Kronecker embeddings for tensor products.

Matrix actions, column (j, m) -> rows:

  M+ : sqrt([j-m][j+m+1]) q^(-1/4) q^(-m/2)              -> (j, m+1)
  M- : sqrt([j+m][j-m+1]) q^(-1/4) q^(+m/2)              -> (j, m-1)
  M3 : m                                                  -> (j, m)
  N+ : +c_j    sqrt([j-m][j-m-1])   q^(-1/4) q^(-(j+m)/2) -> (j-1, m+1)
       -a_j    sqrt([j-m][j+m+1])   q^(-1/4) q^(-m/2)     -> (j,   m+1)
       +c_{j+1} sqrt([j+m+1][j+m+2]) q^(+1/4) q^(+(j-m)/2) -> (j+1, m+1)
  N- : -c_j    sqrt([j+m][j+m-1])   q^(-1/4) q^(-(j-m)/2) -> (j-1, m-1)
       -a_j    sqrt([j+m][j-m+1])   q^(-1/4) q^(+m/2)     -> (j,   m-1)
       -c_{j+1} sqrt([j-m+1][j-m+2]) q^(+1/4) q^(+(j+m)/2) -> (j+1, m-1)
  N3 : +c_j    sqrt([j-m][j+m])     q^(-m/2)              -> (j-1, m)
       -a_j    [m]                  q^(-m/2)              -> (j,   m)
       -c_{j+1} sqrt([j+m+1][j-m+1]) q^(-m/2)              -> (j+1, m)

Ambiguous readings of the source exponents (the sign of the diagonal-term
m/2 power, the quarter-power shifts on the j+-1 terms, and the m-shift of
the j-1 target) are catalogued in `ConventionId`; the defaults above are the
readings under which every defining relation closes to machine precision.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from .qarith import Deformation, HalfInt, half_range, q_number
from .repcore import RepLabel, casimir_eigenvalue, classify, coeff_a, coeff_c

__all__ = [
    "Basis",
    "OperatorMatrix",
    "ConventionId",
    "GeneratorSet",
    "SuQ2Triple",
    "TensorOperator",
    "ConstructionInconsistencyError",
    "build_basis",
    "build_M",
    "build_N",
    "build_N3_tilde",
    "build_casimir_matrix",
    "build_generator_set",
    "suq2_matrices",
    "build_from_suq2",
    "build_ST_vectors",
    "tensor_embed",
    "diag_from_m",
    "pattern_violation",
    "export_matrix",
    "import_matrix",
    "export_generator_set",
    "import_generator_set",
    "GENERATOR_PATTERNS",
]


class ConstructionInconsistencyError(RuntimeError):
    """A relation-derived matrix violated its selection rule: the chosen
    convention is inconsistent with the algebra."""


# --------------------------------------------------------------------------
# basis


@dataclass(frozen=True)
class Basis:
    """Ordered (j, m) index set: ascending j blocks, m = -j..j inside each."""

    spins: tuple[HalfInt, ...]
    truncated: bool
    j_max: Optional[HalfInt] = None

    def __post_init__(self):
        if not self.spins:
            raise ValueError("basis needs at least one spin block")
        for a, b in zip(self.spins, self.spins[1:]):
            if b.twice - a.twice != 2:
                raise ValueError("spin blocks must ascend in unit steps")

    @property
    def offsets(self) -> dict[HalfInt, int]:
        off, pos = {}, 0
        for j in self.spins:
            off[j] = pos
            pos += j.twice + 1
        return off

    @property
    def dim(self) -> int:
        return sum(j.twice + 1 for j in self.spins)

    def index(self, j: HalfInt, m: HalfInt) -> int:
        if j not in self.offsets:
            raise KeyError(f"no block j = {j}")
        if abs(m.twice) > j.twice:
            raise KeyError(f"|m| > j for (j, m) = ({j}, {m})")
        return self.offsets[j] + (m.twice + j.twice) // 2

    def state(self, i: int) -> tuple[HalfInt, HalfInt]:
        i = int(i)
        for j, off in self.offsets.items():
            if off <= i <= off + j.twice:
                return j, HalfInt(2 * (i - off) - j.twice)
        raise IndexError(i)

    def states(self) -> list[tuple[HalfInt, HalfInt]]:
        return [(j, m) for j in self.spins for m in half_range(-j, j)]

    def has(self, j: HalfInt, m: HalfInt) -> bool:
        return j in self.offsets and abs(m.twice) <= j.twice

    def interior_columns(self, order: int) -> np.ndarray:
        """Boolean column mask exact under truncation for an `order`-fold
        generator product (each factor moves j by at most one block)."""
        mask = np.ones(self.dim, dtype=bool)
        if self.truncated and self.j_max is not None:
            cut = self.j_max.twice - 2 * order
            for i, (j, _m) in enumerate(self.states()):
                if j.twice > cut:
                    mask[i] = False
        return mask


def build_basis(label: RepLabel, j_max: HalfInt) -> Basis:
    """Basis for a label: full spin content if finite, l0..j_max if infinite."""
    if j_max < label.l0:
        raise ValueError(f"j_max = {j_max} below l0 = {label.l0}")
    cls = classify(label)
    if cls.kind == "finite":
        return Basis(spins=cls.spins, truncated=False)
    return Basis(spins=tuple(half_range(label.l0, j_max)), truncated=True, j_max=j_max)


# --------------------------------------------------------------------------
# matrices with structure metadata

Pattern = frozenset  # of (delta_j, delta_m) int pairs

GENERATOR_PATTERNS: dict[str, Pattern] = {
    "m_plus": frozenset({(0, 1)}),
    "m_minus": frozenset({(0, -1)}),
    "m3": frozenset({(0, 0)}),
    "n_plus": frozenset({(-1, 1), (0, 1), (1, 1)}),
    "n_minus": frozenset({(-1, -1), (0, -1), (1, -1)}),
    "n3": frozenset({(-1, 0), (0, 0), (1, 0)}),
    "n3_tilde": frozenset({(-1, 0), (0, 0), (1, 0)}),
    "casimir": frozenset({(-1, 0), (0, 0), (1, 0)}),
}


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense complex matrix plus its declared (delta_j, delta_m) block pattern.

    pattern is None for matrices living on spaces without a (j, m) grading
    (tensor-product embeddings).
    """

    data: np.ndarray
    pattern: Optional[Pattern] = None

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype=np.complex128)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def max_norm(self) -> float:
        return float(np.max(np.abs(self.data))) if self.data.size else 0.0


def pattern_violation(op: OperatorMatrix, basis: Basis) -> float:
    """Largest |entry| outside the declared pattern (0.0 for clean matrices)."""
    if op.pattern is None:
        return 0.0
    states = basis.states()
    worst = 0.0
    a = op.data
    for r, (jr, mr) in enumerate(states):
        for c, (jc, mc) in enumerate(states):
            step = ((jr.twice - jc.twice) // 2, (mr.twice - mc.twice) // 2)
            if step not in op.pattern and abs(a[r, c]) > worst:
                worst = abs(a[r, c])
    return worst


def diag_from_m(basis: Basis, f: Callable[[HalfInt], complex]) -> np.ndarray:
    """Diagonal matrix with entry f(m) on state (j, m), evaluated spectrally."""
    return np.diag(np.array([f(m) for _j, m in basis.states()], dtype=np.complex128))


# --------------------------------------------------------------------------
# conventions

_ST_QUARTER_OPTIONS = (1, 2, 0, 4)  # exponent in quarter units: 1/4, 1/2, 0, 1


@dataclass(frozen=True)
class ConventionId:
    """Enumerated readings of the ambiguous exponents and pairings.

    n_mid_exp      0: diagonal boost term carries q^(-+ m/2)   1: q^(+- m/2)
    n_down_dm      0: the j-1 boost term shifts m by +-1       1: leaves m fixed
    n_first_shift  quarter-power on the j-1 term: 0: -1/4, 1: 0, 2: +1/4
    n_third_shift  quarter-power on the j+1 term: 0: +1/4, 1: 0, 2: -1/4
    st_quarters    scalar prefactor exponent of S/T in quarter units (default 1)
    line45_swap    0: diagonal boosts pair as printed in the algebra's two
                      single-boost lines, 1: swapped pairing
    cop_r_grouplike 0: the coproduct of the lowering right-chiral generator
                      uses the left grouplike (as printed), 1: the right one
    """

    n_mid_exp: int = 0
    n_down_dm: int = 0
    n_first_shift: int = 0
    n_third_shift: int = 0
    st_quarters: int = 1
    line45_swap: int = 0
    cop_r_grouplike: int = 0

    _FIELDS = (
        "n_mid_exp",
        "n_down_dm",
        "n_first_shift",
        "n_third_shift",
        "st_quarters",
        "line45_swap",
        "cop_r_grouplike",
    )
    _RANGES = {
        "n_mid_exp": (0, 1),
        "n_down_dm": (0, 1),
        "n_first_shift": (0, 1, 2),
        "n_third_shift": (0, 1, 2),
        "st_quarters": _ST_QUARTER_OPTIONS,
        "line45_swap": (0, 1),
        "cop_r_grouplike": (0, 1),
    }

    def __post_init__(self):
        for name in self._FIELDS:
            if getattr(self, name) not in self._RANGES[name]:
                raise ValueError(f"{name} = {getattr(self, name)} outside catalogued options")

    def to_list(self) -> list[int]:
        return [getattr(self, name) for name in self._FIELDS]

    @staticmethod
    def from_list(vals: Iterable[int]) -> "ConventionId":
        vals = list(vals)
        return ConventionId(**dict(zip(ConventionId._FIELDS, vals)))

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.to_list())

    @staticmethod
    def parse(s: str) -> "ConventionId":
        return ConventionId.from_list(int(t) for t in s.split(","))


DEFAULT_CONVENTION = ConventionId()

# The readings under which the whole relation suite closes to machine
# precision (found by resolve_conventions; kept as a named constant so the
# builders and the resolver agree on what "resolved" means).
RESOLVED_CONVENTION = ConventionId(st_quarters=2, cop_r_grouplike=1)


# --------------------------------------------------------------------------
# generator construction on a labelled basis


def _qn(x: HalfInt, d: Deformation) -> float:
    return q_number(x, d)


def build_M(basis: Basis, d: Deformation) -> tuple[OperatorMatrix, OperatorMatrix, OperatorMatrix]:
    """Rotation generators: raising/lowering within each spin block, weight on
    the diagonal.  Entries are real; M3 is exact (half-integers are binary)."""
    n = basis.dim
    lnq = math.log(d.q)
    mp = np.zeros((n, n), dtype=np.complex128)
    mm = np.zeros((n, n), dtype=np.complex128)
    m3 = np.zeros((n, n), dtype=np.complex128)
    for j in basis.spins:
        for m in half_range(-j, j):
            col = basis.index(j, m)
            m3[col, col] = float(m)
            if m < j:
                amp = math.sqrt(_qn(j - m, d) * _qn(j + m + 1, d))
                mp[basis.index(j, m + 1), col] = amp * math.exp((-0.25 - float(m) / 2) * lnq)
            if -j < m:
                amp = math.sqrt(_qn(j + m, d) * _qn(j - m + 1, d))
                mm[basis.index(j, m - 1), col] = amp * math.exp((-0.25 + float(m) / 2) * lnq)
    return (
        OperatorMatrix(mp, GENERATOR_PATTERNS["m_plus"]),
        OperatorMatrix(mm, GENERATOR_PATTERNS["m_minus"]),
        OperatorMatrix(m3, GENERATOR_PATTERNS["m3"]),
    )


def _n_pattern(conv: ConventionId, sign: int) -> Pattern:
    dm = 1 if sign > 0 else -1
    down_dm = 0 if conv.n_down_dm else dm
    return frozenset({(-1, down_dm), (0, dm), (1, dm)})


def build_N(
    basis: Basis, label: RepLabel, conv: ConventionId = DEFAULT_CONVENTION
) -> tuple[OperatorMatrix, OperatorMatrix, OperatorMatrix]:
    """Boost generators from the coupling coefficients a_j, c_j.

    Each column (j, m) couples to blocks j-1, j, j+1 with m shifted by the
    boost's charge (except under the catalogued degenerate reading of the
    j-1 term).  Couplings to absent blocks are dropped: for finite labels
    the top coupling is exactly zero anyway, for truncated bases this is the
    truncation boundary.
    """
    d = label.d
    n = basis.dim
    lnq = math.log(d.q)
    quarter = {0: -0.25, 1: 0.0, 2: 0.25}[conv.n_first_shift]
    quarter3 = {0: 0.25, 1: 0.0, 2: -0.25}[conv.n_third_shift]
    mid_sign = -1.0 if conv.n_mid_exp == 0 else 1.0

    a = {j: coeff_a(j, label) for j in basis.spins}
    c = {j: coeff_c(j, label) for j in basis.spins}
    top = basis.spins[-1]
    c[top + 1] = coeff_c(top + 1, label)

    np_ = np.zeros((n, n), dtype=np.complex128)
    nm = np.zeros((n, n), dtype=np.complex128)
    n3 = np.zeros((n, n), dtype=np.complex128)

    def qp(e: float) -> float:
        return math.exp(e * lnq)

    for j in basis.spins:
        for m in half_range(-j, j):
            col = basis.index(j, m)
            fm = float(m)
            fj = float(j)

            # raising boost
            tgt_m = m if conv.n_down_dm else m + 1
            if basis.has(j - 1, tgt_m):
                amp = math.sqrt(_qn(j - m, d) * _qn(j - m - 1, d))
                np_[basis.index(j - 1, tgt_m), col] += (
                    c[j] * amp * qp(quarter - (fj + fm) / 2)
                )
            if basis.has(j, m + 1):
                amp = math.sqrt(_qn(j - m, d) * _qn(j + m + 1, d))
                np_[basis.index(j, m + 1), col] += -a[j] * amp * qp(-0.25 + mid_sign * fm / 2)
            if basis.has(j + 1, m + 1):
                amp = math.sqrt(_qn(j + m + 1, d) * _qn(j + m + 2, d))
                np_[basis.index(j + 1, m + 1), col] += (
                    c[j + 1] * amp * qp(quarter3 + (fj - fm) / 2)
                )

            # lowering boost
            tgt_m = m if conv.n_down_dm else m - 1
            if basis.has(j - 1, tgt_m):
                amp = math.sqrt(_qn(j + m, d) * _qn(j + m - 1, d))
                nm[basis.index(j - 1, tgt_m), col] += (
                    -c[j] * amp * qp(quarter - (fj - fm) / 2)
                )
            if basis.has(j, m - 1):
                amp = math.sqrt(_qn(j + m, d) * _qn(j - m + 1, d))
                nm[basis.index(j, m - 1), col] += -a[j] * amp * qp(-0.25 - mid_sign * fm / 2)
            if basis.has(j + 1, m - 1):
                amp = math.sqrt(_qn(j - m + 1, d) * _qn(j - m + 2, d))
                nm[basis.index(j + 1, m - 1), col] += (
                    -c[j + 1] * amp * qp(quarter3 + (fj + fm) / 2)
                )

            # diagonal boost
            if basis.has(j - 1, m):
                amp = math.sqrt(_qn(j - m, d) * _qn(j + m, d))
                n3[basis.index(j - 1, m), col] += c[j] * amp * qp(-fm / 2)
            n3[col, col] += -a[j] * _qn(m, d) * qp(-fm / 2)
            if basis.has(j + 1, m):
                amp = math.sqrt(_qn(j + m + 1, d) * _qn(j - m + 1, d))
                n3[basis.index(j + 1, m), col] += -c[j + 1] * amp * qp(-fm / 2)

    return (
        OperatorMatrix(np_, _n_pattern(conv, +1)),
        OperatorMatrix(nm, _n_pattern(conv, -1)),
        OperatorMatrix(n3, GENERATOR_PATTERNS["n3"]),
    )


def build_N3_tilde(
    m_plus: OperatorMatrix,
    n_minus: OperatorMatrix,
    basis: Basis,
    c_scalar: complex,
    d: Deformation,
    rule_tol: float = 1e-10,
) -> OperatorMatrix:
    """Second diagonal boost, solved out of the relation that defines it:

        M+ N- q^(-1/2) - q^(1/2) N- M+ = [2] N3t + delta * c * 1.

    The result must stay block-tridiagonal in j with no m shift; a violation
    above rule_tol * scale means the convention used for N- is inconsistent
    and raises `ConstructionInconsistencyError`.
    """
    rq = math.sqrt(d.q)
    lhs = m_plus.data @ n_minus.data / rq - rq * (n_minus.data @ m_plus.data)
    lhs = lhs - d.delta * c_scalar * np.eye(basis.dim, dtype=np.complex128)
    out = OperatorMatrix(lhs / q_number(HalfInt.from_int(2), d), GENERATOR_PATTERNS["n3_tilde"])
    scale = max(1.0, m_plus.max_norm * n_minus.max_norm)
    bad = pattern_violation(out, basis)
    if bad > rule_tol * scale:
        raise ConstructionInconsistencyError(
            f"derived diagonal boost violates its selection rule by {bad:.3e} "
            f"(scale {scale:.3e}); convention mismatch"
        )
    return out


def build_casimir_matrix(
    m_plus: OperatorMatrix,
    m_minus: OperatorMatrix,
    n_plus: OperatorMatrix,
    n_minus: OperatorMatrix,
    n3: OperatorMatrix,
    n3_tilde: OperatorMatrix,
    d: Deformation,
) -> OperatorMatrix:
    """Quadratic invariant assembled from the two mixed rotation-boost relations.

    Averaging those relations solved for the central term gives

        C = [ (M+N- + M-N+) q^(-1/2) - (N-M+ + N+M-) q^(1/2)
              - [2](N3t - N3) ] / (2 delta).

    The raising/lowering part alone (the printed form of the invariant) is
    provably not scalar on any block with two distinct |m|; the diagonal
    correction restores centrality and the i[l0][l1] eigenvalue.

    The division by delta amplifies roundoff as 1/(q-1): near the classical
    point, compare eigenvalues, not this matrix entrywise.
    """
    rq = math.sqrt(d.q)
    two = q_number(HalfInt.from_int(2), d)
    num = (m_plus.data @ n_minus.data + m_minus.data @ n_plus.data) / rq
    num = num - rq * (n_minus.data @ m_plus.data + n_plus.data @ m_minus.data)
    num = num - two * (n3_tilde.data - n3.data)
    return OperatorMatrix(num / (2.0 * d.delta), GENERATOR_PATTERNS["casimir"])


@dataclass(frozen=True)
class GeneratorSet:
    """The seven generator matrices plus the invariant, frozen after build."""

    basis: Basis
    label: RepLabel
    convention: ConventionId
    tag: str
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

    @property
    def d(self) -> Deformation:
        return self.label.d

    @property
    def c_scalar(self) -> complex:
        return casimir_eigenvalue(self.label)


def build_generator_set(
    label: RepLabel,
    j_max: Optional[HalfInt] = None,
    conv: ConventionId = DEFAULT_CONVENTION,
) -> GeneratorSet:
    """Full generator set for a label (j_max defaults to l0 + 8 when needed)."""
    if j_max is None:
        j_max = label.l0 + 8
    basis = build_basis(label, j_max)
    mp, mm, m3 = build_M(basis, label.d)
    np_, nm, n3 = build_N(basis, label, conv)
    c = casimir_eigenvalue(label)
    n3t = build_N3_tilde(mp, nm, basis, c, label.d)
    cas = build_casimir_matrix(mp, mm, np_, nm, n3, n3t, label.d)
    return GeneratorSet(
        basis=basis,
        label=label,
        convention=conv,
        tag="label",
        m_plus=mp,
        m_minus=mm,
        m3=m3,
        n_plus=np_,
        n_minus=nm,
        n3=n3,
        n3_tilde=n3t,
        casimir=cas,
    )


# --------------------------------------------------------------------------
# deformed-rotation realization and tensor operators


@dataclass(frozen=True)
class SuQ2Triple:
    """Standard deformed spin-j rotation matrices (no q-tensor dressing)."""

    basis: Basis
    m_plus: OperatorMatrix
    m_minus: OperatorMatrix
    m3: OperatorMatrix
    d: Deformation


def suq2_matrices(two_j: int, d: Deformation) -> SuQ2Triple:
    """Spin-j matrices with [m+, m-] = [2 m3]: entries sqrt([j-+m][j+-m+1])."""
    if two_j < 1:
        raise ValueError(f"need two_j >= 1, got {two_j}")
    j = HalfInt(two_j)
    basis = Basis(spins=(j,), truncated=False)
    n = basis.dim
    mp = np.zeros((n, n), dtype=np.complex128)
    mm = np.zeros((n, n), dtype=np.complex128)
    m3 = np.zeros((n, n), dtype=np.complex128)
    for m in half_range(-j, j):
        col = basis.index(j, m)
        m3[col, col] = float(m)
        if m < j:
            mp[basis.index(j, m + 1), col] = math.sqrt(_qn(j - m, d) * _qn(j + m + 1, d))
        if -j < m:
            mm[basis.index(j, m - 1), col] = math.sqrt(_qn(j + m, d) * _qn(j - m + 1, d))
    return SuQ2Triple(
        basis=basis,
        m_plus=OperatorMatrix(mp, GENERATOR_PATTERNS["m_plus"]),
        m_minus=OperatorMatrix(mm, GENERATOR_PATTERNS["m_minus"]),
        m3=OperatorMatrix(m3, GENERATOR_PATTERNS["m3"]),
        d=d,
    )


def build_from_suq2(two_j: int, d: Deformation) -> GeneratorSet:
    """Lorentz generators realized inside a single deformed spin-j block.

    The rotations are the q-tensor dressing of the standard spin-j matrices,
    the boosts are -i times them, and the diagonal boosts are -i[m3]q^(-+m3/2).
    This set coincides with the (l0 = j, l1 = j+1) two-constant representation
    and satisfies the whole relation suite identically.
    """
    tri = suq2_matrices(two_j, d)
    basis, j = tri.basis, HalfInt(two_j)
    q14 = math.pow(d.q, -0.25)
    qm = diag_from_m(basis, lambda m: math.pow(d.q, -float(m) / 2))
    qp = diag_from_m(basis, lambda m: math.pow(d.q, float(m) / 2))
    mp = OperatorMatrix(q14 * tri.m_plus.data @ qm, GENERATOR_PATTERNS["m_plus"])
    mm = OperatorMatrix(q14 * tri.m_minus.data @ qp, GENERATOR_PATTERNS["m_minus"])
    np_ = OperatorMatrix(-1j * mp.data, GENERATOR_PATTERNS["n_plus"])
    nm = OperatorMatrix(-1j * mm.data, GENERATOR_PATTERNS["n_minus"])
    n3 = OperatorMatrix(
        diag_from_m(basis, lambda m: -1j * q_number(m, d) * math.pow(d.q, -float(m) / 2)),
        GENERATOR_PATTERNS["n3"],
    )
    n3t = OperatorMatrix(
        diag_from_m(basis, lambda m: -1j * q_number(m, d) * math.pow(d.q, float(m) / 2)),
        GENERATOR_PATTERNS["n3_tilde"],
    )
    label = RepLabel(j, complex(float(j) + 1.0), d)
    cas = build_casimir_matrix(mp, mm, np_, nm, n3, n3t, d)
    return GeneratorSet(
        basis=basis,
        label=label,
        convention=DEFAULT_CONVENTION,
        tag=f"suq2-realization spin {j}",
        m_plus=mp,
        m_minus=mm,
        m3=tri.m3,
        n_plus=np_,
        n_minus=nm,
        n3=n3,
        n3_tilde=n3t,
        casimir=cas,
    )


@dataclass(frozen=True)
class TensorOperator:
    """2l+1 components, keyed by the weight m; component m shifts weights by m."""

    l: HalfInt
    components: dict[int, OperatorMatrix]

    def component(self, m: int) -> OperatorMatrix:
        return self.components[m]


def build_ST_vectors(
    two_j: int, d: Deformation, conv: ConventionId = DEFAULT_CONVENTION
) -> tuple[TensorOperator, TensorOperator]:
    """The two rank-1 vector operators built from the standard spin-j matrices.

        S_+- = +- q^(-+e) m_+- q^(-m3/2)   S_0 = [2]^(-1/2)(q^(-1/2) m- m+ - q^(1/2) m+ m-)
        T_+- = +- q^(+-e) m_+- q^(+m3/2)   T_0 = [2]^(-1/2)(q^(1/2) m- m+ - q^(-1/2) m+ m-)

    The scalar prefactor exponent e is catalogued (conv.st_quarters quarter
    units); e = 1/2 is the reading under which S satisfies the q -> 1/q
    variant and T the primary variant of the tensor-operator relations
    exactly.
    """
    tri = suq2_matrices(two_j, d)
    basis = tri.basis
    e = conv.st_quarters / 4.0
    qe = math.pow(d.q, e)
    qdn = diag_from_m(basis, lambda m: math.pow(d.q, -float(m) / 2))
    qup = diag_from_m(basis, lambda m: math.pow(d.q, float(m) / 2))
    mp, mm = tri.m_plus.data, tri.m_minus.data
    inv_sqrt2 = 1.0 / math.sqrt(q_number(HalfInt.from_int(2), d))
    rq = math.sqrt(d.q)

    s_plus = (1.0 / qe) * mp @ qdn
    s_minus = -qe * mm @ qdn
    s_zero = inv_sqrt2 * (mm @ mp / rq - rq * mp @ mm)
    t_plus = qe * mp @ qup
    t_minus = -(1.0 / qe) * mm @ qup
    t_zero = inv_sqrt2 * (rq * mm @ mp - mp @ mm / rq)

    def comp(arr: np.ndarray, dm: int) -> OperatorMatrix:
        return OperatorMatrix(arr, frozenset({(0, dm)}))

    s = TensorOperator(
        l=HalfInt.from_int(1),
        components={1: comp(s_plus, 1), 0: comp(s_zero, 0), -1: comp(s_minus, -1)},
    )
    t = TensorOperator(
        l=HalfInt.from_int(1),
        components={1: comp(t_plus, 1), 0: comp(t_zero, 0), -1: comp(t_minus, -1)},
    )
    return s, t


def tensor_embed(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    """Kronecker product; the (j, m) grading does not survive, so no pattern."""
    return OperatorMatrix(np.kron(a.data, b.data), None)


# --------------------------------------------------------------------------
# coordinate-format export / import

_HEADER_RE = re.compile(r"^# dim=(\d+) label=(\S+) convention=(\S+)$")


def _label_token(label: RepLabel) -> str:
    return "l0:%s;l1:%.17g,%.17g;q:%.17g" % (
        label.l0,
        label.l1.real,
        label.l1.imag,
        label.d.q,
    )


def _parse_label_token(tok: str) -> RepLabel:
    parts = dict(p.split(":", 1) for p in tok.split(";"))
    re_, im_ = parts["l1"].split(",")
    return RepLabel(
        HalfInt.parse(parts["l0"]), complex(float(re_), float(im_)), Deformation(float(parts["q"]))
    )


def export_matrix(op: OperatorMatrix, label: RepLabel, conv: ConventionId, path) -> None:
    """Coordinate text format: header then one "row col re im" line per
    nonzero entry (0-based indices, %.17g, row-major order)."""
    lines = [f"# dim={op.dim} label={_label_token(label)} convention={conv}"]
    a = op.data
    for r in range(op.dim):
        for c in range(op.dim):
            z = a[r, c]
            if z != 0:
                lines.append("%d %d %.17g %.17g" % (r, c, z.real, z.imag))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def import_matrix(path) -> tuple[np.ndarray, RepLabel, ConventionId]:
    with open(path) as fh:
        header = fh.readline().rstrip("\n")
        m = _HEADER_RE.match(header)
        if not m:
            raise ValueError(f"bad matrix header in {path}: {header!r}")
        dim = int(m.group(1))
        label = _parse_label_token(m.group(2))
        conv = ConventionId.parse(m.group(3))
        arr = np.zeros((dim, dim), dtype=np.complex128)
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            r, c, re_, im_ = line.split()
            arr[int(r), int(c)] = complex(float(re_), float(im_))
    return arr, label, conv


_EXPORT_ORDER = ("m_plus", "m_minus", "m3", "n_plus", "n_minus", "n3", "n3_tilde", "casimir")


def export_generator_set(gens: GeneratorSet, directory) -> list[str]:
    """Write every generator to <directory>/<name>.txt; returns the file names."""
    import os

    os.makedirs(directory, exist_ok=True)
    names = []
    for name in _EXPORT_ORDER:
        fname = f"{name}.txt"
        export_matrix(gens.matrices()[name], gens.label, gens.convention, os.path.join(directory, fname))
        names.append(fname)
    return names


def import_generator_set(directory) -> GeneratorSet:
    """Rebuild a GeneratorSet from an export directory.

    Patterns are reattached by generator name; imported entries are taken as
    data and validated by the relation suites, not at load time (a perturbed
    import must surface as relation failures, not a parse error).
    """
    import os

    arrays: dict[str, np.ndarray] = {}
    label: Optional[RepLabel] = None
    conv = DEFAULT_CONVENTION
    for name in _EXPORT_ORDER:
        arr, lab, conv = import_matrix(os.path.join(directory, f"{name}.txt"))
        arrays[name] = arr
        label = lab
    assert label is not None
    j_max = label.l0 + 8
    cls = classify(label)
    if cls.kind == "infinite":
        n_blocks = 0
        dim = arrays["m3"].shape[0]
        j, total = label.l0, 0
        while total < dim:
            total += j.twice + 1
            n_blocks += 1
            j = j + 1
        j_max = label.l0 + (n_blocks - 1)
    basis = build_basis(label, j_max)
    ops = {
        name: OperatorMatrix(arrays[name], GENERATOR_PATTERNS[name]) for name in _EXPORT_ORDER
    }
    return GeneratorSet(
        basis=basis, label=label, convention=conv, tag="imported", **ops
    )
