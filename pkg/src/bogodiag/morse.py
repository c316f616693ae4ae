"""Index counting for vector-field singular points and local zero modes.

A nondegenerate singular point carries the sign of its jacobian determinant;
the signed count over all points of a fixture must equal the supplied Euler
characteristic (index theorem check).  Around each point, the localized
quadratic-approximation operator

    sum_i ( -d_i^2 + lambda_i^2 z_i^2 + 2 lambda_i a_i a_i^+ ) - sum_i lambda_i

has per-mode levels |lambda_i| (2 m_i + 1) + 2 lambda_i f_i - lambda_i with
oscillator index m_i >= 0 and occupation f_i in {0, 1}.  It owns exactly one
zero-energy state: all m_i = 0 and f_i = 1 precisely at the negative
lambda_i, so its parity sector is even exactly when det > 0.

Jacobians are expected in orthonormal coordinates; metric pullback is out of
scope here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegeneratePoint, ValidationError
from .fock import FermionFockRep, build_fermion_rep
from .forms import StandardForm, Statistics
from .spectral import (
    Parity,
    SpectrumEntry,
    SpectrumResult,
    diagonalize_fermion,
    smallest_sums,
)

#: Relative degeneracy threshold on |det jacobian|.
DEGENERACY_TOL = 1e-10

#: Coefficient turning the jacobian's antisymmetric part into the 2-form
#: wedge coefficients; pinned by the cross-term identity test.
TWO_FORM_COEFF = -0.5


@dataclass(frozen=True)
class SingularPoint:
    """A labeled nondegenerate zero of a vector field via its jacobian."""

    label: str
    jacobian: np.ndarray

    def __post_init__(self):
        jac = np.array(self.jacobian, dtype=float, copy=True)
        if jac.ndim != 2 or jac.shape[0] != jac.shape[1] or jac.shape[0] < 1:
            raise ValidationError(f"jacobian must be square, got shape {jac.shape}")
        jac.setflags(write=False)
        object.__setattr__(self, "jacobian", jac)

    @property
    def n(self) -> int:
        return self.jacobian.shape[0]


@dataclass(frozen=True)
class VectorFieldFixture:
    """A set of singular points plus the Euler characteristic to check."""

    n: int
    chi: int
    points: tuple

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("dimension must be at least 1")
        for p in self.points:
            if p.n != self.n:
                raise ValidationError(
                    f"point {p.label!r} has dimension {p.n}, fixture has {self.n}"
                )
        object.__setattr__(self, "points", tuple(self.points))


@dataclass(frozen=True)
class PointReport:
    label: str
    sign: int
    lambdas: Optional[tuple] = None
    zero_mode_sector: Optional[Parity] = None


@dataclass(frozen=True)
class MorseReport:
    m_plus: int
    m_minus: int
    chi_computed: int
    chi_matches: bool
    points: tuple

    def to_dict(self) -> dict:
        return {
            "m_plus": self.m_plus,
            "m_minus": self.m_minus,
            "chi_computed": self.chi_computed,
            "chi_matches": self.chi_matches,
            "points": [
                {
                    "label": p.label,
                    "sign": p.sign,
                    **({"lambdas": list(p.lambdas)} if p.lambdas is not None else {}),
                    **(
                        {"zero_mode_sector": p.zero_mode_sector.value}
                        if p.zero_mode_sector is not None
                        else {}
                    ),
                }
                for p in self.points
            ],
        }


def point_sign(point: SingularPoint) -> int:
    """Sign of det(jacobian); the only local invariant of the point."""
    det = float(np.linalg.det(point.jacobian))
    if abs(det) <= DEGENERACY_TOL * float(np.linalg.norm(point.jacobian)):
        raise DegeneratePoint(f"point {point.label!r} has |det| = {abs(det):.3e}")
    return 1 if det > 0 else -1


def poincare_hopf_check(fixture: VectorFieldFixture) -> MorseReport:
    """Signed point count versus the supplied Euler characteristic."""
    reports = [PointReport(label=p.label, sign=point_sign(p)) for p in fixture.points]
    m_plus = sum(1 for r in reports if r.sign > 0)
    m_minus = len(reports) - m_plus
    chi_computed = m_plus - m_minus
    return MorseReport(
        m_plus=m_plus,
        m_minus=m_minus,
        chi_computed=chi_computed,
        chi_matches=chi_computed == fixture.chi,
        points=tuple(reports),
    )


def zero_mode_parity(point: SingularPoint) -> Parity:
    """Parity sector of the unique local zero mode: even iff det > 0."""
    point_sign(point)  # degeneracy guard
    std = StandardForm(statistics=Statistics.FERMION, C=point.jacobian, k0=0.0)
    data = diagonalize_fermion(std)
    negatives = int(np.sum(data.lambdas < 0))
    return Parity.EVEN if negatives % 2 == 0 else Parity.ODD


def morse_report(fixture: VectorFieldFixture) -> MorseReport:
    """Full report: counts, chi check, per-point spectra and parities."""
    base = poincare_hopf_check(fixture)
    detailed = []
    for p, r in zip(fixture.points, base.points):
        std = StandardForm(statistics=Statistics.FERMION, C=p.jacobian, k0=0.0)
        data = diagonalize_fermion(std)
        negatives = int(np.sum(data.lambdas < 0))
        sector = Parity.EVEN if negatives % 2 == 0 else Parity.ODD
        detailed.append(
            PointReport(
                label=r.label,
                sign=r.sign,
                lambdas=tuple(float(v) for v in data.lambdas),
                zero_mode_sector=sector,
            )
        )
    return MorseReport(
        m_plus=base.m_plus,
        m_minus=base.m_minus,
        chi_computed=base.chi_computed,
        chi_matches=base.chi_matches,
        points=tuple(detailed),
    )


def local_witten_spectrum(lambdas, count: int) -> SpectrumResult:
    """Lowest `count` levels of the localized oscillator, with (m; f) labels.

    Guaranteed: exactly one zero-energy entry, at all m_i = 0 and f_i = 1
    exactly where lambda_i < 0.
    """
    lam = np.asarray(lambdas, dtype=float)
    if np.any(lam == 0.0):
        raise DegeneratePoint("zero oscillator frequency (degenerate jacobian)")
    if count <= 0:
        return SpectrumResult(entries=(), complete=False, bounded_below=True)
    ladders = []
    labels = []
    for lv in lam:
        rungs = []
        for m in range(count):
            for f in (0, 1):
                rungs.append((abs(lv) * (2 * m + 1) + 2.0 * lv * f - lv, m, f))
        rungs.sort()
        ladders.append([r[0] for r in rungs[:count]])
        labels.append([(r[1], r[2]) for r in rungs[:count]])
    entries = []
    for total, idx in smallest_sums(ladders, count):
        ms = tuple(labels[i][j][0] for i, j in enumerate(idx))
        fs = tuple(labels[i][j][1] for i, j in enumerate(idx))
        sector = Parity.EVEN if sum(fs) % 2 == 0 else Parity.ODD
        entries.append(SpectrumEntry(energy=total, label=(ms, fs), sector=sector))
    return SpectrumResult(entries=tuple(entries), complete=False, bounded_below=True)


def wedge_contraction_identity(omega, rep: Optional[FermionFockRep] = None) -> float:
    """Residual of (w w* + w* w) - <w, w> on the exterior algebra.

    w is the wedge by the 1-form with coefficients `omega` (built from the
    creation operators) and w* its contraction adjoint.  The anticommutator
    is the scalar <w, w> exactly; the residual is floating-point noise.
    """
    omega = np.asarray(omega, dtype=float)
    n = omega.shape[0]
    rep = rep if rep is not None else build_fermion_rep(n)
    wedge = sum(omega[i] * rep.a(i).astype(float) for i in range(n))
    contraction = sum(omega[j] * rep.a_dag(j).astype(float) for j in range(n))
    target = float(omega @ omega) * np.eye(rep.dim)
    return float(np.max(np.abs(wedge @ contraction + contraction @ wedge - target)))


def cross_term_identity(omega_jac, rep: Optional[FermionFockRep] = None) -> tuple[float, float]:
    """Check that the localized cross term is purely algebraic.

    Builds Q two ways on the exterior algebra: directly as
    sum_ij W_ij (a_i + a_i^+)(a_j^+ - a_j) with W the jacobian of the 1-form,
    and as A + A^t + B + B^t where A = sum_ij W_ij a_i a_j^+ is the algebraic
    part of the derivation term and B is the wedge by the 2-form with
    coefficients TWO_FORM_COEFF * (W - W^t).  Returns (residual, const) for
    the best-fit scalar in direct - algebraic = const * identity; const
    equals -Tr W, the scalar left behind by transposing the derivation term.
    """
    w_jac = np.asarray(omega_jac, dtype=float)
    n = w_jac.shape[0]
    rep = rep if rep is not None else build_fermion_rep(n)
    a_ops = [rep.a(i).astype(float) for i in range(n)]
    adag_ops = [rep.a_dag(i).astype(float) for i in range(n)]
    xs = [a_ops[i] + adag_ops[i] for i in range(n)]
    zs = [adag_ops[i] - a_ops[i] for i in range(n)]
    dim = rep.dim
    direct = np.zeros((dim, dim))
    deriv = np.zeros((dim, dim))
    two_form = np.zeros((dim, dim))
    b_coeff = TWO_FORM_COEFF * (w_jac - w_jac.T)
    for i in range(n):
        for j in range(n):
            if w_jac[i, j] != 0.0:
                direct += w_jac[i, j] * (xs[i] @ zs[j])
                deriv += w_jac[i, j] * (a_ops[i] @ adag_ops[j])
            if b_coeff[i, j] != 0.0:
                two_form += b_coeff[i, j] * (a_ops[i] @ a_ops[j])
    algebraic = deriv + deriv.T + two_form + two_form.T
    diff = direct - algebraic
    const = float(np.trace(diff)) / dim
    residual = float(np.max(np.abs(diff - const * np.eye(dim))))
    return residual, const


def fixture_from_dict(data: dict) -> VectorFieldFixture:
    """Parse the JSON fixture schema {n, chi, points: [{label, jacobian}]}."""
    try:
        n = int(data["n"])
        chi = int(data["chi"])
        raw_points = data["points"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError("fixture requires integer 'n', 'chi' and a 'points' list") from exc
    points = []
    for entry in raw_points:
        try:
            label = str(entry["label"])
            jac = np.array(entry["jacobian"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError("each point requires 'label' and a square 'jacobian'") from exc
        points.append(SingularPoint(label=label, jacobian=jac))
    return VectorFieldFixture(n=n, chi=chi, points=tuple(points))
