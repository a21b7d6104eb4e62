"""Fixed-point localization of equivariant and relative eta-invariants.

Everything here is exact. Local contributions live in cyclotomic fields and
are only converted to rationals after checking that the value really is
rational. The pipelines assume the positive-scalar-curvature regime, where
the equivariant index and kernel terms of the fixed point formula vanish; the
general formula is rejected rather than approximated.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from math import lcm
from typing import Mapping, Sequence

from .brieskorn import BrieskornData, GroupElementAction, tangent_rotation_turns_many, tau_fixed_points
from .cyclotomic import CyclotomicNumber, one_over_one_minus_root
from .exact import EtaValue, format_rational, parse_rational

DEFAULT_DENOMINATOR_BOUND = 64


class NonvanishingIndexError(ValueError):
    """The fixed point formula was requested outside the vanishing regime."""


@dataclass(frozen=True)
class RotationData:
    """Rotation angles (fractions of a full turn) at an isolated fixed point."""

    angles: tuple[Fraction, ...]

    def __init__(self, angles: Sequence):
        parsed = tuple(a if type(a) is Fraction else parse_rational(a) for a in angles)
        for a in parsed:
            if a.denominator == 1:
                raise ValueError("zero rotation angle: the fixed point is not isolated")
            if not 0 < a < 1:
                raise ValueError(f"rotation angles must lie in (0, 1), got {a}")
        object.__setattr__(self, "angles", parsed)

    @classmethod
    def involution(cls, complex_dim: int) -> RotationData:
        return cls([Fraction(1, 2)] * complex_dim)

    @property
    def complex_dimension(self) -> int:
        return len(self.angles)

    @property
    def conductor(self) -> int:
        return lcm(1, *(a.denominator for a in self.angles))

    def to_json(self) -> list[str]:
        return [format_rational(a) for a in self.angles]


@dataclass(frozen=True)
class CharacterTable:
    """Character of a representation of a cyclic-indexed finite group.

    ``values[u]`` is chi(u) for u = 0..N-1, with u = 0 the identity.
    """

    order: int
    values: tuple

    def __init__(self, values: Sequence):
        vals = tuple(v if isinstance(v, CyclotomicNumber) else CyclotomicNumber.rational(parse_rational(v))
                     for v in values)
        if not vals:
            raise ValueError("empty character table")
        rank = vals[0]
        if not rank.is_rational() or rank.to_fraction() <= 0 or rank.to_fraction().denominator != 1:
            raise ValueError("chi(identity) must be a positive integer (the rank)")
        object.__setattr__(self, "order", len(vals))
        object.__setattr__(self, "values", vals)

    @property
    def rank(self) -> int:
        return int(self.values[0].to_fraction())

    @classmethod
    def trivial(cls, order: int) -> CharacterTable:
        return cls([1] * order)

    @classmethod
    def z2_sign(cls) -> CharacterTable:
        return cls([1, -1])


@dataclass(frozen=True)
class FixedPointSet:
    points: tuple[tuple[str, RotationData], ...]
    assert_psc_vanishing: bool = True

    def __init__(self, points: Sequence[tuple[str, RotationData]], assert_psc_vanishing: bool = True):
        pts = tuple((str(i), r) for i, r in points)
        ids = [i for i, _ in pts]
        if len(set(ids)) != len(ids):
            raise ValueError("fixed point ids must be unique")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "assert_psc_vanishing", bool(assert_psc_vanishing))


def dolbeault_local_contribution(rot: RotationData, denominator_bound: int = DEFAULT_DENOMINATOR_BOUND) -> CyclotomicNumber:
    """prod_j 1 / (1 - zeta_j^{-1}) with zeta_j = exp(2 pi i angle_j), exactly.

    The product is formed in Q(zeta_m) with m the lcm of the angle
    denominators, which must not exceed ``denominator_bound``.
    """
    m = rot.conductor
    if m > denominator_bound:
        raise ValueError(f"angle denominators need Q(zeta_{m}), above the bound {denominator_bound}")
    return _local_term(rot.angles, m)


@lru_cache(maxsize=4096)
def _local_term(angles: tuple[Fraction, ...], m: int) -> CyclotomicNumber:
    acc = CyclotomicNumber.rational(1, m)
    for a in angles:
        acc = acc * one_over_one_minus_root(-a, m)
    return acc


def equivariant_eta_exact(fps: FixedPointSet, denominator_bound: int = DEFAULT_DENOMINATOR_BOUND) -> CyclotomicNumber:
    """eta_u = 2 * sum of local contributions, as a cyclotomic number."""
    if not fps.assert_psc_vanishing:
        raise NonvanishingIndexError(
            "the equivariant index and boundary kernel terms are only known to vanish under "
            "positive scalar curvature; the general fixed point formula is not supported")
    total = CyclotomicNumber.rational(0)
    for _, rot in fps.points:
        total = total + dolbeault_local_contribution(rot, denominator_bound)
    return total * 2


def equivariant_eta_from_fixed_points(fps: FixedPointSet,
                                      denominator_bound: int = DEFAULT_DENOMINATOR_BOUND) -> EtaValue:
    return EtaValue(_require_rational(equivariant_eta_exact(fps, denominator_bound), "equivariant eta"))


def _require_rational(x: CyclotomicNumber, what: str) -> Fraction:
    if not x.imaginary_part_is_zero():
        raise ValueError(f"{what} has a nonzero imaginary part: {x!r}")
    if not x.is_rational():
        raise ValueError(f"{what} is real but irrational: {x!r}")
    return x.to_fraction()


def covering_eta(etas: Mapping[int, object] | Sequence, chi: CharacterTable) -> EtaValue:
    """Twisted eta on M = M^/G from equivariant etas on the cover.

    Returns (1/|G|) sum_u eta_u chi(u). ``etas`` may hold EtaValues,
    rationals or CyclotomicNumbers; the result must be rational.
    """
    if isinstance(etas, Mapping):
        keys = sorted(etas)
        if keys != list(range(chi.order)):
            raise ValueError(f"etas must be given for group elements 0..{chi.order - 1}")
        values = [etas[u] for u in keys]
    else:
        values = list(etas)
    if len(values) != chi.order:
        raise ValueError(f"{len(values)} equivariant etas for a group of order {chi.order}")
    total = CyclotomicNumber.rational(0)
    for eta_u, chi_u in zip(values, chi.values):
        if not isinstance(eta_u, CyclotomicNumber):
            eta_u = CyclotomicNumber.rational(parse_rational(eta_u))
        total = total + eta_u * chi_u
    return EtaValue(_require_rational(total / chi.order, "covering eta"))


def relative_eta_z2(eta_tau: EtaValue) -> EtaValue:
    """eta_alpha - eta on M/tau for the sign character: equals -eta_tau."""
    return -EtaValue(eta_tau)


def relative_eta_from_covering(eta_identity, eta_tau) -> EtaValue:
    """Same quantity assembled through both characters of Z_2."""
    twisted = covering_eta([eta_identity, eta_tau], CharacterTable.z2_sign())
    untwisted = covering_eta([eta_identity, eta_tau], CharacterTable.trivial(2))
    return twisted - untwisted * 1


# ---------------------------------------------------------------------------
# end-to-end pipelines
# ---------------------------------------------------------------------------
@dataclass
class EtaTrace:
    """Derivation record of one pipeline run."""

    steps: list[dict] = field(default_factory=list)

    def add(self, step: str, rule: str, value) -> None:
        if isinstance(value, (Fraction, EtaValue)):
            value = format_rational(Fraction(value.value if isinstance(value, EtaValue) else value))
        self.steps.append({"step": step, "rule": rule, "value": value})


def _check_odd(name: str, value: int, minimum: int) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum or value % 2 == 0:
        raise ValueError(f"{name} must be an odd integer >= {minimum}, got {value}")


def brieskorn_relative_eta(n: int, d: int, epsilon=Fraction(1, 2), trace: EtaTrace | None = None) -> EtaValue:
    """Relative eta-invariant of Sigma(d)/tau for the sign-twisted Spin^c Dirac operator.

    Runs the localization: tau-fixed points of W_eps, their rotation data,
    Dolbeault local terms, eta_tau, the Z_2 covering formula and finally
    eta_alpha - eta.
    """
    _check_odd("n", n, 3)
    _check_odd("d", d, 1)
    trace = trace if trace is not None else EtaTrace()
    data = BrieskornData(n, d, epsilon)
    points = tau_fixed_points(data)
    trace.add("fixed points", "tau fixes (0,...,0,lam) with lam^d = eps", len(points))
    tau = GroupElementAction.tau()
    all_turns = tangent_rotation_turns_many(data, [p.point for p in points], tau)
    fps = [(f"p{p.index}", RotationData(turns)) for p, turns in zip(points, all_turns)]
    trace.add("rotation data", "tau acts on T_p W = ker df by -1 in each complex direction",
              [r.to_json() for _, r in fps])
    fixed = FixedPointSet(fps, assert_psc_vanishing=True)
    locals_ = [dolbeault_local_contribution(r) for _, r in fps]
    trace.add("local contributions", "Dolbeault term prod 1/(1 - zeta_j^-1)",
              [format_rational(_require_rational(a, "local term")) for a in locals_])
    eta_tau = equivariant_eta_from_fixed_points(fixed)
    trace.add("equivariant eta", "Donnelly fixed point formula, index and kernel terms vanish: 2 * sum a_p", eta_tau)
    # eta(Sigma) at the identity is not computed; it cancels in the relative invariant
    rel_a = relative_eta_from_covering(0, eta_tau)
    rel_b = relative_eta_from_covering(1, eta_tau)
    if rel_a != rel_b:
        raise AssertionError("untwisted eta failed to cancel")
    trace.add("covering", "eta_alpha = (eta - eta_tau)/2, eta = (eta + eta_tau)/2; untwisted eta cancels", rel_a)
    rel = relative_eta_z2(eta_tau)
    if rel != rel_a:
        raise AssertionError("covering route and direct route disagree")
    trace.add("relative eta", "eta_alpha - eta = -eta_tau", rel)
    return rel


def plumbing_relative_eta(k: int, d: int, trace: EtaTrace | None = None) -> EtaValue:
    """Relative eta-invariant of the boundary of the A_{d-1} plumbing W(d), quotient by tau.

    W(d) has real dimension 4k+2; tau = -Id preserves the almost complex
    structure and has d isolated fixed points, each with local term 2^-(2k+1).
    """
    from .classify import plumbing_fixed_points

    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ValueError(f"k must be an integer >= 1, got {k}")
    _check_odd("d", d, 1)
    trace = trace if trace is not None else EtaTrace()
    count = plumbing_fixed_points(d)
    trace.add("fixed points", "A_{d-1} plumbing: 2(d-1) sphere poles minus (d-2) plumbing identifications", count)
    rot = RotationData.involution(2 * k + 1)
    fixed = FixedPointSet([(f"q{i}", rot) for i in range(count)], assert_psc_vanishing=True)
    local = _require_rational(dolbeault_local_contribution(rot), "local term")
    trace.add("local contributions", "tau = -Id on C^{2k+1}: all angles 1/2", format_rational(local))
    eta_tau = equivariant_eta_from_fixed_points(fixed)
    trace.add("equivariant eta", "Donnelly fixed point formula, index and kernel terms vanish: 2 * sum a_p", eta_tau)
    rel = relative_eta_z2(eta_tau)
    if rel != relative_eta_from_covering(0, eta_tau):
        raise AssertionError("covering route and direct route disagree")
    trace.add("relative eta", "eta_alpha - eta = -eta_tau", rel)
    return rel
