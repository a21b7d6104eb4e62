"""Diffeomorphism arithmetic for the homotopy projective spaces Sigma(d)/tau.

Only exact integers appear here. Sufficient conditions, necessary conditions
and open cases are kept apart: nothing is ever reported as "distinct" unless
a necessary condition fails.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence


class Verdict(str, enum.Enum):
    SUFFICIENT = "Sufficient"
    UNKNOWN = "Unknown"


class KervaireType(str, enum.Enum):
    STANDARD = "Standard"
    KERVAIRE = "Kervaire"
    STANDARD_BY_LOW_DIM = "StandardByLowDim"
    OPEN_DIM_125 = "OpenDim125"


# dimensions in which the Kervaire sphere is known to be standard
KERVAIRE_STANDARD_DIMS = (5, 13, 29, 61)
KERVAIRE_OPEN_DIM = 125

RULE_MOD16 = "dim 5: d = d' mod 16 implies oriented diffeomorphic (sufficient only)"
RULE_ATIYAH_BOTT = "dim 4k+1: diffeomorphic implies d = +-d' mod 2^(2k+2) (necessary only)"
RULE_KERVAIRE = "Sigma(d) is standard for d = +-1 mod 8 and the Kervaire sphere for d = +-3 mod 8"
RULE_ETA = "relative eta is constant on path components of positive scalar curvature metrics"
RULE_GIFFEN = "at least 2^(2k) pairwise non-diffeomorphic Sigma(d)/tau in dimension 4k+1"


def _odd(name: str, value: int, minimum: int = 1) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or value % 2 == 0 or value < minimum:
        raise ValueError(f"{name} must be an odd integer >= {minimum}, got {value}")


def _positive(name: str, value: int) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ValueError(f"{name} must be an integer >= 1, got {value}")


def same_oriented_diffeo_dim5(d: int, d_prime: int) -> Verdict:
    _odd("d", d)
    _odd("d_prime", d_prime)
    return Verdict.SUFFICIENT if (d - d_prime) % 16 == 0 else Verdict.UNKNOWN


def diffeo_necessary_condition(d: int, d_prime: int, k: int) -> bool:
    """False means Sigma(d)/tau and Sigma(d')/tau are provably not diffeomorphic."""
    _odd("d", d)
    _odd("d_prime", d_prime)
    _positive("k", k)
    mod = 2 ** (2 * k + 2)
    return (d - d_prime) % mod == 0 or (d + d_prime) % mod == 0


def kervaire_type(n: int, d: int) -> KervaireType:
    _odd("n", n, 3)
    _odd("d", d)
    if d % 8 in (1, 7):
        return KervaireType.STANDARD
    dim = 2 * n - 1
    if dim in KERVAIRE_STANDARD_DIMS:
        return KervaireType.STANDARD_BY_LOW_DIM
    if dim == KERVAIRE_OPEN_DIM:
        return KervaireType.OPEN_DIM_125
    return KervaireType.KERVAIRE


# --------------------------------------------------------------------------
# plumbing
# --------------------------------------------------------------------------
@dataclass(frozen=True)
class PlumbingGraph:
    """The line graph A_{d-1}: d-1 disk tangent bundles plumbed in a row."""

    vertices: int
    edges: tuple[tuple[int, int], ...]
    kind: str = "A"

    def __post_init__(self):
        if self.kind != "A":
            raise ValueError("only the line graph A_{d-1} is supported")
        degree = [0] * self.vertices
        for a, b in self.edges:
            if not (0 <= a < self.vertices and 0 <= b < self.vertices) or a == b:
                raise ValueError(f"bad edge {(a, b)}")
            degree[a] += 1
            degree[b] += 1
        if self.vertices and len(self.edges) != self.vertices - 1:
            raise ValueError("a line graph on v vertices has v - 1 edges")
        if not self.vertices and self.edges:
            raise ValueError("the empty graph has no edges")
        if any(deg > 2 for deg in degree):
            raise ValueError("line graph vertices have degree at most 2")
        if self.vertices and not self._connected():
            raise ValueError("plumbing graph must be connected")

    def _connected(self) -> bool:
        adj: dict[int, list[int]] = {i: [] for i in range(self.vertices)}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        seen, stack = {0}, [0]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return len(seen) == self.vertices

    @classmethod
    def line(cls, d: int) -> PlumbingGraph:
        _odd("d", d)
        v = d - 1
        return cls(v, tuple((i, i + 1) for i in range(v - 1)))

    def tau_fixed_points(self) -> int:
        """tau = -Id fixes the two poles of each zero section; a plumbing identifies two of them."""
        if self.vertices == 0:
            # d = 1: W(1) is a disk and tau has the origin as its only fixed point
            return 1
        return 2 * self.vertices - len(self.edges)


def plumbing_fixed_points(d: int) -> int:
    count = PlumbingGraph.line(d).tau_fixed_points()
    if count != d:
        raise AssertionError(f"plumbing count {count} disagrees with the closed form {d}")
    return count


# --------------------------------------------------------------------------
# families and counts
# --------------------------------------------------------------------------
def generate_family(d0: int, k: int, count: int) -> list[int]:
    """[d0 + i 2^(2k+2) for i = 1..count].

    For k >= 2 the base must satisfy 0 < d0 < 2^(2k+1); in dimension 5
    (k = 1) any odd d0 is accepted.
    """
    _odd("d0", d0)
    _positive("k", k)
    if not isinstance(count, int) or isinstance(count, bool) or count < 0:
        raise ValueError(f"count must be a nonnegative integer, got {count}")
    if k > 1 and not d0 < 2 ** (2 * k + 1):
        raise ValueError(f"d0 must lie in (0, {2 ** (2 * k + 1)}) for k = {k}")
    step = 2 ** (2 * k + 2)
    family = [d0 + i * step for i in range(1, count + 1)]
    for d in family:
        if not diffeo_necessary_condition(d0, d, k):
            raise AssertionError("family member fails the necessary condition")
        if k == 1 and same_oriented_diffeo_dim5(d0, d) is not Verdict.SUFFICIENT:
            raise AssertionError("dim 5 family member is not in the mod 16 class")
    return family


def component_lower_bound(etas: Sequence) -> int:
    """Number of distinct exact relative eta values."""
    if not etas:
        raise ValueError("component_lower_bound needs at least one value")
    return len(set(etas))


def sign_orbit_representatives(modulus: int) -> list[int]:
    """Odd residues r mod ``modulus`` up to r ~ -r, smallest representative of each orbit."""
    reps = set()
    for r in range(1, modulus, 2):
        reps.add(min(r, (-r) % modulus))
    return sorted(reps)


def giffen_type_count(k: int) -> int:
    _positive("k", k)
    count = 2 ** (2 * k)
    if count != len(range(1, 2 ** (2 * k + 2), 2)) // 2:
        raise AssertionError("odd residues mod 2^(2k+2) do not pair up under sign")
    return count


def diffeo_class_key(d: int, k: int) -> str:
    """Class label for a row: the mod 16 class in dim 5, the +-residue class otherwise."""
    _odd("d", d)
    _positive("k", k)
    if k == 1:
        return f"d={d % 16} mod 16"
    mod = 2 ** (2 * k + 2)
    return f"d=+-{min(d % mod, (-d) % mod)} mod {mod}"


# --------------------------------------------------------------------------
# report
# --------------------------------------------------------------------------
@dataclass
class ClassRow:
    d: int
    diffeo_class: str
    kervaire: KervaireType
    eta: object
    components: int = 0

    def to_json(self) -> dict:
        return {"d": self.d, "diffeo_class": self.diffeo_class, "kervaire": self.kervaire.value,
                "eta": str(self.eta), "components": self.components}


@dataclass
class ClassReport:
    dimension: int
    k: int
    rows: list[ClassRow] = field(default_factory=list)
    component_bound: int = 0
    attained_types: list[str] = field(default_factory=list)
    type_count: int = 0
    families: list[dict] = field(default_factory=list)
    distinct_pairs: list[tuple[int, int]] = field(default_factory=list)
    rules: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "k": self.k,
            "rows": [r.to_json() for r in self.rows],
            "component_lower_bound": self.component_bound,
            "attained_types": self.attained_types,
            "type_count_lower_bound": self.type_count,
            "families": self.families,
            "provably_distinct_pairs": [list(p) for p in self.distinct_pairs],
            "rules": self.rules,
        }


def build_class_report(ds: Sequence[int], k: int, eta_fn) -> ClassReport:
    """Assemble the report for the d values ``ds`` in dimension 4k+1.

    ``eta_fn(d)`` supplies the relative eta-invariant; rows are in the
    given order, and the running component bound counts distinct values so far.
    """
    _positive("k", k)
    if not ds:
        raise ValueError("empty d range")
    n = 2 * k + 1
    report = ClassReport(4 * k + 1, k)
    seen: set = set()
    for d in ds:
        eta = eta_fn(d)
        seen.add(eta)
        report.rows.append(ClassRow(d, diffeo_class_key(d, k), kervaire_type(n, d), eta, len(seen)))
    report.component_bound = component_lower_bound([r.eta for r in report.rows])
    mod = 2 ** (2 * k + 2)
    classes: dict[int, list[int]] = {}
    for d in ds:
        classes.setdefault(min(d % mod, (-d) % mod), []).append(d)
    report.attained_types = [f"+-{r} mod {mod}" for r in sorted(classes)]
    report.type_count = len(classes)
    for r, members in sorted(classes.items()):
        report.families.append({"residue": r, "modulus": mod, "members": members})
    reps = sorted(min(m) for m in classes.values())
    report.distinct_pairs = [(a, b) for i, a in enumerate(reps) for b in reps[i + 1:]
                             if not diffeo_necessary_condition(a, b, k)]
    report.rules = [
        {"rule": RULE_ATIYAH_BOTT, "kind": "necessary", "applied_to": "provably_distinct_pairs"},
        {"rule": RULE_KERVAIRE, "kind": "classification", "applied_to": "kervaire"},
        {"rule": RULE_ETA, "kind": "invariant", "applied_to": "component_lower_bound"},
        {"rule": RULE_GIFFEN, "kind": "count", "value": giffen_type_count(k)},
    ]
    if k == 1:
        report.rules.insert(0, {"rule": RULE_MOD16, "kind": "sufficient", "applied_to": "diffeo_class"})
    else:
        report.rules.insert(0, {"rule": "diffeo_class groups d by the +-residue mod 2^(2k+2); "
                                         "members share the necessary condition only", "kind": "necessary",
                                "applied_to": "diffeo_class"})
    return report
