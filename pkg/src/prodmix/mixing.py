"""Exact product counts and the inequalities built on them.

``N(A, B, C)`` is the number of pairs (a, b) in A x B with ab in C and
``Prob(A, B, C) = N(A, B, C) / (|A||B|)``.  All probabilities are
:class:`fractions.Fraction`; floats appear only in ``eta`` and in display
fields.  Real parameters such as ``eta`` are compared through their exact
binary value, so every window test is an exact rational comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .chartable import CharTable, min_nontrivial_degree, witten_zeta
from .errors import EmptySet, NotNormal, RoundingDrift
from .groups import ElementSet, GroupTable, inverse_set, left_translate

_BLOCK = 1 << 22  # products materialised per chunk


def _check_group(G: GroupTable, *sets: ElementSet) -> None:
    for X in sets:
        if X.group is not G:
            raise ValueError("set belongs to a different group")


def count_pairs(A: ElementSet, B: ElementSet, C: ElementSet, G: GroupTable) -> int:
    """Number of (a, b) in A x B with ab in C, by enumeration."""
    _check_group(G, A, B, C)
    a, b = A.indices(), B.indices()
    if a.size == 0 or b.size == 0 or C.size == 0:
        return 0
    step = max(1, _BLOCK // b.size)
    total = 0
    for s in range(0, a.size, step):
        total += int(C.bits[G.mul[np.ix_(a[s:s + step], b)]].sum())
    return total


def prob(A: ElementSet, B: ElementSet, C: ElementSet, G: GroupTable) -> Fraction:
    if A.size == 0 or B.size == 0:
        raise EmptySet("Prob(A, B, C) needs nonempty A and B")
    return Fraction(count_pairs(A, B, C, G), A.size * B.size)


def count_triples_g(X: ElementSet, Y: ElementSet, Z: ElementSet, g: int, G: GroupTable) -> int:
    """Number of (x, y, z) in X x Y x Z with xyz = g."""
    _check_group(G, X, Y, Z)
    x, y = X.indices(), Y.indices()
    if x.size == 0 or y.size == 0 or Z.size == 0:
        return 0
    step = max(1, _BLOCK // y.size)
    total = 0
    for s in range(0, x.size, step):
        xy = G.mul[np.ix_(x[s:s + step], y)]
        total += int(Z.bits[G.mul[G.inv[xy], g]].sum())  # z = (xy)^-1 g
    return total


def _enumerate_triples(X, Y, Z, g, G):
    x, y = X.indices(), Y.indices()
    xx, yy = np.meshgrid(x, y, indexing="ij")
    xx, yy = xx.ravel(), yy.ravel()
    zz = G.mul[G.inv[G.mul[xx, yy]], g]
    keep = Z.bits[zz]
    return xx[keep], yy[keep], zz[keep]


# character formula

def frobenius_value(i: int, j: int, l: int, T: CharTable) -> complex:
    """Unrounded N(K_i, K_j, K_l) from the character sum."""
    V = T.values
    s = np.sum(V[:, i] * V[:, j] * np.conj(V[:, l]) / T.degrees)
    sizes = T.class_sizes
    return complex(int(sizes[i]) * int(sizes[j]) * int(sizes[l]) / T.order * s)


def frobenius_count(i: int, j: int, l: int, G: GroupTable, T: CharTable) -> int:
    """N(K_i, K_j, K_l) via the character sum, rounded to the nearest integer.

    Raises :class:`RoundingDrift` if the raw value is not within
    ``1e-6 * (1 + |value|)`` of an integer.
    """
    if T.order != G.order or T.num_classes != G.num_classes:
        raise ValueError("character table does not belong to this group")
    v = frobenius_value(i, j, l, T)
    n = round(v.real)
    drift = abs(v - n)
    if drift > 1e-6 * (1 + abs(v)):
        raise RoundingDrift(f"class triple ({i}, {j}, {l}): value {v} is {drift:.3e} from the nearest integer")
    return int(n)


def frobenius_drift(i: int, j: int, l: int, T: CharTable) -> float:
    v = frobenius_value(i, j, l, T)
    return abs(v - round(v.real))


class ErrorBound(NamedTuple):
    deviation: Fraction
    bound: float
    holds: bool


def frobenius_error_bound(i: int, j: int, l: int, T: CharTable, exponent: float = 0.7) -> ErrorBound:
    """Compare |N - |A||B||C|/|G|| with (|A||B||C|/|G|) (zeta(exponent) - 1).

    The bound is only a theorem when |chi(g)| <= chi(1)^{(1 - exponent)/3}
    holds on the three classes, so ``holds`` is a report, not an assertion.
    """
    if exponent <= 0:
        raise ValueError("exponent must be positive")
    sizes = T.class_sizes
    expected = Fraction(int(sizes[i]) * int(sizes[j]) * int(sizes[l]), T.order)
    v = frobenius_value(i, j, l, T)
    n = round(v.real)
    if abs(v - n) > 1e-6 * (1 + abs(v)):
        raise RoundingDrift(f"class triple ({i}, {j}, {l}) does not round cleanly")
    deviation = abs(n - expected)
    bound = float(expected) * (witten_zeta(T, exponent) - 1)
    return ErrorBound(deviation, bound, float(deviation) <= bound)


# Gowers-type windows

@dataclass
class MixReport:
    kind: str  # "gowers" or "trick"
    order: int
    sizes: tuple[int, int, int]
    normal: tuple[bool, bool, bool]
    k: int
    count: int
    prob: Fraction
    target: Fraction
    eta_implied: float
    eta: float
    hypothesis_holds: bool
    verdict: dict[str, bool]
    g: int | None = None
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return all(self.verdict.values())

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "order": self.order,
            "sizes": list(self.sizes),
            "normal": list(self.normal),
            "k": self.k,
            "count": self.count,
            "prob": self.prob,
            "prob_float": float(self.prob),
            "target": self.target,
            "eta_implied": self.eta_implied,
            "eta": self.eta,
            "hypothesis_holds": self.hypothesis_holds,
            "verdict": dict(self.verdict),
            "g": self.g,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MixReport":
        return cls(
            kind=d["kind"],
            order=d["order"],
            sizes=tuple(d["sizes"]),
            normal=tuple(d["normal"]),
            k=d["k"],
            count=d["count"],
            prob=Fraction(d["prob"]),
            target=Fraction(d["target"]),
            eta_implied=d["eta_implied"],
            eta=d["eta"],
            hypothesis_holds=d["hypothesis_holds"],
            verdict=dict(d["verdict"]),
            g=d.get("g"),
            seed=d.get("seed"),
        )


def implied_eta(G: GroupTable, k: int, a: int, b: int, c: int) -> float:
    """Smallest eta with |A||B||C| >= |G|^3 / (eta^2 k)."""
    return math.sqrt(G.order**3 / (k * a * b * c))


def _window(value: Fraction, center: Fraction, eta: Fraction) -> dict[str, bool]:
    lower = value > (1 - eta) * center
    upper = value < (1 + eta) * center
    return {"lower": lower, "upper": upper}


def _gowers_setup(A, B, C, G, T, eta):
    _check_group(G, A, B, C)
    for name, X in zip("ABC", (A, B, C)):
        if X.size == 0:
            raise EmptySet(f"{name} is empty")
    k = min_nontrivial_degree(T)
    eta_imp = implied_eta(G, k, A.size, B.size, C.size)
    if eta is None:
        eta = eta_imp * (1 + 1e-12)
    if eta <= 0:
        raise ValueError("eta must be positive")
    e = Fraction(eta)
    hyp = A.size * B.size * C.size * e * e * k > G.order**3
    return k, eta_imp, float(eta), e, hyp


def gowers_check(A: ElementSet, B: ElementSet, C: ElementSet, G: GroupTable, T: CharTable,
                 eta: float | None = None) -> MixReport:
    """Check (1-eta)|C|/|G| < Prob(A,B,C) < (1+eta)|C|/|G|.

    ``eta`` defaults to just above the implied boundary value, the strongest
    instance the hypothesis allows.  A failing verdict while
    ``hypothesis_holds`` is true would contradict the theorem.
    """
    k, eta_imp, eta, e, hyp = _gowers_setup(A, B, C, G, T, eta)
    n = count_pairs(A, B, C, G)
    p = Fraction(n, A.size * B.size)
    target = Fraction(C.size, G.order)
    return MixReport("gowers", G.order, (A.size, B.size, C.size), (A.is_normal, B.is_normal, C.is_normal),
                     k, n, p, target, eta_imp, eta, hyp, _window(p, target, e))


def gowers_trick_check(A: ElementSet, B: ElementSet, C: ElementSet, g: int, G: GroupTable, T: CharTable,
                       eta: float | None = None) -> MixReport:
    """Check (1-eta)|A||B||C|/|G| < #{abc = g} < (1+eta)|A||B||C|/|G|."""
    k, eta_imp, eta, e, hyp = _gowers_setup(A, B, C, G, T, eta)
    n = count_triples_g(A, B, C, g, G)
    center = Fraction(A.size * B.size * C.size, G.order)
    return MixReport("trick", G.order, (A.size, B.size, C.size), (A.is_normal, B.is_normal, C.is_normal),
                     k, n, Fraction(n, A.size * B.size), Fraction(C.size, G.order), eta_imp, eta, hyp,
                     _window(Fraction(n), center, e), g=g)


# permuted-set identities

@dataclass
class TripleIdentityVerdict:
    counts: dict[str, int]
    probs: dict[str, Fraction] | None
    bijection_ok: bool
    ok: bool = field(init=False)

    def __post_init__(self):
        ok = len(set(self.counts.values())) == 1 and self.bijection_ok
        if self.probs is not None:
            ok = ok and len(set(self.probs.values())) == 1
        self.ok = ok


def verify_triple_identities(A: ElementSet, B: ElementSet, C: ElementSet, G: GroupTable) -> TripleIdentityVerdict:
    """N(B, C^-1, A^-1) = N(A, B, C) = N(C^-1, A, B^-1), and the matching
    rescaled probabilities when A and B are nonempty."""
    Ai, Bi, Ci = inverse_set(A, G), inverse_set(B, G), inverse_set(C, G)
    counts = {
        "N(A,B,C)": count_pairs(A, B, C, G),
        "N(B,C^-1,A^-1)": count_pairs(B, Ci, Ai, G),
        "N(C^-1,A,B^-1)": count_pairs(Ci, A, Bi, G),
    }
    probs = None
    if A.size and B.size and C.size:
        probs = {
            "Prob(A,B,C)": Fraction(counts["N(A,B,C)"], A.size * B.size),
            "|C|/|A| Prob(B,C^-1,A^-1)": Fraction(C.size, A.size) * Fraction(counts["N(B,C^-1,A^-1)"], B.size * C.size),
            "|C|/|B| Prob(C^-1,A,B^-1)": Fraction(C.size, B.size) * Fraction(counts["N(C^-1,A,B^-1)"], C.size * A.size),
        }
    # (x, y) -> (y, (xy)^-1) must land in N(B, C^-1, A^-1) injectively
    a, b = A.indices(), B.indices()
    xx, yy = np.meshgrid(a, b, indexing="ij")
    xy = G.mul[xx, yy]
    keep = C.bits[xy]
    img_y, img_z = yy[keep], G.inv[xy[keep]]
    n = G.order
    injective = np.unique(img_y.astype(np.int64) * n + img_z).size == img_y.size
    lands = bool(np.all(B.bits[img_y]) and np.all(Ci.bits[img_z]) and np.all(Ai.bits[G.mul[img_y, img_z]]))
    return TripleIdentityVerdict(counts, probs, bool(injective and lands))


@dataclass
class CyclicIdentityVerdict:
    g: int
    counts: dict[str, int]
    swap_ok: bool  # Z normal: N(X,Y,Z,g) ~ N(X,Z,Y,g)
    rotate_ok: bool | None  # Y, Z normal: N(X,Y,Z,g) ~ N(Y,Z,X,g); None if Y is not normal

    @property
    def ok(self) -> bool:
        return self.swap_ok and self.rotate_ok is not False


def verify_cyclic_identities(X: ElementSet, Y: ElementSet, Z: ElementSet, g: int, G: GroupTable,
                             require_rotation: bool = False) -> CyclicIdentityVerdict:
    """Triple-count equalities under a normal third set, checked both by
    counting and by pushing every triple through the explicit bijections."""
    if not Z.is_normal:
        raise NotNormal("Z must be normal")
    if require_rotation and not Y.is_normal:
        raise NotNormal("Y must be normal for the rotation identity")
    n = G.order
    x, y, z = _enumerate_triples(X, Y, Z, g, G)
    base = x.size

    def _bijective(u, v, w, U, V, W, back):
        if not (np.all(U.bits[u]) and np.all(V.bits[v]) and np.all(W.bits[w])):
            return False
        if not np.all(G.mul[G.mul[u, v], w] == g):
            return False
        if np.unique((u.astype(np.int64) * n + v) * n + w).size != base:
            return False
        bx, by, bz = back(u, v, w)
        return bool(np.array_equal(bx, x) and np.array_equal(by, y) and np.array_equal(bz, z))

    counts = {"N(X,Y,Z,g)": base, "N(X,Z,Y,g)": count_triples_g(X, Z, Y, g, G)}
    # (x, y, z) -> (x, y z y^-1, y), inverse (x, z', y) -> (x, y, y^-1 z' y)
    yzy = G.mul[G.mul[y, z], G.inv[y]]
    swap_ok = counts["N(X,Y,Z,g)"] == counts["N(X,Z,Y,g)"] and _bijective(
        x, yzy, y, X, Z, Y, lambda u, v, w: (u, w, G.mul[G.mul[G.inv[w], v], w]))
    rotate_ok = None
    if Y.is_normal:
        counts["N(Y,Z,X,g)"] = count_triples_g(Y, Z, X, g, G)
        # (x, y, z) -> (x y x^-1, x z x^-1, x), inverse (y', z', x) -> (x, x^-1 y' x, x^-1 z' x)
        xi = G.inv[x]
        ty = G.mul[G.mul[x, y], xi]
        tz = G.mul[G.mul[x, z], xi]
        rotate_ok = counts["N(X,Y,Z,g)"] == counts["N(Y,Z,X,g)"] and _bijective(
            ty, tz, x, Y, Z, X,
            lambda u, v, w: (w, G.mul[G.mul[G.inv[w], u], w], G.mul[G.mul[G.inv[w], v], w]))
    return CyclicIdentityVerdict(g, counts, bool(swap_ok), rotate_ok)


def translated_count(X: ElementSet, Y: ElementSet, Z: ElementSet, g: int, G: GroupTable) -> int:
    """N(X, Y, g Z^-1), which equals the triple count for xyz = g."""
    return count_pairs(X, Y, left_translate(g, inverse_set(Z, G), G), G)


# seeded subsets

def random_subset(G: GroupTable, density: float, rng: np.random.Generator, nonempty: bool = True) -> ElementSet:
    """Each element kept independently with probability ``density``."""
    while True:
        X = G.from_mask(rng.random(G.order) < density)
        if X.size or not nonempty:
            return X


def random_normal_subset(G: GroupTable, density: float, rng: np.random.Generator, nonempty: bool = True) -> ElementSet:
    """Each conjugacy class kept independently with probability ``density``."""
    while True:
        pick = rng.random(G.num_classes) < density
        X = G.from_mask(pick[G.class_of])
        if X.size or not nonempty:
            return X
