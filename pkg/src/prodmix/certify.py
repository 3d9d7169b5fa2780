"""Mixer certification, the large-class decomposition of normal sets and
the epsilon-propagation checks.

A group is an (eps, eta, i)-mixer when every triple A, B, C of subsets of
size at least eps|G|, i of them normal, has Prob(A, B, C) strictly inside
(1 -/+ eta)|C|/|G|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .chartable import CharTable, class_number_exponent, k_epsilon, min_nontrivial_degree
from .errors import BudgetExceeded, EmptySet, NotNormal, PreconditionNotCertified
from .groups import ElementSet, GroupTable, inverse_set
from .mixing import count_pairs, random_subset

MAX_CLASSES_EXHAUSTIVE = 20
MODES = ("exhaustive-normal", "sampled-general")


def class_triple_counts(G: GroupTable) -> np.ndarray:
    """n[i, j, l] = N(K_i, K_j, K_l), by enumerating every product."""
    m = G.num_classes
    n = np.zeros((m, m, m), dtype=np.int64)
    for K in G.classes:
        rows = G.class_of[G.mul[K.members]]  # |K_i| x |G|
        for L in G.classes:
            n[K.index, L.index] = np.bincount(rows[:, L.members].ravel(), minlength=m)
    return n


def _size_floor(epsilon: float, order: int) -> Fraction:
    return Fraction(epsilon) * order


def normal_unions(G: GroupTable, min_size: Fraction | float = 0) -> list[int]:
    """Bitmasks (over class indices) of the nonempty class unions with at
    least ``min_size`` elements, in decreasing mask order."""
    m = G.num_classes
    if m > MAX_CLASSES_EXHAUSTIVE:
        raise BudgetExceeded(f"k(G) = {m} exceeds the exhaustive cap of {MAX_CLASSES_EXHAUSTIVE} classes",
                             stats={"classes": m})
    masks = np.arange(1, 1 << m, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(m)) & 1
    sizes = bits @ G.class_sizes
    floor = Fraction(min_size)
    keep = [int(mk) for mk, s in zip(masks, sizes) if s >= floor]
    return keep[::-1]


def _mask_classes(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def set_spec(X: ElementSet) -> str:
    """Textual set specification accepted by :func:`prodmix.io.parse_set_spec`."""
    if X.is_normal and X.size:
        return "union:" + str(X.classes()).replace(" ", "")
    return str(X.indices().tolist()).replace(" ", "")


# decomposition into large and small classes

def split_by_class_size(X: ElementSet, threshold: float, G: GroupTable) -> tuple[ElementSet, ElementSet]:
    """(X1, X2): classes in X of size > threshold, and the rest of X."""
    if not X.is_normal:
        raise NotNormal("split_by_class_size needs a normal set")
    large = G.class_sizes > threshold
    X1 = G.from_mask(X.bits & large[G.class_of])
    return X1, X - X1


def contains_large_class(X: ElementSet, threshold: float, G: GroupTable) -> int | None:
    """Index of the largest class inside X with size > threshold (lowest
    index on ties), or None."""
    if not X.is_normal:
        raise NotNormal("contains_large_class needs a normal set")
    best = None
    for i in X.classes():
        if G.class_sizes[i] > threshold and (best is None or G.class_sizes[i] > G.class_sizes[best]):
            best = i
    return best


def beta_max(eta: float) -> float:
    """Largest beta with (1 - eta/2)(1 - beta)^3 >= 1 - eta."""
    return 1 - (2 * (1 - eta) / (2 - eta)) ** (1 / 3)


@dataclass
class DecompositionReport:
    threshold: float
    eta: float
    alpha: float | None
    sizes: dict[str, int]
    X1_size: dict[str, int]
    X2_size: dict[str, int]
    count: int
    count_large: int
    bounds: dict[str, float | int]
    verdicts: dict[str, bool]
    degenerate: bool

    def to_dict(self) -> dict:
        return {
            "threshold": self.threshold,
            "eta": self.eta,
            "alpha": self.alpha,
            "sizes": dict(self.sizes),
            "X1_size": dict(self.X1_size),
            "X2_size": dict(self.X2_size),
            "count": self.count,
            "count_large": self.count_large,
            "bounds": dict(self.bounds),
            "verdicts": dict(self.verdicts),
            "degenerate": self.degenerate,
        }


def normal_mix_bounds(A: ElementSet, B: ElementSet, C: ElementSet, alpha: float | None, eta: float,
                      G: GroupTable, threshold: float | None = None,
                      c_over_n: float | None = None) -> DecompositionReport:
    """Evaluate every inequality of the large-class argument for three
    normal sets.

    The cutoff is ``|G|^(1-alpha) / eta^2`` unless ``threshold`` is given.
    The tail term uses the concrete 7|G| max|X2| bound; with ``c_over_n``
    the asymptotic 7|G|^(2 + c/n - alpha) / eta^2 form is reported too.
    Only the ``chain`` and ``X2`` verdicts hold for every finite group.
    """
    sets = {"A": A, "B": B, "C": C}
    for name, X in sets.items():
        if not X.is_normal:
            raise NotNormal(f"{name} is not normal")
        if X.size == 0:
            raise EmptySet(f"{name} is empty")
    if not 0 < eta < 1:
        raise ValueError("eta must lie in (0, 1)")
    if threshold is None:
        if alpha is None:
            raise ValueError("give alpha or an explicit threshold")
        threshold = G.order ** (1 - alpha) / eta**2
    order = G.order
    e = Fraction(eta)
    parts = {name: split_by_class_size(X, threshold, G) for name, X in sets.items()}
    X1 = {k: v[0] for k, v in parts.items()}
    X2 = {k: v[1] for k, v in parts.items()}
    n_all = count_pairs(A, B, C, G)
    n_large = count_pairs(X1["A"], X1["B"], X1["C"], G)

    prod1 = Fraction(X1["A"].size * X1["B"].size * X1["C"].size, order)
    prod = Fraction(A.size * B.size * C.size, order)
    tail = 7 * order * max(X.size for X in X2.values())
    bmax = beta_max(eta)
    small_cap = G.num_classes * threshold

    bounds = {
        "threenormal_lower": float((1 - e / 2) * prod1),
        "threenormal_upper": float((1 + e / 2) * prod1),
        "X2_cap": small_cap,
        "beta_max": bmax,
        "chain_lower": n_large,
        "chain_upper": n_large + tail,
        "star": float((1 - e) * prod),
        "starstar": float((1 + e) * prod),
    }
    verdicts = {
        "threenormal": (1 - e / 2) * prod1 < n_large < (1 + e / 2) * prod1,
        "X2": all(X.size <= small_cap for X in X2.values()),
        "X2_beta": all(X2[k].size < bmax * sets[k].size for k in sets),
        "X1": all(X1[k].size > (1 - bmax) * sets[k].size for k in sets),
        "chain": n_large <= n_all <= n_large + tail,
        "star": n_all > (1 - e) * prod,
        "starstar": n_all < (1 + e) * prod,
    }
    if c_over_n is not None:
        if alpha is None:
            raise ValueError("the asymptotic tail needs alpha")
        asym = 7 * order ** (2 + c_over_n - alpha) / eta**2
        bounds["asymptotic_chain_upper"] = n_large + asym
        verdicts["asymptotic_chain"] = n_all <= n_large + asym
    return DecompositionReport(
        threshold=float(threshold), eta=eta, alpha=alpha,
        sizes={k: X.size for k, X in sets.items()},
        X1_size={k: X.size for k, X in X1.items()},
        X2_size={k: X.size for k, X in X2.items()},
        count=n_all, count_large=n_large, bounds=bounds,
        verdicts={k: bool(v) for k, v in verdicts.items()},
        degenerate=any(X.size == 0 for X in X1.values()),
    )


# mixer certification

@dataclass
class MixerCertificate:
    epsilon: float
    eta: float
    i: int
    mode: str
    outcome: str  # certified | certified-up-to-budget | refuted
    trials: int
    seed: int | None
    budget: int
    unions: int
    counterexample: dict | None = None
    rejected: int = 0

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "eta": self.eta,
            "i": self.i,
            "mode": self.mode,
            "outcome": self.outcome,
            "trials": self.trials,
            "rejected": self.rejected,
            "seed": self.seed,
            "budget": self.budget,
            "unions": self.unions,
            "counterexample": None if self.counterexample is None else dict(self.counterexample),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MixerCertificate":
        cx = d.get("counterexample")
        if cx is not None:
            cx = dict(cx)
            for key in ("prob", "target"):
                cx[key] = Fraction(cx[key])
        return cls(epsilon=d["epsilon"], eta=d["eta"], i=d["i"], mode=d["mode"], outcome=d["outcome"],
                   trials=d["trials"], seed=d["seed"], budget=d["budget"], unions=d["unions"],
                   counterexample=cx, rejected=d.get("rejected", 0))


def _violation(p: Fraction, target: Fraction, eta: Fraction) -> str | None:
    if not p > (1 - eta) * target:
        return "lower"
    if not p < (1 + eta) * target:
        return "upper"
    return None


def _counterexample(A, B, C, G, eta_frac):
    p = Fraction(count_pairs(A, B, C, G), A.size * B.size)
    target = Fraction(C.size, G.order)
    side = _violation(p, target, eta_frac)
    return {"A": set_spec(A), "B": set_spec(B), "C": set_spec(C), "prob": p, "target": target,
            "violated": side}


def _exhaustive_normal(G, unions, eta, max_triples):
    """First (lexicographic) violating triple of class unions, or None."""
    u = len(unions)
    if u**3 > max_triples:
        raise BudgetExceeded(f"{u}^3 triples of class unions exceed max_triples={max_triples}",
                             trials=0, stats={"unions": u, "classes": G.num_classes})
    if u == 0:
        return None, 0
    m = G.num_classes
    ind = ((np.array(unions)[:, None] >> np.arange(m)) & 1).astype(np.int64)
    sizes = ind @ G.class_sizes
    n = class_triple_counts(G)
    e = Fraction(eta)
    bc = np.outer(sizes, sizes).astype(float)
    for ia in range(u):
        M = np.tensordot(ind[ia], n, axes=(0, 0))  # (j, l)
        R = (ind @ M) @ ind.T  # R[b, c] = N(A, B_b, C_c)
        lhs = R.astype(float) * G.order
        center = float(sizes[ia]) * bc
        # float screen with a relative margin, exact recheck of anything close
        near = (lhs <= (1 - eta) * center * (1 + 1e-9)) | (lhs >= (1 + eta) * center * (1 - 1e-9))
        for ib, ic in zip(*np.nonzero(near)):
            p = Fraction(int(R[ib, ic]), int(sizes[ia] * sizes[ib]))
            if _violation(p, Fraction(int(sizes[ic]), G.order), e):
                return (ia, int(ib), int(ic)), ia * u * u + int(ib) * u + int(ic) + 1
    return None, u**3


def _draw_general(G, floor, rng, lo):
    """One density-sampled subset, or None when it falls below the floor."""
    X = random_subset(G, rng.uniform(lo, 1.0), rng, nonempty=False)
    return X if X.size >= floor and X.size else None


def certify_mixer(G: GroupTable, epsilon: float, eta: float, i: int = 3, mode: str = "exhaustive-normal",
                  budget: int = 1000, seed: int = 0, max_triples: int = 10**9) -> MixerCertificate:
    """Search for a triple violating the (epsilon, eta, i)-mixer window.

    ``exhaustive-normal`` enumerates every triple of class unions of size
    at least epsilon|G| (lexicographically, unions in decreasing bitmask
    order); for i < 3 it then samples ``budget`` triples whose remaining
    slots are density-sampled general subsets.  ``sampled-general`` samples
    every slot.  Draws below the size floor count against the budget.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if not 0 < eta < 1:
        raise ValueError("eta must lie in (0, 1)")
    if i not in (1, 2, 3):
        raise ValueError("i must be 1, 2 or 3")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    floor = _size_floor(epsilon, G.order)
    unions = normal_unions(G, floor)
    e = Fraction(eta)
    cert = dict(epsilon=epsilon, eta=eta, i=i, mode=mode, seed=seed, budget=budget, unions=len(unions))

    trials = 0
    if mode == "exhaustive-normal":
        hit, trials = _exhaustive_normal(G, unions, eta, max_triples)
        if hit is not None:
            A, B, C = (G.union_of_classes(_mask_classes(unions[t])) for t in hit)
            return MixerCertificate(outcome="refuted", trials=trials,
                                    counterexample=_counterexample(A, B, C, G, e), **cert)
        if i == 3 or not unions:
            return MixerCertificate(outcome="certified", trials=trials, **cert)
    elif not unions:
        return MixerCertificate(outcome="certified", trials=0, **cert)

    # sampled part: i normal slots, rotating over placements
    rng = np.random.default_rng(seed)
    placements = [p for p in ((0, 1, 2), (0, 1), (0, 2), (1, 2), (0,), (1,), (2,)) if len(p) == i]
    lo = min(1.0, max(float(epsilon), 0.0))
    rejected = 0
    for t in range(budget):
        normal_slots = placements[t % len(placements)]
        slots = []
        for s in range(3):
            if s in normal_slots:
                slots.append(G.union_of_classes(_mask_classes(unions[rng.integers(len(unions))])))
            else:
                slots.append(_draw_general(G, floor, rng, lo))
        if any(X is None for X in slots):
            rejected += 1
            continue
        trials += 1
        A, B, C = slots
        p = Fraction(count_pairs(A, B, C, G), A.size * B.size)
        if _violation(p, Fraction(C.size, G.order), e):
            return MixerCertificate(outcome="refuted", trials=trials, rejected=rejected,
                                    counterexample=_counterexample(A, B, C, G, e), **cert)
    return MixerCertificate(outcome="certified-up-to-budget", trials=trials, rejected=rejected, **cert)


# propagation from three normal sets to two

@dataclass(frozen=True)
class EpsilonPrime:
    value: float
    epsilon: float
    eta: float
    k_eps: int
    hypothesis_ok: bool  # epsilon < min(1, eta / (k_eps (1 - eta)^2))
    eta_ok: bool  # eta < 1/2
    applicable: bool  # value < 1

    @property
    def flags_clear(self) -> bool:
        return self.hypothesis_ok and self.eta_ok and self.applicable


def epsilon_prime(epsilon: float, eta: float, k_eps: int) -> EpsilonPrime:
    """sqrt(epsilon * k_eps / eta) with the side conditions flagged."""
    if not (0 < epsilon < 1 and 0 < eta < 1):
        raise ValueError("epsilon and eta must lie in (0, 1)")
    if k_eps < 1:
        raise ValueError("k_eps must be a positive integer")
    value = math.sqrt(epsilon * k_eps / eta)
    cap = min(1.0, eta / (k_eps * (1 - eta) ** 2))
    return EpsilonPrime(value, epsilon, eta, k_eps, epsilon < cap, eta < 0.5, value < 1)


@dataclass
class PropagationVerdict:
    epsilon_prime: EpsilonPrime
    trials: int
    rejected: int
    per_placement: dict[str, int]
    violations: list[dict] = field(default_factory=list)
    transform_mismatches: int = 0
    seed: int | None = None

    @property
    def ok(self) -> bool:
        return not self.violations and self.transform_mismatches == 0

    def to_dict(self) -> dict:
        ep = self.epsilon_prime
        return {
            "epsilon_prime": ep.value,
            "k_eps": ep.k_eps,
            "hypothesis_ok": ep.hypothesis_ok,
            "eta_ok": ep.eta_ok,
            "applicable": ep.applicable,
            "trials": self.trials,
            "rejected": self.rejected,
            "per_placement": dict(self.per_placement),
            "violations": [dict(v) for v in self.violations],
            "transform_mismatches": self.transform_mismatches,
            "seed": self.seed,
            "ok": self.ok,
        }


PLACEMENTS = ("AB", "AC", "BC")


def verify_propagation(G: GroupTable, epsilon: float, eta: float, budget: int = 2000, seed: int = 0,
                       certificate: MixerCertificate | None = None) -> PropagationVerdict:
    """Sample two-normal triples at size floor eps'|G| and check the
    (1 -/+ 2 eta) window, rotating the non-normal slot over C, B, A.

    For the AC and BC placements the probability is also recomputed through
    the permuted triples (C^-1, A, B^-1) and (B, C^-1, A^-1).
    """
    if certificate is None:
        certificate = certify_mixer(G, epsilon, eta, 3, "exhaustive-normal")
    if certificate.outcome != "certified" or certificate.i != 3 or certificate.mode != "exhaustive-normal":
        raise PreconditionNotCertified(f"G is not certified as an ({epsilon}, {eta}, 3)-mixer")
    k = k_epsilon(G, epsilon)
    if k < 1:
        raise PreconditionNotCertified("k_eps(G) = 0: no class is smaller than eps|G|")
    ep = epsilon_prime(epsilon, eta, k)
    if not ep.flags_clear:
        raise PreconditionNotCertified(f"side conditions fail: {ep}")

    floor = _size_floor(ep.value, G.order)
    unions = normal_unions(G, floor)
    rng = np.random.default_rng(seed)
    e2 = 2 * Fraction(eta)
    verdict = PropagationVerdict(ep, 0, 0, {p: 0 for p in PLACEMENTS}, seed=seed)
    for t in range(budget):
        place = PLACEMENTS[t % 3]
        if not unions:
            verdict.rejected += 1
            continue
        slots = {}
        for s in "ABC":
            if s in place:
                slots[s] = G.union_of_classes(_mask_classes(unions[rng.integers(len(unions))]))
            else:
                slots[s] = _draw_general(G, floor, rng, min(1.0, ep.value))
        if slots[next(s for s in "ABC" if s not in place)] is None:
            verdict.rejected += 1
            continue
        A, B, C = slots["A"], slots["B"], slots["C"]
        verdict.trials += 1
        verdict.per_placement[place] += 1
        p = Fraction(count_pairs(A, B, C, G), A.size * B.size)
        if place == "AC":
            alt = Fraction(C.size, B.size) * Fraction(
                count_pairs(inverse_set(C, G), A, inverse_set(B, G), G), C.size * A.size)
            verdict.transform_mismatches += alt != p
        elif place == "BC":
            alt = Fraction(C.size, A.size) * Fraction(
                count_pairs(B, inverse_set(C, G), inverse_set(A, G), G), B.size * C.size)
            verdict.transform_mismatches += alt != p
        side = _violation(p, Fraction(C.size, G.order), e2)
        if side:
            verdict.violations.append({"placement": place, "A": set_spec(A), "B": set_spec(B),
                                       "C": set_spec(C), "prob": p, "violated": side})
    return verdict


# end-to-end chain

def end_to_end_report(G: GroupTable, T: CharTable, delta: float, eta: float) -> dict:
    """Every quantity in the final assembly of the main argument, evaluated
    on one concrete group.  Verdicts that need large groups are reported
    as they come out."""
    if delta < 0 or eta <= 0:
        raise ValueError("delta must be >= 0 and eta > 0")
    n = G.order
    rep: dict = {"order": n, "classes": G.num_classes, "delta": delta, "eta": eta}
    checks: dict[str, bool] = {}
    checks["eta < 1/4"] = eta < 0.25
    checks["eta < 1/2"] = eta < 0.5
    if n > 1:
        k = min_nontrivial_degree(T)
        rep["min_degree"] = k
        rep["class_number_exponent"] = class_number_exponent(G)
        checks["k > |G|^delta (Gowers suffices)"] = k > n**delta
    rep["hypothesis_product_threshold"] = n ** (3 - delta) / eta**2
    rep["size_threshold"] = n ** (1 - delta) / eta**2
    eps = 4 * n ** (-delta) / eta**2
    rep["epsilon"] = eps
    rep["epsilon_times_order"] = eps * n
    checks["eps|G| > 1"] = eps * n > 1
    rep["applicable"] = eps < 1
    checks["eps < 1"] = eps < 1
    if not rep["applicable"]:
        rep["checks"] = checks
        return rep
    keps = k_epsilon(G, eps)
    rep["k_eps"] = keps
    checks["k_eps >= 1"] = keps >= 1
    if keps >= 1:
        cap = min(1.0, eta / (keps * (1 - eta) ** 2))
        rep["epsilon_cap"] = cap
        checks["eps < min(1, eta (1-eta)^-2 / k_eps)"] = eps < cap
        ep = math.sqrt(eps * keps / eta)
        rep["epsilon_prime"] = ep
        rep["epsilon_prime_half_eta"] = math.sqrt(2 * eps * keps / eta)
        rep["final_threshold"] = n ** (-delta / 3) / eta**2
        checks["eps' < 1"] = ep < 1
        checks["eps' <= |G|^(-delta/3) / eta^2"] = ep <= rep["final_threshold"]
    rep["checks"] = checks
    return rep
