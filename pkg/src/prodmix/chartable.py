"""Complex character tables and the statistics derived from them.

Tables are computed with the Burnside-Dixon-Schneider method: the class
multiplication coefficients define commuting matrices on the centre of the
group algebra, their common eigenvectors are found over a prime field GF(p)
containing the exp(G)-th roots of unity, and each modular character is
lifted to complex values through the eigenvalue multiplicities of the
representing matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sympy.ntheory import isprime, primitive_root

from .errors import DegenerateEigenspace, PrimeSearchFailed, TrivialGroup, ValidationFailed
from .groups import GroupTable

PRIME_SEARCH_LIMIT = 10**7


def default_tolerance(order: int) -> float:
    return 1e-9 if order <= 1000 else 1e-7


@dataclass(frozen=True, eq=False)
class CharTable:
    """values[chi, i] is chi evaluated on a representative of class i."""

    order: int
    values: np.ndarray  # complex128, (m, m)
    class_sizes: np.ndarray
    class_reps: np.ndarray
    trivial_index: int = 0

    @property
    def num_classes(self) -> int:
        return len(self.class_sizes)

    @property
    def identity_class(self) -> int:
        # class of size 1 whose character values are all real degrees
        return int(np.argmax(self.class_reps == 0)) if np.any(self.class_reps == 0) else 0

    @property
    def degrees(self) -> np.ndarray:
        return np.rint(self.values[:, self.identity_class].real).astype(np.int64)

    def residuals(self) -> dict[str, float]:
        """Largest deviation from each table invariant."""
        V = self.values
        sizes = self.class_sizes.astype(float)
        m = self.num_classes
        degs_raw = V[:, self.identity_class]
        degs = np.rint(degs_raw.real)
        gram_rows = (V * sizes) @ V.conj().T / self.order
        gram_cols = V.conj().T @ V
        return {
            "trivial character": float(np.max(np.abs(V[self.trivial_index] - 1))),
            "integral degrees": float(np.max(np.abs(degs_raw - degs))),
            "degree sum of squares": float(abs(np.sum(degs**2) - self.order)),
            "row orthogonality": float(np.max(np.abs(gram_rows - np.eye(m)))),
            "column orthogonality": float(np.max(np.abs(gram_cols - np.diag(self.order / sizes)))),
        }

    def validate(self, tol: float | None = None) -> "CharTable":
        """Raise :class:`ValidationFailed` on the first violated invariant."""
        tol = default_tolerance(self.order) if tol is None else tol
        m = self.num_classes
        if self.values.shape != (m, m):
            raise ValidationFailed("square table", float(abs(self.values.shape[0] - m)),
                                   f"{self.values.shape[0]} characters for {m} classes")
        if int(np.sum(self.class_sizes)) != self.order:
            raise ValidationFailed("class equation", float(abs(np.sum(self.class_sizes) - self.order)))
        for name, r in self.residuals().items():
            if name == "degree sum of squares":
                if r != 0:
                    raise ValidationFailed(name, r, f"sum of squared degrees differs from |G| = {self.order}")
            elif r > tol:
                raise ValidationFailed(name, r)
        return self


# modular linear algebra over GF(p), p small enough that int64 never overflows

def _rref_mod(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    A = np.array(A, dtype=np.int64) % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        if others.size:
            A[others] = (A[others] - np.outer(A[others, c], A[r])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def _nullspace_mod(A: np.ndarray, p: int) -> np.ndarray:
    """Basis of {x : A x = 0} as columns."""
    n = A.shape[1]
    R, pivots = _rref_mod(A, p)
    free = [c for c in range(n) if c not in pivots]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for row, pc in enumerate(pivots):
            basis[pc, k] = (-R[row, f]) % p
    return basis


def _charpoly_mod(A: np.ndarray, p: int) -> list[int]:
    """Characteristic polynomial, highest coefficient first (Hessenberg method)."""
    H = [[int(x) % p for x in row] for row in A]
    n = len(H)
    for m in range(1, n - 1):
        i = next((i for i in range(m, n) if H[i][m - 1]), None)
        if i is None:
            continue
        if i != m:
            H[i], H[m] = H[m], H[i]
            for row in H:
                row[i], row[m] = row[m], row[i]
        t_inv = pow(H[m][m - 1], -1, p)
        for i in range(m + 1, n):
            u = H[i][m - 1] * t_inv % p
            if not u:
                continue
            H[i] = [(a - u * b) % p for a, b in zip(H[i], H[m])]
            for row in H:
                row[m] = (row[m] + u * row[i]) % p
    # polys stored lowest degree first
    polys = [[1]]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        cur = [0] + prev  # x * prev
        h = H[m - 1][m - 1]
        for k, c in enumerate(prev):
            cur[k] = (cur[k] - h * c) % p
        t = 1
        for i in range(1, m):
            t = t * H[m - i][m - i - 1] % p
            coef = t * H[m - i - 1][m - 1] % p
            if coef:
                for k, c in enumerate(polys[m - i - 1]):
                    cur[k] = (cur[k] - coef * c) % p
        polys.append(cur)
    return polys[n][::-1]


def _roots_mod(coeffs: list[int], p: int) -> list[int]:
    x = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in coeffs:
        acc = (acc * x + c) % p
    return np.flatnonzero(acc == 0).tolist()


def dixon_prime(order: int, exponent: int) -> int:
    """Smallest prime p = 1 (mod exponent) with p > 2 sqrt(order)."""
    lo = 2 * math.isqrt(order) + 1
    t = max(1, (lo - 1) // exponent)
    while True:
        p = t * exponent + 1
        if p > PRIME_SEARCH_LIMIT:
            raise PrimeSearchFailed(f"no prime p = 1 mod {exponent} with 2*sqrt({order}) < p <= {PRIME_SEARCH_LIMIT}")
        if p * p > 4 * order and isprime(p):
            return p
        t += 1


def class_matrices(G: GroupTable) -> np.ndarray:
    """M[j, i, k] = #{(x, y) in K_j x K_i : xy = z_k} for the representative z_k.

    Every central character w, w_k = |K_k| chi(z_k) / chi(1), is a common
    eigenvector: M[j] @ w = w_j * w.
    """
    m = G.num_classes
    M = np.zeros((m, m, m), dtype=np.int64)
    for j, K in enumerate(G.classes):
        xinv = G.inv[K.members]
        for k, z in enumerate(G.class_reps):
            # y = x^-1 z
            M[j, :, k] = np.bincount(G.class_of[G.mul[xinv, z]], minlength=m)
    return M


def _common_eigenvectors(mats: np.ndarray, p: int) -> list[np.ndarray]:
    m = mats.shape[1]
    spaces = [np.eye(m, dtype=np.int64)]
    for M in mats:
        if all(V.shape[1] == 1 for V in spaces):
            break
        refined = []
        for V in spaces:
            r = V.shape[1]
            if r == 1:
                refined.append(V)
                continue
            R_t, piv = _rref_mod(V.T, p)
            V = R_t.T  # columns with identity rows at piv
            R = (M @ V % p)[piv, :]
            for lam in _roots_mod(_charpoly_mod(R, p), p):
                U = _nullspace_mod((R - lam * np.eye(r, dtype=np.int64)) % p, p)
                if U.shape[1]:
                    refined.append(V @ U % p)
        spaces = refined
    if len(spaces) != m or any(V.shape[1] != 1 for V in spaces):
        raise DegenerateEigenspace(
            f"common eigenspaces have dimensions {[V.shape[1] for V in spaces]} after all class matrices"
        )
    return [V[:, 0] for V in spaces]


def dixon_char_table(G: GroupTable) -> CharTable:
    """Compute the irreducible character table of G."""
    m = G.num_classes
    n = G.order
    sizes = G.class_sizes
    reps = G.class_reps
    if m == 1:
        return CharTable(n, np.ones((1, 1), dtype=complex), sizes.copy(), reps.copy(), 0)

    e = G.exponent()
    p = dixon_prime(n, e)
    inv_class = G.class_of[G.inv[reps]]
    size_inv = [pow(int(s), -1, p) for s in sizes]

    modular = []
    for w in _common_eigenvectors(class_matrices(G), p):
        w = w * pow(int(w[0]), -1, p) % p  # central character: w[identity class] = 1
        s = sum(int(w[j]) * int(w[inv_class[j]]) * size_inv[j] for j in range(m)) % p
        d2 = n * pow(s, -1, p) % p
        d = next((d for d in range(1, math.isqrt(n) + 1) if d * d % p == d2), None)
        if d is None:
            raise DegenerateEigenspace("no degree d <= sqrt(|G|) matches the modular norm")
        modular.append([d * int(w[j]) * size_inv[j] % p for j in range(m)])

    # power maps and the fixed correspondence z <-> exp(2 pi i / e)
    z = pow(primitive_root(p), (p - 1) // e, p)
    orders = G.element_orders()[reps]
    powmap = []
    for j in range(m):
        o = int(orders[j])
        g = int(reps[j])
        cls, cur = [], 0
        for _ in range(o):
            cls.append(int(G.class_of[cur]))
            cur = int(G.mul[cur, g])
        powmap.append(cls)

    values = np.zeros((m, m), dtype=complex)
    for c, chi in enumerate(modular):
        for j in range(m):
            o = int(orders[j])
            zo = pow(z, e // o, p)
            o_inv = pow(o, -1, p)
            vals = [chi[powmap[j][l]] for l in range(o)]
            total = 0j
            for k in range(o):
                zk = pow(zo, (-k) % o, p)
                mult = o_inv * sum(v * pow(zk, l, p) for l, v in enumerate(vals)) % p
                if mult:
                    total += mult * np.exp(2j * np.pi * k / o)
            values[c, j] = total

    order_idx = sorted(range(m), key=lambda c: _sort_key(values[c], reps))
    values = values[order_idx]
    values.setflags(write=False)
    return CharTable(n, values, sizes.copy(), reps.copy(), 0)


def _sort_key(row: np.ndarray, reps) -> tuple:
    degree = int(round(row[int(np.argmax(reps == 0))].real))
    re = tuple(-round(float(x), 9) + 0.0 for x in row.real)
    im = tuple(-round(float(x), 9) + 0.0 for x in row.imag)
    return (degree, re, im)


def min_nontrivial_degree(T: CharTable) -> int:
    if T.num_classes < 2:
        raise TrivialGroup("the trivial group has no nontrivial character")
    degs = T.degrees
    return int(min(d for c, d in enumerate(degs) if c != T.trivial_index))


def witten_zeta(T: CharTable, x: float) -> float:
    """Sum of chi(1)^(-x) over the irreducible characters."""
    if x <= 0:
        raise ValueError("x must be positive")
    return float(math.fsum(float(d) ** (-x) for d in T.degrees))


def k_epsilon(G: GroupTable, epsilon: float) -> int:
    """Number of classes of size strictly below epsilon * |G|."""
    return int(np.sum(G.class_sizes < epsilon * G.order))


def class_number_exponent(G: GroupTable) -> float:
    if G.order < 2:
        raise TrivialGroup("log k(G) / log |G| is undefined for |G| = 1")
    return math.log(G.num_classes) / math.log(G.order)


@dataclass(frozen=True)
class RatioRow:
    class_index: int
    class_size: int
    alpha: float  # -inf when every character of degree > 1 vanishes
    argmax_character: int | None
    centralizer_exponent: float

    @property
    def vanishing(self) -> bool:
        return self.alpha == -math.inf


def character_ratio_scan(G: GroupTable, T: CharTable, tol: float | None = None) -> list[RatioRow]:
    """Largest exponent log|chi(g)| / log chi(1) over characters of degree > 1,
    one row per nonidentity class, with log|C_G(g)| / log|G| alongside."""
    if T.num_classes < 2:
        raise TrivialGroup("scan needs at least one nonidentity class")
    tol = default_tolerance(G.order) if tol is None else tol
    degs = T.degrees
    rows = []
    for K in G.classes:
        if K.representative == G.identity:
            continue
        best, arg = -math.inf, None
        for c in range(T.num_classes):
            if degs[c] <= 1:
                continue
            a = abs(T.values[c, K.index])
            if a < tol:
                continue
            val = math.log(a) / math.log(degs[c])
            if val > best:
                best, arg = val, c
        cexp = math.log(G.order // K.size) / math.log(G.order)
        rows.append(RatioRow(K.index, K.size, best, arg, cexp))
    return rows
