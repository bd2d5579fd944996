"""Generalized Cartan matrices and root data.

Validation of the three matrix axioms, decomposition into indecomposable
blocks, the finite/affine/indefinite trichotomy by exact rational
feasibility, and free realizations (lattices plus simple roots/coroots
with the compatibility pairing).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .linalg import Ineq, fm_feasible, kernel_basis, rank


class KMError(ValueError):
    pass


class NotKacMoody(KMError):
    def __init__(self, axiom: int, i: int, j: int, message: str):
        super().__init__(f"axiom {axiom} violated at ({i},{j}): {message}")
        self.axiom = axiom
        self.i = i
        self.j = j


class Decomposable(KMError):
    pass


class KMClass(Enum):
    FINITE = "finite"
    AFFINE = "affine"
    INDEFINITE = "indefinite"


@dataclass(frozen=True)
class KacMoodyMatrix:
    """Integer matrix with 2's on the diagonal, non-positive off-diagonal
    entries and a symmetric zero pattern."""

    entries: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries[ij[0]][ij[1]]

    def transpose(self) -> "KacMoodyMatrix":
        n = self.n
        return KacMoodyMatrix(tuple(tuple(self.entries[j][i] for j in range(n)) for i in range(n)))

    def submatrix(self, idx: tuple[int, ...]) -> "KacMoodyMatrix":
        return KacMoodyMatrix(tuple(tuple(self.entries[i][j] for j in idx) for i in idx))


def validate(rows) -> KacMoodyMatrix:
    entries = tuple(tuple(int(x) for x in row) for row in rows)
    n = len(entries)
    for row in entries:
        if len(row) != n:
            raise KMError("matrix is not square")
    for i in range(n):
        if entries[i][i] != 2:
            raise NotKacMoody(1, i, i, f"diagonal entry {entries[i][i]} != 2")
        for j in range(n):
            if i == j:
                continue
            if entries[i][j] > 0:
                raise NotKacMoody(2, i, j, f"off-diagonal entry {entries[i][j]} > 0")
            if (entries[i][j] == 0) != (entries[j][i] == 0):
                raise NotKacMoody(3, i, j, "zero pattern is not symmetric")
    return KacMoodyMatrix(entries)


def decompose(a: KacMoodyMatrix) -> list[tuple[int, ...]]:
    """Connected components of i ~ j iff a[i][j] != 0, as sorted index tuples."""
    n = a.n
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and a[i, j] != 0:
                    seen[j] = True
                    stack.append(j)
        comps.append(tuple(sorted(comp)))
    return comps


def is_indecomposable(a: KacMoodyMatrix) -> bool:
    return len(decompose(a)) == 1


def _strict_system(a: KacMoodyMatrix, sign: int) -> list[Ineq]:
    """Feasibility system for: u >= 1 entrywise and sign*(A u) >= 1 entrywise.

    By homogeneity this is equivalent to u > 0 with sign*(A u) > 0.
    """
    n = a.n
    ineqs: list[Ineq] = []
    one = Fraction(1)
    for i in range(n):
        e = tuple(one if j == i else Fraction(0) for j in range(n))
        ineqs.append((e, one))
        row = tuple(Fraction(sign * a[i, j]) for j in range(n))
        ineqs.append((row, one))
    return ineqs


def classify(a: KacMoodyMatrix) -> KMClass:
    """Trichotomy for an indecomposable matrix.

    Finite: some u > 0 has Au > 0.  Affine: some u > 0 has Au = 0 (the
    kernel of an indecomposable matrix is at most a line, so it suffices
    to inspect a kernel generator).  Indefinite: some u > 0 has Au < 0.
    """
    if not is_indecomposable(a):
        raise Decomposable("classification requires an indecomposable matrix")
    if fm_feasible(_strict_system(a, +1)):
        return KMClass.FINITE
    kern = kernel_basis([list(row) for row in a.entries])
    for v in kern:
        if all(x > 0 for x in v) or all(x < 0 for x in v):
            return KMClass.AFFINE
    if fm_feasible(_strict_system(a, -1)):
        return KMClass.INDEFINITE
    raise KMError("trichotomy failed; matrix is not a valid GCM?")


@dataclass(frozen=True)
class RootVector:
    """Element of the root lattice Q in simple-root coordinates."""

    coeffs: tuple[int, ...]

    def __add__(self, other: "RootVector") -> "RootVector":
        return RootVector(tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "RootVector") -> "RootVector":
        return RootVector(tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "RootVector":
        return RootVector(tuple(-x for x in self.coeffs))

    def scale(self, k: int) -> "RootVector":
        return RootVector(tuple(k * x for x in self.coeffs))

    def height(self) -> int:
        return sum(self.coeffs)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coeffs)

    def is_positive(self) -> bool:
        """All coordinates >= 0 and not zero."""
        return all(x >= 0 for x in self.coeffs) and not self.is_zero()

    def is_negative(self) -> bool:
        return all(x <= 0 for x in self.coeffs) and not self.is_zero()

    def __str__(self) -> str:
        return "(" + ",".join(str(x) for x in self.coeffs) + ")"


def height(v: RootVector) -> int:
    return v.height()


def simple_root_vector(n: int, i: int) -> RootVector:
    return RootVector(tuple(1 if j == i else 0 for j in range(n)))


@dataclass(frozen=True)
class KacMoodyData:
    """Matrix plus a free realization: dual lattices X, Y of rank ``rank``,
    simple roots as integer covectors on Y, simple coroots as integer
    vectors in Y, pairing alpha_j(alpha_i^vee) = a[i][j]."""

    matrix: KacMoodyMatrix
    rank: int
    simple_roots: tuple[tuple[int, ...], ...]
    simple_coroots: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return self.matrix.n

    def pair(self, root_covector: tuple, y_vec: tuple) -> Fraction:
        """Evaluate a covector on a vector of Y tensor Q."""
        return sum((Fraction(a) * Fraction(b) for a, b in zip(root_covector, y_vec)),
                   start=Fraction(0))

    def root_covector(self, v: RootVector) -> tuple[Fraction, ...]:
        """Covector on Y of the lattice element sum v_i alpha_i."""
        out = [Fraction(0)] * self.rank
        for i, c in enumerate(v.coeffs):
            if c:
                for k in range(self.rank):
                    out[k] += c * self.simple_roots[i][k]
        return tuple(out)

    def eval_root(self, v: RootVector, y_vec: tuple) -> Fraction:
        return self.pair(self.root_covector(v), y_vec)

    def coroot_combination(self, coeffs) -> tuple[Fraction, ...]:
        """sum coeffs[i] * alpha_i^vee as a vector of Y tensor Q."""
        out = [Fraction(0)] * self.rank
        for i, c in enumerate(coeffs):
            if c:
                for k in range(self.rank):
                    out[k] += Fraction(c) * self.simple_coroots[i][k]
        return tuple(out)


def validate_data(matrix, rank_, simple_roots, simple_coroots) -> KacMoodyData:
    a = validate(matrix) if not isinstance(matrix, KacMoodyMatrix) else matrix
    roots = tuple(tuple(int(x) for x in r) for r in simple_roots)
    coroots = tuple(tuple(int(x) for x in r) for r in simple_coroots)
    n = a.n
    if len(roots) != n or len(coroots) != n:
        raise KMError("need one simple root and one simple coroot per index")
    for fam in (roots, coroots):
        for r in fam:
            if len(r) != rank_:
                raise KMError(f"vector {r} does not have length {rank_}")
    for i in range(n):
        for j in range(n):
            pairing = sum(roots[j][k] * coroots[i][k] for k in range(rank_))
            if pairing != a[i, j]:
                raise KMError(
                    f"pairing alpha_{j}(alpha_{i}^vee) = {pairing} != a[{i}][{j}] = {a[i, j]}"
                )
    if rank([list(r) for r in roots]) != n:
        raise KMError("simple roots are not linearly independent")
    return KacMoodyData(a, rank_, roots, coroots)


def minimal_realization(a: KacMoodyMatrix) -> KacMoodyData:
    """Standard minimal free (and cofree) realization, rank 2n - rank(A).

    Coroots are the first n standard basis vectors of Z^r; the covector of
    alpha_j is column j of A extended by rows of an identity block on the
    non-pivot columns, which makes the roots independent.
    """
    n = a.n
    rho = rank([list(r) for r in a.entries])
    r = 2 * n - rho
    # find non-pivot columns of A (row echelon over Q)
    m = [[Fraction(x) for x in row] for row in a.entries]
    pivots: list[int] = []
    ri = 0
    for c in range(n):
        piv = next((i for i in range(ri, n) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[ri], m[piv] = m[piv], m[ri]
        inv = 1 / m[ri][c]
        m[ri] = [x * inv for x in m[ri]]
        for i in range(n):
            if i != ri and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[ri])]
        pivots.append(c)
        ri += 1
    free_cols = [c for c in range(n) if c not in pivots]
    coroots = tuple(tuple(1 if k == i else 0 for k in range(r)) for i in range(n))
    roots = []
    for j in range(n):
        cov = [a[i, j] for i in range(n)]
        cov += [1 if j == free_cols[k] else 0 for k in range(n - rho)]
        roots.append(tuple(cov))
    return validate_data(a, r, tuple(roots), coroots)


def affine_sl2_data() -> KacMoodyData:
    """The standard rank-3 realization of [[2,-2],[-2,2]].

    Y has basis (coroot of the finite node, central element c, scaling
    element d); index 0 is the affine node, so delta = alpha_0 + alpha_1
    is the covector (0, 0, 1) and d = (0, 0, 1) has delta(d) = 1.
    """
    a = validate([[2, -2], [-2, 2]])
    roots = ((-2, 0, 1), (2, 0, 0))
    coroots = ((-1, 1, 0), (1, 0, 0))
    return validate_data(a, 3, roots, coroots)


def finite_a1_data() -> KacMoodyData:
    return minimal_realization(validate([[2]]))


def finite_a2_data() -> KacMoodyData:
    return minimal_realization(validate([[2, -1], [-1, 2]]))


def rank2_data(a: int, b: int) -> KacMoodyData:
    """Minimal realization of [[2,-a],[-b,2]]."""
    return minimal_realization(validate([[2, -a], [-b, 2]]))


def delta_coefficients(data: KacMoodyData) -> tuple[int, ...] | None:
    """For affine data: the primitive positive integer kernel vector of the
    transposed matrix, i.e. delta = sum a_i alpha_i.  None if not affine."""
    a = data.matrix
    if classify(a) != KMClass.AFFINE:
        return None
    kern = kernel_basis([list(row) for row in a.transpose().entries])
    v = kern[0]
    if v[0] < 0:
        v = tuple(-x for x in v)
    denom = 1
    for x in v:
        denom = denom * x.denominator // _gcd(denom, x.denominator)
    ints = [int(x * denom) for x in v]
    g = 0
    for x in ints:
        g = _gcd(g, abs(x))
    return tuple(x // g for x in ints)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# JSON schema:  {"matrix": [[...]], "realization": {"rank": r,
#                "simple_roots": [...], "simple_coroots": [...]}}

def data_to_json(data: KacMoodyData) -> str:
    return json.dumps({
        "matrix": [list(row) for row in data.matrix.entries],
        "realization": {
            "rank": data.rank,
            "simple_roots": [list(r) for r in data.simple_roots],
            "simple_coroots": [list(r) for r in data.simple_coroots],
        },
    })


def data_from_json(text: str) -> KacMoodyData:
    obj = json.loads(text)
    matrix = obj["matrix"]
    if "realization" in obj and obj["realization"]:
        real = obj["realization"]
        return validate_data(matrix, real["rank"], real["simple_roots"], real["simple_coroots"])
    return minimal_realization(validate(matrix))
