"""Weyl group elements as words with exact integer matrix actions, plus
real-root enumeration with coroots and reflection witnesses.

Word convention: the tuple (i_1, ..., i_k) denotes the composite
r_{i_1} ∘ r_{i_2} ∘ ... ∘ r_{i_k}, i.e. r_{i_k} is applied to vectors
first.  With this reading, a reduced word (j_1, ..., j_k) has

    Inv(w) = { alpha_{j_k}, r_{j_k}(alpha_{j_{k-1}}), ...,
               r_{j_k} ... r_{j_2}(alpha_{j_1}) },

which the test suite cross-validates against the brute-force definition
{alpha in Delta_+ : w.alpha in Delta_-}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .kmdata import KacMoodyData, RootVector, simple_root_vector

IntMat = tuple[tuple[int, ...], ...]


def _identity(n: int) -> IntMat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _mat_mul(a: IntMat, b: IntMat) -> IntMat:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _mat_vec(a: IntMat, v) -> tuple:
    return tuple(sum(a[i][k] * v[k] for k in range(len(v))) for i in range(len(a)))


def _simple_q_matrix(data: KacMoodyData, i: int) -> IntMat:
    """Action of r_i on root-lattice coordinates: the i-th coordinate of
    r_i(v) is v_i - sum_j a[i][j] v_j, all others are unchanged."""
    n = data.n
    rows = []
    for k in range(n):
        if k != i:
            rows.append(tuple(1 if j == k else 0 for j in range(n)))
        else:
            rows.append(tuple((1 if j == i else 0) - data.matrix[i, j] for j in range(n)))
    return tuple(rows)


def _simple_y_matrix(data: KacMoodyData, i: int) -> IntMat:
    """Action of r_i on Y: e_k -> e_k - alpha_i(e_k) alpha_i^vee."""
    r = data.rank
    cols = []
    for k in range(r):
        col = [1 if j == k else 0 for j in range(r)]
        c = data.simple_roots[i][k]
        if c:
            for j in range(r):
                col[j] -= c * data.simple_coroots[i][j]
        cols.append(col)
    return tuple(tuple(cols[j][i2] for j in range(r)) for i2 in range(r))


@dataclass(frozen=True)
class WeylElement:
    data: KacMoodyData = field(compare=False)
    word: tuple[int, ...] = field(compare=False)  # reduced
    q_mat: IntMat = field(compare=False)
    y_mat: IntMat  # faithful action on Y for free data; used for equality

    def length(self) -> int:
        return len(self.word)

    def is_identity(self) -> bool:
        return self.y_mat == _identity(self.data.rank)

    def act_root(self, v: RootVector) -> RootVector:
        return RootVector(_mat_vec(self.q_mat, v.coeffs))

    def act_y(self, v) -> tuple:
        return _mat_vec(self.y_mat, tuple(Fraction(x) for x in v))

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return weyl_element(self.data, self.word + other.word)

    def inverse(self) -> "WeylElement":
        return weyl_element(self.data, tuple(reversed(self.word)))

    def __hash__(self) -> int:
        return hash(self.y_mat)

    def __str__(self) -> str:
        return "e" if not self.word else ".".join(f"r{i}" for i in self.word)


def identity_element(data: KacMoodyData) -> WeylElement:
    return WeylElement(data, (), _identity(data.n), _identity(data.rank))


def simple_reflection(data: KacMoodyData, i: int) -> WeylElement:
    return WeylElement(data, (i,), _simple_q_matrix(data, i), _simple_y_matrix(data, i))


def simple_reflect(data: KacMoodyData, i: int, v) -> tuple:
    """r_i(v) = v - alpha_i(v) alpha_i^vee on Y tensor Q."""
    vv = tuple(Fraction(x) for x in v)
    c = data.pair(data.simple_roots[i], vv)
    return tuple(x - c * data.simple_coroots[i][k] for k, x in enumerate(vv))


def _product_matrices(data: KacMoodyData, word) -> tuple[IntMat, IntMat]:
    q = _identity(data.n)
    y = _identity(data.rank)
    for i in word:
        q = _mat_mul(q, _simple_q_matrix(data, i))
        y = _mat_mul(y, _simple_y_matrix(data, i))
    return q, y


def length_and_reduce(data: KacMoodyData, word) -> tuple[int, tuple[int, ...]]:
    """Exact length and a reduced word via the descent criterion:
    l(w r_i) < l(w) iff w.alpha_i is a negative root."""
    word = tuple(int(i) for i in word)
    for i in word:
        if not 0 <= i < data.n:
            raise ValueError(f"index {i} out of range")
    q, _ = _product_matrices(data, word)
    rev: list[int] = []
    ident = _identity(data.n)
    while q != ident:
        for i in range(data.n):
            image = _mat_vec(q, simple_root_vector(data.n, i).coeffs)
            if all(x <= 0 for x in image):
                break
        else:  # pragma: no cover - impossible for a genuine group element
            raise RuntimeError("no descent found")
        rev.append(i)
        q = _mat_mul(q, _simple_q_matrix(data, i))
    reduced = tuple(reversed(rev))
    return len(reduced), reduced


def weyl_element(data: KacMoodyData, word) -> WeylElement:
    _, reduced = length_and_reduce(data, word)
    q, y = _product_matrices(data, reduced)
    return WeylElement(data, reduced, q, y)


@dataclass(frozen=True)
class RealRoot:
    """A real root with its coroot and a witness (w, i) with root = w.alpha_i."""

    root: RootVector
    coroot: tuple[int, ...]  # in Y coordinates
    witness_word: tuple[int, ...]
    witness_index: int

    def height(self) -> int:
        return self.root.height()

    def negate(self) -> "RealRoot":
        """-root with coroot -coroot; witness extends through the reflection."""
        return RealRoot(-self.root, tuple(-c for c in self.coroot),
                        self.witness_word + (self.witness_index,), self.witness_index)

    def __str__(self) -> str:
        return str(self.root)


def simple_real_root(data: KacMoodyData, i: int) -> RealRoot:
    return RealRoot(simple_root_vector(data.n, i), data.simple_coroots[i], (), i)


def reflection(data: KacMoodyData, alpha: RealRoot) -> WeylElement:
    """r_alpha = w r_i w^{-1} for the witness; acts by x - alpha(x) alpha^vee."""
    w = alpha.witness_word
    return weyl_element(data, w + (alpha.witness_index,) + tuple(reversed(w)))


def reflect_vector(data: KacMoodyData, alpha: RealRoot, v) -> tuple:
    """r_alpha(v) = v - alpha(v) alpha^vee on Y tensor Q."""
    vv = tuple(Fraction(x) for x in v)
    c = data.eval_root(alpha.root, vv)
    return tuple(x - c * alpha.coroot[k] for k, x in enumerate(vv))


@dataclass(frozen=True)
class RootSet:
    """Positive real roots of height <= bound, in (height, coords) order."""

    data: KacMoodyData = field(compare=False)
    bound: int
    roots: tuple[RealRoot, ...]

    def by_height(self) -> dict[int, list[RealRoot]]:
        out: dict[int, list[RealRoot]] = {}
        for r in self.roots:
            out.setdefault(r.height(), []).append(r)
        return out

    def coords_set(self) -> set[tuple[int, ...]]:
        return {r.root.coeffs for r in self.roots}

    def find(self, v: RootVector) -> RealRoot | None:
        for r in self.roots:
            if r.root == v:
                return r
        return None


def enumerate_real_roots(data: KacMoodyData, bound: int) -> RootSet:
    """Breadth-first closure of the simple roots under simple reflections,
    keeping positive roots of height <= bound.  Every positive real root of
    height <= bound is reached: any non-simple one is lowered by some r_i.
    """
    if bound < 1:
        raise ValueError("height bound must be >= 1")
    found: dict[tuple[int, ...], RealRoot] = {}
    queue: list[RealRoot] = []
    for i in range(data.n):
        rr = simple_real_root(data, i)
        found[rr.root.coeffs] = rr
        queue.append(rr)
    y_mats = [_simple_y_matrix(data, i) for i in range(data.n)]
    q_mats = [_simple_q_matrix(data, i) for i in range(data.n)]
    head = 0
    while head < len(queue):
        cur = queue[head]
        head += 1
        for i in range(data.n):
            coords = _mat_vec(q_mats[i], cur.root.coeffs)
            v = RootVector(coords)
            if not v.is_positive() or v.height() > bound or coords in found:
                continue
            coroot = _mat_vec(y_mats[i], cur.coroot)
            rr = RealRoot(v, coroot, (i,) + cur.witness_word, cur.witness_index)
            found[coords] = rr
            queue.append(rr)
    ordered = sorted(found.values(), key=lambda r: (r.height(), r.root.coeffs))
    return RootSet(data, bound, tuple(ordered))


def inversion_set(data: KacMoodyData, w: WeylElement) -> list[RealRoot]:
    """Inv(w) from a reduced word; size equals l(w)."""
    word = w.word
    k = len(word)
    out: list[RealRoot] = []
    prefix = identity_element(data)  # r_{j_k} r_{j_{k-1}} ... applied so far
    for m in range(k):
        idx = word[k - 1 - m]
        alpha = simple_real_root(data, idx)
        root = prefix.act_root(alpha.root)
        coroot = _mat_vec(prefix.y_mat, alpha.coroot)
        out.append(RealRoot(root, coroot, prefix.word, idx))
        prefix = prefix * simple_reflection(data, idx)
    return out


def brute_inversion_set(data: KacMoodyData, w: WeylElement, bound: int) -> set[tuple[int, ...]]:
    """{alpha in Delta_+ with ht <= bound : w.alpha in Delta_-}, coordinates."""
    roots = enumerate_real_roots(data, bound)
    out = set()
    for r in roots.roots:
        if w.act_root(r.root).is_negative():
            out.add(r.root.coeffs)
    return out


def all_elements_up_to_length(data: KacMoodyData, max_len: int) -> list[WeylElement]:
    """All group elements of length <= max_len, BFS by length."""
    seen = {identity_element(data).y_mat}
    layer = [identity_element(data)]
    out = [identity_element(data)]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for i in range(data.n):
                cand = w * simple_reflection(data, i)
                if cand.length() == w.length() + 1 and cand.y_mat not in seen:
                    seen.add(cand.y_mat)
                    nxt.append(cand)
                    out.append(cand)
        layer = nxt
    return out
