"""Tits cone membership with certificates, vectorial faces, sphericity,
prenilpotent pairs and closed root intervals.

Membership certificates are exact.  Greedy normalization handles every
vector of the cone; outside it, type-specific witnesses decide for finite
type (vacuous), untwisted affine type (the delta criterion) and rank-2
indefinite type (sign tests against the eigenlines of r_1 r_2, done in
the quadratic extension without radicals).  Other types report Unknown.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .kmdata import (
    KacMoodyData,
    KMClass,
    RootVector,
    classify,
    decompose,
    delta_coefficients,
)
from .weyl import (
    RealRoot,
    WeylElement,
    all_elements_up_to_length,
    simple_reflect,
    weyl_element,
)


class ConeError(ValueError):
    pass


class NotInTitsCone(ConeError):
    pass


class PairNotPrenilpotent(ConeError):
    pass


# ---------------------------------------------------------------------------
# certificates

@dataclass(frozen=True)
class InCone:
    w: WeylElement          # w.v is the dominant image
    image: tuple            # in the closure of the fundamental chamber
    steps: int


@dataclass(frozen=True)
class NotInCone:
    reason: str
    witness: object = None


@dataclass(frozen=True)
class Unknown:
    steps: int


Certificate = InCone | NotInCone | Unknown


def default_cap(v) -> int:
    return 10 * (1 + sum(abs(Fraction(x).numerator) + Fraction(x).denominator for x in v))


def _neg_index(data: KacMoodyData, v) -> int | None:
    for i in range(data.n):
        if data.pair(data.simple_roots[i], v) < 0:
            return i
    return None


def normalize_to_dominant(data: KacMoodyData, v, cap: int | None = None) -> Certificate:
    """Greedily reflect at the smallest negative simple root until dominant.

    Inside the Tits cone the procedure terminates; outside it, the affine
    and rank-2 indefinite closed forms provide a checkable refutation.
    """
    vv = tuple(Fraction(x) for x in v)
    if cap is None:
        cap = default_cap(vv)
    if cap < 1:
        raise ConeError("cap must be >= 1")
    cur = vv
    word: list[int] = []
    for step in range(cap + 1):
        i = _neg_index(data, cur)
        if i is None:
            return InCone(weyl_element(data, tuple(word)), cur, step)
        cur = simple_reflect(data, i, cur)
        word.insert(0, i)
    return _refute(data, vv, cap)


def _refute(data: KacMoodyData, v, cap: int) -> Certificate:
    kind = classify(data.matrix)
    if kind == KMClass.AFFINE:
        delta = delta_coefficients(data)
        dv = sum(Fraction(delta[i]) * data.pair(data.simple_roots[i], v) for i in range(data.n))
        if dv < 0:
            return NotInCone("delta(v) < 0", dv)
        if dv == 0 and any(data.pair(data.simple_roots[i], v) != 0 for i in range(data.n)):
            return NotInCone("delta(v) = 0 but v is not inessential", dv)
        return Unknown(cap)
    if kind == KMClass.INDEFINITE and data.n == 2 and data.rank == 2:
        geo = rank2_geometry(data)
        if geo.strictly_in_gamma(v):
            return NotInCone("v lies strictly inside an open cone between the eigenlines",
                             "gamma")
        # v on the (T u -T) side: decide -v in T by the greedy procedure
        cur = tuple(-Fraction(x) for x in v)
        word: list[int] = []
        for _ in range(cap + 1):
            i = _neg_index(data, cur)
            if i is None:
                if any(x != 0 for x in v):
                    return NotInCone("-v lies in the Tits cone and v != 0",
                                     weyl_element(data, tuple(word)))
                return Unknown(cap)
            cur = simple_reflect(data, i, cur)
            word.insert(0, i)
        return Unknown(cap)
    return Unknown(cap)


# ---------------------------------------------------------------------------
# faces

@dataclass(frozen=True)
class FaceDescriptor:
    """The face sign * w.F(J) with F(J) = {alpha_j = 0 on J, alpha_i > 0 off J}."""

    w: WeylElement
    subset: tuple[int, ...]
    sign: int  # +1 or -1


def face_of(data: KacMoodyData, v, cap: int | None = None) -> FaceDescriptor:
    cert = normalize_to_dominant(data, v, cap)
    if isinstance(cert, InCone):
        j = tuple(i for i in range(data.n)
                  if data.pair(data.simple_roots[i], cert.image) == 0)
        return FaceDescriptor(cert.w.inverse(), j, +1)
    neg = tuple(-Fraction(x) for x in v)
    cert = normalize_to_dominant(data, neg, cap)
    if isinstance(cert, InCone):
        j = tuple(i for i in range(data.n)
                  if data.pair(data.simple_roots[i], cert.image) == 0)
        return FaceDescriptor(cert.w.inverse(), j, -1)
    raise NotInTitsCone(f"no face certificate for {v}")


def is_spherical(data: KacMoodyData, subset) -> bool:
    """True iff every indecomposable block of the principal submatrix A_J is
    of finite type, i.e. the fixator <r_j : j in J> is finite."""
    idx = tuple(sorted(set(int(j) for j in subset)))
    if not idx:
        return True
    sub = data.matrix.submatrix(idx)
    for comp in decompose(sub):
        if classify(sub.submatrix(comp)) != KMClass.FINITE:
            return False
    return True


# ---------------------------------------------------------------------------
# exact arithmetic in Q[sqrt(D)] for the rank-2 indefinite geometry

@dataclass(frozen=True)
class QuadNum:
    """u + w*sqrt(disc) with rational u, w and fixed positive non-square disc."""

    u: Fraction
    w: Fraction
    disc: int

    def __add__(self, o: "QuadNum") -> "QuadNum":
        return QuadNum(self.u + o.u, self.w + o.w, self.disc)

    def __sub__(self, o: "QuadNum") -> "QuadNum":
        return QuadNum(self.u - o.u, self.w - o.w, self.disc)

    def __mul__(self, o: "QuadNum") -> "QuadNum":
        return QuadNum(self.u * o.u + self.w * o.w * self.disc,
                       self.u * o.w + self.w * o.u, self.disc)

    def inverse(self) -> "QuadNum":
        n = self.u * self.u - self.w * self.w * self.disc
        if n == 0:
            raise ZeroDivisionError("non-invertible quadratic number")
        return QuadNum(self.u / n, -self.w / n, self.disc)

    def sign(self) -> int:
        u, w = self.u, self.w
        if w == 0:
            return 0 if u == 0 else (1 if u > 0 else -1)
        if u == 0:
            return 1 if w > 0 else -1
        if u > 0 and w > 0:
            return 1
        if u < 0 and w < 0:
            return -1
        cmp = u * u - w * w * self.disc  # sign of |u| - |w|sqrt(D)
        if cmp == 0:
            return 0
        # u and w have opposite signs here
        if u > 0:
            return 1 if cmp > 0 else -1
        return -1 if cmp > 0 else 1


def _qn(disc: int, u, w=0) -> QuadNum:
    return QuadNum(Fraction(u), Fraction(w), disc)


@dataclass(frozen=True)
class Rank2Geometry:
    """Eigenline data of r_1 r_2 for an indefinite 2x2 matrix in its minimal
    rank-2 realization.  gamma_rays bound the open cone Gamma containing
    the first simple coroot; the opposite cone is -Gamma."""

    disc: int
    gamma_rays: tuple[tuple[QuadNum, QuadNum], tuple[QuadNum, QuadNum]]

    def _solve(self, target) -> tuple[QuadNum, QuadNum]:
        (r1x, r1y), (r2x, r2y) = self.gamma_rays
        det = r1x * r2y - r1y * r2x
        tx = _qn(self.disc, target[0])
        ty = _qn(self.disc, target[1])
        s = (tx * r2y - ty * r2x) * det.inverse()
        t = (r1x * ty - r1y * tx) * det.inverse()
        return s, t

    def strictly_in_gamma(self, v) -> bool:
        """v in the open cone Gamma or in -Gamma."""
        s, t = self._solve(tuple(Fraction(x) for x in v))
        return (s.sign() > 0 and t.sign() > 0) or (s.sign() < 0 and t.sign() < 0)

    def nonneg_on_gamma(self, covector, opposite: bool) -> bool:
        """covector >= 0 on the closure of Gamma (or of -Gamma)."""
        flip = -1 if opposite else 1
        for rx, ry in self.gamma_rays:
            val = _qn(self.disc, covector[0]) * rx + _qn(self.disc, covector[1]) * ry
            if flip * val.sign() < 0:
                return False
        return True


def rank2_geometry(data: KacMoodyData) -> Rank2Geometry:
    if data.n != 2 or data.rank != 2:
        raise ConeError("rank-2 geometry needs the minimal 2x2 realization")
    a = data.matrix[0, 1] * -1
    b = data.matrix[1, 0] * -1
    ab = a * b
    if ab <= 4:
        raise ConeError("rank-2 geometry is for the indefinite case ab >= 5")
    disc = ab * (ab - 4)
    tau = Fraction(ab - 2)
    # r_1 r_2 on Y in the basis of coroots: [[ab-1, -b],[a, -1]] acting on
    # coordinates; an eigenvector for eigenvalue lam is (b, ab-1-lam).
    lam_plus = (_qn(disc, tau / 2, Fraction(1, 2)))
    lam_minus = (_qn(disc, tau / 2, Fraction(-1, 2)))
    v_plus = (_qn(disc, b), _qn(disc, ab - 1) - lam_plus)
    v_minus = (_qn(disc, b), _qn(disc, ab - 1) - lam_minus)
    rays = [v_plus, v_minus, tuple(_qn(disc, 0) - c for c in v_plus),
            tuple(_qn(disc, 0) - c for c in v_minus)]
    # locate the quadrant containing e_1 = first coroot among adjacent pairs
    e1 = (Fraction(1), Fraction(0))
    pairs = [(rays[0], rays[1]), (rays[1], rays[2]), (rays[2], rays[3]), (rays[3], rays[0])]
    for r1, r2 in pairs:
        geo = Rank2Geometry(disc, (tuple(r1), tuple(r2)))
        s, t = geo._solve(e1)
        if s.sign() > 0 and t.sign() > 0:
            return geo
    raise ConeError("first coroot not located between the eigenlines")  # pragma: no cover


# ---------------------------------------------------------------------------
# prenilpotent pairs

@dataclass(frozen=True)
class Prenilpotent:
    to_positive: WeylElement   # sends both roots into Delta_+
    to_negative: WeylElement   # sends both roots into Delta_-


@dataclass(frozen=True)
class NotPrenilpotent:
    reason: str


@dataclass(frozen=True)
class UnknownWithinBound:
    bound: int


Verdict = Prenilpotent | NotPrenilpotent | UnknownWithinBound


def _search_witness(data: KacMoodyData, roots: list[RootVector], want_positive: bool,
                    max_len: int) -> WeylElement | None:
    for w in all_elements_up_to_length(data, max_len):
        images = [w.act_root(r) for r in roots]
        if want_positive and all(v.is_positive() for v in images):
            return w
        if not want_positive and all(v.is_negative() for v in images):
            return w
    return None


def search_prenilpotent(data: KacMoodyData, alpha: RealRoot, beta: RealRoot,
                        max_len: int) -> Verdict:
    """Pure word search: conclusive only when both witnesses are found."""
    wp = _search_witness(data, [alpha.root, beta.root], True, max_len)
    wn = _search_witness(data, [alpha.root, beta.root], False, max_len)
    if wp is not None and wn is not None:
        return Prenilpotent(wp, wn)
    return UnknownWithinBound(max_len)


def _witnesses_or_raise(data: KacMoodyData, alpha: RealRoot, beta: RealRoot,
                        start: int) -> Prenilpotent:
    """Unbounded-in-principle BFS for the two witnesses of a pair already
    known prenilpotent from a closed form; widens the length bound."""
    bound = start
    while bound <= start + 24:
        wp = _search_witness(data, [alpha.root, beta.root], True, bound)
        wn = _search_witness(data, [alpha.root, beta.root], False, bound)
        if wp is not None and wn is not None:
            return Prenilpotent(wp, wn)
        bound += 4
    raise ConeError("witness search exhausted for a closed-form prenilpotent pair")


def _affine_finite_part(data: KacMoodyData, v: RootVector) -> tuple | None:
    """Write v = finite_part + k*delta; returns the finite part coordinates.

    Requires the affine node to be the unique index i with delta
    coefficient usable as pivot; only the untwisted normalization with
    delta coefficient 1 at some node is handled.
    """
    delta = delta_coefficients(data)
    if delta is None:
        return None
    node = next((i for i, c in enumerate(delta) if c == 1), None)
    if node is None:
        return None
    k = Fraction(v.coeffs[node], delta[node])
    if k.denominator != 1:
        return None
    k = int(k)
    return tuple(v.coeffs[i] - k * delta[i] for i in range(data.n) if i != node)


def prenilpotent_pair(data: KacMoodyData, alpha: RealRoot, beta: RealRoot,
                      bound: int = 8) -> Verdict:
    """Closed-form criterion where available, else bounded word search.

    Finite type: prenilpotent iff alpha != -beta.  Untwisted affine:
    iff the finite parts are not opposite.  Rank-2 indefinite: iff both
    roots are nonnegative on a common cone between the eigenlines.
    """
    kind = classify(data.matrix)
    if kind == KMClass.FINITE:
        if alpha.root == -beta.root:
            return NotPrenilpotent("beta = -alpha")
        return _witnesses_or_raise(data, alpha, beta, bound)
    if kind == KMClass.AFFINE:
        fa = _affine_finite_part(data, alpha.root)
        fb = _affine_finite_part(data, beta.root)
        if fa is not None and fb is not None:
            if tuple(-x for x in fa) == fb:
                return NotPrenilpotent("opposite finite parts")
            return _witnesses_or_raise(data, alpha, beta, bound)
        return search_prenilpotent(data, alpha, beta, bound)
    if kind == KMClass.INDEFINITE and data.n == 2 and data.rank == 2:
        geo = rank2_geometry(data)
        ca = data.root_covector(alpha.root)
        cb = data.root_covector(beta.root)
        for opposite in (False, True):
            if geo.nonneg_on_gamma(ca, opposite) and geo.nonneg_on_gamma(cb, opposite):
                return _witnesses_or_raise(data, alpha, beta, bound)
        return NotPrenilpotent("no cone between the eigenlines is shared")
    return search_prenilpotent(data, alpha, beta, bound)


def closed_interval(data: KacMoodyData, alpha: RealRoot, beta: RealRoot,
                    bound: int = 8) -> list[RootVector]:
    """[alpha, beta] = {alpha, beta} plus the real roots p*alpha + q*beta
    with p, q >= 1.  Droppable candidates are bounded through the witness
    pair: every combination lands in Inv(w_neg w_pos^{-1})."""
    verdict = prenilpotent_pair(data, alpha, beta, bound)
    if isinstance(verdict, NotPrenilpotent):
        raise PairNotPrenilpotent(verdict.reason)
    if isinstance(verdict, UnknownWithinBound):
        raise PairNotPrenilpotent(f"prenilpotency unknown within bound {verdict.bound}")
    out = [alpha.root, beta.root]
    if alpha.root == beta.root:
        return [alpha.root]
    from .weyl import inversion_set  # local alias

    # p*alpha + q*beta is a real root iff its image under the positivity
    # witness lies in Inv(w_neg w_pos^{-1}): the image is a positive
    # combination of two positive roots and the negativity witness sends it
    # negative, and conversely every inversion pulls back to a real root.
    wmix = verdict.to_negative * verdict.to_positive.inverse()
    inv_coords = {r.root.coeffs for r in inversion_set(data, wmix)}
    hmax = max((sum(c) for c in inv_coords), default=0)
    wa = verdict.to_positive.act_root(alpha.root)
    wb = verdict.to_positive.act_root(beta.root)
    ha, hb = wa.height(), wb.height()
    if min(ha, hb) <= 0:  # pragma: no cover - witnesses guarantee positivity
        raise ConeError("positivity witness failed")
    p = 1
    while p * ha + hb <= hmax:
        q = 1
        while p * ha + q * hb <= hmax:
            if (wa.scale(p) + wb.scale(q)).coeffs in inv_coords:
                out.append(alpha.root.scale(p) + beta.root.scale(q))
            q += 1
        p += 1
    # dedupe, deterministic order
    seen, uniq = set(), []
    for v in out:
        if v.coeffs not in seen:
            seen.add(v.coeffs)
            uniq.append(v)
    return sorted(uniq, key=lambda v: (v.height(), v.coeffs))
