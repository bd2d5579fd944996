"""Small exact linear algebra over Fraction: elimination, kernels, and
Fourier-Motzkin feasibility for strict/weak rational inequality systems.
"""

from __future__ import annotations

from fractions import Fraction

Vec = tuple[Fraction, ...]
Mat = list[list[Fraction]]


def _frac_matrix(rows) -> Mat:
    return [[Fraction(x) for x in row] for row in rows]


def rank(rows) -> int:
    m = _frac_matrix(rows)
    r = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def kernel_basis(rows) -> list[Vec]:
    """Basis of the right kernel {v : A v = 0}."""
    m = _frac_matrix(rows)
    if not m:
        return []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row_idx, pc in enumerate(pivots):
            v[pc] = -m[row_idx][fc]
        basis.append(tuple(v))
    return basis


def solve(rows, rhs) -> Vec | None:
    """One solution of A x = b, or None if inconsistent."""
    m = _frac_matrix(rows)
    b = [Fraction(x) for x in rhs]
    if not m:
        return () if all(x == 0 for x in b) else None
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        b[r], b[piv] = b[piv], b[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        b[r] = b[r] * inv
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
                b[i] = b[i] - f * b[r]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    for i in range(r, len(m)):
        if b[i] != 0:
            return None
    x = [Fraction(0)] * ncols
    for row_idx, pc in enumerate(pivots):
        x[pc] = b[row_idx]
    return tuple(x)


# ---------------------------------------------------------------------------
# Fourier-Motzkin
#
# An inequality is (coeffs, const) meaning  sum coeffs[j] x_j >= const.

Ineq = tuple[Vec, Fraction]


def _normalize(ineq: Ineq) -> Ineq:
    coeffs, const = ineq
    nz = [abs(x) for x in coeffs if x != 0]
    if not nz:
        return coeffs, const
    scale = max(nz)
    return tuple(x / scale for x in coeffs), const / scale


def fm_feasible(ineqs: list[Ineq]) -> bool:
    """Feasibility of a finite system of weak inequalities over Q."""
    if not ineqs:
        return True
    nvars = len(ineqs[0][0])
    system = {(_normalize(iq)) for iq in ineqs}
    for var in range(nvars):
        pos, neg, rest = [], [], []
        for coeffs, const in system:
            c = coeffs[var]
            if c > 0:
                pos.append((coeffs, const))
            elif c < 0:
                neg.append((coeffs, const))
            else:
                rest.append((coeffs, const))
        new = set(rest)
        for cp, kp in pos:
            for cn, kn in neg:
                # cp[var] x >= kp - ...  combine to eliminate x
                a, b = cp[var], -cn[var]
                coeffs = tuple(b * x + a * y for x, y in zip(cp, cn))
                new.add(_normalize((coeffs, b * kp + a * kn)))
        system = new
    return all(const <= 0 for _, const in system)


def positive_combination(vectors: list[Vec], target: Vec) -> Vec | None:
    """Coefficients c >= 0 with sum c_i vectors[i] = target, or None."""
    if not vectors:
        return () if all(x == 0 for x in target) else None
    k = len(vectors)
    ineqs: list[Ineq] = []
    for i in range(len(target)):
        row = tuple(Fraction(vectors[j][i]) for j in range(k))
        t = Fraction(target[i])
        ineqs.append((row, t))
        ineqs.append((tuple(-x for x in row), -t))
    for j in range(k):
        e = tuple(Fraction(1) if i == j else Fraction(0) for i in range(k))
        ineqs.append((e, Fraction(0)))
    return _fm_witness(ineqs, k)


def _fm_witness(ineqs: list[Ineq], nvars: int) -> Vec | None:
    """Explicit point of a feasible FM system by back-substitution."""
    if not fm_feasible(ineqs):
        return None
    # eliminate variables one by one, then back-substitute greedily
    stack: list[tuple[int, list[Ineq]]] = []
    system = [(_normalize(iq)) for iq in ineqs]
    for var in range(nvars):
        stack.append((var, system))
        pos, neg, rest = [], [], []
        for coeffs, const in system:
            c = coeffs[var]
            (pos if c > 0 else neg if c < 0 else rest).append((coeffs, const))
        new = list(rest)
        for cp, kp in pos:
            for cn, kn in neg:
                a, b = cp[var], -cn[var]
                coeffs = tuple(b * x + a * y for x, y in zip(cp, cn))
                new.append(_normalize((coeffs, b * kp + a * kn)))
        system = new
    x = [Fraction(0)] * nvars
    for var, sys_before in reversed(stack):
        lo, hi = None, None
        for coeffs, const in sys_before:
            c = coeffs[var]
            if c == 0:
                continue
            rest = const - sum(
                coeffs[j] * x[j] for j in range(nvars) if j != var and coeffs[j] != 0
            )
            if c > 0:
                b = rest / c
                lo = b if lo is None else max(lo, b)
            else:
                b = rest / c
                hi = b if hi is None else min(hi, b)
        if lo is not None:
            x[var] = lo
        elif hi is not None:
            x[var] = hi
        else:
            x[var] = Fraction(0)
    for coeffs, const in ineqs:
        if sum(c * v for c, v in zip(coeffs, x)) < const:
            return None
    return tuple(x)
