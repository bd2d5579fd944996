"""Lattice model of the tree's vertex set: full-rank O-lattices in F^2 up
to scaling, with the graph distance computed from elementary divisors
(Smith normal form over the valuation ring).  Used as an independent
oracle for the canonical-coordinates distance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import INF, FieldConfig, FieldElement, Mat2, tail_reduce
from .tree import TreePoint


class SingularLattice(ValueError):
    pass


@dataclass(frozen=True)
class Lattice:
    """O-span of the columns of an invertible basis matrix."""

    basis: Mat2

    def __post_init__(self) -> None:
        if self.basis.det().is_zero():
            raise SingularLattice("basis columns are dependent")


def vertex_to_lattice(v: TreePoint) -> Lattice:
    """Lattice class of a vertex: x_plus(tail) applied to O + O pi^x."""
    if not v.is_vertex():
        raise SingularLattice(f"{v} is not a vertex")
    cfg = v.config
    x = int(v.x)
    pix = cfg.uniformizer_pow(x)
    return Lattice(Mat2(cfg.one(), v.tail * pix, cfg.zero(), pix))


def smith_valuations(m: Mat2) -> tuple[int, int]:
    """Valuations (v1, v2), v1 <= v2, of the elementary divisors of an
    invertible 2x2 matrix over the valuation ring's fraction field.

    Row/column operations over O: pivot on a minimal-valuation entry,
    clear its row and column, read off the diagonal valuations.
    """
    ents = [[m.a, m.b], [m.c, m.d]]
    vals = [[e.valuation() for e in row] for row in ents]
    if m.det().is_zero():
        raise SingularLattice("singular matrix has no elementary divisors")
    pi, pj = min(((i, j) for i in range(2) for j in range(2)),
                 key=lambda ij: vals[ij[0]][ij[1]])
    if pi == 1:
        ents[0], ents[1] = ents[1], ents[0]
    if pj == 1:
        for row in ents:
            row[0], row[1] = row[1], row[0]
    pivot = ents[0][0]
    # clear: row2 -= (c/pivot) row1, col2 -= (b/pivot) col1; quotients are in O
    f = ents[1][0] / pivot
    ents[1][0] = ents[1][0] - f * ents[0][0]
    ents[1][1] = ents[1][1] - f * ents[0][1]
    g = ents[0][1] / pivot
    ents[0][1] = ents[0][1] - g * ents[0][0]
    ents[1][1] = ents[1][1] - g * ents[1][0]
    v1 = pivot.valuation()
    v2 = ents[1][1].valuation()
    assert v1 is not INF and v2 is not INF
    return (v1, v2) if v1 <= v2 else (v2, v1)


def lattice_distance(l1: Lattice, l2: Lattice) -> int:
    """|v1 - v2| for the elementary divisors of the change of basis."""
    n = l2.basis.inverse() * l1.basis
    v1, v2 = smith_valuations(n)
    return abs(v1 - v2)


def same_class(l1: Lattice, l2: Lattice) -> bool:
    return lattice_distance(l1, l2) == 0


def column_normal_form(lat: Lattice) -> Mat2:
    """Canonical basis of the lattice class.

    Triangularize by column operations over O, normalize the pivots to
    uniformizer powers, reduce the off-diagonal entry modulo the first
    pivot, and scale the class so the first pivot is 1.
    """
    cfg = lat.basis.a.config
    b11, b12 = lat.basis.a, lat.basis.b
    b21, b22 = lat.basis.c, lat.basis.d
    # kill the bottom-left entry
    if not b21.is_zero():
        if b22.is_zero() or b21.valuation() <= b22.valuation():
            # col2 -= (b22/b21) col1 zeroes b22, then swap
            f = b22 / b21
            b12, b22 = b12 - f * b11, cfg.zero()
            b11, b12 = b12, b11
            b21, b22 = b22, b21
        else:
            f = b21 / b22
            b11, b21 = b11 - f * b12, cfg.zero()
    # normalize pivots to powers of the uniformizer
    u1 = b11 / cfg.uniformizer_pow(b11.valuation())
    b11 = b11 / u1
    b12 = b12  # only column 1 scaled
    u2 = b22 / cfg.uniformizer_pow(b22.valuation())
    b12 = b12 / u2
    b22 = b22 / u2
    # reduce the off-diagonal entry modulo b11 * O
    b12 = tail_reduce(b12, b11.valuation()).value
    # scale the class: first pivot becomes 1
    scale = cfg.uniformizer_pow(-b11.valuation())
    return Mat2(b11 * scale, b12 * scale, cfg.zero(), b22 * scale)
