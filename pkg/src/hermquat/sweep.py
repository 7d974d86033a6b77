"""Desk-scale enumeration of integral forms and the end-to-end pipeline.

Forms are enumerated on the standard lattice B^2 with integer diagonal
entries alpha, beta in [-H, H] and off-diagonal gamma running over the
inverse different (1/sqrt(d)) * (Z + Z*omega) with coefficient height at
most H; rows are ordered lexicographically by (alpha, beta, gamma).
"""

from __future__ import annotations

from dataclasses import dataclass

from sympy import factorint

from .hermitian import (
    Definiteness,
    DiscValue,
    HermSpace,
    Lattice,
    Vector,
    discriminant_form,
    is_integral,
)
from .qfield import QElem, QuadField
from .quaternion import build_order
from .represent import (
    VERDICT_REPRESENTED,
    RepOneReport,
    RepresentConfig,
    represents_one_integral,
)


@dataclass
class SweepRow:
    alpha: int
    beta: int
    gamma: QElem
    space: HermSpace
    delta: DiscValue
    definiteness: Definiteness
    report: RepOneReport
    witness: Vector | None
    order_disc: DiscValue | None
    discs_equal: bool | None


def iter_candidate_forms(field: QuadField, height: int):
    """All conjugate-symmetric Gram matrices in the enumeration window."""
    inv_sqrt = field.inverse_sqrt_d()
    rng = range(-height, height + 1)
    for alpha in rng:
        for beta in rng:
            for m in rng:
                for n in rng:
                    gamma = (field.elem(m, n)) * inv_sqrt
                    yield alpha, beta, gamma, HermSpace(field, alpha, beta, gamma)


def surviving_forms(field: QuadField, height: int):
    """Integral, nondegenerate forms on B^2 with square-free |Delta|."""
    lattice = Lattice.standard(field)
    for alpha, beta, gamma, space in iter_candidate_forms(field, height):
        if not space.is_nondegenerate():
            continue
        if not is_integral(space, lattice):
            continue
        delta = discriminant_form(space, lattice)
        n = int(delta.as_ideal)
        if any(e > 1 for e in factorint(n).values()):
            continue
        yield alpha, beta, gamma, space, lattice, delta


def run_row(space, lattice, delta, config: RepresentConfig) -> tuple:
    """Pipeline for one surviving form: represent, build the order, compare discs."""
    report = represents_one_integral(space, lattice, config)
    order_disc = None
    discs_equal = None
    if report.verdict == VERDICT_REPRESENTED:
        order, emb = build_order(space, lattice, report.witness)
        order_disc = order.discriminant()
        discs_equal = order_disc.value == delta.value
    return report, order_disc, discs_equal


def run_sweep(
    field: QuadField,
    height: int,
    config: RepresentConfig | None = None,
    target_disc: int | None = None,
) -> list[SweepRow]:
    config = config or RepresentConfig()
    rows = []
    for alpha, beta, gamma, space, lattice, delta in surviving_forms(field, height):
        if target_disc is not None and delta.value != target_disc:
            continue
        report, order_disc, discs_equal = run_row(space, lattice, delta, config)
        rows.append(
            SweepRow(
                alpha=alpha,
                beta=beta,
                gamma=gamma,
                space=space,
                delta=delta,
                definiteness=space.definiteness(),
                report=report,
                witness=report.witness,
                order_disc=order_disc,
                discs_equal=discs_equal,
            )
        )
    return rows
