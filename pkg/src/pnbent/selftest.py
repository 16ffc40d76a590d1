"""Harmonic-analysis invariants checked over the built-in group catalogue."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .duals import DualTable, irreps, resolve_tau, verify_dual
from .fourier import dft, dft_inverse, frobenius, mdft, mdft_inverse, parseval_residual, rep_ft_all, rep_ft_inverse
from .groups import FiniteGroup, group_from_spec, is_abelian

CATALOGUE = (
    "cyclic:2", "cyclic:3", "cyclic:4", "cyclic:6",
    "product:cyclic:2,cyclic:2", "product:cyclic:2,cyclic:4", "product:cyclic:3,cyclic:3",
    "symmetric:3", "dihedral:4", "dihedral:5", "quaternion", "symmetric:4",
    "product:symmetric:3,cyclic:2",
)
RANDOM_SIGNALS = 20


@dataclass(frozen=True)
class Outcome:
    group: str
    check: str
    passed: bool
    residual: float

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.group} {self.check} residual={self.residual:.3e}"


def orthogonality_residual(g: FiniteGroup, d: DualTable) -> float:
    """Both character sums against ``|G|`` at the identity and ``0`` elsewhere."""
    X = d.character_matrix()
    spike = np.zeros(g.order)
    spike[0] = g.order
    return float(max(np.max(np.abs(X.sum(axis=1) - spike)), np.max(np.abs(X.sum(axis=0) - spike))))


def trace_sum_residual(g: FiniteGroup, d: DualTable) -> float:
    """``max_{x != e} |sum_rho dim tr rho(x)|``."""
    total = sum(r.dim * r.trace() for r in d.entries)
    return float(np.max(np.abs(total[1:]), initial=0.0))


def nontrivial_sum_residual(g: FiniteGroup, d: DualTable) -> float:
    """``max_{rho != rho_0} ||sum_x rho(x)||``."""
    return float(max((frobenius(r.matrices.sum(axis=0)) for r in d.nontrivial), default=0.0))


def coefficient_residual(g: FiniteGroup, d: DualTable) -> float:
    """Matrix-coefficient identities: identity, products, inverses."""
    worst = 0.0
    for r in d.entries:
        M = r.matrices
        worst = max(worst, float(np.max(np.abs(M[0] - np.eye(r.dim)))))
        prod = np.einsum("xik,ykj->xyij", M, M)
        worst = max(worst, float(np.max(np.abs(M[g.cayley] - prod))))
        worst = max(worst, float(np.max(np.abs(M[g.inverse] - np.conj(np.swapaxes(M, 1, 2))))))
    return worst


def invariant_inner_product_residual(g: FiniteGroup, d: DualTable, rng) -> float:
    """``<rho(y)u, rho(y)v>_G = <u, v>_G`` for the group-averaged inner product."""
    worst = 0.0
    for r in d.entries:
        u = rng.normal(size=r.dim) + 1j * rng.normal(size=r.dim)
        v = rng.normal(size=r.dim) + 1j * rng.normal(size=r.dim)

        def avg(a, b):
            return np.sum((r.matrices @ a) * np.conj(r.matrices @ b))

        base = avg(u, v)
        for y in range(g.order):
            worst = max(worst, abs(avg(r.matrices[y] @ u, r.matrices[y] @ v) - base))
    return float(worst)


def _random_signals(rng, shape, count=RANDOM_SIGNALS):
    for _ in range(count):
        yield rng.normal(size=shape) + 1j * rng.normal(size=shape)


def run_group(spec: str, tau: float | None = None, seed: int = 0) -> list[Outcome]:
    g = group_from_spec(spec)
    d = irreps(g)
    t = resolve_tau(g.order, tau)
    tol = t * max(d.dims)
    rng = np.random.default_rng(seed)
    out = []

    def add(check, residual, limit=tol):
        out.append(Outcome(g.name, check, residual <= limit, residual))

    report = verify_dual(g, d, tau)
    out.append(Outcome(g.name, "dual_verification", report.passed, max(c.residual for c in report.checks)))
    if is_abelian(g):
        add("character_orthogonality", orthogonality_residual(g, d))
        add("dft_roundtrip", max(float(np.max(np.abs(dft_inverse(g, d, dft(g, d, phi)) - phi)))
                                 for phi in _random_signals(rng, g.order)))
        add("parseval", max(parseval_residual(g, d, phi) for phi in _random_signals(rng, g.order)))
        add("mdft_roundtrip", max(float(np.max(np.abs(mdft_inverse(g, d, mdft(g, d, phi)) - phi)))
                                  for phi in _random_signals(rng, (g.order, 3))))
    add("trace_sum", trace_sum_residual(g, d))
    add("nontrivial_sum_zero", nontrivial_sum_residual(g, d))
    add("rep_ft_roundtrip", max(float(np.max(np.abs(rep_ft_inverse(g, d, rep_ft_all(g, d, phi)) - phi)))
                                for phi in _random_signals(rng, g.order)))
    add("matrix_coefficients", coefficient_residual(g, d))
    # the averaged form scales like |G| |u| |v|
    add("invariant_inner_product", invariant_inner_product_residual(g, d, rng), tol * g.order * 10)
    return out


def run_selftest(groups=CATALOGUE, tau: float | None = None) -> list[Outcome]:
    return [o for spec in groups for o in run_group(spec, tau)]
