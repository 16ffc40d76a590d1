"""Perfect nonlinearity of maps between finite groups and its Fourier duals.

``pn_oracle`` decides perfect nonlinearity by counting derivative fibres with
integers only. The ``bent_*`` functions decide the same property from Fourier
data, one function per Abelian/non-Abelian combination of domain and codomain;
``bent_auto`` dispatches between them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import sqrt

import numpy as np

from .duals import DualTable, Representation, irreps, resolve_tau
from .errors import DimensionError, InvalidParameterError, ParseError, UnsupportedStructureError, WrongKindError
from .fourier import adjoint, dft, frobenius, frobenius_sq, mdft, rep_ft
from .groups import FiniteGroup, is_abelian

METHODS = ("oracle", "bent_ab_ab", "bent_nab_ab", "bent_ab_nab", "bent_nab_nab")


@dataclass(frozen=True, eq=False)
class FunctionTable:
    """``f: G -> H`` with ``values[x] = f(x)`` as codomain indices."""

    domain: FiniteGroup
    codomain: FiniteGroup
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.int64)
        if vals.shape != (self.domain.order,):
            raise DimensionError(f"function table needs {self.domain.order} values, got shape {vals.shape}")
        if len(vals) and (vals.min() < 0 or vals.max() >= self.codomain.order):
            raise InvalidParameterError(f"function values must lie in 0..{self.codomain.order - 1}")
        object.__setattr__(self, "values", vals)

    def __call__(self, x: int) -> int:
        return int(self.values[x])


@dataclass(frozen=True)
class Witness:
    """Where a Fourier criterion failed, e.g. ``{"rho": 2, "beta": 1}``."""

    where: dict
    residual: float


@dataclass(frozen=True)
class PnVerdict:
    is_pn: bool
    method: str
    max_residual: float
    witness: Witness | None = None
    # oracle only: first direction whose derivative is unbalanced
    failing_alpha: int | None = None


@dataclass(frozen=True)
class BalanceProfile:
    counts: np.ndarray


@dataclass(frozen=True)
class NormCondition:
    """Result of a trace (norm) condition; necessary for PN, not known sufficient."""

    holds: bool
    max_residual: float
    residuals: list = field(default_factory=list)  # (where, residual) per check


# -- derivatives and balance ---------------------------------------------------------

def derivative_table(f: FunctionTable) -> np.ndarray:
    """``D[a, x] = f(a x) f(x)^-1`` for every direction ``a`` at once."""
    G, H = f.domain, f.codomain
    return H.cayley[f.values[G.cayley], H.inverse[f.values][None, :]]


def derivative(f: FunctionTable, alpha: int) -> FunctionTable:
    if not 0 <= alpha < f.domain.order:
        raise InvalidParameterError(f"direction {alpha} outside 0..{f.domain.order - 1}")
    G, H = f.domain, f.codomain
    vals = H.cayley[f.values[G.cayley[alpha]], H.inverse[f.values]]
    return FunctionTable(G, H, vals)


def balance_profile(f: FunctionTable) -> BalanceProfile:
    return BalanceProfile(np.bincount(f.values, minlength=f.codomain.order))


def is_balanced(f: FunctionTable) -> bool:
    n, m = f.domain.order, f.codomain.order
    if n % m:
        return False
    return bool(np.all(balance_profile(f).counts == n // m))


def pn_oracle(f: FunctionTable) -> PnVerdict:
    """Exact PN test: every derivative in a non-identity direction is balanced."""
    n, m = f.domain.order, f.codomain.order
    if n > 1 and n % m:
        # fibres of size n/m are impossible; report the smallest possible deviation
        frac = n / m - n // m
        return PnVerdict(False, "oracle", min(frac, 1 - frac), failing_alpha=1)
    D = derivative_table(f)
    target = n // m
    worst, failing = 0, None
    for alpha in range(1, n):
        dev = int(np.max(np.abs(np.bincount(D[alpha], minlength=m) - target)))
        if dev and failing is None:
            failing = alpha
        worst = max(worst, dev)
    return PnVerdict(failing is None, "oracle", float(worst), failing_alpha=failing)


# -- verdict assembly --------------------------------------------------------------

def _verdict(method: str, checks) -> PnVerdict:
    """``checks`` yields ``(where, residual, tolerance)``; PN iff all within tolerance."""
    max_res, worst_fail, worst_fail_res = 0.0, None, -1.0
    for where, res, tol in checks:
        res = float(res)
        max_res = max(max_res, res)
        if res > tol and res > worst_fail_res:
            worst_fail, worst_fail_res = where, res
    if worst_fail is None:
        return PnVerdict(True, method, max_res)
    return PnVerdict(False, method, max_res, Witness(worst_fail, worst_fail_res))


def _need_abelian(g: FiniteGroup, role: str, method: str) -> None:
    if not is_abelian(g):
        raise WrongKindError(f"{method} needs an Abelian {role}; {g.name} is not")


def _char_signals(f: FunctionTable, dH: DualTable) -> tuple[list[int], np.ndarray]:
    """Rows ``chi^beta o f`` for every nontrivial character of the codomain."""
    _need_abelian(f.codomain, "codomain", "character composition")
    betas = [r for r in dH.entries if not r.is_trivial]
    if any(r.dim != 1 for r in betas):
        raise WrongKindError("codomain dual must consist of characters")
    rows = np.array([r.matrices[f.values, 0, 0] for r in betas]).reshape(len(betas), f.domain.order)
    return [r.label for r in betas], rows


# -- both Abelian ------------------------------------------------------------------------

def bent_ab_ab(f: FunctionTable, dG: DualTable, dH: DualTable, tau: float | None = None) -> PnVerdict:
    """``|FT(chi^beta o f)(alpha)| = sqrt|G|`` for all alpha and nontrivial beta."""
    _need_abelian(f.domain, "domain", "bent_ab_ab")
    _need_abelian(f.codomain, "codomain", "bent_ab_ab")
    G = f.domain
    tol = resolve_tau(G.order, tau)
    root = sqrt(G.order)
    labels, rows = _char_signals(f, dH)
    alpha_labels = [r.label for r in dG.entries]

    def checks():
        for beta, phi in zip(labels, rows):
            res = np.abs(np.abs(dft(G, dG, phi)) - root)
            for a, r in zip(alpha_labels, res):
                yield {"alpha": a, "beta": beta}, r, tol

    return _verdict("bent_ab_ab", checks())


# -- non-Abelian domain, Abelian codomain -------------------------------------------------

def ac_nab_ab(f: FunctionTable, beta: int, dH: DualTable) -> np.ndarray:
    """Autocorrelation ``alpha -> sum_x chi^beta(d_alpha f(x))``; ``beta`` indexes ``dH``."""
    _need_abelian(f.codomain, "codomain", "ac_nab_ab")
    if not 0 <= beta < len(dH.entries):
        raise InvalidParameterError(f"beta {beta} outside the codomain dual")
    chi = dH.entries[beta].matrices[:, 0, 0]
    return chi[derivative_table(f)].sum(axis=1)


def _nab_ab_transforms(f: FunctionTable, rho: Representation, rows: np.ndarray) -> np.ndarray:
    """Stacked ``rep_ft(chi^beta o f, rho)`` over the rows of ``rows``."""
    return np.array([rep_ft(f.domain, phi, rho) for phi in rows])


def bent_nab_ab(f: FunctionTable, dG: DualTable, dH: DualTable, tau: float | None = None) -> PnVerdict:
    """``F F* = |G| Id_V`` with ``F = rep_ft(chi^beta o f, rho)``, all rho, nontrivial beta."""
    _need_abelian(f.codomain, "codomain", "bent_nab_ab")
    G = f.domain
    tau = resolve_tau(G.order, tau)
    labels, rows = _char_signals(f, dH)

    def checks():
        for rho in dG.entries:
            F = _nab_ab_transforms(f, rho, rows)
            res = frobenius(F @ adjoint(F) - G.order * np.eye(rho.dim))
            for beta, r in zip(labels, res):
                yield {"rho": rho.label, "beta": beta}, r, tau * rho.dim

    return _verdict("bent_nab_ab", checks())


def norm_condition_nab_ab(f: FunctionTable, dG: DualTable, dH: DualTable,
                          tau: float | None = None) -> NormCondition:
    """``||rep_ft(chi^beta o f, rho)||^2 = |G| dim`` for all rho and nontrivial beta."""
    _need_abelian(f.codomain, "codomain", "norm_condition_nab_ab")
    G = f.domain
    tau = resolve_tau(G.order, tau)
    labels, rows = _char_signals(f, dH)
    out = []
    holds = True
    for rho in dG.entries:
        res = np.abs(frobenius_sq(_nab_ab_transforms(f, rho, rows)) - G.order * rho.dim)
        for beta, r in zip(labels, res):
            out.append(({"rho": rho.label, "beta": beta}, float(r)))
            holds &= bool(r <= tau * rho.dim)
    return NormCondition(holds, max((r for _, r in out), default=0.0), out)


# -- Abelian domain, non-Abelian codomain ----------------------------------------------------

def ac_ab_nab(f: FunctionTable, rho: Representation) -> np.ndarray:
    """Operator autocorrelation ``alpha -> sum_x rho(d_alpha f(x))``."""
    if rho.group_order != f.codomain.order:
        raise DimensionError("representation does not belong to the codomain")
    return rho.matrices[derivative_table(f)].sum(axis=1)


def _md_transforms(f: FunctionTable, dG: DualTable, rho: Representation) -> np.ndarray:
    """``mdft(rho o f)``: one ``dim x dim`` matrix per domain character."""
    return mdft(f.domain, dG, rho.matrices[f.values])


def bent_ab_nab(f: FunctionTable, dG: DualTable, dH: DualTable, tau: float | None = None) -> PnVerdict:
    """``M M* = |G| Id_W`` with ``M = mdft(rho' o f)(alpha)``, all alpha, nontrivial rho'."""
    _need_abelian(f.domain, "domain", "bent_ab_nab")
    G = f.domain
    tau = resolve_tau(G.order, tau)
    alpha_labels = [r.label for r in dG.entries]

    def checks():
        for rho in dH.nontrivial:
            M = _md_transforms(f, dG, rho)
            res = frobenius(M @ adjoint(M) - G.order * np.eye(rho.dim))
            for a, r in zip(alpha_labels, res):
                yield {"alpha": a, "rho_prime": rho.label}, r, tau * rho.dim

    return _verdict("bent_ab_nab", checks())


def norm_condition_ab_nab(f: FunctionTable, dG: DualTable, dH: DualTable,
                          tau: float | None = None) -> NormCondition:
    _need_abelian(f.domain, "domain", "norm_condition_ab_nab")
    G = f.domain
    tau = resolve_tau(G.order, tau)
    out = []
    holds = True
    for rho in dH.nontrivial:
        res = np.abs(frobenius_sq(_md_transforms(f, dG, rho)) - G.order * rho.dim)
        for a, r in zip((e.label for e in dG.entries), res):
            out.append(({"alpha": a, "rho_prime": rho.label}, float(r)))
            holds &= bool(r <= tau * rho.dim)
    return NormCondition(holds, max((r for _, r in out), default=0.0), out)


# -- both non-Abelian ----------------------------------------------------------------------

def matrix_coefficient(rho: Representation, i: int, j: int) -> np.ndarray:
    """``y -> rho(y)[i, j]`` as a scalar signal on the representation's group."""
    if not (0 <= i < rho.dim and 0 <= j < rho.dim):
        raise InvalidParameterError(f"coefficient ({i}, {j}) outside a {rho.dim}-dim representation")
    return rho.matrices[:, i, j]


def ac_nab_nab(f: FunctionTable, rho_prime: Representation, i: int, j: int) -> np.ndarray:
    """``alpha -> sum_x rho'_ij(d_alpha f(x))``."""
    if rho_prime.group_order != f.codomain.order:
        raise DimensionError("representation does not belong to the codomain")
    coeff = matrix_coefficient(rho_prime, i, j)
    return coeff[derivative_table(f)].sum(axis=1)


def coefficient_transforms(f: FunctionTable, rho: Representation, rho_prime: Representation) -> np.ndarray:
    """``T[i, k] = rep_ft(rho'_ik o f, rho)``, shape ``(w, w, d, d)``."""
    return np.tensordot(rho_prime.matrices[f.values], rho.matrices, axes=(0, 0))


def _block_sums(T: np.ndarray) -> np.ndarray:
    """``S[i, j] = sum_k T[i, k] T[j, k]*``."""
    return np.einsum("ikab,jkcb->ijac", T, np.conj(T))


def bent_nab_nab(f: FunctionTable, dG: DualTable, dH: DualTable, tau: float | None = None) -> PnVerdict:
    """Block condition ``sum_k T_ik T_jk* = |G| delta_ij Id_V`` for all rho, nontrivial rho', (i, j)."""
    G = f.domain
    tau = resolve_tau(G.order, tau)

    def checks():
        for rho in dG.entries:
            eye = G.order * np.eye(rho.dim)
            for rp in dH.nontrivial:
                S = _block_sums(coefficient_transforms(f, rho, rp))
                S[np.arange(rp.dim), np.arange(rp.dim)] -= eye
                res = frobenius(S)
                for i in range(rp.dim):
                    for j in range(rp.dim):
                        yield ({"rho": rho.label, "rho_prime": rp.label, "i": i, "j": j},
                               res[i, j], tau * rho.dim)

    return _verdict("bent_nab_nab", checks())


def norm_condition_nab_nab(f: FunctionTable, dG: DualTable, dH: DualTable,
                           tau: float | None = None) -> NormCondition:
    """Trace of the diagonal blocks: ``sum_k ||T_ik||^2 = |G| dim V`` for every i."""
    G = f.domain
    tau = resolve_tau(G.order, tau)
    out = []
    holds = True
    for rho in dG.entries:
        for rp in dH.nontrivial:
            T = coefficient_transforms(f, rho, rp)
            res = np.abs(frobenius_sq(T).sum(axis=1) - G.order * rho.dim)
            for i, r in enumerate(res):
                out.append(({"rho": rho.label, "rho_prime": rp.label, "i": i}, float(r)))
                holds &= bool(r <= tau * rho.dim)
    return NormCondition(holds, max((r for _, r in out), default=0.0), out)


# -- dispatch ------------------------------------------------------------------------------

def _duals(f: FunctionTable, dG, dH) -> tuple[DualTable, DualTable]:
    try:
        if dG is None:
            dG = irreps(f.domain)
        if dH is None:
            dH = irreps(f.codomain)
    except UnsupportedStructureError as exc:
        raise UnsupportedStructureError(f"missing dual: {exc}") from exc
    return dG, dH


def method_for(G: FiniteGroup, H: FiniteGroup) -> str:
    return {(True, True): "bent_ab_ab", (False, True): "bent_nab_ab",
            (True, False): "bent_ab_nab", (False, False): "bent_nab_nab"}[(is_abelian(G), is_abelian(H))]


_CRITERIA = {"bent_ab_ab": bent_ab_ab, "bent_nab_ab": bent_nab_ab,
             "bent_ab_nab": bent_ab_nab, "bent_nab_nab": bent_nab_nab}


def bent_auto(f: FunctionTable, dG: DualTable | None = None, dH: DualTable | None = None,
              tau: float | None = None) -> PnVerdict:
    """Pick the bentness criterion matching the abelianness of domain and codomain."""
    dG, dH = _duals(f, dG, dH)
    return _CRITERIA[method_for(f.domain, f.codomain)](f, dG, dH, tau)


def norm_condition(f: FunctionTable, dG: DualTable | None = None, dH: DualTable | None = None,
                   tau: float | None = None) -> NormCondition:
    """The trace condition for the pair's case.

    Abelian codomain uses the scalar-character form (which also covers the
    fully Abelian case), Abelian domain with non-Abelian codomain the
    multidimensional form, and two non-Abelian groups the diagonal-block trace.
    """
    dG, dH = _duals(f, dG, dH)
    if is_abelian(f.codomain):
        return norm_condition_nab_ab(f, dG, dH, tau)
    if is_abelian(f.domain):
        return norm_condition_ab_nab(f, dG, dH, tau)
    return norm_condition_nab_nab(f, dG, dH, tau)


# -- function-table text format ----------------------------------------------------------

def format_function_table(f: FunctionTable) -> str:
    return f"fn {f.domain.order} {f.codomain.order}\n" + " ".join(str(int(v)) for v in f.values) + "\n"


def parse_function_table(text: str, G: FiniteGroup, H: FiniteGroup) -> FunctionTable:
    """Parse ``fn <|G|> <|H|>`` followed by ``|G|`` codomain indices."""
    tokens = []
    header = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        if header is None:
            if len(toks) != 3 or toks[0] != "fn":
                raise ParseError("expected 'fn <|G|> <|H|>'", lineno)
            try:
                header = (int(toks[1]), int(toks[2]))
            except ValueError:
                raise ParseError("non-integer header field", lineno) from None
            continue
        try:
            tokens.extend(int(t) for t in toks)
        except ValueError:
            raise ParseError("non-integer function value", lineno) from None
    if header is None:
        raise ParseError("empty function file")
    if header != (G.order, H.order):
        raise DimensionError(f"file is for |G|={header[0]}, |H|={header[1]}; groups have {G.order}, {H.order}")
    if len(tokens) != G.order:
        raise DimensionError(f"expected {G.order} values, found {len(tokens)}")
    return FunctionTable(G, H, np.array(tokens))
