"""Fourier transforms on finite groups.

Signals are numpy arrays indexed by group element along axis 0:

* scalar signal ``phi: G -> C``      -- shape ``(|G|,)``
* vector signal ``phi: G -> V``      -- shape ``(|G|, dim)``
* operator signal ``F: G -> End(W)`` -- shape ``(|G|, dim, dim)``

All transforms are direct summations; groups here have at most 120 elements.
"""
from __future__ import annotations

import numpy as np

from .duals import DualTable, Representation
from .errors import CompletenessError, DimensionError, WrongKindError
from .groups import FiniteGroup, is_abelian


# -- small dense operators -----------------------------------------------------

def adjoint(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose over the last two axes."""
    return np.conj(np.swapaxes(m, -1, -2))


def frobenius_sq(m: np.ndarray) -> np.ndarray:
    """``tr(m m*)`` over the last two axes."""
    return np.sum(np.abs(m) ** 2, axis=(-2, -1))


def frobenius(m: np.ndarray) -> np.ndarray:
    return np.sqrt(frobenius_sq(m))


# -- helpers -------------------------------------------------------------------

def _signal(g: FiniteGroup, phi, min_ndim=1) -> np.ndarray:
    arr = np.asarray(phi, dtype=np.complex128)
    if arr.ndim < min_ndim or arr.shape[0] != g.order:
        raise DimensionError(f"signal of shape {arr.shape} does not live on {g.name} (order {g.order})")
    return arr


def _char_matrix(g: FiniteGroup, d: DualTable) -> np.ndarray:
    if not is_abelian(g):
        raise WrongKindError(f"{g.name} is not Abelian")
    if d.group.order != g.order:
        raise DimensionError("dual table belongs to a group of another order")
    return d.character_matrix()


# -- discrete Fourier transform (Abelian) ----------------------------------------

def dft(g: FiniteGroup, d: DualTable, phi) -> np.ndarray:
    """``out[a] = sum_x phi(x) chi^a(x)``."""
    X = _char_matrix(g, d)
    phi = _signal(g, phi)
    if phi.ndim != 1:
        raise DimensionError("dft takes a scalar signal; use mdft for vector values")
    return X @ phi


def dft_inverse(g: FiniteGroup, d: DualTable, phihat) -> np.ndarray:
    """``phi(x) = (1/|G|) sum_a phihat(a) conj(chi^a(x))``."""
    X = _char_matrix(g, d)
    phihat = _signal(g, phihat)
    if phihat.ndim != 1:
        raise DimensionError("dft_inverse takes a scalar signal")
    return (np.conj(X).T @ phihat) / g.order


def parseval_residual(g: FiniteGroup, d: DualTable, phi) -> float:
    phi = _signal(g, phi)
    lhs = float(np.sum(np.abs(phi) ** 2))
    rhs = float(np.sum(np.abs(dft(g, d, phi)) ** 2)) / g.order
    return abs(lhs - rhs)


def mdft(g: FiniteGroup, d: DualTable, phi) -> np.ndarray:
    """Multidimensional transform ``out[a] = sum_x chi^a(x) phi(x)``.

    ``phi`` may carry any trailing shape; a matrix-valued signal is treated as
    a vector signal on End(W) with its standard coordinate basis.
    """
    X = _char_matrix(g, d)
    phi = _signal(g, phi, min_ndim=2)
    return np.tensordot(X, phi, axes=(1, 0))


def mdft_inverse(g: FiniteGroup, d: DualTable, phihat) -> np.ndarray:
    X = _char_matrix(g, d)
    phihat = _signal(g, phihat, min_ndim=2)
    return np.tensordot(np.conj(X).T, phihat, axes=(1, 0)) / g.order


def component(phi, e: int) -> np.ndarray:
    """Coordinate function ``x -> <phi(x), e_e>`` in the standard basis."""
    return np.asarray(phi)[:, e]


# -- representation-based transform ------------------------------------------------

def rep_ft(g: FiniteGroup, phi, rho: Representation) -> np.ndarray:
    """``sum_x phi(x) rho(x)``, a ``dim x dim`` matrix."""
    phi = _signal(g, phi)
    if phi.ndim != 1:
        raise DimensionError("rep_ft takes a scalar signal")
    if rho.group_order != g.order:
        raise DimensionError(f"representation has {rho.group_order} matrices, group order is {g.order}")
    return np.tensordot(phi, rho.matrices, axes=(0, 0))


def rep_ft_all(g: FiniteGroup, d: DualTable, phi) -> list[np.ndarray]:
    return [rep_ft(g, phi, r) for r in d.entries]


def rep_ft_inverse(g: FiniteGroup, d: DualTable, transforms) -> np.ndarray:
    """``phi(x) = (1/|G|) sum_rho dim tr(rho(x^-1) phi~(rho))`` over the full dual."""
    if sum(r.dim ** 2 for r in d.entries) != g.order:
        raise CompletenessError(f"dual of {g.name} is incomplete; inversion needs every irrep")
    if len(transforms) != len(d.entries):
        raise DimensionError(f"expected {len(d.entries)} transforms, got {len(transforms)}")
    out = np.zeros(g.order, dtype=np.complex128)
    inv = g.inverse
    for r, t in zip(d.entries, transforms):
        t = np.asarray(t, dtype=np.complex128)
        if t.shape != (r.dim, r.dim):
            raise DimensionError(f"transform for entry {r.label} has shape {t.shape}, expected {(r.dim, r.dim)}")
        # tr(A B) = sum_ij A_ij B_ji
        out += r.dim * np.einsum("xij,ji->x", r.matrices[inv], t)
    return out / g.order
