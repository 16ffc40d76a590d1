"""Duals of finite groups: characters and irreducible unitary representations.

Irreps are catalogued per construction (cyclic, dihedral, Q8, S_n for n <= 4
and direct products of those) rather than computed. Groups loaded from a
Cayley table need a dual-table file.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DualVerificationError, ParseError, UnsupportedStructureError, WrongKindError
from .groups import FiniteGroup, from_cayley_table, is_abelian, symmetric_elements


def default_tau(order: int) -> float:
    return 1e-9 * max(1, order)


def resolve_tau(order: int, tau: float | None) -> float:
    return default_tau(order) if tau is None else tau


@dataclass(frozen=True, eq=False)
class Representation:
    """An irreducible unitary representation, ``matrices[x] = rho(x)``."""

    matrices: np.ndarray
    label: int
    is_trivial: bool = False

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    @property
    def group_order(self) -> int:
        return self.matrices.shape[0]

    def trace(self) -> np.ndarray:
        return np.trace(self.matrices, axis1=1, axis2=2)


@dataclass(frozen=True)
class Character:
    group_order: int
    values: np.ndarray
    label: int


@dataclass(frozen=True, eq=False)
class DualTable:
    group: FiniteGroup
    entries: tuple[Representation, ...]
    kind: str

    @property
    def dims(self) -> list[int]:
        return [r.dim for r in self.entries]

    @property
    def trivial(self) -> Representation:
        return next(r for r in self.entries if r.is_trivial)

    @property
    def nontrivial(self) -> list[Representation]:
        return [r for r in self.entries if not r.is_trivial]

    def is_one_dimensional(self) -> bool:
        return all(r.dim == 1 for r in self.entries)

    def character_matrix(self) -> np.ndarray:
        """``X[a, x] = chi^a(x)``; only meaningful when every entry is 1-dim."""
        if not self.is_one_dimensional():
            raise WrongKindError(f"dual of {self.group.name} has entries of dimension > 1")
        return np.stack([r.matrices[:, 0, 0] for r in self.entries])

    def characters(self) -> list[Character]:
        X = self.character_matrix()
        return [Character(self.group.order, X[a], r.label) for a, r in enumerate(self.entries)]

    def reordered(self, order) -> "DualTable":
        """Same entries in another order (labels travel with the entries)."""
        return DualTable(self.group, tuple(self.entries[k] for k in order), self.kind)


def _readonly(a) -> np.ndarray:
    arr = np.ascontiguousarray(a, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


# -- catalogue ---------------------------------------------------------------
# Each builder returns a list of (|G|, d, d) arrays, trivial first.

def _cyclic_catalogue(n: int) -> list[np.ndarray]:
    x = np.arange(n)
    return [np.exp(2j * np.pi * h * x / n).reshape(n, 1, 1) for h in range(n)]


def _rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def _dihedral_catalogue(n: int) -> list[np.ndarray]:
    k = np.arange(n)
    one_dim = [(1, 1), (1, -1)]  # (value on r, value on s)
    if n % 2 == 0:
        one_dim += [(-1, 1), (-1, -1)]
    out = []
    for r_val, s_val in one_dim:
        rot = np.power(float(r_val), k)
        out.append(np.concatenate([rot, s_val * rot]).reshape(2 * n, 1, 1))
    refl = np.diag([1.0, -1.0])
    for h in range(1, (n + 1) // 2):
        rots = [np.linalg.matrix_power(_rotation(2 * np.pi * h / n), j) for j in range(n)]
        out.append(np.array(rots + [refl @ m for m in rots]))
    return out


def _quaternion_catalogue() -> list[np.ndarray]:
    # element order: 1, -1, i, -i, j, -j, k, -k
    one_dim = []
    for ci, cj in [(1, 1), (1, -1), (-1, 1), (-1, -1)]:
        vals = [1, 1, ci, ci, cj, cj, ci * cj, ci * cj]
        one_dim.append(np.array(vals, dtype=float).reshape(8, 1, 1))
    e = np.eye(2)
    qi = np.array([[1j, 0], [0, -1j]])
    qj = np.array([[0, 1], [-1, 0]])
    qk = qi @ qj
    two = np.array([e, -e, qi, -qi, qj, -qj, qk, -qk])
    return one_dim + [two]


def _helmert(n: int) -> np.ndarray:
    """Orthonormal basis (columns) of the complement of (1, ..., 1) in R^n."""
    cols = []
    for k in range(1, n):
        v = np.zeros(n)
        v[:k] = 1.0
        v[k] = -k
        cols.append(v / np.linalg.norm(v))
    return np.array(cols).T


def _permutation_matrix(p) -> np.ndarray:
    n = len(p)
    m = np.zeros((n, n))
    m[list(p), range(n)] = 1.0  # e_i -> e_{p(i)}
    return m


def _standard(perms) -> np.ndarray:
    q = _helmert(len(perms[0]))
    return np.array([q.T @ _permutation_matrix(p) @ q for p in perms])


def _sign(p) -> int:
    inversions = sum(1 for a, b in itertools.combinations(p, 2) if a > b)
    return -1 if inversions % 2 else 1


def _symmetric_catalogue(n: int) -> list[np.ndarray]:
    perms = symmetric_elements(n)
    m = len(perms)
    trivial = np.ones((m, 1, 1))
    if n == 1:
        return [trivial]
    sign = np.array([_sign(p) for p in perms], dtype=float).reshape(m, 1, 1)
    if n == 2:
        return [trivial, sign]
    std = _standard(perms)
    if n == 3:
        return [trivial, sign, std]
    if n == 4:
        # S4 -> S3 through the action on the three pairings of {0, 1, 2, 3}
        pairings = [frozenset({frozenset({0, 1}), frozenset({2, 3})}),
                    frozenset({frozenset({0, 2}), frozenset({1, 3})}),
                    frozenset({frozenset({0, 3}), frozenset({1, 2})})]
        images = []
        for p in perms:
            moved = [frozenset(frozenset(p[i] for i in pair) for pair in pr) for pr in pairings]
            images.append(tuple(pairings.index(mv) for mv in moved))
        two = _standard(images)
        return [trivial, sign, two, std, std * sign]
    raise UnsupportedStructureError(
        f"no catalogued irreps for S{n}; supply a dual table file")


def _catalogue(tag: tuple) -> list[np.ndarray]:
    kind = tag[0]
    if kind == "cyclic":
        return _cyclic_catalogue(tag[1])
    if kind == "dihedral":
        return _dihedral_catalogue(tag[1])
    if kind == "quaternion8":
        return _quaternion_catalogue()
    if kind == "symmetric":
        return _symmetric_catalogue(tag[1])
    if kind == "product":
        left = _sorted(_catalogue(tag[1]))
        right = _sorted(_catalogue(tag[2]))
        n2 = right[0].shape[0]
        out = []
        for a, b in itertools.product(left, right):
            n1 = a.shape[0]
            ia = np.repeat(np.arange(n1), n2)
            ib = np.tile(np.arange(n2), n1)
            out.append(np.einsum("xij,xkl->xikjl", a[ia], b[ib]).reshape(
                n1 * n2, a.shape[1] * b.shape[1], a.shape[1] * b.shape[1]))
        return out
    raise UnsupportedStructureError(
        f"no catalogued irreps for structure {kind!r}; supply a dual table file")


def _sorted(mats: list[np.ndarray]) -> list[np.ndarray]:
    return sorted(mats, key=lambda m: m.shape[1])  # stable: ties keep catalogue order


def irreps(g: FiniteGroup) -> DualTable:
    """Complete catalogued dual, ordered by dimension then catalogue index."""
    mats = _sorted(_catalogue(g.structure_tag))
    entries = tuple(Representation(_readonly(m), k, k == 0) for k, m in enumerate(mats))
    kind = "abelian_characters" if is_abelian(g) else "nonabelian_irreps"
    return DualTable(g, entries, kind)


def characters(g: FiniteGroup) -> DualTable:
    """Character group of an Abelian group.

    Entry ``a`` is ``chi^a(x) = exp(2 pi i sum_k a_k x_k / n_k)`` where ``a`` and
    ``x`` are read in the mixed-radix encoding of the cyclic factors.
    """
    if not is_abelian(g):
        raise WrongKindError(f"{g.name} is not Abelian")
    if g.structure_tag[0] == "imported":
        raise UnsupportedStructureError(
            f"{g.name} was imported; supply a dual table file")
    return irreps(g)


# -- verification --------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float
    witness: object = None


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> CheckResult:
        return next(c for c in self.checks if c.name == name)

    def format(self) -> str:
        lines = []
        for c in self.checks:
            line = f"{'PASS' if c.passed else 'FAIL'} {c.name} residual={c.residual:.3e}"
            if not c.passed and c.witness is not None:
                line += f" witness={c.witness}"
            lines.append(line)
        return "\n".join(lines)


def _worst(values: np.ndarray, index_of) -> tuple[float, object]:
    k = int(np.argmax(values))
    return float(values.flat[k]), index_of(k)


def verify_dual(g: FiniteGroup, d: DualTable, tau: float | None = None) -> VerificationReport:
    """Check every dual-table invariant; failures are report entries, never raised."""
    tau = resolve_tau(g.order, tau)
    n = g.order
    report = VerificationReport()
    add = report.checks.append

    bad_shape = [k for k, r in enumerate(d.entries) if r.group_order != n]
    add(CheckResult("group_order", not bad_shape, float(len(bad_shape)),
                    {"entry": bad_shape[0]} if bad_shape else None))
    if bad_shape:
        return report

    trivial_idx = [k for k, r in enumerate(d.entries) if r.is_trivial]
    triv_res = 0.0
    if trivial_idx:
        triv_res = float(np.max(np.abs(d.entries[trivial_idx[0]].matrices - 1.0)))
    ok = trivial_idx == [0] and d.entries[0].dim == 1 and triv_res <= tau
    add(CheckResult("trivial_first", ok, triv_res, None if ok else {"trivial_entries": trivial_idx}))

    worst = {name: (0.0, None) for name in ("identity", "homomorphism", "unitarity", "irreducibility")}

    def note(name, value, witness):
        if value > worst[name][0] or worst[name][1] is None:
            worst[name] = (value, witness)

    traces = []
    for k, r in enumerate(d.entries):
        M = r.matrices
        eye = np.eye(r.dim)
        note("identity", float(np.linalg.norm(M[0] - eye)), {"entry": k, "element": 0})
        prod = np.einsum("xab,ybc->xyac", M, M)
        diff = np.linalg.norm(M[g.cayley] - prod, axis=(2, 3))
        res, (x, y) = _worst(diff, lambda i: divmod(i, n))
        note("homomorphism", res, {"entry": k, "x": x, "y": y})
        uni = np.linalg.norm(M @ np.conj(np.swapaxes(M, 1, 2)) - eye, axis=(1, 2))
        res, x = _worst(uni, lambda i: i)
        note("unitarity", res, {"entry": k, "element": x})
        tr = r.trace()
        traces.append(tr)
        note("irreducibility", abs(float(np.sum(np.abs(tr) ** 2)) / n - 1.0), {"entry": k})
    for name in ("identity", "homomorphism", "unitarity", "irreducibility"):
        res, wit = worst[name]
        add(CheckResult(name, res <= tau, res, None if res <= tau else wit))

    noniso, wit = 0.0, None
    for p, q in itertools.combinations(range(len(traces)), 2):
        v = abs(complex(np.sum(traces[p] * np.conj(traces[q])))) / n
        if v > noniso:
            noniso, wit = v, {"entries": (p, q)}
    add(CheckResult("non_isomorphism", noniso <= tau, noniso, None if noniso <= tau else wit))

    total = sum(r.dim ** 2 for r in d.entries)
    add(CheckResult("completeness", total == n, float(abs(n - total)),
                    None if total == n else {"sum_dim_sq": total, "order": n}))
    return report


# -- dual-table file format ------------------------------------------------------

def format_dual(d: DualTable) -> str:
    n = d.group.order
    lines = [f"dual {n} {len(d.entries)}"]
    for r in d.entries:
        lines.append(f"rep {r.dim} {int(r.is_trivial)}")
        for x in range(n):
            for row in r.matrices[x]:
                lines.append(" ".join(f"{float(v.real)!r} {float(v.imag)!r}" for v in row))
    return "\n".join(lines) + "\n"


def parse_dual(text: str) -> tuple[int, list[tuple[np.ndarray, bool]]]:
    """Parse a dual-table file into ``(group_order, [(matrices, is_trivial), ...])``."""
    lines = [(no, raw.split("#", 1)[0].split()) for no, raw in enumerate(text.splitlines(), 1)]
    lines = [(no, toks) for no, toks in lines if toks]
    if not lines:
        raise ParseError("empty dual file")
    it = iter(lines)
    no, toks = next(it)
    if len(toks) != 3 or toks[0] != "dual":
        raise ParseError("expected 'dual <group_order> <num_entries>'", no)
    try:
        order, count = int(toks[1]), int(toks[2])
    except ValueError:
        raise ParseError("non-integer header field", no) from None
    entries = []
    for _ in range(count):
        try:
            no, toks = next(it)
        except StopIteration:
            raise ParseError(f"expected {count} entries, found {len(entries)}", lines[-1][0]) from None
        if len(toks) != 3 or toks[0] != "rep" or toks[2] not in ("0", "1"):
            raise ParseError("expected 'rep <dim> <is_trivial:0|1>'", no)
        is_trivial = toks[2] == "1"
        try:
            dim = int(toks[1])
        except ValueError:
            raise ParseError("non-integer dimension", no) from None
        if dim < 1:
            raise ParseError("dimension must be positive", no)
        mats = np.empty((order, dim, dim), dtype=np.complex128)
        for x in range(order):
            for i in range(dim):
                try:
                    no, toks = next(it)
                except StopIteration:
                    raise ParseError("truncated matrix block", lines[-1][0]) from None
                if len(toks) != 2 * dim:
                    raise ParseError(f"expected {2 * dim} floats, found {len(toks)}", no)
                try:
                    vals = [float(v) for v in toks]
                except ValueError:
                    raise ParseError("non-numeric matrix entry", no) from None
                mats[x, i] = np.array(vals[0::2]) + 1j * np.array(vals[1::2])
        entries.append((mats, is_trivial))
    leftover = next(it, None)
    if leftover is not None:
        raise ParseError("unexpected trailing content", leftover[0])
    return order, entries


def _build(g: FiniteGroup, parsed) -> DualTable:
    entries = tuple(Representation(_readonly(m), k, t) for k, (m, t) in enumerate(parsed))
    return DualTable(g, entries, "imported")


def _checked(g: FiniteGroup, d: DualTable, tau) -> DualTable:
    report = verify_dual(g, d, tau)
    if not report.passed:
        names = ", ".join(c.name for c in report.failures())
        raise DualVerificationError(f"dual table failed verification: {names}", report)
    return d


def load_dual(g: FiniteGroup, path, tau: float | None = None) -> DualTable:
    """Read a dual-table file for ``g``; rejected unless it verifies completely."""
    order, parsed = parse_dual(Path(path).read_text())
    if order != g.order:
        raise ParseError(f"dual file is for a group of order {order}, not {g.order}", 1)
    return _checked(g, _build(g, parsed), tau)


def save_dual(d: DualTable, path) -> None:
    Path(path).write_text(format_dual(d))


def infer_group(parsed, tau: float | None = None) -> FiniteGroup:
    """Recover the Cayley table that a complete dual encodes.

    The direct sum of all irreps is faithful, so ``x*y`` is the unique ``z``
    whose matrices equal ``rho(x) rho(y)`` in every entry. Raises
    :class:`DualVerificationError` naming the homomorphism check when some
    product has no match.
    """
    order = parsed[0][0].shape[0]
    tau = resolve_tau(order, tau)
    flat = np.concatenate([m.reshape(order, -1) for m, _ in parsed], axis=1)
    table = np.empty((order, order), dtype=np.int64)
    for x in range(order):
        prods = np.concatenate(
            [np.einsum("ab,ybc->yac", m[x], m).reshape(order, -1) for m, _ in parsed], axis=1)
        dist = np.linalg.norm(prods[:, None, :] - flat[None, :, :], axis=2)
        best = np.argmin(dist, axis=1)
        miss = np.flatnonzero(dist[np.arange(order), best] > tau)
        if len(miss):
            y = int(miss[0])
            res = float(dist[y, best[y]])
            report = VerificationReport([CheckResult("homomorphism", False, res, {"x": x, "y": y})])
            raise DualVerificationError(
                f"homomorphism check failed: rho({x})rho({y}) matches no element", report)
        table[x] = best
    return from_cayley_table(table)


def load_dual_standalone(path, tau: float | None = None) -> tuple[FiniteGroup, DualTable]:
    """Read a dual-table file with no separate group, inferring the group from it."""
    order, parsed = parse_dual(Path(path).read_text())
    if not parsed:
        raise ParseError("dual file has no entries", 1)
    if any(m.shape[0] != order for m, _ in parsed):
        raise ParseError("entry block count does not match group order", 1)
    g = infer_group(parsed, tau)
    if g.relabel is not None:
        perm = list(g.relabel)
        parsed = [(m[perm], t) for m, t in parsed]
    return g, _checked(g, _build(g, parsed), tau)


def dual_for(g: FiniteGroup, path=None, tau: float | None = None) -> DualTable:
    """The dual used for verdicts: a file if given, else the catalogue."""
    if path is not None:
        return load_dual(g, path, tau)
    return irreps(g)
