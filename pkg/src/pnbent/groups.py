"""Finite groups as validated Cayley tables.

Elements are the integers ``0..order-1`` and the identity is always ``0``, so
the non-identity elements are simply ``range(1, order)``.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InvalidParameterError, NotAGroupError, ParseError

MAX_BUILTIN_ORDER = 120


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.int64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    order: int
    cayley: np.ndarray
    inverse: np.ndarray
    name: str
    structure_tag: tuple
    # old index of each new index, set when an imported table had to be relabelled
    relabel: tuple | None = field(default=None)

    def mul(self, x: int, y: int) -> int:
        return int(self.cayley[x, y])

    def inv(self, x: int) -> int:
        return int(self.inverse[x])

    def __eq__(self, other):
        if not isinstance(other, FiniteGroup):
            return NotImplemented
        return self.order == other.order and np.array_equal(self.cayley, other.cayley)

    def __hash__(self):
        return hash((self.order, self.cayley.tobytes()))

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"


def format_tag(tag: tuple) -> str:
    kind = tag[0]
    if kind == "product":
        return f"product({format_tag(tag[1])},{format_tag(tag[2])})"
    if len(tag) == 1:
        return kind
    return f"{kind}({tag[1]})"


def _make(table, name: str, tag: tuple) -> FiniteGroup:
    cayley = _frozen(table)
    inverse = _frozen(np.argmin(cayley, axis=1))  # row x has its single 0 at x^-1
    g = FiniteGroup(len(cayley), cayley, inverse, name, tag)
    validate_group(g)
    return g


# -- validation --------------------------------------------------------------

def _check_latin(t: np.ndarray) -> None:
    n = len(t)
    full = np.arange(n)
    if t.min() < 0 or t.max() >= n:
        bad = np.argwhere((t < 0) | (t >= n))[0]
        raise NotAGroupError(f"entry at {tuple(int(v) for v in bad)} out of range", tuple(int(v) for v in bad))
    for x in range(n):
        if not np.array_equal(np.sort(t[x]), full):
            raise NotAGroupError(f"row {x} is not a permutation", ("row", x))
    for y in range(n):
        if not np.array_equal(np.sort(t[:, y]), full):
            raise NotAGroupError(f"column {y} is not a permutation", ("column", y))


def _check_associative(t: np.ndarray) -> None:
    # (xy)z vs x(yz) over all triples at once
    left = t[t[:, :, None], np.arange(len(t))[None, None, :]]
    right = t[np.arange(len(t))[:, None, None], t[None, :, :]]
    bad = np.argwhere(left != right)
    if len(bad):
        x, y, z = (int(v) for v in bad[0])
        raise NotAGroupError(f"associativity fails for triple ({x}, {y}, {z})", (x, y, z))


def validate_group(g: FiniteGroup) -> None:
    """Raise :class:`NotAGroupError` unless all group invariants hold exactly."""
    t = np.asarray(g.cayley)
    n = g.order
    if t.shape != (n, n):
        raise NotAGroupError(f"table shape {t.shape} does not match order {n}")
    _check_latin(t)
    idx = np.arange(n)
    if not (np.array_equal(t[0], idx) and np.array_equal(t[:, 0], idx)):
        raise NotAGroupError("element 0 is not the identity", ("identity", 0))
    _check_associative(t)
    if len(g.inverse) != n or np.any(t[idx, g.inverse] != 0):
        x = int(np.argmax(t[idx, g.inverse] != 0)) if len(g.inverse) == n else 0
        raise NotAGroupError(f"inverse of {x} is inconsistent", ("inverse", x))


# -- constructors ------------------------------------------------------------

def cyclic_group(n: int) -> FiniteGroup:
    if n < 1 or n > MAX_BUILTIN_ORDER:
        raise InvalidParameterError(f"cyclic order must be in 1..{MAX_BUILTIN_ORDER}, got {n}")
    idx = np.arange(n)
    return _make((idx[:, None] + idx[None, :]) % n, f"Z{n}", ("cyclic", n))


def direct_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    """Element ``(a, b)`` is encoded as ``a * |g2| + b``."""
    n1, n2 = g1.order, g2.order
    a = np.repeat(np.arange(n1), n2)
    b = np.tile(np.arange(n2), n1)
    table = g1.cayley[a[:, None], a[None, :]] * n2 + g2.cayley[b[:, None], b[None, :]]
    return _make(table, f"{g1.name}x{g2.name}", ("product", g1.structure_tag, g2.structure_tag))


def dihedral_group(n: int) -> FiniteGroup:
    """Indices ``0..n-1`` are rotations r^k, ``n..2n-1`` are reflections s r^k."""
    if n < 3 or 2 * n > MAX_BUILTIN_ORDER:
        raise InvalidParameterError(f"dihedral parameter must be in 3..{MAX_BUILTIN_ORDER // 2}, got {n}")
    table = np.empty((2 * n, 2 * n), dtype=np.int64)
    for u in range(2 * n):
        su, a = divmod(u, n)
        for v in range(2 * n):
            sv, b = divmod(v, n)
            # s^su r^a s^sv r^b, using r^a s = s r^-a
            k = (b - a) % n if sv else (a + b) % n
            table[u, v] = ((su + sv) % 2) * n + k
    return _make(table, f"D{n}", ("dihedral", n))


# 1, -1, i, -i, j, -j, k, -k
_QUAT_UNITS = [(1, 0, 0, 0), (-1, 0, 0, 0), (0, 1, 0, 0), (0, -1, 0, 0),
               (0, 0, 1, 0), (0, 0, -1, 0), (0, 0, 0, 1), (0, 0, 0, -1)]


def _qmul(p, q):
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)


def quaternion_group() -> FiniteGroup:
    """Q8 with indices 0..7 standing for 1, -1, i, -i, j, -j, k, -k."""
    pos = {q: n for n, q in enumerate(_QUAT_UNITS)}
    table = [[pos[_qmul(p, q)] for q in _QUAT_UNITS] for p in _QUAT_UNITS]
    return _make(table, "Q8", ("quaternion8",))


def symmetric_group(n: int) -> FiniteGroup:
    """Permutations in lexicographic one-line order; ``(s*t)(i) = s(t(i))``."""
    if not 1 <= n <= 5:
        raise InvalidParameterError(f"symmetric degree must be in 1..5, got {n}")
    perms = list(itertools.permutations(range(n)))
    pos = {p: k for k, p in enumerate(perms)}
    table = [[pos[tuple(s[t[i]] for i in range(n))] for t in perms] for s in perms]
    return _make(table, f"S{n}", ("symmetric", n))


def symmetric_elements(n: int) -> list[tuple[int, ...]]:
    """One-line notation of each element of ``symmetric_group(n)``, by index."""
    return list(itertools.permutations(range(n)))


def from_cayley_table(table, name: str = "imported") -> FiniteGroup:
    """Validate an arbitrary table, moving the identity to index 0 if needed.

    When a relabelling happens, ``relabel[new] = old`` is stored on the result.
    """
    t = np.array(table, dtype=np.int64)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise NotAGroupError("Cayley table must be a non-empty square table")
    _check_latin(t)
    n = len(t)
    idx = np.arange(n)
    ident = [e for e in range(n) if np.array_equal(t[e], idx) and np.array_equal(t[:, e], idx)]
    if not ident:
        raise NotAGroupError("no identity element", ("identity", None))
    e = ident[0]
    relabel = None
    if e != 0:
        perm = idx.copy()
        perm[0], perm[e] = e, 0  # new -> old; a transposition is its own inverse
        t = perm[t[np.ix_(perm, perm)]]
        relabel = tuple(int(v) for v in perm)
    _check_associative(t)
    cayley = _frozen(t)
    inverse = _frozen(np.argmin(cayley, axis=1))
    g = FiniteGroup(n, cayley, inverse, name, ("imported",), relabel)
    validate_group(g)
    return g


# -- queries -----------------------------------------------------------------

def is_abelian(g: FiniteGroup) -> bool:
    return bool(np.array_equal(g.cayley, g.cayley.T))


def element_order(g: FiniteGroup, x: int) -> int:
    k, y = 1, x
    while y != 0:
        y = int(g.cayley[y, x])
        k += 1
    return k


def element_orders(g: FiniteGroup) -> list[int]:
    return [element_order(g, x) for x in range(g.order)]


def order_statistics(g: FiniteGroup) -> dict[int, int]:
    """Multiset of element orders as ``{order: count}``."""
    return dict(sorted(Counter(element_orders(g)).items()))


def center(g: FiniteGroup) -> list[int]:
    t = g.cayley
    return [x for x in range(g.order) if np.array_equal(t[x], t[:, x])]


# -- text format ---------------------------------------------------------------

def format_group(g: FiniteGroup) -> str:
    lines = [f"group {g.order} {g.name}"]
    lines += [" ".join(str(int(v)) for v in row) for row in g.cayley]
    lines.append("inverse " + " ".join(str(int(v)) for v in g.inverse))
    return "\n".join(lines) + "\n"


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_group(text: str) -> FiniteGroup:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty group file")
    lineno, header = lines[0]
    parts = header.split(None, 2)
    if len(parts) < 2 or parts[0] != "group":
        raise ParseError("expected 'group <order> <name>'", lineno)
    try:
        order = int(parts[1])
    except ValueError:
        raise ParseError(f"bad order {parts[1]!r}", lineno) from None
    if order < 1:
        raise ParseError("order must be positive", lineno)
    name = parts[2] if len(parts) > 2 else "imported"
    body = lines[1:]
    if len(body) < order:
        raise ParseError(f"expected {order} table rows, found {len(body)}", body[-1][0] if body else lineno)
    rows = []
    for lineno, line in body[:order]:
        try:
            row = [int(v) for v in line.split()]
        except ValueError:
            raise ParseError("non-integer table entry", lineno) from None
        if len(row) != order:
            raise ParseError(f"expected {order} entries, found {len(row)}", lineno)
        rows.append(row)
    declared = None
    rest = body[order:]
    if rest:
        lineno, line = rest[0]
        parts = line.split()
        if parts[0] != "inverse" or len(rest) > 1:
            raise ParseError("unexpected trailing content", lineno)
        try:
            declared = [int(v) for v in parts[1:]]
        except ValueError:
            raise ParseError("non-integer inverse entry", lineno) from None
        if len(declared) != order:
            raise ParseError(f"inverse line needs {order} entries", lineno)
    g = from_cayley_table(rows, name=name)
    if declared is not None:
        if g.relabel is not None:
            p = g.relabel
            declared = [p.index(declared[p[new]]) for new in range(order)]
        if list(g.inverse) != declared:
            x = next(i for i in range(order) if g.inverse[i] != declared[i])
            raise NotAGroupError(f"declared inverse of {x} is wrong", ("inverse", x))
    return g


def load_group(path) -> FiniteGroup:
    return parse_group(Path(path).read_text())


def save_group(g: FiniteGroup, path) -> None:
    Path(path).write_text(format_group(g))


def group_from_spec(spec: str) -> FiniteGroup:
    """Build a group from ``cyclic:4``, ``dihedral:3``, ``quaternion``,
    ``symmetric:3``, ``product:cyclic:2,cyclic:2`` or ``file:<path>``."""
    kind, _, arg = spec.strip().partition(":")
    if kind == "file":
        if not arg:
            raise InvalidParameterError("file: spec needs a path")
        return load_group(arg)
    if kind == "quaternion" and not arg:
        return quaternion_group()
    if kind == "product":
        parts = [p for p in arg.split(",") if p]
        if len(parts) < 2:
            raise InvalidParameterError(f"product needs at least two factors: {spec!r}")
        g = group_from_spec(parts[0])
        for p in parts[1:]:
            g = direct_product(g, group_from_spec(p))
        return g
    builders = {"cyclic": cyclic_group, "dihedral": dihedral_group, "symmetric": symmetric_group}
    if kind not in builders:
        raise InvalidParameterError(f"unknown group spec {spec!r}")
    try:
        n = int(arg)
    except ValueError:
        raise InvalidParameterError(f"group spec {spec!r} needs an integer parameter") from None
    return builders[kind](n)
