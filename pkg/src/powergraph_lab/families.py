"""Named group families, the verification catalog, and Cayley table files."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import IO, Iterable

import numpy as np
from sympy import isprime
from sympy.utilities.iterables import partitions

from .errors import BadParameter, ParseError
from .groups import FiniteGroup, is_p_group, validate_group

KINDS = (
    "cyclic",
    "product",
    "dihedral",
    "dicyclic",
    "semidihedral",
    "modular",
    "heisenberg",
)


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    params: tuple[int, ...] = ()
    factors: tuple["FamilySpec", ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadParameter(f"unknown family {self.kind!r}; expected one of {', '.join(KINDS)}")

    @property
    def name(self) -> str:
        k, p = self.kind, self.params
        if k == "cyclic":
            return f"Z{p[0]}"
        if k == "product":
            return "x".join(f.name for f in self.factors)
        if k == "dihedral":
            return f"D{2 * p[0]}"
        if k == "dicyclic":
            n = p[0]
            return f"Q{4 * n}" if n & (n - 1) == 0 else f"Dic{4 * n}"
        if k == "semidihedral":
            return f"SD{2 ** p[0]}"
        if k == "modular":
            return f"M{p[0] ** p[1]}"
        return f"Heis{p[0] ** 3}"

    @property
    def order(self) -> int:
        k, p = self.kind, self.params
        if k == "cyclic":
            return p[0]
        if k == "product":
            return int(np.prod([f.order for f in self.factors]))
        if k == "dihedral":
            return 2 * p[0]
        if k == "dicyclic":
            return 4 * p[0]
        if k == "semidihedral":
            return 2 ** p[0]
        if k == "modular":
            return p[0] ** p[1]
        return p[0] ** 3

    def __str__(self) -> str:
        if self.kind == "product":
            return "product(" + ",".join(str(f) for f in self.factors) + ")"
        return f"{self.kind}:" + ",".join(str(x) for x in self.params)


def cyclic(n: int) -> FamilySpec:
    return FamilySpec("cyclic", (n,))


def product(*factors: FamilySpec) -> FamilySpec:
    return FamilySpec("product", (), tuple(factors))


def dihedral(n: int) -> FamilySpec:
    return FamilySpec("dihedral", (n,))


def dicyclic(n: int) -> FamilySpec:
    return FamilySpec("dicyclic", (n,))


def semidihedral(k: int) -> FamilySpec:
    return FamilySpec("semidihedral", (k,))


def modular(p: int, k: int) -> FamilySpec:
    return FamilySpec("modular", (p, k))


def heisenberg(p: int) -> FamilySpec:
    return FamilySpec("heisenberg", (p,))


def abelian(exponents: Iterable[int]) -> FamilySpec:
    """Direct product of cyclic groups of the given orders (in given order)."""
    orders = list(exponents)
    if len(orders) == 1:
        return cyclic(orders[0])
    return product(*(cyclic(m) for m in orders))


_ATOM = re.compile(r"([a-z_]+):\s*([0-9]+(?:\s*,\s*[0-9]+)*)")


def parse_family(text: str) -> FamilySpec:
    """Parse ``name:param[,param...]`` or ``product(spec,spec,...)``."""
    text = text.strip()
    spec, rest = _parse(text, 0)
    if text[rest:].strip():
        raise BadParameter(f"trailing input in family spec {text!r} at offset {rest}")
    return spec


def _parse(text: str, pos: int) -> tuple[FamilySpec, int]:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    if text.startswith("product(", pos):
        pos += len("product(")
        factors = []
        while True:
            f, pos = _parse(text, pos)
            factors.append(f)
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos < len(text) and text[pos] == ",":
                pos += 1
                continue
            if pos < len(text) and text[pos] == ")":
                pos += 1
                break
            raise BadParameter(f"malformed product in {text!r} at offset {pos}")
        spec = product(*factors)
        _check_params(spec)
        return spec, pos
    m = _ATOM.match(text, pos)
    if not m:
        raise BadParameter(f"cannot parse family spec {text[pos:]!r}")
    kind = m.group(1)
    params = tuple(int(x) for x in m.group(2).split(","))
    if kind == "product":
        raise BadParameter("product needs parentheses: product(a,b)")
    spec = FamilySpec(kind, params)
    _check_params(spec)
    return spec, m.end()


def _check_params(spec: FamilySpec) -> None:
    k, p = spec.kind, spec.params
    need = {"cyclic": 1, "dihedral": 1, "dicyclic": 1, "semidihedral": 1, "modular": 2, "heisenberg": 1}
    if k == "product":
        if len(spec.factors) < 2:
            raise BadParameter("product needs at least two factors")
        for f in spec.factors:
            _check_params(f)
        return
    if len(p) != need[k]:
        raise BadParameter(f"{k} takes {need[k]} parameter(s), got {len(p)}")
    if k == "cyclic" and p[0] < 1:
        raise BadParameter("cyclic(n) needs n >= 1")
    if k == "dihedral" and p[0] < 1:
        raise BadParameter("dihedral(n) needs n >= 1")
    if k == "dicyclic" and p[0] < 2:
        raise BadParameter("dicyclic(n) needs n >= 2")
    if k == "semidihedral" and p[0] < 4:
        raise BadParameter("semidihedral(k) needs k >= 4")
    if k == "modular":
        if not isprime(p[0]):
            raise BadParameter(f"modular(p, k) needs p prime, got {p[0]}")
        if p[1] < 3:
            raise BadParameter("modular(p, k) needs k >= 3")
    if k == "heisenberg" and not isprime(p[0]):
        raise BadParameter(f"heisenberg(p) needs p prime, got {p[0]}")


# --- constructors -----------------------------------------------------------
#
# Elements of the metacyclic families are a^i b^s, indexed i + m*s where m is
# the order of a, so index 0 is always the identity.


def _metacyclic(m: int, s_order: int, r: int, b_power: int) -> np.ndarray:
    """Table of <a, b | a^m, b^s_order = a^b_power, b a b^-1 = a^r>."""
    i = np.arange(m)
    s = np.arange(s_order)
    # r^s mod m for each s
    rpow = np.array([pow(r, int(k), m) for k in s])
    I1, S1, I2, S2 = np.meshgrid(i, s, i, s, indexing="ij")
    # (a^i1 b^s1)(a^i2 b^s2) = a^(i1 + r^s1 i2) b^(s1 + s2)
    exp_a = I1 + rpow[S1] * I2
    exp_b = S1 + S2
    wrap = exp_b >= s_order
    exp_a = (exp_a + wrap * b_power) % m
    exp_b = exp_b % s_order
    left = (I1 + m * S1).reshape(-1)
    right = (I2 + m * S2).reshape(-1)
    table = np.empty((m * s_order, m * s_order), dtype=np.int64)
    table[left, right] = (exp_a + m * exp_b).reshape(-1)
    return table


def _cyclic_table(n: int) -> np.ndarray:
    i = np.arange(n)
    return (i[:, None] + i[None, :]) % n


def _product_table(t1: np.ndarray, t2: np.ndarray) -> np.ndarray:
    n1, n2 = len(t1), len(t2)
    t = t1[:, None, :, None] * n2 + t2[None, :, None, :]
    return t.reshape(n1 * n2, n1 * n2)


def _heisenberg_table(p: int) -> np.ndarray:
    # upper unitriangular [[1, x, z], [0, 1, y], [0, 0, 1]] over GF(p),
    # index x*p^2 + y*p + z
    v = np.arange(p**3)
    x, y, z = v // (p * p), (v // p) % p, v % p
    X = (x[:, None] + x[None, :]) % p
    Y = (y[:, None] + y[None, :]) % p
    Z = (z[:, None] + z[None, :] + x[:, None] * y[None, :]) % p
    return X * p * p + Y * p + Z


def _table(spec: FamilySpec) -> np.ndarray:
    k, p = spec.kind, spec.params
    if k == "cyclic":
        return _cyclic_table(p[0])
    if k == "product":
        t = _table(spec.factors[0])
        for f in spec.factors[1:]:
            t = _product_table(t, _table(f))
        return t
    if k == "dihedral":
        n = p[0]
        return _metacyclic(n, 2, n - 1, 0)
    if k == "dicyclic":
        n = p[0]
        return _metacyclic(2 * n, 2, 2 * n - 1, n)
    if k == "semidihedral":
        m = 2 ** (p[0] - 1)
        return _metacyclic(m, 2, m // 2 - 1, 0)
    if k == "modular":
        q, e = p
        m = q ** (e - 1)
        return _metacyclic(m, q, 1 + q ** (e - 2), 0)
    return _heisenberg_table(p[0])


def build(spec: FamilySpec, validate: bool = False) -> FiniteGroup:
    """Realize ``spec`` as a Cayley table with the identity at index 0.

    Constructions are correct by design, so associativity is only checked
    when ``validate`` is set.
    """
    _check_params(spec)
    table = _table(spec)
    if validate:
        return validate_group(table, spec.name)
    return FiniteGroup(table, spec.name)


# --- catalog ----------------------------------------------------------------


@dataclass
class CatalogEntry:
    spec: FamilySpec | None
    group: FiniteGroup
    p: int | None
    tags: frozenset[str] = field(default_factory=frozenset)

    @property
    def name(self) -> str:
        return self.group.name


DEFAULT_BOUNDS = {2: 64, 3: 81, 5: 125, 7: 49}
EXAMPLE_EXTRAS = (dihedral(20), cyclic(6))


def _log(p: int, bound: int) -> int:
    k = 0
    while p ** (k + 1) <= bound:
        k += 1
    return k


def catalog_specs(bounds: dict[int, int], extras: Iterable[FamilySpec] = EXAMPLE_EXTRAS) -> list[tuple[FamilySpec, frozenset[str]]]:
    out: dict[str, tuple[FamilySpec, set[str]]] = {}

    def add(spec: FamilySpec, *tags: str) -> None:
        _check_params(spec)
        out.setdefault(spec.name, (spec, set()))[1].update(tags)

    for p, bound in sorted(bounds.items()):
        if not isprime(p):
            raise BadParameter(f"catalog bound key {p} is not prime")
        kmax = _log(p, bound)
        for k in range(1, kmax + 1):
            for part in partitions(k):
                exps = sorted((e for e, mult in part.items() for _ in range(mult)), reverse=True)
                add(abelian([p**e for e in exps]), "p-group", "abelian")
        for k in range(3, kmax + 1):
            if p == 2:
                add(dihedral(2 ** (k - 1)), "p-group")
                add(dicyclic(2 ** (k - 2)), "p-group", "generalized-quaternion")
                if k >= 4:
                    add(semidihedral(k), "p-group")
                    add(modular(2, k), "p-group")
            else:
                add(modular(p, k), "p-group")
                if k == 3:
                    add(heisenberg(p), "p-group")
    for spec in extras:
        add(spec, "example:worked")
    items = [(spec, frozenset(tags)) for spec, tags in out.values()]
    items.sort(key=lambda it: (it[0].order, it[0].name))
    return items


def catalog(
    max_order_per_prime: dict[int, int] | None = None,
    extras: Iterable[FamilySpec] = EXAMPLE_EXTRAS,
    tables: Iterable[FiniteGroup] = (),
) -> list[CatalogEntry]:
    """Deterministic list of groups for verification runs.

    Contains every abelian p-group up to the bound, the named non-abelian
    families of p-power order, the non-p-group example extras and any ingested
    tables (tagged ``ingested``), sorted by (order, name).
    """
    bounds = DEFAULT_BOUNDS if max_order_per_prime is None else max_order_per_prime
    entries = []
    for spec, tags in catalog_specs(bounds, extras):
        g = build(spec)
        entries.append(CatalogEntry(spec, g, is_p_group(g), tags | ({"p-group"} if is_p_group(g) else set())))
    seen = {e.name for e in entries}
    for g in tables:
        name = g.name
        while name in seen:
            name += "'"
        seen.add(name)
        g = FiniteGroup(g.table, name)
        p = is_p_group(g)
        entries.append(CatalogEntry(None, g, p, frozenset({"ingested"} | ({"p-group"} if p else set()))))
    entries.sort(key=lambda e: (e.group.n, e.name))
    return entries


# --- Cayley table files -----------------------------------------------------


def _tokens(text: str):
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        for m in re.finditer(r"\S+", body):
            yield lineno, m.start() + 1, m.group()


def parse_cayley_text(text: str, name: str = "") -> FiniteGroup:
    rows: list[list[int]] = []
    lines: dict[int, list[tuple[int, int]]] = {}
    n = None
    for lineno, col, tok in _tokens(text):
        try:
            val = int(tok)
        except ValueError:
            raise ParseError(f"expected an integer, got {tok!r}", lineno, col) from None
        if n is None:
            if val < 1:
                raise ParseError(f"group order must be positive, got {val}", lineno, col)
            n = val
            header_line = lineno
            continue
        if lineno == header_line:
            raise ParseError("the first line must contain only n", lineno, col)
        lines.setdefault(lineno, []).append((col, val))
    if n is None:
        raise ParseError("empty input", 1, 1)
    for lineno, vals in lines.items():
        if len(vals) != n:
            col = vals[min(len(vals), n) - 1][0] if len(vals) > n else vals[-1][0]
            raise ParseError(f"expected {n} entries, got {len(vals)}", lineno, col)
        for col, v in vals:
            if not 0 <= v < n:
                raise ParseError(f"entry {v} outside 0..{n - 1}", lineno, col)
        rows.append([v for _, v in vals])
    if len(rows) != n:
        last = max(lines, default=header_line)
        raise ParseError(f"expected {n} rows, got {len(rows)}", last + 1, 1)
    return validate_group(np.array(rows, dtype=np.int64), name)


def parse_cayley_json(text: str, name: str = "") -> FiniteGroup:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(obj, dict) or "table" not in obj:
        raise ParseError('expected an object with "n" and "table"', 1, 1)
    table = obj["table"]
    n = obj.get("n", len(table))
    if not isinstance(table, list) or len(table) != n or any(not isinstance(r, list) or len(r) != n for r in table):
        raise ParseError(f"table must be {n} rows of {n} integers", 1, 1)
    arr = np.array(table, dtype=np.int64)
    if ((arr < 0) | (arr >= n)).any():
        raise ParseError(f"entries must lie in 0..{n - 1}", 1, 1)
    return validate_group(arr, obj.get("name", name))


def read_cayley_table(stream: IO[str], format: str = "table", name: str = "") -> FiniteGroup:
    text = stream.read()
    if format == "json":
        return parse_cayley_json(text, name)
    if format != "table":
        raise ValueError(f"unknown format {format!r}")
    return parse_cayley_text(text, name)


def format_cayley_table(G: FiniteGroup, format: str = "table") -> str:
    if format == "json":
        return json.dumps({"n": G.n, "table": G.table.tolist()}) + "\n"
    if format != "table":
        raise ValueError(f"unknown format {format!r}")
    rows = "\n".join(" ".join(str(int(v)) for v in row) for row in G.table)
    return f"{G.n}\n{rows}\n"


def write_cayley_table(G: FiniteGroup, stream: IO[str], format: str = "table") -> None:
    stream.write(format_cayley_table(G, format))
