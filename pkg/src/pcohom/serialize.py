"""JSON reading and writing for actions, cochains and reports.

Parse errors name the source, the JSON path and the offending key, e.g.
``w.json: values."1,2": expected 2 residues, got 3``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .action import PartialAction
from .cochain import Cochain, domain_mask, tuple_array
from .errors import NotAGroup, ParseError, PartialCohomologyError
from .group import make_from_table
from .ring import ProductRing


def dumps(obj) -> str:
    """Canonical text form: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def read_json(path) -> tuple[object, str]:
    name = str(path)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"{name}: cannot read file ({exc.strerror})") from exc
    try:
        return json.loads(text), name
    except json.JSONDecodeError as exc:
        raise ParseError(f"{name}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _fail(source: str, path: str, msg: str):
    raise ParseError(f"{source}: {path}: {msg}")


def _get(obj, key: str, source: str, path: str):
    if not isinstance(obj, dict):
        _fail(source, path or "<root>", "expected an object")
    if key not in obj:
        _fail(source, f"{path}.{key}" if path else key, "missing key")
    return obj[key]


def _int(v, source: str, path: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        _fail(source, path, f"expected an integer, got {v!r}")
    return v


def _element_key(k: str, order: int, source: str, path: str) -> int:
    try:
        g = int(k)
    except ValueError:
        _fail(source, f"{path}.{k!r}", "key is not a group element index")
    if not 0 <= g < order or str(g) != k:
        _fail(source, f"{path}.{k!r}", f"key is not a group element index below {order}")
    return g


def action_from_json(data, source: str = "<input>") -> PartialAction:
    """Build a PartialAction from its JSON form without validating the axioms.

    The identity's domain and map may be omitted; they default to the whole
    ring and the identity bijection.
    """
    group = _get(data, "group", source, "")
    table = _get(group, "table", source, "group")
    if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
        _fail(source, "group.table", "expected a list of rows")
    if "order" in group and _int(group["order"], source, "group.order") != len(table):
        _fail(source, "group.order", f"order {group['order']} does not match a table with {len(table)} rows")
    try:
        G = make_from_table(table)
    except (NotAGroup, PartialCohomologyError) as exc:
        _fail(source, "group.table", str(exc))
    blocks = _get(_get(data, "ring", source, ""), "blocks", source, "ring")
    if not isinstance(blocks, list):
        _fail(source, "ring.blocks", "expected a list of moduli")
    try:
        R = ProductRing(tuple(_int(m, source, f"ring.blocks[{i}]") for i, m in enumerate(blocks)))
    except PartialCohomologyError as exc:
        _fail(source, "ring.blocks", str(exc))
    k = len(R)

    def block(v, path):
        b = _int(v, source, path)
        if not 0 <= b < k:
            _fail(source, path, f"block index {b} out of range (ring has {k} blocks)")
        return b

    doms = _get(data, "domains", source, "")
    maps = data.get("maps", {})
    if not isinstance(doms, dict):
        _fail(source, "domains", "expected an object keyed by group element")
    if not isinstance(maps, dict):
        _fail(source, "maps", "expected an object keyed by group element")
    domain = [None] * G.order
    blockmap = [None] * G.order
    for key, d in doms.items():
        g = _element_key(key, G.order, source, "domains")
        if not isinstance(d, list):
            _fail(source, f"domains.{key!r}", "expected a list of block indices")
        domain[g] = frozenset(block(b, f"domains.{key!r}[{i}]") for i, b in enumerate(d))
    for key, m in maps.items():
        g = _element_key(key, G.order, source, "maps")
        if not isinstance(m, dict):
            _fail(source, f"maps.{key!r}", "expected an object from block to block")
        blockmap[g] = {
            block(_block_key(b, source, f"maps.{key!r}"), f"maps.{key!r}.{b!r}"): block(c, f"maps.{key!r}.{b!r}")
            for b, c in m.items()
        }
    e = G.identity
    if domain[e] is None:
        domain[e] = R.full
    if blockmap[e] is None:
        blockmap[e] = {b: b for b in domain[e]}
    for g in G.elements:
        if domain[g] is None:
            _fail(source, f"domains.{str(g)!r}", "missing key")
        if blockmap[g] is None:
            if domain[g]:
                _fail(source, f"maps.{str(g)!r}", "missing key")
            blockmap[g] = {}
    return PartialAction(G, R, tuple(domain), tuple(blockmap))


def _block_key(k: str, source: str, path: str) -> int:
    try:
        b = int(k)
    except ValueError:
        _fail(source, f"{path}.{k!r}", "key is not a block index")
    if str(b) != k:
        _fail(source, f"{path}.{k!r}", "key is not a block index")
    return b


def action_to_json(pa: PartialAction) -> dict:
    return pa.to_json()


def load_action(path) -> PartialAction:
    data, name = read_json(path)
    return action_from_json(data, name)


def cochain_from_json(pa: PartialAction, data, source: str = "<input>", check: bool = True) -> Cochain:
    """Cochain from {"degree": n, "values": {"x1,...,xn": [residues]}}.

    Tuples whose domain D_(x) is empty may be omitted (their value is 0).
    Residues are reduced modulo the block moduli.
    """
    n = _int(_get(data, "degree", source, ""), source, "degree")
    if n < 0:
        _fail(source, "degree", f"degree must be >= 0, got {n}")
    values = _get(data, "values", source, "")
    if not isinstance(values, dict):
        _fail(source, "values", "expected an object keyed by comma-joined tuples")
    G = pa.group
    k = len(pa.ring)
    rows = G.order ** n
    V = np.zeros((rows, k), dtype=np.int64)
    seen = np.zeros(rows, dtype=bool)
    for key, v in values.items():
        parts = key.split(",") if key else []
        if len(parts) != n:
            _fail(source, f"values.{key!r}", f"expected a {n}-tuple of group elements")
        r = 0
        for p in parts:
            r = r * G.order + _element_key(p.strip(), G.order, source, f"values.{key!r}")
        if not isinstance(v, list) or len(v) != k:
            _fail(source, f"values.{key!r}", f"expected a list of {k} residues")
        V[r] = [_int(x, source, f"values.{key!r}[{i}]") for i, x in enumerate(v)]
        seen[r] = True
    V %= np.array(pa.ring.blocks, dtype=np.int64)
    missing = ~seen & domain_mask(pa, n).any(axis=1)
    if missing.any():
        r = int(np.flatnonzero(missing)[0])
        key = ",".join(map(str, tuple_array(G.order, n)[r]))
        _fail(source, f"values.{key!r}", "missing key")
    return Cochain(pa, n, V, check=check)


def load_cochain(pa: PartialAction, path, check: bool = True) -> Cochain:
    data, name = read_json(path)
    return cochain_from_json(pa, data, name, check=check)
