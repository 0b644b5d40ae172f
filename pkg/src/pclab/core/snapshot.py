"""Binary snapshots of enumerated groups.

Layout (all integers little-endian)::

    magic    4 bytes   b"PCLG"
    version  u16       1
    hlen     u32       length of the JSON header
    header   hlen bytes UTF-8 JSON: expr, backend, order, generators
    parent   order x i32
    pgen     order x i16

Loading re-evaluates the stored expression and insists on a bit-identical
parent array, so a snapshot doubles as an enumeration regression fixture.
"""
from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .group import DEFAULT_MAX_ORDER, Group

MAGIC = b"PCLG"
VERSION = 1


class SnapshotError(ValueError):
    pass


def dumps(G: Group) -> bytes:
    expr = getattr(G, "expr", None)
    if expr is None:
        raise SnapshotError("only groups built from an expression can be snapshotted")
    header = json.dumps({
        "expr": expr,
        "backend": G.backend.describe(),
        "order": G.order,
        "generators": [int(g) for g in G.generators],
    }, sort_keys=True).encode()
    return b"".join([
        MAGIC,
        struct.pack("<HI", VERSION, len(header)),
        header,
        G.parent.astype("<i4").tobytes(),
        G.parent_gen.astype("<i2").tobytes(),
    ])


def loads(data: bytes, max_order: int = DEFAULT_MAX_ORDER) -> Group:
    from .expr import evaluate

    if data[:4] != MAGIC:
        raise SnapshotError("bad magic")
    version, hlen = struct.unpack_from("<HI", data, 4)
    if version != VERSION:
        raise SnapshotError(f"unsupported snapshot version {version}")
    off = 10
    header = json.loads(data[off:off + hlen])
    off += hlen
    n = header["order"]
    parent = np.frombuffer(data, dtype="<i4", count=n, offset=off)
    pgen = np.frombuffer(data, dtype="<i2", count=n, offset=off + 4 * n)
    G = evaluate(header["expr"], max_order=max_order)
    if (G.order != n or not np.array_equal(G.parent, parent)
            or not np.array_equal(G.parent_gen, pgen)
            or [int(g) for g in G.generators] != header["generators"]):
        raise SnapshotError("re-enumeration does not reproduce the snapshot")
    return G


def save(G: Group, path) -> None:
    Path(path).write_bytes(dumps(G))


def load(path, max_order: int = DEFAULT_MAX_ORDER) -> Group:
    return loads(Path(path).read_bytes(), max_order=max_order)
