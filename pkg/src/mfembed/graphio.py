"""Plain-text graph files.

Format: optional `#` comment lines, one header `p <n> <m>`, then exactly m
lines `e <u> <v> <length>` with 0-based ids. Parallel edges collapse to the
minimum length on load; only the induced metric matters.
"""

from __future__ import annotations

from pathlib import Path

from .errors import InvariantViolation, ParseError
from .graphs import WeightedGraph


def save_graph(g: WeightedGraph, path: str | Path) -> None:
    lines = [f"p {g.n} {g.m}"]
    for u, v, w in g.edges:
        lines.append(f"e {u} {v} {w!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_graph(path: str | Path) -> WeightedGraph:
    n = None
    m = None
    order: list[tuple[int, int]] = []
    best: dict[tuple[int, int], float] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if n is None:
            if fields[0] != "p" or len(fields) != 3:
                raise ParseError("expected header `p <n> <m>`", lineno)
            try:
                n, m = int(fields[1]), int(fields[2])
            except ValueError:
                raise ParseError("non-integer header fields", lineno) from None
            if n < 0 or m < 0:
                raise ParseError("negative counts in header", lineno)
            continue
        if fields[0] != "e" or len(fields) != 4:
            raise ParseError("expected edge line `e <u> <v> <length>`", lineno)
        try:
            u, v = int(fields[1]), int(fields[2])
            w = float(fields[3])
        except ValueError:
            raise ParseError("malformed edge fields", lineno) from None
        if not 0 <= u < n or not 0 <= v < n:
            raise ParseError(f"vertex id out of range 0..{n - 1}", lineno)
        if u == v:
            raise InvariantViolation(f"line {lineno}: self-loop at {u}")
        if w <= 0:
            raise InvariantViolation(f"line {lineno}: nonpositive edge length {w}")
        key = (min(u, v), max(u, v))
        if key in best:
            best[key] = min(best[key], w)
        else:
            best[key] = w
            order.append(key)
        m -= 1
    if n is None:
        raise ParseError("missing header", 1)
    if m != 0:
        raise ParseError(f"edge count does not match header ({m:+d})", lineno)
    return WeightedGraph(n, tuple((u, v, best[(u, v)]) for u, v in order))
