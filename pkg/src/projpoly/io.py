"""Deterministic JSON and cdd-style text serialization.

All scalars travel as canonical rational strings ("p/q", lowest terms,
"/1" omitted), so files round-trip bit-exactly.  The text format is the
classic inequality layout: ``b -a_1 ... -a_d`` rows between ``begin`` and
``end`` under an ``H-representation`` header.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .construction import AdaptationAttempt
from .linalg import QMatrix
from .polytope import HPolytope, VPolytope
from .rational import format_rational, parse_rational

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class SystemFile:
    """An inequality system plus the construction metadata that produced it."""

    h: HPolytope
    n: int | None = None
    r: int | None = None
    eps: Fraction | None = None
    big_m: Fraction | None = None
    validated: bool | None = None
    adaptation: tuple[AdaptationAttempt, ...] = field(default_factory=tuple)

    def require_nr(self) -> tuple[int, int]:
        """(n, r), stored or derived from the row labels."""
        if self.n is not None and self.r is not None:
            return self.n, self.r
        if self.h.labels is None:
            raise ValueError("system has neither n/r metadata nor row labels")
        blocks: dict[int, int] = {}
        for k, _ in self.h.labels:
            blocks[k] = blocks.get(k, 0) + 1
        r = max(blocks)
        sizes = set(blocks.values())
        if sorted(blocks) != list(range(1, r + 1)) or len(sizes) != 1:
            raise ValueError("row labels do not form uniform blocks")
        n = sizes.pop()
        if n < 3 or r < 2:
            raise ValueError(f"labels describe n={n}, r={r}; not a polygon-product system")
        return n, r


def system_to_dict(system: SystemFile) -> dict:
    h = system.h
    out: dict = {
        "schema": SCHEMA_VERSION,
        "dim": h.dim,
        "rows": [[format_rational(x) for x in row] for row in h.A.entries],
        "rhs": [format_rational(x) for x in h.b],
    }
    if h.labels is not None:
        out["labels"] = [list(lab) for lab in h.labels]
    if system.n is not None:
        out["n"] = system.n
    if system.r is not None:
        out["r"] = system.r
    if system.eps is not None:
        out["eps"] = format_rational(system.eps)
    if system.big_m is not None:
        out["big_m"] = format_rational(system.big_m)
    if system.validated is not None:
        out["validated"] = system.validated
    if system.adaptation:
        out["adaptation"] = [
            {"eps": format_rational(a.eps), "big_m": format_rational(a.big_m), "reason": a.reason}
            for a in system.adaptation
        ]
    return out


def system_from_dict(data: dict) -> SystemFile:
    rows = tuple(tuple(parse_rational(x) for x in row) for row in data["rows"])
    rhs = tuple(parse_rational(x) for x in data["rhs"])
    labels = None
    if "labels" in data:
        labels = tuple((int(k), int(i)) for k, i in data["labels"])
    h = HPolytope(QMatrix(rows), rhs, labels)
    if h.dim != int(data["dim"]):
        raise ValueError("declared dimension does not match the rows")
    adaptation = tuple(
        AdaptationAttempt(parse_rational(a["eps"]), parse_rational(a["big_m"]), a["reason"])
        for a in data.get("adaptation", ())
    )
    return SystemFile(
        h,
        n=data.get("n"),
        r=data.get("r"),
        eps=parse_rational(data["eps"]) if "eps" in data else None,
        big_m=parse_rational(data["big_m"]) if "big_m" in data else None,
        validated=data.get("validated"),
        adaptation=adaptation,
    )


def dumps_json(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def save_system(path: str | Path, system: SystemFile) -> None:
    Path(path).write_text(dumps_json(system_to_dict(system)))


def load_system(path: str | Path) -> SystemFile:
    return system_from_dict(json.loads(Path(path).read_text()))


def vpolytope_to_dict(v: VPolytope) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "dim": v.dim,
        "vertices": [[format_rational(x) for x in p] for p in v.vertices],
        "incidence": [sorted(t) for t in v.incidence],
    }


def vpolytope_from_dict(data: dict) -> VPolytope:
    vertices = tuple(tuple(parse_rational(x) for x in p) for p in data["vertices"])
    incidence = tuple(frozenset(int(i) for i in t) for t in data["incidence"])
    return VPolytope(vertices, incidence, int(data["dim"]))


# --- cdd-style inequality text -----------------------------------------------


def to_ine_text(h: HPolytope) -> str:
    """H-representation text: each row is ``b -a_1 ... -a_d``."""
    lines = ["H-representation", "begin", f" {h.nrows} {h.dim + 1} rational"]
    for row, b in zip(h.A.entries, h.b):
        tokens = [format_rational(b)] + [format_rational(-x) for x in row]
        lines.append(" " + " ".join(tokens))
    lines.append("end")
    return "\n".join(lines) + "\n"


def parse_ine_text(text: str) -> HPolytope:
    lines = [line.strip() for line in text.splitlines()]
    lines = [line for line in lines if line and not line.startswith("*")]
    try:
        start = lines.index("H-representation")
    except ValueError:
        raise ValueError("missing H-representation header") from None
    if start + 1 >= len(lines) or lines[start + 1] != "begin":
        raise ValueError("missing begin line")
    counts = lines[start + 2].split()
    if len(counts) != 3 or counts[2] != "rational":
        raise ValueError(f"malformed size line: {lines[start + 2]!r}")
    m, cols = int(counts[0]), int(counts[1])
    if len(lines) < start + 4 + m:
        raise ValueError("truncated file")
    rows = []
    rhs = []
    for line in lines[start + 3 : start + 3 + m]:
        tokens = line.split()
        if len(tokens) != cols:
            raise ValueError(f"row has {len(tokens)} tokens, expected {cols}")
        rhs.append(parse_rational(tokens[0]))
        rows.append(tuple(-parse_rational(t) for t in tokens[1:]))
    if lines[start + 3 + m] != "end":
        raise ValueError("missing end line")
    return HPolytope(QMatrix(tuple(rows)), tuple(rhs))


def save_ine(path: str | Path, h: HPolytope) -> None:
    Path(path).write_text(to_ine_text(h))


def load_ine(path: str | Path) -> HPolytope:
    return parse_ine_text(Path(path).read_text())
