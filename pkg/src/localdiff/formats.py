"""Text formats: point-set files, local-report rows and comparison tables."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterable, Sequence

from .core import IntegerSet, PointSet, _embed_mask
from .verifier import LocalReport

REPORT_FIELDS = ("k", "min_diff", "bound_lo", "bound_hi", "holds", "mode", "subsets_checked")


def dump_set(S: PointSet | IntegerSet) -> str:
    """Header line, then one element per line as a decimal integer.

    Hypercube sets write ``n=<levels> count=<size>`` and each point's base-3
    embedding; integer sets write ``kind=<kind> count=<size>`` and the
    integers themselves.
    """
    if isinstance(S, PointSet):
        header = f"n={S.n} count={len(S)}"
        body = [str(_embed_mask(e.mask)) for e in S.elements]
    else:
        header = f"kind={S.kind} count={len(S)}"
        body = [str(v) for v in S.ints]
    return "\n".join([header, *body]) + "\n"


def load_set(text: str) -> PointSet | IntegerSet:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty set file")
    try:
        header = dict(tok.split("=", 1) for tok in lines[0].split())
        count = int(header["count"])
        values = [int(ln) for ln in lines[1:]]
    except (KeyError, ValueError) as exc:
        raise ValueError(f"malformed set file: {exc}") from exc
    if len(values) != count:
        raise ValueError(f"header says {count} elements, file has {len(values)}")
    if "n" in header:
        return PointSet.from_values(values, int(header["n"]))
    return IntegerSet(tuple(values), header.get("kind", "integer"))


def write_set(path: str | Path, S: PointSet | IntegerSet) -> None:
    Path(path).write_text(dump_set(S))


def read_set(path: str | Path) -> PointSet | IntegerSet:
    return load_set(Path(path).read_text())


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def rows_to_csv(rows: Sequence[dict], fields: Sequence[str]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([_cell(row[f]) for f in fields])
    return out.getvalue()


def rows_to_json_lines(rows: Sequence[dict], fields: Sequence[str]) -> str:
    return "".join(json.dumps({f: row[f] for f in fields}) + "\n" for row in rows)


def format_rows(rows: Sequence[dict], fields: Sequence[str], fmt: str) -> str:
    if fmt == "csv":
        return rows_to_csv(rows, fields)
    if fmt == "json-lines":
        return rows_to_json_lines(rows, fields)
    raise ValueError(f"unknown format {fmt!r}")


def reports_to_csv(reports: Iterable[LocalReport]) -> str:
    return rows_to_csv([r.row() for r in reports], REPORT_FIELDS)


def reports_to_text(reports: Iterable[LocalReport]) -> str:
    """Key-value blocks, one per report, separated by blank lines."""
    blocks = []
    for r in reports:
        row = r.row()
        lines = [f"{key}: {_cell(row[key])}" for key in REPORT_FIELDS]
        lines.append(f"witness: {r.witness}")
        lines.append(f"complete: {_cell(r.complete)}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + "\n"


def parse_report_text(text: str) -> list[dict[str, str]]:
    blocks = [b for b in text.strip().split("\n\n") if b.strip()]
    return [dict(line.split(": ", 1) for line in b.splitlines()) for b in blocks]
