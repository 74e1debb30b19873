"""Result documents: run manifests plus table, CSV, and JSON renderings.

Every document written to disk embeds the manifest of the command that
produced it.  Numbers are rendered with shortest round-trip precision so
structured output carries full double precision.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from datetime import datetime, timezone

from ._version import __version__

FORMATS = ("table", "records", "csv")


@dataclass(frozen=True)
class RunManifest:
    command: str
    parameters: dict
    artifact_version: str
    seed: int | None
    timestamp: str


def make_manifest(command: str, parameters: dict, seed: int | None = None) -> RunManifest:
    return RunManifest(
        command=command,
        parameters=parameters,
        artifact_version=__version__,
        seed=seed,
        timestamp=datetime.now(timezone.utc).isoformat(),
    )


def fmt(value) -> str:
    """Render one cell; floats keep shortest round-trip precision."""
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def format_table(headers: list[str], rows: list[list]) -> str:
    cells = [[fmt(v) for v in row] for row in rows]
    widths = [len(h) for h in headers]
    for row in cells:
        for j, cell in enumerate(row):
            widths[j] = max(widths[j], len(cell))
    lines = [
        "  ".join(h.ljust(widths[j]) for j, h in enumerate(headers)).rstrip(),
        "  ".join("-" * widths[j] for j in range(len(headers))),
    ]
    for row in cells:
        lines.append(
            "  ".join(cell.ljust(widths[j]) for j, cell in enumerate(row)).rstrip()
        )
    return "\n".join(lines) + "\n"


def format_pairs(pairs: list[tuple[str, object]]) -> str:
    width = max(len(k) for k, _ in pairs)
    return "\n".join(f"{k.ljust(width)}  {fmt(v)}" for k, v in pairs) + "\n"


def _manifest_comment_lines(manifest: RunManifest) -> list[str]:
    lines = [
        f"# command: {manifest.command}",
        f"# artifact_version: {manifest.artifact_version}",
        f"# seed: {'' if manifest.seed is None else manifest.seed}",
        f"# timestamp: {manifest.timestamp}",
    ]
    for key, value in manifest.parameters.items():
        lines.append(f"# parameter {key}: {fmt(value)}")
    return lines


def records_document(manifest: RunManifest, payload: dict) -> str:
    return json.dumps({"manifest": asdict(manifest), **payload}, indent=2) + "\n"


def csv_document(manifest: RunManifest, headers: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    for line in _manifest_comment_lines(manifest):
        buf.write(line + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(headers)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def table_document(manifest: RunManifest, headers: list[str], rows: list[list]) -> str:
    lines = _manifest_comment_lines(manifest)
    return "\n".join(lines) + "\n" + format_table(headers, rows)
