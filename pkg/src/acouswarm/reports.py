"""CSV and manifest writers. Output bytes depend only on the inputs."""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path
from typing import Iterable, Sequence


def format_value(v) -> str:
    if isinstance(v, bool) or v is None:
        return "" if v is None else str(v).lower()
    if isinstance(v, (int, float)) or hasattr(v, "dtype"):
        return f"{float(v):.9e}"
    return str(v)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise ValueError(f"row has {len(row)} fields, header has {len(header)}")
            writer.writerow([format_value(v) for v in row])
    return path


def read_csv(path: Path) -> dict[str, list[str]]:
    """Columns of a CSV file keyed by header name. Raises ValueError if there are no data rows."""
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        rows = list(reader)
    if not header or not rows:
        raise ValueError(f"{path}: CSV has no data rows")
    return {name: [r[i] for r in rows] for i, name in enumerate(header)}


def sha256(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(
    out_dir: Path,
    command: str,
    scenario_file: Path,
    overrides: list[str],
    resolved: dict,
    outputs: list[Path],
    results: dict | None = None,
) -> Path:
    """Record inputs, resolved parameters and every emitted file (with content hashes)."""
    out_dir = Path(out_dir)
    manifest = {
        "command": command,
        "inputs": {
            "scenario_file": str(scenario_file),
            "scenario_sha256": sha256(scenario_file),
            "overrides": list(overrides),
        },
        "resolved_parameters": resolved,
        "outputs": [{"file": str(Path(p).relative_to(out_dir)), "sha256": sha256(p)} for p in outputs],
        "results": results or {},
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
