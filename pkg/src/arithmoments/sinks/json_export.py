import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterator, List

import numpy as np
from pydantic import BaseModel

INDENT = "  "


def format_float(value: float) -> str:
    """Fixed 17-significant-digit rendering; NaN and infinities become null."""
    if not math.isfinite(value):
        return "null"
    text = format(value, ".17g")
    if text in ("0", "-0"):
        return "0.0"
    if not any(c in text for c in ".e"):
        text += ".0"
    return text


def to_jsonable(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return to_jsonable(value.model_dump())
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, np.ndarray):
        return [to_jsonable(x) for x in value.tolist()]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(x) for x in value]
    return value


class ReportEncoder(json.JSONEncoder):
    """json.JSONEncoder with the pinned float format of format_float."""

    def __init__(self) -> None:
        super().__init__(ensure_ascii=False, sort_keys=True, indent=INDENT)

    def iterencode(self, o: Any, _one_shot: bool = False) -> Iterator[str]:
        # the C encoder ignores float formatting, so always take the pure-Python path
        iterencode = json.encoder._make_iterencode(  # type: ignore[attr-defined]
            {} if self.check_circular else None,
            self.default,
            json.encoder.encode_basestring,
            self.indent,
            format_float,
            self.key_separator,
            self.item_separator,
            self.sort_keys,
            self.skipkeys,
            _one_shot,
        )
        return iterencode(o, 0)


def dumps(value: Any) -> str:
    """Deterministic JSON: sorted keys, two-space indent, pinned float format, trailing newline."""
    return ReportEncoder().encode(to_jsonable(value)) + "\n"


def export_json(data: Dict[str, Any], output_dir: Path, experiment_id: str, command: str, config: Dict[str, Any]) -> List[Path]:
    """One file per report plus a manifest naming the experiment and its files."""
    output_dir.mkdir(parents=True, exist_ok=True)

    written: List[Path] = []
    for name, report in data.items():
        if report is None:
            continue
        output_file = output_dir / f"{name}.json"
        output_file.write_text(dumps(report), encoding="utf-8")
        written.append(output_file)

    manifest_file = output_dir / "manifest.json"
    manifest = {
        "experiment_id": experiment_id,
        "command": command,
        "config": config,
        "reports": sorted(path.name for path in written),
    }
    manifest_file.write_text(dumps(manifest), encoding="utf-8")
    return written + [manifest_file]
