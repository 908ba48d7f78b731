"""Deterministic report serialization (JSON and plain text)."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

SCHEMA_ID = "forcelab-report/1"


@dataclass
class Report:
    command: str
    arguments: list
    results: list = field(default_factory=list)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and all(r.get("ok", True) for r in self.results)

    def as_dict(self) -> dict:
        return {"schema": SCHEMA_ID, "command": self.command, "arguments": list(self.arguments),
                "ok": self.ok, "error": self.error, "results": plain(self.results),
                "summary": {"results": len(self.results),
                            "failed": sum(1 for r in self.results if not r.get("ok", True))}}


def plain(x: Any):
    """Convert to JSON-ready values with a fixed order for unordered collections."""
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((plain(v) for v in x), key=lambda v: json.dumps(v, sort_keys=True))
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


def to_json(r: Report) -> str:
    return json.dumps(r.as_dict(), sort_keys=True, indent=2) + "\n"


def _lines(x, indent: int) -> list[str]:
    pad = "  " * indent
    out = []
    if isinstance(x, dict):
        for k in sorted(x):
            v = x[k]
            if isinstance(v, (dict, list)) and v:
                out.append(f"{pad}{k}:")
                out += _lines(v, indent + 1)
            else:
                out.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(x, list):
        if not x:
            out.append(pad + "[]")
        elif all(not isinstance(v, (dict, list)) for v in x):
            out.append(pad + " ".join(_scalar(v) for v in x))
        else:
            for v in x:
                sub = _lines(v, indent + 1)
                out.append(f"{pad}- " + sub[0].lstrip() if sub else f"{pad}-")
                out += sub[1:]
    else:
        out.append(pad + _scalar(x))
    return out


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, (list, dict)):
        return "[]" if isinstance(v, list) else "{}"
    return str(v)


def to_text(r: Report) -> str:
    d = r.as_dict()
    lines = [f"forcelab {d['command']} {' '.join(d['arguments'])}".rstrip(),
             f"status: {'PASS' if d['ok'] else 'FAIL'}"]
    if d["error"]:
        lines.append(f"error: {d['error']}")
    for res in d["results"]:
        res = dict(res)
        title = res.pop("title", None)
        status = res.get("ok")
        head = f"== {title}" if title else "=="
        if status is not None:
            head += f" [{'ok' if status else 'FAILED'}]"
        lines.append(head)
        bad = res.pop("counterexamples", None)
        lines += _lines(res, 1)
        if bad:
            lines.append("  counterexamples:")
            lines += _lines(bad, 2)
    lines.append(f"summary: {d['summary']['results']} results, {d['summary']['failed']} failed")
    return "\n".join(lines) + "\n"


def emit(r: Report, mode: str = "text") -> str:
    return to_json(r) if mode == "json" else to_text(r)


def load_schema() -> dict:
    return json.loads(resources.files("forcelab").joinpath("report.schema.json").read_text(encoding="utf-8"))
