"""Persistent coefficient cache.

Append-only JSONL file.  The first line is a header
``{"format": "semiqueens-cache/1", "n": 7}``; every further line is a
record ``{"key": <canonical character text>, "method": <tag>,
"value": <serialized exact value>}``.  Values are exact: integers are the
scaled coefficient n^n * coeff as a decimal string, cyclotomic values
carry order and coefficient list.  Corrupt lines are skipped with a
warning so an interrupted run never poisons later ones.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path

from .exactnum import Cyclotomic

log = logging.getLogger(__name__)

FORMAT = "semiqueens-cache/1"


def _encode_value(value: int | Cyclotomic) -> dict:
    if isinstance(value, Cyclotomic):
        return {"kind": "cyclotomic", **value.serialize()}
    return {"kind": "int", "v": str(value)}


def _decode_value(doc: dict) -> int | Cyclotomic:
    if doc["kind"] == "int":
        return int(doc["v"])
    if doc["kind"] == "cyclotomic":
        return Cyclotomic.deserialize(doc)
    raise ValueError(f"unknown value kind {doc['kind']!r}")


class CoefficientCache:
    """Exact scaled coefficients keyed by (canonical character text, method)."""

    def __init__(self, path: str | Path, n: int) -> None:
        self.path = Path(path)
        self.n = n
        self._records: dict[tuple[str, str], int | Cyclotomic] = {}
        if self.path.exists():
            self._load()
        else:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("w", encoding="utf-8") as fh:
                fh.write(json.dumps({"format": FORMAT, "n": n}, sort_keys=True) + "\n")

    def _load(self) -> None:
        with self.path.open("r", encoding="utf-8") as fh:
            header_line = fh.readline()
            try:
                header = json.loads(header_line)
                if header.get("format") != FORMAT:
                    raise ValueError(f"unsupported cache format {header.get('format')!r}")
                if header.get("n") != self.n:
                    raise ValueError(f"cache file is for n={header.get('n')}, not n={self.n}")
            except json.JSONDecodeError as exc:
                raise ValueError(f"corrupt cache header in {self.path}") from exc
            for lineno, line in enumerate(fh, start=2):
                line = line.strip()
                if not line:
                    continue
                try:
                    doc = json.loads(line)
                    key = (doc["key"], doc["method"])
                    self._records[key] = _decode_value(doc["value"])
                except (json.JSONDecodeError, KeyError, ValueError) as exc:
                    log.warning("skipping corrupt cache record %s:%d (%s)", self.path, lineno, exc)

    def get(self, key: str, method: str) -> int | Cyclotomic | None:
        return self._records.get((key, method))

    def put(self, key: str, method: str, value: int | Cyclotomic) -> None:
        if (key, method) in self._records:
            return
        self._records[(key, method)] = value
        record = {"key": key, "method": method, "value": _encode_value(value)}
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")

    def __len__(self) -> int:
        return len(self._records)
