"""JSON documents for vectors."""
from __future__ import annotations

import json
import os

from . import tower as tw
from .finvec import FinVec, fmt_rational, parse_rational
from .rle import RleVec, Run
from .schemes import IndexScheme, MRLINE


class DocumentError(ValueError):
    pass


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def _load(source):
    if isinstance(source, dict):
        return source
    text = source
    if isinstance(source, os.PathLike) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not a JSON document: {exc}") from None


def _rational(v):
    if isinstance(v, bool) or isinstance(v, float):
        raise DocumentError(f"coefficient {v!r} must be a 'p/q' string")
    if isinstance(v, int):
        return parse_rational(str(v))
    if not isinstance(v, str):
        raise DocumentError(f"coefficient {v!r} must be a 'p/q' string")
    try:
        return parse_rational(v)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def _exact_int(v):
    if isinstance(v, bool):
        raise DocumentError(f"bad integer {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return tw.from_str(v)
        except ValueError as exc:
            raise DocumentError(str(exc)) from None
    raise DocumentError(f"bad integer {v!r}")


def vec_read(source):
    """Read a FinVec (or an RleVec, if the document has "runs")."""
    doc = _load(source)
    if not isinstance(doc, dict) or "scheme" not in doc:
        raise DocumentError("vector document needs a 'scheme' field")
    try:
        scheme = IndexScheme.from_json(doc["scheme"])
    except (ValueError, TypeError) as exc:
        raise DocumentError(str(exc)) from None
    if "runs" in doc:
        if scheme != MRLINE:
            raise DocumentError("runs are only defined over the mrline scheme")
        return _read_runs(doc["runs"])
    entries = doc.get("entries")
    if not isinstance(entries, list):
        raise DocumentError("'entries' must be a list of [index, coefficient] pairs")
    out = {}
    for item in entries:
        if not isinstance(item, list) or len(item) != 2:
            raise DocumentError(f"malformed entry {item!r}")
        try:
            idx = scheme.index_from_json(item[0])
        except ValueError as exc:
            raise DocumentError(str(exc)) from None
        if idx in out:
            raise DocumentError(f"duplicate index {item[0]!r}")
        out[idx] = _rational(item[1])
    return FinVec(scheme, out)


def _read_runs(items):
    runs = []
    for item in items:
        if not isinstance(item, list) or len(item) not in (4, 5):
            raise DocumentError(f"malformed run {item!r}")
        line = item[0]
        if line not in (1, 2):
            raise DocumentError(f"run line must be 1 or 2, got {line!r}")
        shift = _exact_int(item[4]) if len(item) == 5 and item[4] is not None else None
        try:
            runs.append(Run(line, _exact_int(item[1]), _exact_int(item[2]), _rational(item[3]), shift))
        except ValueError as exc:
            raise DocumentError(str(exc)) from None
    try:
        return RleVec(runs)
    except ValueError as exc:
        raise DocumentError(str(exc)) from None


def vec_to_doc(v):
    if isinstance(v, RleVec):
        runs = []
        for r in v.runs:
            item = [r.line, tw.to_str(r.start), tw.to_str(r.length), fmt_rational(r.coeff)]
            if r.shift is not None:
                item.append(tw.to_str(r.shift))
            runs.append(item)
        return {"scheme": MRLINE.to_json(), "runs": runs}
    sch = v.scheme
    return {
        "scheme": sch.to_json(),
        "entries": [[sch.index_to_json(i), fmt_rational(c)] for i, c in v.items()],
    }


def vec_write(v, path=None):
    """Canonical text of v; also written to path when given."""
    text = canonical_json(vec_to_doc(v))
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return text
