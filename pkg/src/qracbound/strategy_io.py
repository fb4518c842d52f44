"""JSON (de)serialization of QRAC strategies.

Schema::

    {"n": 2, "m": 1,
     "encodings": [{"x": "00", "bloch": [...]}, ...],        # 2**n entries, 4**m - 1 numbers
     "measurements": [{"i": 1, "alpha0": 0.5, "alpha": [...]}, ...]}   # n entries, i is 1-based

Coordinates follow the canonical generator order of :mod:`qracbound.basis`.
Schema problems raise StrategyFormatError; a well-formed document describing
an unphysical strategy raises ValidationError.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import StrategyFormatError
from .qrac import BinaryPovmBloch, QracStrategy, bitstring


def strategy_to_dict(s: QracStrategy) -> dict:
    return {
        "n": s.n,
        "m": s.m,
        "encodings": [
            {"x": bitstring(k, s.n), "bloch": [float(c) for c in s.encodings[k]]}
            for k in range(2**s.n)
        ],
        "measurements": [
            {"i": i, "alpha0": p.alpha0, "alpha": [float(c) for c in p.alpha]}
            for i, p in enumerate(s.measurements, start=1)
        ],
    }


def _int(doc: dict, key: str) -> int:
    v = doc.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        raise StrategyFormatError(f'"{key}" must be an integer')
    return v


def _numbers(v, length: int, what: str) -> list:
    if not isinstance(v, list) or len(v) != length:
        raise StrategyFormatError(f"{what} must be an array of exactly {length} numbers")
    if any(isinstance(c, bool) or not isinstance(c, (int, float)) for c in v):
        raise StrategyFormatError(f"{what} must contain only numbers")
    return v


def strategy_from_dict(doc) -> QracStrategy:
    if not isinstance(doc, dict):
        raise StrategyFormatError("strategy document must be a JSON object")
    n, m = _int(doc, "n"), _int(doc, "m")
    if n < 1 or not 1 <= m <= 4:
        raise StrategyFormatError(f"unsupported sizes n={n}, m={m}")
    length = 4**m - 1
    enc_docs = doc.get("encodings")
    if not isinstance(enc_docs, list) or len(enc_docs) != 2**n:
        raise StrategyFormatError(f'"encodings" must list all {2**n} bit strings')
    enc = np.empty((2**n, length))
    seen = set()
    for e in enc_docs:
        x = e.get("x") if isinstance(e, dict) else None
        if not isinstance(x, str) or len(x) != n or set(x) - {"0", "1"}:
            raise StrategyFormatError(f"encoding key {x!r} is not a bit string of length {n}")
        if x in seen:
            raise StrategyFormatError(f"duplicate encoding for x={x}")
        seen.add(x)
        enc[int(x, 2)] = _numbers(e.get("bloch"), length, f"bloch vector for x={x}")
    meas_docs = doc.get("measurements")
    if not isinstance(meas_docs, list) or len(meas_docs) != n:
        raise StrategyFormatError(f'"measurements" must list exactly {n} entries')
    meas = [None] * n
    for md in meas_docs:
        if not isinstance(md, dict):
            raise StrategyFormatError("each measurement must be an object")
        i = _int(md, "i")
        if not 1 <= i <= n or meas[i - 1] is not None:
            raise StrategyFormatError(f"measurement index {i} is out of range or repeated")
        a0 = md.get("alpha0")
        if isinstance(a0, bool) or not isinstance(a0, (int, float)):
            raise StrategyFormatError(f"alpha0 of measurement {i} must be a number")
        alpha = _numbers(md.get("alpha"), length, f"alpha of measurement {i}")
        meas[i - 1] = (a0, alpha)
    # physical validation happens here and raises ValidationError
    povms = [BinaryPovmBloch(m, a0, np.array(alpha, dtype=float)) for a0, alpha in meas]
    return QracStrategy(n, m, enc, povms)


def load_strategy(path) -> QracStrategy:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise StrategyFormatError(f"malformed JSON in {path}: {exc}") from exc
    return strategy_from_dict(doc)


def save_strategy(s: QracStrategy, path) -> None:
    Path(path).write_text(json.dumps(strategy_to_dict(s), indent=1) + "\n")
