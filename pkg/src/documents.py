"""Sequence documents and tabular exports.

Sequence documents are JSON. Angles are in units of π, phases are stored in
[0, 2) and numbers are written in their shortest round-trip form, so a
document reads back to the same floats.
"""
from __future__ import annotations

import io
import json
import math
import os
import sys
import tempfile
from typing import Iterable, Optional

import pandas as pd

from src.core import CompositeSequence, Pulse, canonical_phase
from src.errors import DocumentError, InvalidPulseError
from src.solver import SolveResult, SolveTemplate

SCHEMA_VERSION = "1"


def _num(x: Optional[float]) -> Optional[float]:
    if x is None:
        return None
    return float(x)


def _phase(x: float) -> float:
    return canonical_phase(x)


def sequence_to_document(seq: CompositeSequence) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "label": seq.label,
        "pulses": [{"area_pi": _num(p.area_pi), "phase_pi": _phase(p.phase_pi)} for p in seq.pulses],
        "metadata": {
            "family": seq.family,
            "N": seq.n,
            "theta_pi": _num(seq.theta_pi),
            "P_target": _num(seq.p_target),
            "variant": seq.variant,
            "total_area_pi": _num(seq.total_area_pi),
        },
    }


def document_to_sequence(doc: dict) -> CompositeSequence:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema_version {version!r}")
    pulses = doc.get("pulses")
    if not isinstance(pulses, list) or not pulses:
        raise DocumentError("document needs a non-empty 'pulses' list")
    meta = doc.get("metadata") or {}
    if not isinstance(meta, dict):
        raise DocumentError("'metadata' must be an object")
    try:
        parsed = tuple(Pulse(_finite(p["area_pi"]), _finite(p["phase_pi"])) for p in pulses)
    except (KeyError, TypeError) as e:
        raise DocumentError(f"malformed pulse entry: {e}") from e
    except InvalidPulseError as e:
        raise DocumentError(str(e)) from e
    return CompositeSequence(
        parsed,
        label=str(doc.get("label") or ""),
        family=meta.get("family"),
        n=meta.get("N"),
        theta_pi=meta.get("theta_pi"),
        p_target=meta.get("P_target"),
        variant=meta.get("variant"),
    )


def _finite(value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise DocumentError(f"expected a number, got {value!r}")
    x = float(value)
    if not math.isfinite(x):
        raise DocumentError(f"expected a finite number, got {value!r}")
    return x


def results_document(template: SolveTemplate, results: Iterable[SolveResult], seed: int) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "template": {
            "areas_pi": [_num(a) for a in template.areas_pi],
            "free_mask": list(template.free_mask),
            "P_target": _num(template.p_target),
            "annul_count": template.annul_count,
        },
        "seed": seed,
        "branches": [
            {
                "branch_id": r.branch_id,
                "phases_pi": [_phase(x) for x in r.phases_pi],
                "residual_norm": float(f"{r.residual_norm:.3e}"),
                "achieved_order": r.achieved_order,
                "annulled": r.annulled,
                "origin": r.origin,
            }
            for r in results
        ],
    }


# -- io ---------------------------------------------------------------------------------

def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(text: str, path: Optional[str] = None) -> None:
    """Write to ``path`` atomically, or to stdout when no path is given."""
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        _atomic_write(path, text)


def dump_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def write_sequence(seq: CompositeSequence, path: Optional[str] = None) -> None:
    emit(dump_json(sequence_to_document(seq)), path)


def read_sequence(path: str) -> CompositeSequence:
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise DocumentError(f"{path} is not valid JSON: {e}") from e
    return document_to_sequence(doc)


def frame_to_csv(frame: pd.DataFrame) -> str:
    buf = io.StringIO()
    frame.to_csv(buf, index=False, lineterminator="\n", float_format="%.15g")
    return buf.getvalue()


def write_csv(frame: pd.DataFrame, path: Optional[str] = None) -> None:
    emit(frame_to_csv(frame), path)
