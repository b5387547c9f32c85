"""Report rendering (text and line-delimited JSON) and checkpoint files.

Structured reports are JSON lines.  Every line is an object with a ``type``:

``header``
    ``format`` (always ``"ecdescent-report"``), ``version``, ``curve`` {a, b}
    and the effective ``config`` (bounds, mode, forced d, torsion list, models).
``model``
    one per curve model searched: ``index``, ``curve``, ``map``, ``status``.
``result``
    ``status`` (``found`` | ``exhausted``), ``point`` (decimal strings
    ``x_num``, ``x_den``, ``y_num``, ``y_den``) or null, ``naive_height``,
    ``model_index``.
``trace``
    the descent trace of the model that produced the result (or of the last
    model tried).
``run``
    execution details that legitimately vary between runs: ``workers`` and
    ``wall_seconds``.  Nothing else in the report depends on them.

All big integers are decimal strings.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction

from .descent import RationalPoint
from .forms import Curve

REPORT_FORMAT = "ecdescent-report"
REPORT_VERSION = 1
CHECKPOINT_FORMAT = "ecdescent-checkpoint"
CHECKPOINT_VERSION = 1


class CheckpointError(Exception):
    pass


def render_structured(report: dict) -> str:
    lines = [
        {"type": "header", "format": REPORT_FORMAT, "version": REPORT_VERSION, **report["header"]},
        *({"type": "model", **m} for m in report["models"]),
        {"type": "result", **report["result"]},
        {"type": "trace", **report["trace"]},
        {"type": "run", **report["run"]},
    ]
    return "\n".join(json.dumps(line, sort_keys=True) for line in lines) + "\n"


def parse_structured(text: str) -> dict:
    out: dict = {"models": []}
    for raw in text.splitlines():
        if not raw.strip():
            continue
        line = json.loads(raw)
        kind = line.pop("type")
        if kind == "header":
            if line.get("format") != REPORT_FORMAT or line.get("version") != REPORT_VERSION:
                raise ValueError("not an ecdescent report of a supported version")
            out["header"] = line
        elif kind == "model":
            out["models"].append(line)
        else:
            out[kind] = line
    return out


def verify_report(parsed: dict) -> bool:
    """Re-check the reported point on the reported curve in exact arithmetic."""
    curve = Curve(int(parsed["header"]["curve"]["a"]), int(parsed["header"]["curve"]["b"]))
    pt = parsed["result"]["point"]
    if pt is None:
        return parsed["result"]["status"] == "exhausted"
    return RationalPoint.from_dict(pt).on(curve)


def render_text(report: dict) -> str:
    h, res, tr = report["header"], report["result"], report["trace"]
    out = [
        f"curve: y^2 = x^3 + ({h['curve']['a']})x^2 + ({h['curve']['b']})x",
        f"mode: {h['config']['mode']}  bounds: {h['config']['bounds']}",
    ]
    for m in report["models"]:
        out.append(f"model {m['index']}: a={m['curve']['a']} b={m['curve']['b']} map={m['map']['kind']} -> {m['status']}")
    out.append(f"status: {res['status']}")
    if res["point"] is not None:
        p = res["point"]
        out += [
            f"x = {p['x_num']}/{p['x_den']}",
            f"y = {p['y_num']}/{p['y_den']}",
            f"naive height = {res['naive_height']}",
        ]
        mp = tr.get("model_point")
        if mp is not None and report["result"]["model_index"] is not None:
            out.append(f"x on searched model = {mp['x_num']}/{mp['x_den']}")
            out.append(f"y on searched model = {mp['y_num']}/{mp['y_den']}")
    out.append("trace:")
    for key in ("d", "conic_solution", "pell", "k0", "first_solution", "sign_variant", "quartic4",
                "factorization", "k1_candidates", "k1", "second_solution", "quartic8", "hit",
                "bands", "quartics", "rejected_hits"):
        out.append(f"  {key}: {tr.get(key)}")
    flagged = [v for v in tr["verdicts"] if v["unproven"]]
    out.append(f"  local tests: {len(tr['verdicts'])} ({len(flagged)} unproven)")
    for v in tr["verdicts"]:
        state = "soluble" if v["soluble"] else f"insoluble at {v['obstruction']}"
        flag = " (unproven)" if v["unproven"] else ""
        out.append(f"    {v['stage']} ({', '.join(v['quartic'])}): {state}{flag}")
    for note in tr["notes"]:
        out.append(f"  note: {note}")
    out.append(f"workers: {report['run']['workers']}  wall time: {report['run']['wall_seconds']:.2f} s")
    return "\n".join(out) + "\n"


def write_checkpoint(path: str, config: dict, model_index: int, frontier: dict) -> None:
    """Atomically replace ``path`` with the current search frontier."""
    payload = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "config": config,
        "model_index": model_index,
        "frontier": frontier,
    }
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".ckpt-")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh, sort_keys=True)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_checkpoint(path: str, config: dict) -> tuple[int, dict]:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except (OSError, ValueError) as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from None
    if payload.get("format") != CHECKPOINT_FORMAT or payload.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(f"checkpoint {path} has unsupported format/version")
    if payload["config"] != config:
        raise CheckpointError(f"checkpoint {path} was written for a different configuration")
    return payload["model_index"], payload["frontier"]


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
