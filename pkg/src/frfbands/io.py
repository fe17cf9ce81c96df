"""Readers and writers for FRF sets, PIRs, time series and band results.

FRF files come in three layouts:

* long CSV: header ``freq,re,im`` then one block of rows per member, each
  block introduced by a ``# member k`` comment line;
* wide CSV: header ``member,<f>_re,<f>_im,...``, one row per member;
* JSON: ``{"freqs": [...], "re": [[...]], "im": [[...]]}``.

Frequencies are written as exact decimal (or ``p/q``) text and floats with
``repr`` so that writing then reading is the identity.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path

import numpy as np

from .core import (
    BandEstimate,
    BandKind,
    BandSpec,
    FrequencyGrid,
    FrfSet,
    ValidationError,
    format_frequency,
    to_fraction,
)
from .estimation import TimeSeries

__all__ = [
    "FRF_FORMATS",
    "detect_frf_format",
    "format_frf_set",
    "parse_frf_set",
    "read_frf_set",
    "write_frf_set",
    "format_pirs",
    "parse_pirs",
    "read_time_series",
    "read_band_file",
    "band_to_dict",
    "band_from_dict",
    "dumps_result",
    "file_digest",
]

FRF_FORMATS = ("long", "wide", "json")


def _num(text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ValidationError(f"cannot parse {text!r} as a number") from exc


def detect_frf_format(text: str, path: str | Path | None = None) -> str:
    if path is not None and Path(path).suffix.lower() == ".json":
        return "json"
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return "json"
    for line in stripped.splitlines():
        if line.strip() and not line.startswith("#"):
            return "wide" if line.split(",")[0].strip() == "member" else "long"
    raise ValidationError("empty FRF file")


def format_frf_set(frfs: FrfSet, fmt: str = "long") -> str:
    freqs = frfs.grid.as_text()
    if fmt == "json":
        return json.dumps({
            "freqs": freqs,
            "re": frfs.values.real.tolist(),
            "im": frfs.values.imag.tolist(),
        }) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if fmt == "long":
        writer.writerow(["freq", "re", "im"])
        for k, row in enumerate(frfs.values):
            buf.write(f"# member {k}\n")
            for f, v in zip(freqs, row):
                writer.writerow([f, repr(float(v.real)), repr(float(v.imag))])
    elif fmt == "wide":
        writer.writerow(["member"] + [f"{f}_{part}" for f in freqs for part in ("re", "im")])
        for k, row in enumerate(frfs.values):
            cells = [str(k)]
            for v in row:
                cells += [repr(float(v.real)), repr(float(v.imag))]
            writer.writerow(cells)
    else:
        raise ValidationError(f"unknown FRF format {fmt!r}")
    return buf.getvalue()


def _parse_long(text: str) -> FrfSet:
    blocks: list[list[list[str]]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line[1:].strip().startswith("member"):
                blocks.append([])
            continue
        cells = [c.strip() for c in line.split(",")]
        if cells == ["freq", "re", "im"]:
            continue
        if len(cells) != 3:
            raise ValidationError(f"expected freq,re,im but got {line!r}")
        if not blocks:
            blocks.append([])
        blocks[-1].append(cells)
    blocks = [b for b in blocks if b]
    if not blocks:
        raise ValidationError("FRF file holds no members")
    grid = FrequencyGrid([c[0] for c in blocks[0]])
    rows = []
    for k, block in enumerate(blocks):
        if [to_fraction(c[0]) for c in block] != list(grid.rational):
            raise ValidationError(f"member {k} is on a different frequency grid")
        rows.append([complex(_num(c[1]), _num(c[2])) for c in block])
    return FrfSet(grid, rows)


def _parse_wide(text: str) -> FrfSet:
    rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].startswith("#")]
    header, body = rows[0], rows[1:]
    cols = header[1:]
    if len(cols) % 2 or not body:
        raise ValidationError("wide FRF file needs re/im column pairs and at least one row")
    freqs = []
    for re_col, im_col in zip(cols[0::2], cols[1::2]):
        f_re, _, tag_re = re_col.strip().rpartition("_")
        f_im, _, tag_im = im_col.strip().rpartition("_")
        if tag_re != "re" or tag_im != "im" or f_re != f_im:
            raise ValidationError(f"bad wide FRF header columns {re_col!r}, {im_col!r}")
        freqs.append(f_re)
    grid = FrequencyGrid(freqs)
    values = []
    for row in body:
        if len(row) != len(header):
            raise ValidationError(f"member row has {len(row)} cells, header has {len(header)}")
        nums = [_num(c) for c in row[1:]]
        values.append([complex(a, b) for a, b in zip(nums[0::2], nums[1::2])])
    return FrfSet(grid, values)


def _parse_json(text: str) -> FrfSet:
    try:
        data = json.loads(text)
        grid = FrequencyGrid(data["freqs"])
        values = np.asarray(data["re"], dtype=float) + 1j * np.asarray(data["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"malformed FRF JSON: {exc}") from exc
    return FrfSet(grid, values)


def parse_frf_set(text: str, fmt: str | None = None) -> FrfSet:
    fmt = fmt or detect_frf_format(text)
    parser = {"long": _parse_long, "wide": _parse_wide, "json": _parse_json}.get(fmt)
    if parser is None:
        raise ValidationError(f"unknown FRF format {fmt!r}")
    return parser(text)


def read_frf_set(path, fmt: str | None = None) -> FrfSet:
    text = Path(path).read_text()
    return parse_frf_set(text, fmt or detect_frf_format(text, path))


def write_frf_set(path, frfs: FrfSet, fmt: str = "long") -> None:
    Path(path).write_text(format_frf_set(frfs, fmt))


def format_pirs(pirs: np.ndarray, sample_rate, period) -> str:
    """PIR matrix as CSV: ``# sample_rate=.. period=..`` then ``t,member_0,...``."""
    pirs = np.atleast_2d(pirs)
    rate = to_fraction(sample_rate)
    buf = io.StringIO()
    buf.write(f"# sample_rate={format_frequency(rate)} period={format_frequency(to_fraction(period))}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t"] + [f"member_{k}" for k in range(pirs.shape[0])])
    for j in range(pirs.shape[1]):
        t = float(j / rate)
        writer.writerow([repr(t)] + [repr(float(v)) for v in pirs[:, j]])
    return buf.getvalue()


def parse_pirs(text: str):
    """Inverse of :func:`format_pirs`; returns ``(matrix, sample_rate)``."""
    lines = text.splitlines()
    meta = {}
    body = []
    for line in lines:
        if line.startswith("#"):
            for item in line[1:].split():
                key, _, value = item.partition("=")
                meta[key] = value
        elif line.strip():
            body.append(line)
    if "sample_rate" not in meta:
        raise ValidationError("PIR file lacks the '# sample_rate=' header line")
    rows = list(csv.reader(body))
    if len(rows) < 2 or rows[0][0] != "t":
        raise ValidationError("PIR file needs a 't,member_...' header and samples")
    data = np.array([[_num(c) for c in r[1:]] for r in rows[1:]])
    return data.T.copy(), to_fraction(meta["sample_rate"])


def read_time_series(path, sample_rate=None) -> dict[str, TimeSeries]:
    """Columns of a headed CSV as time series.

    The rate comes from ``sample_rate`` or from a sidecar ``<stem>.json``
    holding ``{"sample_rate": ...}``.
    """
    path = Path(path)
    if sample_rate is None:
        sidecar = path.with_suffix(".json")
        if not sidecar.exists():
            raise ValidationError(f"no sample rate given and no sidecar {sidecar.name}")
        try:
            sample_rate = json.loads(sidecar.read_text())["sample_rate"]
        except (KeyError, ValueError) as exc:
            raise ValidationError(f"sidecar {sidecar.name} lacks a sample_rate") from exc
    rows = [r for r in csv.reader(io.StringIO(path.read_text())) if r and not r[0].startswith("#")]
    if len(rows) < 2:
        raise ValidationError(f"{path.name} needs a header row and samples")
    header = [h.strip() for h in rows[0]]
    data = np.array([[_num(c) for c in r] for r in rows[1:]])
    if data.shape[1] != len(header):
        raise ValidationError("ragged time-series CSV")
    rate = float(to_fraction(sample_rate))
    return {name: TimeSeries(data[:, k], rate) for k, name in enumerate(header)}


def read_band_file(path, raw_freqs):
    """Explicit band layout ``{"bands": [[i, ...], ...], "labels": [...]}``.

    Returns ``(BandSpec, label_grid_or_None)``.
    """
    try:
        data = json.loads(Path(path).read_text())
        bands = data["bands"]
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"malformed band file: {exc}") from exc
    labels = data.get("labels")
    return BandSpec(bands, raw_freqs), (FrequencyGrid(labels) if labels else None)


def band_to_dict(band: BandEstimate) -> dict:
    return {
        "kind": band.kind.value,
        "alpha": band.alpha,
        "B": band.replicates,
        "seed": band.seed,
        "constant": band.constant,
        "sample_rate": band.sample_rate,
        "degenerate_replicates": band.degenerate_replicates,
        "time_axis": band.time.tolist(),
        "avg": band.avg.tolist(),
        "sigma": band.sigma.tolist(),
        "lower": band.lower.tolist(),
        "upper": band.upper.tolist(),
        "histogram_values": band.histogram_values.tolist(),
    }


def band_from_dict(data: dict) -> BandEstimate:
    try:
        return BandEstimate(
            kind=BandKind(data["kind"]),
            avg=data["avg"],
            sigma=data["sigma"],
            constant=data["constant"],
            lower=data["lower"],
            upper=data["upper"],
            alpha=data["alpha"],
            replicates=data["B"],
            histogram_values=data.get("histogram_values", []),
            sample_rate=data["sample_rate"],
            seed=data.get("seed"),
            degenerate_replicates=data.get("degenerate_replicates", 0),
        )
    except KeyError as exc:
        raise ValidationError(f"band result lacks field {exc}") from exc


def dumps_result(data: dict) -> str:
    """Deterministic JSON text for a result document."""
    return json.dumps(data, allow_nan=False) + "\n"


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
