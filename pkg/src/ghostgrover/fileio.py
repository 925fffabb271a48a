"""PGM, CSV and JSON helpers with deterministic, locale-independent output."""

import csv
import hashlib
import io
import json
import math
from pathlib import Path

import numpy as np


def fmt(x):
    """Shortest round-tripping text for a number ('.' decimal separator)."""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(x)


def write_pgm(path, pixels, maxval=255):
    """Binary P5 PGM.  16-bit samples are big-endian as the format requires."""
    pixels = np.asarray(pixels)
    if pixels.ndim != 2:
        raise ValueError("PGM payload must be 2-D")
    if not 0 < maxval < 65536:
        raise ValueError("maxval must lie in 1..65535")
    if pixels.min() < 0 or pixels.max() > maxval:
        raise ValueError("pixel values outside 0..maxval")
    h, w = pixels.shape
    dtype = ">u1" if maxval < 256 else ">u2"
    header = f"P5\n{w} {h}\n{maxval}\n".encode("ascii")
    Path(path).write_bytes(header + pixels.astype(dtype).tobytes())


def _tokens(data):
    """Yield header tokens and the offset just after each one (comments skipped)."""
    i, n = 0, len(data)
    while i < n:
        c = data[i:i + 1]
        if c == b"#":
            while i < n and data[i:i + 1] not in (b"\n", b"\r"):
                i += 1
        elif c.isspace():
            i += 1
        else:
            j = i
            while j < n and not data[j:j + 1].isspace() and data[j:j + 1] != b"#":
                j += 1
            yield data[i:j], j
            i = j


def read_pgm(path):
    """Read a P2 (ASCII) or P5 (binary) PGM into an integer array."""
    data = Path(path).read_bytes()
    toks = _tokens(data)
    try:
        magic, _ = next(toks)
        if magic not in (b"P2", b"P5"):
            raise ValueError(f"not a PGM file (magic {magic!r})")
        w = int(next(toks)[0])
        h = int(next(toks)[0])
        maxval_tok, end = next(toks)
        maxval = int(maxval_tok)
    except StopIteration:
        raise ValueError("truncated PGM header") from None
    if w <= 0 or h <= 0 or not 0 < maxval < 65536:
        raise ValueError("invalid PGM header values")
    if magic == b"P5":
        dtype = ">u1" if maxval < 256 else ">u2"
        size = w * h * np.dtype(dtype).itemsize
        body = data[end + 1:end + 1 + size]
        if len(body) != size:
            raise ValueError("truncated PGM payload")
        return np.frombuffer(body, dtype=dtype).reshape(h, w).astype(np.int64)
    vals = [int(t) for t, _ in toks]
    if len(vals) != w * h:
        raise ValueError(f"expected {w * h} samples, found {len(vals)}")
    return np.array(vals, dtype=np.int64).reshape(h, w)


def scale_to_pgm(img, maxval=65535):
    """Min-max scale a real image to ``0..maxval``.

    Returns ``(pixels, meta)``; the image is recovered as
    ``meta["offset"] + meta["scale"] * pixels`` up to one quantization step.
    """
    img = np.asarray(img, dtype=np.float64)
    vmin, vmax = float(img.min()), float(img.max())
    span = vmax - vmin
    if span > 0:
        pixels = np.rint((img - vmin) / span * maxval).astype(np.int64)
        scale = span / maxval
    else:
        pixels = np.zeros(img.shape, dtype=np.int64)
        scale = 0.0
    return pixels, {"min": vmin, "max": vmax, "offset": vmin, "scale": scale,
                    "maxval": maxval}


def write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if not isinstance(v, str) else v for v in row])
    Path(path).write_text(buf.getvalue(), encoding="ascii")


def read_csv(path):
    with open(path, newline="", encoding="ascii") as fh:
        return list(csv.DictReader(fh))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dumps_json(obj):
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path, obj):
    Path(path).write_text(dumps_json(obj), encoding="utf-8")


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()
