"""Output formats: JSON with hex floats, CSV, binary PPM, DOT."""
import csv
import io
import json
import math

import numpy as np


def hexed(key, x):
    """``{key: x, key_hex: x.hex()}`` so JSON readers can round-trip exactly."""
    x = float(x)
    return {key: x if math.isfinite(x) else str(x), key + "_hex": x.hex()}


def _default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, default=_default, sort_keys=True, indent=2) + "\n"


def fmt(x) -> str:
    """17 significant digits; enough to round-trip a float64."""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return ""
    return f"{float(x):.17g}"


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, int, np.floating, np.integer)) or v is None else v for v in row])
    return buf.getvalue()


def ppm_bytes(mask: np.ndarray) -> bytes:
    """Binary P6 image: True pixels black, the rest white."""
    h, w = mask.shape
    img = np.where(mask[:, :, None], np.uint8(0), np.uint8(255))
    img = np.broadcast_to(img, (h, w, 3)).astype(np.uint8)
    return f"P6\n{w} {h}\n255\n".encode("ascii") + img.tobytes()


def read_ppm(data: bytes):
    """Parse the header written by ppm_bytes; returns (width, height, pixels)."""
    parts = data.split(b"\n", 3)
    if parts[0] != b"P6":
        raise ValueError("not a binary PPM")
    w, h = (int(v) for v in parts[1].split())
    if parts[2] != b"255":
        raise ValueError("unsupported maxval")
    pix = np.frombuffer(parts[3], dtype=np.uint8)
    if pix.size != w * h * 3:
        raise ValueError(f"payload has {pix.size} bytes, expected {w * h * 3}")
    return w, h, pix.reshape(h, w, 3)
