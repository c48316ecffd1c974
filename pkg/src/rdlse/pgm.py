"""Minimal PGM (portable graymap) reader/writer plus CSV profile export."""

import numpy as np

from .errors import CorruptHeader, DimensionTooSmall, IoFailure, UnsupportedFormat


def _header_tokens(data):
    """Yield ``(token, end_offset)`` for whitespace-separated header tokens, skipping comments."""
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


def parse_pgm(data):
    """Decode PGM bytes (P2 or P5, maxval <= 255) to a float array on the 0..255 scale.

    Files with ``maxval < 255`` are rescaled so that ``maxval`` maps to 255.
    """
    tokens = _header_tokens(data)
    try:
        magic, _ = next(tokens)
    except StopIteration:
        raise CorruptHeader("empty file") from None
    if magic not in (b"P2", b"P5"):
        raise UnsupportedFormat(f"not a graymap: magic {magic!r}")
    try:
        fields = [next(tokens) for _ in range(3)]
        width, height, maxval = (int(t) for t, _ in fields)
    except (StopIteration, ValueError):
        raise CorruptHeader("truncated or non-numeric header") from None
    if width <= 0 or height <= 0 or maxval <= 0:
        raise CorruptHeader(f"bad header values {width}x{height} maxval={maxval}")
    if maxval > 255:
        raise UnsupportedFormat(f"maxval {maxval} > 255 (16-bit PGM) is not supported")
    if width < 3 or height < 3:
        raise DimensionTooSmall(f"image is {width}x{height}, need at least 3x3")

    count = width * height
    if magic == b"P5":
        start = fields[-1][1] + 1  # exactly one whitespace byte after maxval
        raw = data[start:start + count]
        if len(raw) < count:
            raise CorruptHeader(f"expected {count} pixel bytes, got {len(raw)}")
        values = np.frombuffer(raw, dtype=np.uint8).astype(np.float64)
    else:
        try:
            values = np.array([int(t) for t, _ in tokens], dtype=np.float64)
        except ValueError:
            raise CorruptHeader("non-numeric pixel data") from None
        if values.size < count:
            raise CorruptHeader(f"expected {count} pixel values, got {values.size}")
        values = values[:count]
    if values.max(initial=0) > maxval:
        raise CorruptHeader("pixel value exceeds maxval")
    image = values.reshape(height, width)
    if maxval != 255:
        image = image * (255.0 / maxval)
    return image


def load_image(path):
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    return parse_pgm(data)


def encode_pgm(pixels):
    pixels = np.asarray(pixels, dtype=np.uint8)
    h, w = pixels.shape
    return b"P5\n%d %d\n255\n" % (w, h) + pixels.tobytes()


def _write(path, payload):
    try:
        with open(path, "wb") as fh:
            fh.write(payload)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def to_gray(field, mode="clamp"):
    """Quantize a real field to 0..255.

    ``"clamp"`` rounds and clips; ``"minmax"`` maps ``[min, max]`` affinely
    onto ``[0, 255]`` (a constant field becomes 128).
    """
    f = np.asarray(field, dtype=np.float64)
    if mode == "clamp":
        return np.clip(np.rint(f), 0, 255).astype(np.uint8)
    if mode == "minmax":
        lo, hi = f.min(), f.max()
        if hi == lo:
            return np.full(f.shape, 128, dtype=np.uint8)
        return np.rint((f - lo) * (255.0 / (hi - lo))).astype(np.uint8)
    raise ValueError(f"unknown quantization mode {mode!r}")


def save_field_pgm(field, path, mode="clamp"):
    _write(path, encode_pgm(to_gray(field, mode)))


def save_mask_pgm(mask, path):
    _write(path, encode_pgm(np.where(np.asarray(mask, dtype=bool), 255, 0)))


def load_mask(path):
    return load_image(path) >= 128


def export_middle_slice(snapshots, row, path):
    """Write ``iteration,x,phi`` rows for one grid row of every snapshot."""
    lines = ["iteration,x,phi"]
    for iteration, phi in snapshots:
        phi = np.asarray(phi)
        if not 0 <= row < phi.shape[0]:
            raise IndexError(f"row {row} outside 0..{phi.shape[0] - 1}")
        lines.extend(f"{iteration},{x},{v!r}" for x, v in enumerate(phi[row].tolist()))
    _write(path, ("\n".join(lines) + "\n").encode())
