"""Minimal binary NetPBM (P5) writer for scalogram and coherence images."""

import numpy as np


def write_pgm(path, img, comment: str = "") -> None:
    """Write a 2-D uint8 array as binary PGM (P5), one byte per pixel."""
    img = np.asarray(img)
    if img.ndim != 2 or img.dtype != np.uint8:
        raise ValueError("img must be a 2-D uint8 array")
    height, width = img.shape
    header = "P5\n"
    if comment:
        header += f"# {comment}\n"
    header += f"{width} {height}\n255\n"
    with open(path, "wb") as fh:
        fh.write(header.encode())
        fh.write(img.tobytes())


def to_gray(matrix, lo: float = 0.0, hi: float | None = None) -> np.ndarray:
    """Linear map [lo, hi] -> [0, 255]; hi defaults to the matrix max."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if hi is None:
        hi = float(matrix.max()) if matrix.size else 1.0
    span = hi - lo
    if span <= 0:
        return np.zeros(matrix.shape, dtype=np.uint8)
    scaled = np.clip((matrix - lo) / span, 0.0, 1.0)
    return np.round(255.0 * scaled).astype(np.uint8)
