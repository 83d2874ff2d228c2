"""Basin pictures on complex lines through P^k."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .basins import UNRESOLVED, attractor_array, classify_points
from .polynomial import PolynomialMap
from .projective import chordal

# indexed by attractor enumeration order; unresolved points are black
PALETTE = np.array(
    [
        (230, 25, 75), (60, 180, 75), (255, 225, 25), (0, 130, 200),
        (245, 130, 48), (145, 30, 180), (70, 240, 240), (240, 50, 230),
        (210, 245, 60), (250, 190, 212), (0, 128, 128), (220, 190, 255),
        (170, 110, 40), (255, 250, 200), (128, 0, 0), (170, 255, 195),
    ],
    dtype=np.uint8,
)
BLACK = np.zeros(3, dtype=np.uint8)
ROWS_PER_TASK = 16


@dataclass
class ImageBuffer:
    width: int
    height: int
    pixels: np.ndarray  # (height, width, 3) uint8, row-major
    labels: np.ndarray | None = None  # (height, width) attractor index or -1

    def ppm_bytes(self) -> bytes:
        header = f"P6\n{self.width} {self.height}\n255\n".encode("ascii")
        return header + np.ascontiguousarray(self.pixels, dtype=np.uint8).tobytes()

    def write_ppm(self, path) -> None:
        Path(path).write_bytes(self.ppm_bytes())

    def write_png(self, path) -> None:
        from PIL import Image  # optional dependency

        Image.fromarray(self.pixels, mode="RGB").save(path)


def colorize(labels: np.ndarray) -> np.ndarray:
    out = np.zeros(labels.shape + (3,), dtype=np.uint8)
    hit = labels != UNRESOLVED
    out[hit] = PALETTE[labels[hit] % len(PALETTE)]
    return out


def pixel_parameters(window, width: int, height: int) -> np.ndarray:
    """Complex parameter at each pixel centre; row 0 is the top (largest imaginary part)."""
    xmin, xmax, ymin, ymax = window
    re = xmin + (np.arange(width) + 0.5) / width * (xmax - xmin)
    im = ymax - (np.arange(height) + 0.5) / height * (ymax - ymin)
    return re[None, :] + 1j * im[:, None]


def default_anchors(k: int) -> tuple[np.ndarray, np.ndarray]:
    """``[1:0]``, ``[0:1]`` on P^1; otherwise the line through ``[1:0:...:0]`` and ``[0:1:...:1]``."""
    a0 = np.zeros(k + 1, dtype=complex)
    a0[0] = 1
    a1 = np.ones(k + 1, dtype=complex)
    a1[0] = 0
    return a0, a1


def render_slice(
    pmap: PolynomialMap,
    anchors=None,
    window=(-2.0, 2.0, -2.0, 2.0),
    width: int = 256,
    height: int = 256,
    max_iter: int = 500,
    capture_tol: float = 1e-8,
    threads: int = 1,
) -> ImageBuffer:
    """Colour each pixel ``t`` by the basin of ``anchor0 + t * anchor1``."""
    k = pmap.k
    a0, a1 = default_anchors(k) if anchors is None else (np.asarray(a, dtype=complex) for a in anchors)
    if a0.shape != (k + 1,) or a1.shape != (k + 1,):
        raise ValueError(f"anchors must have {k + 1} coordinates")
    if not np.any(a0) or not np.any(a1) or chordal(a0, a1) < 1e-12:
        raise ValueError("anchors must be nonzero and projectively distinct")
    xmin, xmax, ymin, ymax = window
    if not (xmax > xmin and ymax > ymin):
        raise ValueError("window must have positive width and height")
    if width < 1 or height < 1 or width * height > 10**8:
        raise ValueError("resolution must be positive with at most 1e8 pixels")
    T = pixel_parameters(window, width, height)
    A = attractor_array(k)

    def work(rows):
        t = T[rows[0]:rows[1]].ravel()
        X = a0[None, :] + t[:, None] * a1[None, :]
        labels, _, _ = classify_points(pmap, X, A, max_iter, capture_tol)
        return labels

    tasks = [(r, min(r + ROWS_PER_TASK, height)) for r in range(0, height, ROWS_PER_TASK)]
    if threads <= 1:
        parts = [work(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, tasks))
    labels = np.concatenate(parts).reshape(height, width)
    return ImageBuffer(width, height, colorize(labels), labels)
