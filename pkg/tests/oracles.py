"""Brute-force reference implementations used as test oracles.

Each of these is deliberately written the slow, obvious way, independent of
the library's vectorized code paths: exhaustive threshold search, Dijkstra
over the 3-4 step graph, and plain flood fill.
"""

from __future__ import annotations

import heapq

import numpy as np


def otsu_exhaustive(img: np.ndarray) -> int | None:
    """Search all 256 thresholds for the max between-class variance split.

    Classes are {value <= t} and {value > t}; first maximizing t wins.
    Returns None when no threshold separates anything (flat image).
    """
    values = img.ravel().astype(np.float64)
    best_t, best_score = None, 0.0
    for t in range(256):
        lo = values[values <= t]
        hi = values[values > t]
        if lo.size == 0 or hi.size == 0:
            continue
        w0 = lo.size / values.size
        w1 = hi.size / values.size
        score = w0 * w1 * (lo.mean() - hi.mean()) ** 2
        if score > best_score:
            best_score, best_t = score, t
    return best_t


def chamfer_bfs(img: np.ndarray) -> np.ndarray:
    """Dijkstra distance in the 3-4 chamfer metric, scaled by 1/3.

    Every background pixel is a source, as is the virtual background ring
    around the raster. Background pixels stay 0.
    """
    img = np.asarray(img, dtype=bool)
    h, w = img.shape
    padded = np.zeros((h + 2, w + 2), dtype=bool)
    padded[1:-1, 1:-1] = img
    dist = np.where(padded, np.inf, 0.0)
    heap = [(0.0, y, x) for y in range(h + 2) for x in range(w + 2) if not padded[y, x]]
    heapq.heapify(heap)
    while heap:
        d, y, x = heapq.heappop(heap)
        if d > dist[y, x]:
            continue
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                if dy == 0 and dx == 0:
                    continue
                ny, nx = y + dy, x + dx
                if not (0 <= ny < h + 2 and 0 <= nx < w + 2):
                    continue
                if not padded[ny, nx]:
                    continue
                step = 4.0 if dy != 0 and dx != 0 else 3.0
                nd = d + step
                if nd < dist[ny, nx]:
                    dist[ny, nx] = nd
                    heapq.heappush(heap, (nd, ny, nx))
    return dist[1:-1, 1:-1] / 3.0


def flood_components(img: np.ndarray) -> list[set[tuple[int, int]]]:
    """8-connected foreground components by breadth-first flood fill."""
    img = np.asarray(img, dtype=bool)
    h, w = img.shape
    seen = np.zeros_like(img)
    components = []
    for y in range(h):
        for x in range(w):
            if not img[y, x] or seen[y, x]:
                continue
            pixels = set()
            stack = [(y, x)]
            seen[y, x] = True
            while stack:
                cy, cx = stack.pop()
                pixels.add((cy, cx))
                for dy in (-1, 0, 1):
                    for dx in (-1, 0, 1):
                        ny, nx = cy + dy, cx + dx
                        if 0 <= ny < h and 0 <= nx < w and img[ny, nx] and not seen[ny, nx]:
                            seen[ny, nx] = True
                            stack.append((ny, nx))
            components.append(pixels)
    return components
