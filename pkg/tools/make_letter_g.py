"""Regenerate the shipped letter-G rasters in src/ghostgrover/data/.

The rasters are committed; this script only documents how they were drawn.
The G sits centered on the grid, and its crossbar reaches the central pixel
so the brightest part of a centered Gaussian illumination falls on a mark.
"""

from pathlib import Path

import numpy as np

SIDES = {32: 16, 64: 26, 128: 40}
OUT = Path(__file__).resolve().parents[1] / "src" / "ghostgrover" / "data"


def letter_g(m, side):
    y, x = np.indices((m, m), dtype=float)
    c = m / 2 - 0.5
    u = (x - c) / (side / 2)
    v = (y - c) / (side / 2)
    r = np.hypot(u, v)
    ang = np.degrees(np.arctan2(-v, u))
    ring = (r <= 1.0) & (r >= 0.62) & ~((ang > -2) & (ang < 40))
    bar = (v >= -0.08) & (v <= 0.22) & (u >= -0.02) & (u <= 1.0)
    stem = (u >= 0.66) & (u <= 1.0) & (v >= -0.08) & (v <= 0.8) & (r <= 1.0)
    return ring | bar | stem


if __name__ == "__main__":
    for m, side in SIDES.items():
        g = letter_g(m, side)
        lines = [f"# letter G, {m}x{m}, glyph box {side} px"]
        lines += ["".join("1" if b else "0" for b in row) for row in g]
        (OUT / f"letter_g_{m}.txt").write_text("\n".join(lines) + "\n")
        print(m, int(g.sum()))
