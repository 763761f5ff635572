"""Small hand-written SVG charts: histogram, scree bars, coloured scatter."""
from xml.sax.saxutils import escape

import numpy as np

W, H = 640, 400
PAD = 50
# viridis stops, low to high
PALETTE = ("#440154", "#3b528b", "#21918c", "#5ec962", "#fde725")


def _doc(title, body):
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">\n'
        f'<rect width="{W}" height="{H}" fill="white"/>\n'
        f'<text x="{W / 2:.1f}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">'
        f"{escape(title)}</text>\n"
        f'<line x1="{PAD}" y1="{H - PAD}" x2="{W - PAD}" y2="{H - PAD}" stroke="black"/>\n'
        f'<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{H - PAD}" stroke="black"/>\n'
        + "".join(body)
        + "</svg>\n"
    )


def _label(x, y, text, anchor="middle", size=11):
    return (
        f'<text x="{x:.1f}" y="{y:.1f}" text-anchor="{anchor}" font-family="sans-serif" '
        f'font-size="{size}">{escape(text)}</text>\n'
    )


def _bars(heights, labels, title, top):
    inner_w, inner_h = W - 2 * PAD, H - 2 * PAD
    slot = inner_w / max(len(heights), 1)
    body = []
    for i, (h, lab) in enumerate(zip(heights, labels)):
        bh = 0.0 if top <= 0 else inner_h * h / top
        x = PAD + i * slot + 0.1 * slot
        body.append(
            f'<rect x="{x:.1f}" y="{H - PAD - bh:.1f}" width="{0.8 * slot:.1f}" '
            f'height="{bh:.1f}" fill="{PALETTE[1]}"/>\n'
        )
        body.append(_label(x + 0.4 * slot, H - PAD + 16, lab, size=10))
    body.append(_label(PAD - 6, PAD + 4, f"{top:.3g}", anchor="end", size=10))
    body.append(_label(PAD - 6, H - PAD, "0", anchor="end", size=10))
    return _doc(title, body)


def histogram_svg(hist, title):
    labels = [f"{e:.3g}" for e in hist.bin_edges[:-1]]
    return _bars(hist.counts.tolist(), labels, title, float(max(hist.counts.max(), 1)))


def scree_svg(scree, title="Scree plot"):
    """Bars of explained-variance ratio relative to PC1 (PC1 is full height)."""
    rel = scree.relative_to_pc1.tolist()
    labels = [f"PC{i + 1}" for i in range(len(rel))]
    return _bars(rel, labels, f"{title} (two-PC share {scree.two_pc_share:.3f})", 1.0)


def quantile_bins(values, k=len(PALETTE)):
    """Index 0..k-1 of each value's quantile band; NaN maps to -1."""
    v = np.asarray(values, dtype=float)
    out = np.full(v.shape, -1, dtype=int)
    ok = np.isfinite(v)
    if ok.any():
        cuts = np.quantile(v[ok], np.linspace(0, 1, k + 1)[1:-1])
        out[ok] = np.searchsorted(cuts, v[ok], side="right")
    return out


def scatter_svg(projection, title="PC1 vs PC2"):
    s = projection.scores
    x = s[:, 0]
    y = s[:, 1] if s.shape[1] > 1 else np.zeros_like(x)

    def scale(v, lo_px, hi_px):
        lo, hi = float(v.min()), float(v.max())
        span = hi - lo or 1.0
        return lo_px + (v - lo) / span * (hi_px - lo_px)

    px = scale(x, PAD + 5, W - PAD - 5)
    py = scale(y, H - PAD - 5, PAD + 5)
    bands = quantile_bins(projection.color_values)
    body = []
    for cx, cy, b, lab in zip(px, py, bands, projection.point_labels):
        fill = "#999999" if b < 0 else PALETTE[b]
        body.append(
            f'<circle cx="{cx:.1f}" cy="{cy:.1f}" r="3.5" fill="{fill}" fill-opacity="0.8">'
            f"<title>{escape(str(lab))}</title></circle>\n"
        )
    body.append(_label(W / 2, H - 12, "PC1"))
    body.append(_label(16, H / 2, "PC2"))
    return _doc(title, body)
