"""Static pictures of diagrams and cut certificates.

Both outputs are deterministic.  The SVG mimics the usual dot-grid style:
faint dots on the bounding box, heavy dots on the diagram, arrowed axes,
and one line per cut of a certificate.
"""

from __future__ import annotations

from fractions import Fraction

from .cutting.certificate import CutCertificate, CutNode, EquivLeaf
from .diagram import AffineCut, Diagram, split

PITCH = 6
MARGIN = 14
GRID_DOT = 0.2
POINT_DOT = 1.2


def _extent(d: Diagram) -> tuple[int, int]:
    if not d:
        return 0, 0
    return max(p.x for p in d), max(p.y for p in d)


def collect_cuts(cert: CutCertificate) -> list[tuple[AffineCut, Diagram]]:
    """Every cut of ``cert`` in root coordinates, paired with the diagram it splits."""
    out: list[tuple[AffineCut, Diagram]] = []

    def walk(node, shift):
        if isinstance(node, EquivLeaf):
            vx, vy = node.translation
            walk(node.inner, (shift[0] + vx, shift[1] + vy))
        elif isinstance(node, CutNode):
            sx, sy = shift
            c = node.cut
            # node coordinates are root coordinates plus ``shift``
            moved = AffineCut(c.r1, c.r2, c.r0 + c.r1 * sx + c.r2 * sy)
            home = Diagram((p.x - sx, p.y - sy) for p in node.system.diagram)
            out.append((moved, home))
            walk(node.sub2, shift)
            walk(node.sub1, shift)

    walk(cert, (0, 0))
    return out


# -- ASCII -------------------------------------------------------------------


def render_ascii(d: Diagram, cut: AffineCut | None = None) -> str:
    """Rows from the top: ``#`` diagram point, ``.`` empty lattice point.

    With ``cut`` the points of D2 are drawn as ``o`` instead of ``#``.
    """
    w, h = _extent(d)
    upper = set(split(d, cut)[1]) if cut is not None else set()
    lines = []
    for y in range(h, -1, -1):
        row = []
        for x in range(w + 1):
            if (x, y) in upper:
                row.append("o")
            elif (x, y) in d:
                row.append("#")
            else:
                row.append(".")
        lines.append(f"{y:>3} " + " ".join(row))
    lines.append("    " + " ".join(str(x % 10) for x in range(w + 1)))
    if cut is not None:
        lines.append(f"cut: {cut}")
    return "\n".join(lines) + "\n"


def render_certificate_ascii(cert: CutCertificate) -> str:
    root = cert.system.diagram
    cuts = collect_cuts(cert)
    parts = [render_ascii(root, cuts[0][0] if cuts else None)]
    for i, (cut, _) in enumerate(cuts[1:], start=2):
        parts.append(f"cut {i}: {cut}\n")
    return "".join(parts)


# -- SVG ---------------------------------------------------------------------


def _fmt(v: float) -> str:
    s = f"{v:.2f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def _clip(cut: AffineCut, box: tuple[Fraction, Fraction, Fraction, Fraction]):
    """Segment of ``F = 0`` inside the box, or None."""
    x0, y0, x1, y1 = box
    a, b, c = cut.r1, cut.r2, cut.r0
    pts = []
    if b != 0:
        for x in (x0, x1):
            y = -(a * x + c) / b
            if y0 <= y <= y1:
                pts.append((x, y))
    if a != 0:
        for y in (y0, y1):
            x = -(b * y + c) / a
            if x0 <= x <= x1:
                pts.append((x, y))
    pts = sorted(set(pts))
    if len(pts) < 2:
        return None
    return pts[0], pts[-1]


def render_svg(d: Diagram, cuts: list[tuple[AffineCut, Diagram]] = ()) -> str:
    w, h = _extent(d)
    width = (w + 3) * PITCH + 2 * MARGIN
    height = (h + 3) * PITCH + 2 * MARGIN

    def sx(x) -> str:
        return _fmt(MARGIN + float(x) * PITCH)

    def sy(y) -> str:
        return _fmt(height - MARGIN - float(y) * PITCH)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        '<defs><marker id="arrow" markerWidth="6" markerHeight="6" refX="5" refY="3" '
        'orient="auto"><path d="M0,0 L6,3 L0,6" fill="none" stroke="black"/></marker></defs>',
        f'<line x1="{sx(0)}" y1="{sy(0)}" x2="{sx(w + 2)}" y2="{sy(0)}" stroke="black" '
        'stroke-width="0.5" marker-end="url(#arrow)"/>',
        f'<line x1="{sx(0)}" y1="{sy(0)}" x2="{sx(0)}" y2="{sy(h + 2)}" stroke="black" '
        'stroke-width="0.5" marker-end="url(#arrow)"/>',
    ]
    if d:
        for x in range(w + 1):
            for y in range(h + 1):
                out.append(f'<circle cx="{sx(x)}" cy="{sy(y)}" r="{GRID_DOT}" fill="black"/>')
    for p in d:
        out.append(f'<circle cx="{sx(p.x)}" cy="{sy(p.y)}" r="{POINT_DOT}" fill="black"/>')
    half = Fraction(1, 2)
    for cut, home in cuts:
        hw, hh = _extent(home)
        lx = min((p.x for p in home), default=0)
        ly = min((p.y for p in home), default=0)
        seg = _clip(cut, (lx - half, ly - half, hw + half, hh + half))
        if seg is None:
            continue
        (ax, ay), (bx, by) = seg
        out.append(
            f'<line x1="{sx(ax)}" y1="{sy(ay)}" x2="{sx(bx)}" y2="{sy(by)}" '
            'stroke="black" stroke-width="0.5"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_certificate_svg(cert: CutCertificate) -> str:
    return render_svg(cert.system.diagram, collect_cuts(cert))
