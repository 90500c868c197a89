import re

from diagcut.cutting import lemma_singlelayer, lemma_twotriangles, search_cut_proof
from diagcut.diagram import AffineCut, Diagram, parse_diagram, triangle
from diagcut.interp import LinearSystem
from diagcut.render import (
    GRID_DOT,
    PITCH,
    POINT_DOT,
    collect_cuts,
    render_ascii,
    render_certificate_ascii,
    render_certificate_svg,
    render_svg,
)

TWO_COLUMNS = """\
  4 # .
  3 # .
  2 . .
  1 . .
  0 . #
    0 1
"""


def circles(svg, radius):
    return re.findall(rf'<circle cx="([\d.]+)" cy="([\d.]+)" r="{radius}"', svg)


def lines(svg):
    return [tuple(float(v) for v in m) for m in re.findall(r'<line x1="([-\d.]+)" y1="([-\d.]+)" x2="([-\d.]+)" y2="([-\d.]+)"', svg)]


def test_two_columns_ascii():
    assert render_ascii(parse_diagram("2^3,1^0")) == TWO_COLUMNS


def test_two_columns_svg_layout():
    svg = render_svg(parse_diagram("2^3,1^0"))
    pts = circles(svg, POINT_DOT)
    assert len(pts) == 3
    assert len(circles(svg, GRID_DOT)) == 2 * 5
    # column 1 sits one pitch to the right of column 0, at the bottom row
    xs = sorted({float(x) for x, _ in pts})
    assert xs[1] - xs[0] == PITCH
    bottom = max(float(y) for _, y in pts)
    assert [(float(x), float(y)) for x, y in pts if float(y) == bottom] == [(xs[1], bottom)]


def test_empty_diagram_is_axes_only():
    svg = render_svg(Diagram())
    assert "<circle" not in svg
    assert len(lines(svg)) == 2
    assert svg.count('marker-end="url(#arrow)"') == 2
    assert render_ascii(Diagram()) == "  0 .\n    0\n"


def test_twotriangles_horizontal_cut():
    cert = lemma_twotriangles(3)
    cut_lines = lines(render_certificate_svg(cert))[2:]
    assert len(cut_lines) == 1
    x1, y1, x2, y2 = cut_lines[0]
    assert y1 == y2 and x2 > x1
    text = render_certificate_ascii(cert)
    assert text.splitlines()[0].split() == ["5", "o", ".", ".", "."]
    assert text.rstrip().endswith("cut: F = y - 5/2")


def test_ascii_marks_upper_part():
    text = render_ascii(triangle(2), AffineCut.diagonal_cut(2))
    assert text.count("o") == 3 and text.count("#") == 3


def test_one_line_per_cut():
    cert = lemma_singlelayer(2, 9)
    # two layer cuts, and each of the three two-triangle pieces has its own cut
    assert len(collect_cuts(cert)) == 5
    assert len(lines(render_certificate_svg(cert))) == 2 + 5


def test_cuts_follow_translations():
    # the search moves the diagram to the axes first; cuts come back in root coordinates
    system = LinearSystem(parse_diagram("0^0,0^0,3^2,3^2,3^2"), (2, 1))
    cert = search_cut_proof(system, 3)
    assert cert is not None
    for cut, home in collect_cuts(cert):
        assert set(home) <= set(system.diagram)


def test_deterministic():
    cert = lemma_twotriangles(4)
    assert render_certificate_svg(cert) == render_certificate_svg(cert)
