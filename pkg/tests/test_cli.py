import xml.etree.ElementTree as ET

import pytest

from conftest import DATA
from tanglegram.cli import RenderSpec, main, render_svg
from tanglegram.core import TanglegramError, parse_tgl
from tanglegram.layout import identity_layout

SVG = "{http://www.w3.org/2000/svg}"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_planar(capsys):
    assert run(capsys, "check-planar", DATA / "ex24.tgl")[1] == "planar\n"
    assert run(capsys, "check-planar", DATA / "fig13.tgl")[1] == "not planar\n"


def test_untangle_prints_pairs(capsys):
    code, out, _ = run(capsys, "untangle", DATA / "ex24.tgl")
    assert code == 0
    assert "crossings: 0" in out
    assert out.splitlines()[-1].startswith("pairs: ")


def test_layouts_and_flip_graph(capsys):
    code, out, _ = run(capsys, "layouts", DATA / "ex24.tgl")
    assert code == 0 and out.count("crossings: 0") == 2
    code, out, _ = run(capsys, "flip-graph", DATA / "ex24.tgl")
    assert code == 0 and "0: 1" in out


def test_layouts_needs_planar(capsys):
    code, _, err = run(capsys, "layouts", DATA / "fig13.tgl")
    assert code == 3 and err.startswith("error:")


def test_insert(capsys):
    code, out, _ = run(capsys, "insert", "--remove", 2, DATA / "fig13.tgl")
    assert code == 0 and out.endswith("crossings: 3\n")
    assert run(capsys, "insert", "--remove", 1, DATA / "fig13.tgl")[0] == 3
    assert run(capsys, "insert", "--remove", 9, DATA / "fig13.tgl")[0] == 2


@pytest.mark.parametrize("cmd", ["multi-insert", "iterated-insert"])
def test_keep_commands(capsys, cmd):
    code, out, _ = run(capsys, cmd, "--keep", "1,2,4,5,8,9,10,11", DATA / "fig16.tgl")
    assert code == 0 and out.endswith("crossings: 3\n")
    assert run(capsys, cmd, "--keep", "1,x", DATA / "fig16.tgl")[0] == 2
    assert run(capsys, cmd, "--keep", "1,2,40", DATA / "fig16.tgl")[0] == 2


def test_crossing_number(capsys):
    code, out, _ = run(capsys, "crossing-number", "--exact", DATA / "fig13.tgl")
    assert code == 0 and "crossings: 2" in out and "examined: 1024" in out
    assert run(capsys, "crossing-number", "--exact", "--max-size", 4, DATA / "fig13.tgl")[0] == 2


def test_census_and_series(capsys):
    assert run(capsys, "census", "--size", 4)[1] == "n,k,count\n4,1,5\n4,2,4\n4,3,2\n"
    out = run(capsys, "series", "--max-degree", 4)[1]
    assert out.splitlines()[-3:] == ["4,1,5", "4,2,4", "4,3,2"]


def test_series_bad_h_file(capsys, tmp_path):
    path = tmp_path / "h.txt"
    path.write_text("2 1/3\n")
    assert run(capsys, "series", "--max-degree", 4, "--h-file", path)[0] == 2


def test_random_is_reproducible(capsys):
    a = run(capsys, "random", "--size", 7, "--seed", 5)[1]
    b = run(capsys, "random", "--size", 7, "--seed", 5)[1]
    assert a == b
    assert parse_tgl(a).n == 7


def test_missing_and_malformed_files(capsys, tmp_path):
    assert run(capsys, "check-planar", tmp_path / "none.tgl")[0] == 2
    bad = tmp_path / "bad.tgl"
    bad.write_text("T = ((1,2)\n")
    code, _, err = run(capsys, "check-planar", bad)
    assert code == 2 and err.startswith("error:")


def test_render_to_file(capsys, tmp_path):
    target = tmp_path / "out.svg"
    code, out, _ = run(capsys, "render", DATA / "fig16.tgl", "--layout", DATA / "fig16_start.layout", "-o", target)
    assert code == 0 and out == "crossings: 9\n"
    root = ET.parse(target).getroot()
    assert root.tag == SVG + "svg" and root.get("version") == "1.1"
    assert len(root.findall(f".//{SVG}line")) == 11


def test_render_stdout(capsys):
    code, out, _ = run(capsys, "render", DATA / "ex24.tgl")
    assert code == 0
    ET.fromstring(out.split("\n", 1)[1])


def test_render_spec_validation(ex24):
    with pytest.raises(TanglegramError):
        RenderSpec(unit=0)
    svg = render_svg(ex24, identity_layout(ex24), RenderSpec(unit=10, gap_px=50))
    assert 'height="80"' in svg
