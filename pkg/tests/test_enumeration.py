from fractions import Fraction

import pytest

from tanglegram.core import ParseError, TanglegramError, canonical_key
from tanglegram.enumeration import (
    ConsistencyError,
    census,
    enumerate_classes,
    enumerate_planar,
    format_csv,
    irreducible_series,
    load_h_file,
    series_rows,
    solve_F,
    solve_F_rearranged,
)
from tanglegram.untangle import is_planar


@pytest.mark.parametrize("n, count", [(1, 1), (2, 1), (3, 2), (4, 13), (5, 114), (6, 1509)])
def test_class_counts(n, count):
    assert len(enumerate_classes(n)) == count


def test_keys_are_canonical():
    for key, tg in enumerate_classes(5):
        assert canonical_key(tg) == key


def test_keys_distinct():
    keys = [k for k, _ in enumerate_classes(6)]
    assert len(keys) == len(set(keys))


def test_planar_subset_agrees_with_test():
    planar = {k for k, _ in enumerate_planar(5)}
    assert planar == {k for k, tg in enumerate_classes(5) if is_planar(tg)}


def test_census_small():
    assert census(1).counts == {0: 1}
    assert census(2).counts == {1: 1}
    assert census(4).counts == {1: 5, 2: 4, 3: 2}


def test_census_threads_agree():
    assert census(5, threads=2).counts == census(5).counts


def test_census_rejects_zero():
    with pytest.raises(TanglegramError):
        census(0)


def test_series_matches_census():
    h = irreducible_series(6)
    f = solve_F(6, h)
    for n in range(2, 7):
        assert {k: int(c) for k, c in f.row(n).items()} == census(n).counts


def test_rearranged_solver_agrees():
    h = irreducible_series(6)
    assert solve_F(6, h).coeff == solve_F_rearranged(6, h).coeff


def test_h2_is_half():
    assert irreducible_series(2).get(2) == Fraction(1, 2)


def test_non_integer_coefficient_raises():
    with pytest.raises(ConsistencyError):
        solve_F(4, {2: Fraction(1, 3)})


def test_h_file_override(tmp_path):
    path = tmp_path / "h.txt"
    path.write_text("# irreducible counts\n2 1/2\n3 1\n4 5/1\n")
    override = load_h_file(path)
    assert override == {2: Fraction(1, 2), 3: 1, 4: 5}
    assert solve_F(4, irreducible_series(4, override)).coeff == solve_F(4, irreducible_series(4)).coeff


@pytest.mark.parametrize("body", ["2\n", "2 x/y\n", "3 1/0\n"])
def test_h_file_errors(tmp_path, body):
    path = tmp_path / "h.txt"
    path.write_text(body)
    with pytest.raises(ParseError):
        load_h_file(path)


def test_csv_format():
    text = format_csv(series_rows(solve_F(3, irreducible_series(3)), n_min=2))
    assert text == "n,k,count\n2,1,1\n3,1,1\n3,2,1\n"
