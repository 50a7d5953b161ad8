import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greydematel.defuzz import CFCSVariant, defuzzify, row_normalization
from greydematel.grey import DEFAULT_SCALE, GreyMatrix, GreyNumber, assessment_to_grey_matrix, weighted_average_grey

from .oracles import cfcs_entry

ROW = [[0, 0], [3, 4], [1, 2]]


def _matrix_with_first_row(row):
    n = len(row)
    entries = [[[0, 0]] * n for _ in range(n)]
    entries[0] = row
    return GreyMatrix.from_entries(entries)


@pytest.mark.parametrize(
    "row, expected",
    [
        (ROW, (0, 0, 4, 4)),
        ([[0, 0]], (0, 0, 0, 0)),
        ([[2, 3], [2, 3]], (2, 3, 3, 1)),
    ],
)
def test_row_normalization(row, expected):
    stats = row_normalization([GreyNumber(*g) for g in row])
    assert (stats.min_lower, stats.min_upper, stats.max_upper, stats.delta) == expected


def test_row_normalization_empty():
    with pytest.raises(ValueError):
        row_normalization([])


def test_hand_example_paper_variant():
    z = defuzzify(_matrix_with_first_row(ROW), "paper")
    assert z[0, 0] == 0.0
    assert z[0, 1] == pytest.approx(3.8, abs=1e-12)
    assert z[0, 2] == pytest.approx(1.4, abs=1e-12)


def test_zero_row_gives_zero():
    z = defuzzify(_matrix_with_first_row(ROW))
    assert np.all(z[1:] == 0.0)


def test_variants_diverge_without_zero_minimum():
    # Off-diagonal-only stats on a row whose minima are not zero.
    g = GreyMatrix.from_entries([[[0, 0], [1, 3], [2, 2]], [[1, 2], [0, 0], [1, 2]], [[0, 1], [0, 1], [0, 0]]])
    paper = defuzzify(g, "paper", include_diagonal=False)
    std = defuzzify(g, "standard", include_diagonal=False)
    for i, j in [(0, 1), (0, 2)]:
        los, ups = [1, 2], [3, 2]
        assert paper[i, j] == pytest.approx(cfcs_entry(*g[i, j].as_tuple(), los, ups, "paper"), abs=1e-12)
        assert std[i, j] == pytest.approx(cfcs_entry(*g[i, j].as_tuple(), los, ups, "standard"), abs=1e-12)
    assert not np.allclose(paper, std)
    assert np.all(np.diag(paper) == 0) and np.all(np.diag(std) == 0)


def test_constant_row_maps_to_its_value():
    g = GreyMatrix.from_entries([[[0, 0], [2, 2], [2, 2]], [[0, 0]] * 3, [[0, 0]] * 3])
    z = defuzzify(g, include_diagonal=False)
    assert z[0, 1] == z[0, 2] == 2.0


def test_crisp_inputs_standard_variant_are_fixed_points():
    g = GreyMatrix.from_entries([[[0, 0], [3, 3], [1.5, 1.5]], [[2, 2], [0, 0], [0.5, 0.5]], [[0, 0]] * 3])
    z = defuzzify(g, "standard")
    np.testing.assert_allclose(z, g.lower, rtol=0, atol=1e-12)


def test_unknown_variant():
    with pytest.raises(ValueError):
        defuzzify(_matrix_with_first_row(ROW), "centroid")


@st.composite
def averaged_grey(draw, max_n=6, max_k=5):
    n = draw(st.integers(2, max_n))
    k = draw(st.integers(1, max_k))
    mats = [
        assessment_to_grey_matrix(
            [[draw(st.sampled_from(DEFAULT_SCALE.codes)) if i != j else "N" for j in range(n)] for i in range(n)]
        )
        for _ in range(k)
    ]
    return weighted_average_grey(mats)


@settings(max_examples=80, deadline=None)
@given(averaged_grey())
def test_matches_scalar_oracle_and_variants_agree(g):
    paper = defuzzify(g, CFCSVariant.PAPER)
    std = defuzzify(g, CFCSVariant.STANDARD)
    assert np.array_equal(paper, std)
    for i in range(g.n):
        los, ups = list(g.lower[i]), list(g.upper[i])
        for j in range(g.n):
            expected = cfcs_entry(g.lower[i, j], g.upper[i, j], los, ups)
            assert paper[i, j] == pytest.approx(expected, abs=1e-12)


@settings(max_examples=80, deadline=None)
@given(averaged_grey())
def test_row_range_and_monotonicity(g):
    z = defuzzify(g)
    assert np.all(np.diag(z) == 0)
    for i in range(g.n):
        stats = row_normalization(g.row(i))
        assert np.all(z[i] >= stats.min_lower - 1e-12)
        assert np.all(z[i] <= stats.min_lower + stats.delta + 1e-12)
        for a in range(g.n):
            for b in range(g.n):
                if g.lower[i, a] >= g.lower[i, b] and g.upper[i, a] >= g.upper[i, b]:
                    assert z[i, a] >= z[i, b] - 1e-12
