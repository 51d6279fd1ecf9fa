import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kennelgrid import (
    CAGE_BODY,
    CageSpec,
    Chromosome,
    FREE,
    OBSTACLE,
    ColumnSpec,
    Orientation,
    OverlapError,
    Placement,
    ShelterSpec,
    cage_cells,
    derive_grid_dims,
    rasterize,
)


def spec_of(length, width, r, cage=None, columns=()):
    return ShelterSpec(
        length_m=length,
        width_m=width,
        resolution_m=r,
        cage=cage or CageSpec(1.5, 1.0, 1.0),
        requested_cages=5,
        columns=tuple(columns),
    )


class TestDeriveGridDims:
    def test_cat_shelter(self):
        assert derive_grid_dims(spec_of(25.0, 20.0, 1.0)) == (25, 20)

    def test_exact_division_at_coarse_resolution(self):
        assert derive_grid_dims(spec_of(81.2, 36.4, 1.4)) == (58, 26)

    def test_half_meter_resolution(self):
        assert derive_grid_dims(spec_of(10.0, 12.5, 0.5)) == (20, 25)

    def test_fractional_extent_rounds_up(self):
        assert derive_grid_dims(spec_of(10.1, 9.9, 1.0)) == (11, 10)

    @given(
        m=st.floats(1.0, 50.0),
        n=st.floats(1.0, 50.0),
        extra=st.floats(0.0, 10.0),
    )
    @settings(max_examples=50)
    def test_monotone_in_shelter_size(self, m, n, extra):
        base = derive_grid_dims(spec_of(m, n, 1.0))
        grown = derive_grid_dims(spec_of(m + extra, n + extra, 1.0))
        assert grown[0] >= base[0] and grown[1] >= base[1]


class TestCageCells:
    def test_ceiling_footprint(self):
        spec = spec_of(20.0, 20.0, 0.5, CageSpec(1.5, 0.75, 2.5))
        assert cage_cells(spec) == (3, 2, 5)

    def test_dog_cage_is_one_by_three(self):
        spec = spec_of(81.2, 36.4, 1.4, CageSpec(4.2, 1.4, 1.4))
        assert cage_cells(spec) == (3, 1, 1)


class TestRasterize:
    def test_empty_chromosome_all_free(self):
        grid = rasterize(Chromosome(), spec_of(5.0, 5.0, 1.0))
        assert (grid.cells == FREE).all()

    def test_single_cage_body_cell_count(self):
        spec = spec_of(10.0, 10.0, 1.0, CageSpec(3.0, 2.0, 1.0))
        grid = rasterize(
            Chromosome((Placement(0, 0, Orientation.UP),)), spec
        )
        assert int((grid.cells == CAGE_BODY).sum()) == 6

    def test_overlapping_bodies_raise(self):
        spec = spec_of(10.0, 10.0, 1.0, CageSpec(3.0, 2.0, 1.0))
        chrom = Chromosome(
            (Placement(0, 0, Orientation.UP), Placement(1, 1, Orientation.UP))
        )
        with pytest.raises(OverlapError):
            rasterize(chrom, spec)

    def test_columns_become_obstacles(self):
        spec = spec_of(5.0, 5.0, 1.0, columns=[ColumnSpec(1.0, 1.0, 2.0, 1.0)])
        grid = rasterize(Chromosome(), spec)
        assert grid.cells[1, 1] == OBSTACLE
        assert grid.cells[2, 1] == OBSTACLE
        assert int((grid.cells == OBSTACLE).sum()) == 2

    def test_pure_function(self):
        spec = spec_of(10.0, 10.0, 1.0, CageSpec(3.0, 2.0, 1.0))
        chrom = Chromosome((Placement(2, 3, Orientation.LEFT),))
        first = rasterize(chrom, spec)
        second = rasterize(chrom, spec)
        assert (first.cells == second.cells).all()

    @given(
        x=st.integers(0, 6),
        y=st.integers(0, 6),
        orientation=st.sampled_from(list(Orientation)),
    )
    @settings(max_examples=60)
    def test_footprint_size_independent_of_orientation(self, x, y, orientation):
        spec = spec_of(14.0, 14.0, 1.0, CageSpec(3.0, 2.0, 1.0))
        grid = rasterize(Chromosome((Placement(x, y, orientation),)), spec)
        assert int((grid.cells == CAGE_BODY).sum()) == 6
