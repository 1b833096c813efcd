import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forestdetect.errors import DataError
from forestdetect.raster import (
    FOREST,
    NON_FOREST,
    DatasetItem,
    LabeledDataset,
    PixelMatrix,
    RgbImage,
    RgbTile,
    load_image,
    normalize_band,
    save_bands,
    tile_image,
    to_pixel_matrix,
)


def make_image(h, w, seed=0):
    rng = np.random.default_rng(seed)
    return RgbImage(*(rng.random((h, w)) for _ in range(3)))


class TestNormalizeBand:
    def test_divisor_value_maps_to_one(self):
        assert normalize_band(np.array([[2000]]))[0, 0] == 1.0

    def test_above_divisor_is_clamped(self):
        assert normalize_band(np.array([[4000]]))[0, 0] == 1.0

    def test_zero_maps_to_zero(self):
        assert normalize_band(np.array([[0]]))[0, 0] == 0.0

    def test_negative_rejected(self):
        with pytest.raises(DataError, match="negative"):
            normalize_band(np.array([[-1]]))

    def test_custom_divisor(self):
        out = normalize_band(np.array([[500, 1000]]), divisor=1000.0)
        assert out.tolist() == [[0.5, 1.0]]

    @given(st.integers(min_value=0, max_value=10**6))
    def test_output_always_in_unit_interval(self, value):
        out = normalize_band(np.array([value]))
        assert 0.0 <= out[0] <= 1.0


class TestTileImage:
    def test_large_image_tile_count(self):
        zeros = np.zeros((2000, 2000))
        image = RgbImage(zeros, zeros, zeros)
        assert len(tile_image(image, 10)) == 40000

    def test_exact_fit_single_tile(self):
        assert len(tile_image(make_image(20, 20), 20)) == 1

    def test_remainder_dropped(self):
        assert len(tile_image(make_image(25, 25), 10)) == 4

    def test_tile_size_too_small(self):
        with pytest.raises(DataError):
            tile_image(make_image(10, 10), 1)

    def test_tile_size_exceeds_image(self):
        with pytest.raises(DataError):
            tile_image(make_image(10, 10), 11)

    def test_origins_row_major_and_disjoint(self):
        tiles = tile_image(make_image(20, 30), 10)
        origins = [t.origin for t in tiles]
        assert origins == [(0, 0), (0, 10), (0, 20), (10, 0), (10, 10), (10, 20)]

    def test_tiles_reproduce_source_pixels(self):
        image = make_image(20, 20, seed=3)
        for tile in tile_image(image, 10):
            r0, c0 = tile.origin
            assert np.array_equal(tile.red, image.red[r0 : r0 + 10, c0 : c0 + 10])


class TestToPixelMatrix:
    def test_column_major_stacking(self):
        red = np.array([[0.1, 0.2], [0.3, 0.4]])
        tile = RgbTile(red, red * 2, red * 0.5)
        matrix = to_pixel_matrix(tile)
        assert matrix.data[:, 0].tolist() == [0.1, 0.3, 0.2, 0.4]

    def test_constant_channels_give_constant_rows(self):
        tile = RgbTile(*(np.full((3, 3), 0.7) for _ in range(3)))
        assert np.all(to_pixel_matrix(tile).data == 0.7)

    def test_shape_for_10x10_tile(self):
        image = make_image(10, 10)
        matrix = to_pixel_matrix(RgbTile(image.red, image.green, image.blue))
        assert matrix.data.shape == (100, 3)

    def test_round_trip(self):
        image = make_image(7, 7, seed=5)
        tile = RgbTile(image.red, image.green, image.blue)
        matrix = to_pixel_matrix(tile)
        assert np.array_equal(matrix.channel(1).reshape((7, 7), order="F"), tile.green)

    def test_spatial_permutation_only_permutes_rows(self):
        image = make_image(6, 6, seed=8)
        tile = RgbTile(image.red, image.green, image.blue)
        rotated = RgbTile(*(np.rot90(band) for band in (image.red, image.green, image.blue)))
        a = np.sort(to_pixel_matrix(tile).data, axis=0)
        b = np.sort(to_pixel_matrix(rotated).data, axis=0)
        assert np.array_equal(a, b)


class TestDataset:
    def matrix(self):
        return PixelMatrix(np.random.default_rng(0).random((4, 3)))

    def test_duplicate_identifier_rejected(self):
        items = [DatasetItem(self.matrix(), FOREST, "a"), DatasetItem(self.matrix(), NON_FOREST, "a")]
        with pytest.raises(DataError, match="duplicate"):
            LabeledDataset(items)

    def test_unknown_label_rejected(self):
        with pytest.raises(DataError, match="label"):
            LabeledDataset([DatasetItem(self.matrix(), "water", "a")])

    def test_require_both_labels(self):
        dataset = LabeledDataset([DatasetItem(self.matrix(), FOREST, "a")])
        with pytest.raises(DataError, match="missing label"):
            dataset.require_both_labels()


class TestBandFiles:
    def test_round_trip_through_16bit_bands(self, tmp_path):
        image = make_image(12, 12, seed=9)
        save_bands(tmp_path / "img", image)
        loaded = load_image(tmp_path / "img")
        assert np.abs(loaded.red - image.red).max() <= 0.5 / 2000 + 1e-12

    def test_missing_band_rejected(self, tmp_path):
        (tmp_path / "img").mkdir()
        with pytest.raises(DataError, match="missing red band"):
            load_image(tmp_path / "img")

    def test_missing_path_rejected(self, tmp_path):
        with pytest.raises(DataError):
            load_image(tmp_path / "nope.png")
