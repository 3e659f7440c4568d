import numpy as np
import pytest

from earshot.confidence import GpiResult, centroid, confidence_level, euclidean, gpi


class TestConfidenceLevel:
    @pytest.mark.parametrize("g,level", [
        (-0.3, 5), (-1e-12, 5),
        (0.0, 4), (0.3, 4),
        (0.5, 3), (0.7, 3),
        (1.0, 2), (1.2, 2),
        (1.5, 1), (1.9, 1),
        (2.0, 0), (2.5, 0), (100.0, 0),
    ])
    def test_boundary_family(self, g, level):
        assert confidence_level(g) == level

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            confidence_level(float("nan"))
        with pytest.raises(ValueError):
            confidence_level(float("inf"))


class TestDistances:
    def test_euclidean_known(self):
        assert euclidean([0, 0], [3, 4]) == 5.0

    def test_euclidean_mismatch(self):
        with pytest.raises(ValueError):
            euclidean([0, 0], [1, 2, 3])

    def test_centroid(self):
        assert np.allclose(centroid([[0, 0], [4, 0]]), [2, 0])

    def test_centroid_needs_points(self):
        with pytest.raises(ValueError):
            centroid(np.empty((0, 2)))


class TestGpi:
    def test_toy_case(self):
        # centroid (2,0); nearest to a=(6,0) is (4,0) at distance 2 from c;
        # g = 4 - 2 = 2 -> level 0 (unrecognized)
        result = gpi([6.0, 0.0], [[0.0, 0.0], [4.0, 0.0]], "toy")
        assert result.g == pytest.approx(2.0)
        assert result.level == 0
        assert result.class_name == "toy"
        assert result.centroid_distance == pytest.approx(4.0)
        assert result.nearest_distance == pytest.approx(2.0)

    def test_query_inside_cluster_is_negative(self):
        points = [[0.0, 0.0], [4.0, 0.0]]
        result = gpi([2.0, 0.0], points)  # exactly on the centroid
        assert result.g < 0
        assert result.level == 5

    def test_query_on_a_stored_instance(self):
        points = [[0.0, 0.0], [4.0, 0.0]]
        result = gpi([4.0, 0.0], points)
        assert result.g == pytest.approx(0.0)
        assert result.level == 4

    def test_single_instance_class(self):
        # centroid == the instance, so g == d(a, c)
        result = gpi([3.0, 4.0], [[0.0, 0.0]])
        assert result.g == pytest.approx(5.0)
        assert result.level == 0

    def test_nearest_tie_uses_earliest_stored(self):
        points = [[1.0, 0.0], [-1.0, 0.0]]
        result = gpi([0.0, 0.0], points)
        # both stored points are equidistant; the tie is internal but the
        # distances involved are symmetric, so g is well defined
        assert result.g == pytest.approx(-1.0)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            gpi([1.0, 2.0], [[1.0, 2.0, 3.0]])

    def test_no_instances(self):
        with pytest.raises(ValueError):
            gpi([1.0], np.empty((0, 1)))

    def test_result_is_frozen(self):
        result = gpi([1.0], [[0.0]])
        assert isinstance(result, GpiResult)
        with pytest.raises(AttributeError):
            result.g = 0.0
