"""Tests for labelled constellations and constellation pairs."""

import numpy as np
import pytest

from src.utils.constellation import (
    Constellation,
    ConstellationError,
    ConstellationPair,
    average_energy,
    build_conventional_pair,
    build_proposed_pair,
    cross_demap,
    demap_exact,
    energy_per_bit,
    hamming,
    inter_neighbors,
    is_gray,
    map_bits,
    min_inter_distance,
    min_intra_distance,
    offset_pair,
    qam16_base,
    qpsk_base,
    zero_constellation,
)

SQRT2 = float(np.sqrt(2.0))


class TestBaseConstellations:
    """Labelled QPSK and 16QAM."""

    def test_qpsk_labels_follow_listed_order(self):
        c = qpsk_base()
        assert c.points == (1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j)
        assert c.labels == ("00", "10", "01", "11")

    def test_qam16_labels_are_axis_gray(self):
        c = qam16_base()
        assert c.order == 16
        assert map_bits(c, "1111") == 1 + 1j
        assert map_bits(c, "0000") == -3 - 3j
        assert map_bits(c, "1011") == 3 + 1j
        assert map_bits(c, "0111") == -1 + 1j

    @pytest.mark.parametrize("build", [qpsk_base, qam16_base])
    def test_base_constellations_are_gray(self, build):
        assert is_gray(build())

    def test_non_gray_qpsk_labeling_is_rejected(self):
        # 1+j and 1-j are neighbours but their labels differ in both bits
        c = Constellation(
            points=(1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j),
            labels=("00", "11", "01", "10"),
        )
        assert not is_gray(c)

    def test_average_energies(self):
        assert average_energy(qpsk_base()) == pytest.approx(2.0)
        assert average_energy(qam16_base()) == pytest.approx(10.0)

    def test_zero_constellation(self):
        c = zero_constellation()
        assert c.order == 1
        assert c.bits_per_symbol == 0
        assert map_bits(c, "") == 0j


class TestConstellationValidation:
    """Constructor invariants."""

    def test_order_must_be_power_of_two(self):
        with pytest.raises(ConstellationError, match="power of two"):
            Constellation(points=(1, 2, 3), labels=("00", "01", "10"))

    def test_labels_must_be_a_bijection(self):
        with pytest.raises(ConstellationError, match="bijection"):
            Constellation(points=(1, -1), labels=("0", "0"))

    def test_points_must_be_distinct(self):
        with pytest.raises(ConstellationError, match="distinct"):
            Constellation(points=(1, 1), labels=("0", "1"))

    def test_near_duplicate_points_are_rejected(self):
        with pytest.raises(ConstellationError, match="distinct"):
            Constellation(points=(1, -1, 1j, 1 + 1e-14j), labels=("00", "01", "10", "11"))

    def test_label_width_is_checked(self):
        with pytest.raises(ConstellationError):
            Constellation(points=(1, -1), labels=("00", "01"))

    def test_pair_rejects_shared_points(self):
        base = qpsk_base()
        with pytest.raises(ConstellationError, match="disjoint"):
            ConstellationPair(a=base, b=base.shifted(2 + 0j), name="overlap")


class TestMapping:
    """map_bits, demap_exact and cross_demap."""

    def test_map_then_demap_is_identity(self, prop_16qam_pair):
        for c in (prop_16qam_pair.a, prop_16qam_pair.b):
            for label in c.labels:
                assert demap_exact(c, map_bits(c, label)) == label

    def test_map_rejects_wrong_width(self):
        with pytest.raises(ConstellationError):
            map_bits(qpsk_base(), "101")

    def test_demap_rejects_foreign_point(self):
        with pytest.raises(ConstellationError, match="not a point"):
            demap_exact(qpsk_base(), 0.5 + 0.5j)

    def test_nearest_index_breaks_ties_to_lowest_index(self):
        assert qpsk_base().nearest_index(0j) == 0

    def test_cross_demap_on_proposed_pair(self, prop_16qam_pair):
        a, b = prop_16qam_pair.a, prop_16qam_pair.b
        # Four A points tie around B(1111); the lowest index wins
        assert cross_demap(b, a, "1111") == "1111"
        assert cross_demap(a, b, "0000") == "0101"
        assert cross_demap(b, a, "0000") == "0000"
        assert cross_demap(a, b, "1111") == "1111"

    def test_cross_demap_needs_equal_label_width(self):
        with pytest.raises(ConstellationError):
            cross_demap(qpsk_base(), qam16_base(), "00")


class TestPairs:
    """Conventional and proposed pairs."""

    def test_conventional_qpsk_outer_points(self, conv_qpsk_pair):
        r = 1 + np.sqrt(3.0)
        np.testing.assert_allclose(conv_qpsk_pair.b.array, [-r, -r * 1j, r, r * 1j])
        assert conv_qpsk_pair.b.labels == conv_qpsk_pair.a.labels

    def test_conventional_16qam_outer_points(self, conv_16qam_pair):
        b = conv_16qam_pair.b
        assert b.points[:2] == (-3 + 5j, -3 - 5j)
        assert b.points[8:10] == (5 - 3j, -5 - 3j)
        # Integer coordinates, so the squared norm is exact
        assert all(p.real ** 2 + p.imag ** 2 >= 26 for p in b.points)

    def test_proposed_pair_is_offset_base(self, prop_qpsk_pair):
        base = qpsk_base()
        np.testing.assert_allclose(prop_qpsk_pair.a.array, base.array + (0.5 + 0.5j))
        np.testing.assert_allclose(prop_qpsk_pair.b.array, base.array - (0.5 + 0.5j))
        assert prop_qpsk_pair.a.labels == base.labels == prop_qpsk_pair.b.labels

    def test_pair_names(self):
        assert build_conventional_pair(4).name == "conv-qpsk"
        assert build_conventional_pair(16).name == "conv-16qam"
        assert build_proposed_pair(4).name == "prop-qpsk"
        assert build_proposed_pair(16).name == "prop-16qam"

    @pytest.mark.parametrize("build", [build_conventional_pair, build_proposed_pair])
    def test_unsupported_order(self, build):
        with pytest.raises(ConstellationError, match="Unsupported"):
            build(8)

    def test_offset_pair_rejects_zero_offset(self):
        with pytest.raises(ConstellationError):
            offset_pair(qpsk_base(), 0j)

    def test_offset_pair_rejects_real_unit_offset(self):
        # -1+-j shifted right and 1+-j shifted left both land on +-j
        with pytest.raises(ConstellationError, match="disjoint"):
            offset_pair(qpsk_base(), 1 + 0j)

    def test_offset_pair_with_custom_offset(self):
        pair = offset_pair(qam16_base(), 0.5 + 0j, name="shift-half")
        assert pair.name == "shift-half"
        assert min_inter_distance(pair) == pytest.approx(1.0)


class TestDistancesAndEnergy:
    """Distance factors and energy per bit of the shipped pairs."""

    @pytest.mark.parametrize("order,p,expected", [
        (4, 10, 1.8928),
        (16, 18, 4.444),
    ])
    def test_conventional_energy_per_bit(self, order, p, expected):
        assert energy_per_bit(build_conventional_pair(order), 4, 2, p) == pytest.approx(expected, abs=1e-3)

    @pytest.mark.parametrize("order,p,expected", [
        (4, 10, 1.0),
        (16, 18, 2.3333),
    ])
    def test_proposed_energy_per_bit(self, order, p, expected):
        assert energy_per_bit(build_proposed_pair(order), 4, 2, p) == pytest.approx(expected, abs=1e-3)

    def test_energy_per_bit_rejects_zero_bits(self, prop_qpsk_pair):
        with pytest.raises(ConstellationError):
            energy_per_bit(prop_qpsk_pair, 4, 2, 0)

    @pytest.mark.parametrize("order,b_intra", [(4, (1 + np.sqrt(3.0)) * SQRT2), (16, 2.0)])
    def test_conventional_distances(self, order, b_intra):
        pair = build_conventional_pair(order)
        assert min_intra_distance(pair.a) == pytest.approx(2.0, abs=1e-9)
        assert min_intra_distance(pair.b) == pytest.approx(b_intra, abs=1e-9)
        assert min_inter_distance(pair) == pytest.approx(2.0, abs=1e-9)

    @pytest.mark.parametrize("order", [4, 16])
    def test_proposed_distances(self, order):
        pair = build_proposed_pair(order)
        assert min_intra_distance(pair.a) == pytest.approx(2.0, abs=1e-9)
        assert min_intra_distance(pair.b) == pytest.approx(2.0, abs=1e-9)
        assert min_inter_distance(pair) == pytest.approx(SQRT2, abs=1e-9)

    @pytest.mark.parametrize("build", [qpsk_base, qam16_base])
    def test_intra_distance_is_finite(self, build):
        assert np.isfinite(min_intra_distance(build()))
        assert min_intra_distance(build()) == pytest.approx(2.0, abs=1e-12)

    @pytest.mark.parametrize("factor", [0.5, 3.0])
    def test_energy_per_bit_scales_quadratically(self, prop_16qam_pair, factor):
        scaled = ConstellationPair(
            a=prop_16qam_pair.a.scaled(factor),
            b=prop_16qam_pair.b.scaled(factor),
            name="scaled",
        )
        base = energy_per_bit(prop_16qam_pair, 4, 2, 18)
        assert energy_per_bit(scaled, 4, 2, 18) == pytest.approx(factor ** 2 * base)
        assert min_intra_distance(scaled.a) == pytest.approx(2.0 * factor)

    def test_intra_distance_needs_two_points(self):
        with pytest.raises(ConstellationError):
            min_intra_distance(zero_constellation())


class TestInterNeighbors:
    """Nearest points of the other constellation."""

    def test_proposed_16qam_corner_has_four_neighbors(self, prop_16qam_pair):
        got = inter_neighbors(prop_16qam_pair, 1.5 + 1.5j, mode="a")
        assert sorted(got, key=lambda z: (z.real, z.imag)) == [
            0.5 + 0.5j, 0.5 + 2.5j, 2.5 + 0.5j, 2.5 + 2.5j,
        ]

    def test_conventional_16qam_corner_has_two_neighbors(self, conv_16qam_pair):
        got = inter_neighbors(conv_16qam_pair, 3 + 3j, mode="a")
        assert sorted(got, key=lambda z: (z.real, z.imag)) == [3 + 5j, 5 + 3j]

    def test_point_must_belong_to_its_mode(self, prop_16qam_pair):
        with pytest.raises(ConstellationError):
            inter_neighbors(prop_16qam_pair, 1.5 + 1.5j, mode="b")


class TestTables:

    def test_constellation_table(self):
        lines = qpsk_base().to_table().splitlines()
        assert lines[0] == "# QPSK"
        assert lines[1] == "label\tre\tim"
        assert lines[2] == "00\t1\t1"
        assert len(lines) == 6

    def test_pair_table_has_both_modes(self, prop_qpsk_pair):
        text = prop_qpsk_pair.to_table()
        assert "M_A" in text and "M_B" in text
        assert "00\t1.5\t1.5" in text
        assert "00\t0.5\t0.5" in text


def test_hamming():
    assert hamming("1011", "1111") == 1
    assert hamming("0000", "1111") == 4
    assert hamming("", "") == 0
