"""Test module for RigidTransform and apply_transform."""

import numpy as np
import pytest

from domain.exceptions import GeometryError, ValidationError
from domain.services.grid import apply_transform, build_lattice
from domain.services.sampling import RandomStreams, random_grid_function
from domain.services.seminorm import (
    build_weights,
    gagliardo_seminorm,
    holder_seminorm,
)
from domain.types.enums import TransformKind
from domain.types.grid_function import GridFunction
from domain.types.lattice import Lattice
from domain.types.params import FracParams
from domain.types.transforms import RigidTransform
from domain.types.weights import KernelWeights


@pytest.fixture
def random_planar(lattice_2d: Lattice) -> GridFunction:
    """Random smooth planar function."""
    return random_grid_function(lattice_2d, RandomStreams(7).generator("test"))


class TestRigidTransform:
    """Test class for RigidTransform."""

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"kind": TransformKind.SCALE, "factor": 0.0},
            {"kind": TransformKind.SCALE, "factor": -2.0},
            {"kind": TransformKind.ADD_CONSTANT, "constant": float("nan")},
            {"kind": TransformKind.TRANSLATE},
            {"kind": TransformKind.REFLECT_AXIS, "axis": -1},
            {"kind": TransformKind.PERMUTE_AXES, "permutation": (0, 0)},
        ],
    )
    def test_invalid_fields(self, kwargs: dict) -> None:
        """Test the kind-specific validation."""
        with pytest.raises(ValidationError):
            RigidTransform(**kwargs)

    def test_inverse(self) -> None:
        """Test the inverse of each parametrized kind."""
        assert RigidTransform.rotate90(1).inverse() == RigidTransform.rotate90(3)
        assert RigidTransform.scale(2.0).inverse() == RigidTransform.scale(0.5)
        assert RigidTransform.add_constant(1.5).inverse() == (
            RigidTransform.add_constant(-1.5)
        )
        assert RigidTransform.translate((0.5, -0.25)).inverse() == (
            RigidTransform.translate((-0.5, 0.25))
        )
        assert RigidTransform.permute_axes((1, 0)).inverse() == (
            RigidTransform.permute_axes((1, 0))
        )
        assert RigidTransform.negate().inverse() == RigidTransform.negate()

    def test_rotation_turns_are_reduced(self) -> None:
        """Test that quarter turns are taken modulo four."""
        assert RigidTransform.rotate90(5).turns == 1


class TestApplyTransform:
    """Test class for apply_transform."""

    def test_negate_and_add_constant(self, random_planar: GridFunction) -> None:
        """Test the value transformations, far field included."""
        negated = apply_transform(random_planar, RigidTransform.negate())
        shifted = apply_transform(random_planar, RigidTransform.add_constant(2.0))

        assert np.array_equal(negated.values, -random_planar.values)
        assert shifted.far_field == random_planar.far_field + 2.0

    def test_four_quarter_turns(self, random_planar: GridFunction) -> None:
        """Test that four quarter turns restore the function exactly."""
        rotated = random_planar
        for _ in range(4):
            rotated = apply_transform(rotated, RigidTransform.rotate90())

        assert np.array_equal(rotated.values, random_planar.values)

    def test_rotation_moves_nodes(self, lattice_2d: Lattice) -> None:
        """Test the pullback u(Ox) of a quarter turn."""
        u = GridFunction.from_callable(lattice_2d, lambda x: x[:, 0])
        rotated = apply_transform(u, RigidTransform.rotate90())

        expected = -lattice_2d.coordinates[:, 1]
        assert np.array_equal(rotated.values, expected)

    def test_reflection_is_involutive(self, random_planar: GridFunction) -> None:
        """Test that reflecting twice is the identity."""
        reflect = RigidTransform.reflect_axis(1)
        twice = apply_transform(apply_transform(random_planar, reflect), reflect)

        assert np.array_equal(twice.values, random_planar.values)

    def test_isometries_preserve_seminorms(
        self,
        random_planar: GridFunction,
        weights_2d: KernelWeights,
    ) -> None:
        """Test the invariance of both seminorms under the lattice symmetries."""
        gagliardo = gagliardo_seminorm(random_planar, weights_2d)
        holder, _ = holder_seminorm(random_planar)
        for transform in (
            RigidTransform.reflect_axis(0),
            RigidTransform.rotate90(1),
            RigidTransform.permute_axes((1, 0)),
            RigidTransform.negate(),
            RigidTransform.add_constant(3.0),
        ):
            image = apply_transform(random_planar, transform)
            assert gagliardo_seminorm(image, weights_2d) == pytest.approx(
                gagliardo, rel=1e-10
            )
            assert holder_seminorm(image)[0] == pytest.approx(holder, rel=1e-12)

    def test_translation_moves_a_bump(self, lattice_1d: Lattice) -> None:
        """Test the pullback u(x + a) of a bump away from the box edges."""
        u = GridFunction.from_callable(
            lattice_1d, lambda x: np.maximum(0.0, 1.0 - np.abs(x[:, 0]))
        )
        shifted = apply_transform(u, RigidTransform.translate((0.5,)))

        assert shifted.evaluate((0.0,)) == 0.5
        assert shifted.evaluate((-0.5,)) == 1.0
        assert shifted.evaluate((2.0,)) == 0.0

    def test_translation_round_trip_is_exact(self, lattice_2d: Lattice) -> None:
        """Test that a translation followed by its inverse restores the values."""
        u = GridFunction.from_callable(
            lattice_2d,
            lambda x: np.maximum(0.0, 0.5 - np.abs(x).sum(axis=1)),
        )
        shift = RigidTransform.translate((0.25, -0.25))
        back = apply_transform(apply_transform(u, shift), shift.inverse())

        assert np.array_equal(back.values, u.values)
        assert back.far_field == u.far_field

    def test_translation_dropping_values(self, lattice_1d: Lattice) -> None:
        """Test that values pushed off the lattice are refused."""
        u = GridFunction.from_callable(lattice_1d, lambda x: x[:, 0], far_field=9.0)

        with pytest.raises(GeometryError, match="far field"):
            apply_transform(u, RigidTransform.translate((0.5,)))

    def test_translation_off_lattice(self, lattice_1d: Lattice) -> None:
        """Test that translations must be lattice vectors."""
        u = GridFunction.constant(lattice_1d, 0.0)

        with pytest.raises(GeometryError):
            apply_transform(u, RigidTransform.translate((0.1,)))

    def test_rotation_needs_plane(self, lattice_1d: Lattice) -> None:
        """Test that quarter turns are refused on the line."""
        u = GridFunction.constant(lattice_1d, 0.0)

        with pytest.raises(GeometryError):
            apply_transform(u, RigidTransform.rotate90())

    def test_scaling(self, lattice_1d: Lattice) -> None:
        """Test that scaling moves the values onto the dilated lattice."""
        u = GridFunction.from_callable(lattice_1d, lambda x: x[:, 0], far_field=1.0)
        scaled = apply_transform(u, RigidTransform.scale(0.5))

        weight = 0.5 ** lattice_1d.params.scaling_exponent
        assert scaled.lattice.half_extent == 4.0
        assert scaled.lattice.spacing == 0.5
        assert np.allclose(scaled.values, weight * u.values)
        assert scaled.far_field == pytest.approx(weight)

    def test_scaling_must_fit_a_lattice(self, lattice_1d: Lattice) -> None:
        """Test that dilations leading to an invalid lattice are rejected."""
        u = GridFunction.constant(lattice_1d, 0.0)

        with pytest.raises(GeometryError):
            apply_transform(u, RigidTransform.scale(4.0))


class TestScalingStudy:
    """Test class for the seminorms under dilations."""

    @staticmethod
    def bump(x: np.ndarray) -> np.ndarray:
        """Smooth bump supported in the unit ball."""
        return np.maximum(0.0, 1.0 - x[:, 0] ** 2) ** 2

    def test_dilated_lattice_is_exact(self, lattice_1d: Lattice) -> None:
        """Test that moving values onto the dilated lattice keeps the seminorm."""
        u = GridFunction.from_callable(lattice_1d, self.bump)
        for factor in (0.5, 2.0):
            scaled = apply_transform(u, RigidTransform.scale(factor))

            expected = gagliardo_seminorm(u, build_weights(lattice_1d))
            assert gagliardo_seminorm(
                scaled, build_weights(scaled.lattice)
            ) == pytest.approx(expected, rel=1e-8)

    def test_resampled_dilation_converges(self, params_1d: FracParams) -> None:
        """Test that a resampled dilation approaches [u] as h shrinks."""
        factor = 2.0
        weight = factor**params_1d.scaling_exponent
        mismatches = []
        for spacing in (0.125, 0.0625, 0.03125):
            lattice = build_lattice(params_1d, 2.0, spacing)
            weights = build_weights(lattice)
            u = GridFunction.from_callable(lattice, self.bump)
            dilated = GridFunction.from_callable(
                lattice, lambda x: weight * self.bump(factor * x)
            )
            reference = gagliardo_seminorm(u, weights)
            mismatches.append(
                abs(gagliardo_seminorm(dilated, weights) - reference) / reference
            )

        assert mismatches[1] < mismatches[0]
        assert mismatches[2] < mismatches[1]
