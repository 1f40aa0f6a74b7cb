import numpy as np
import pytest

from proxhop import LocalSolver, griewank, lennard_jones, rastrigin
from proxhop.kernels import LARGE_VALUE

from conftest import assert_gradient_matches, central_difference_gradient


class TestRastrigin:
    def test_global_minimum(self):
        obj = rastrigin(2)
        assert obj.eval(np.zeros(2)) == 0.0
        assert obj.known_minimum[1] == 0.0
        np.testing.assert_array_equal(obj.known_minimum[0], np.zeros(2))

    def test_hand_value_1d(self):
        # x=0.5: 0.25 + 10*(1 - cos(pi)) = 0.25 + 20
        assert rastrigin(1).eval([0.5]) == pytest.approx(20.25, abs=1e-12)

    def test_gradient_at_origin_is_zero(self):
        np.testing.assert_array_equal(rastrigin(3).gradient(np.zeros(3)), np.zeros(3))

    def test_invalid_dimension(self):
        with pytest.raises(ValueError):
            rastrigin(0)

    def test_nonnegative_with_equality_only_at_origin(self, rng):
        obj = rastrigin(4)
        for _ in range(200):
            x = rng.uniform(-5.12, 5.12, 4)
            v = obj.eval(x)
            assert v >= 0.0
            if not np.any(x):
                assert v == 0.0
            else:
                assert v > 0.0

    def test_growth_envelope(self, rng):
        # ||x||^2 <= f(x) <= ||x||^2 + 20 d on every sample
        for d in (1, 3, 10):
            obj = rastrigin(d)
            for _ in range(100):
                x = rng.uniform(-20, 20, d)
                v = obj.eval(x)
                n2 = float(x @ x)
                assert n2 - 1e-9 <= v <= n2 + 20.0 * d + 1e-9

    def test_purity(self, rng):
        obj = rastrigin(5)
        x = rng.uniform(-5, 5, 5)
        assert obj.eval(x) == obj.eval(x.copy())
        np.testing.assert_array_equal(obj.gradient(x), obj.gradient(x.copy()))


class TestGriewank:
    def test_global_minimum(self):
        for d in (1, 2, 7):
            assert griewank(d).eval(np.zeros(d)) == 0.0

    def test_gradient_at_origin_is_zero(self):
        np.testing.assert_array_equal(griewank(4).gradient(np.zeros(4)), np.zeros(4))

    def test_gradient_at_reference_point(self):
        assert_gradient_matches(griewank(1), np.array([1.3]))

    def test_invalid_dimension(self):
        with pytest.raises(ValueError):
            griewank(0)

    def test_nonnegative(self, rng):
        obj = griewank(3)
        for _ in range(200):
            x = rng.uniform(-600, 600, 3)
            assert obj.eval(x) >= 0.0


class TestLennardJones:
    def test_pair_at_unit_distance(self):
        obj = lennard_jones(2)
        x = np.array([0.0, 0.0, 0.0, 1.0, 0.0, 0.0])
        assert obj.eval(x) == -1.0

    def test_equilateral_triangle(self):
        obj = lennard_jones(3)
        x = np.array([0, 0, 0, 1, 0, 0, 0.5, np.sqrt(3) / 2, 0.0])
        assert obj.eval(x) == pytest.approx(-3.0, abs=1e-12)
        # local-minimum confirmation: the solver does not move the value
        solver = LocalSolver(method="lbfgs", max_steps=100, grad_tolerance=1e-12)
        assert obj.eval(solver.solve(obj, x)) == pytest.approx(-3.0, abs=1e-10)

    def test_translation_invariance_exact(self):
        # integer coordinates + integer shift: the subtraction is exact,
        # so the energies are bit-identical
        obj = lennard_jones(2)
        x = np.array([0.0, 0.0, 0.0, 1.0, 2.0, 2.0])
        shifted = x + np.tile([5.0, 5.0, 5.0], 2)
        assert obj.eval(x) == obj.eval(shifted)

    def test_rigid_motion_and_permutation_invariance(self, rng):
        atoms = 5
        obj = lennard_jones(atoms)
        for _ in range(20):
            pos = rng.uniform(-2, 2, (atoms, 3))
            base = obj.eval(pos.reshape(-1))
            # random rotation via QR, random translation, random permutation
            q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
            moved = pos @ q.T + rng.uniform(-10, 10, 3)
            perm = rng.permutation(atoms)
            other = obj.eval(moved[perm].reshape(-1))
            assert other == pytest.approx(base, rel=1e-10)

    def test_coincident_atoms_sentinel(self):
        obj = lennard_jones(2)
        x = np.zeros(6)
        assert obj.eval(x) == LARGE_VALUE
        g = obj.gradient(x)
        assert np.all(np.isfinite(g))
        np.testing.assert_array_equal(g, np.zeros(6))

    def test_near_singular_gradient_finite(self):
        obj = lennard_jones(2)
        x = np.array([0, 0, 0, 1e-9, 0, 0])
        assert np.all(np.isfinite(obj.gradient(x)))
        assert np.isfinite(obj.eval(x))

    def test_too_few_atoms(self):
        with pytest.raises(ValueError):
            lennard_jones(1)


def _spread_lj_start(rng, atoms):
    # jittered cubic lattice keeps pair distances comfortably above the
    # clamp region so finite differences see the smooth branch
    side = int(np.ceil(atoms ** (1 / 3)))
    grid = np.array(
        [(i, j, k) for i in range(side) for j in range(side) for k in range(side)],
        dtype=float,
    )[:atoms]
    return (1.2 * grid + rng.uniform(-0.1, 0.1, (atoms, 3))).reshape(-1)


@pytest.mark.parametrize(
    "factory,d,sampler",
    [
        (rastrigin, 1, lambda rng, d: rng.uniform(-5, 5, d)),
        (rastrigin, 2, lambda rng, d: rng.uniform(-5, 5, d)),
        (rastrigin, 10, lambda rng, d: rng.uniform(-5, 5, d)),
        (griewank, 1, lambda rng, d: rng.uniform(-8, 8, d)),
        (griewank, 2, lambda rng, d: rng.uniform(-8, 8, d)),
        (griewank, 10, lambda rng, d: rng.uniform(-8, 8, d)),
    ],
)
def test_gradient_check_analytic_objectives(factory, d, sampler, rng):
    obj = factory(d)
    for _ in range(100):
        assert_gradient_matches(obj, sampler(rng, d))


@pytest.mark.parametrize("atoms", [2, 3, 4])
def test_gradient_check_lennard_jones(atoms, rng):
    obj = lennard_jones(atoms)
    for _ in range(100):
        assert_gradient_matches(obj, _spread_lj_start(rng, atoms))


def test_central_difference_oracle_self_check():
    # the oracle itself, sanity-checked on a function with a known gradient
    obj = rastrigin(2)
    x = np.array([0.3, -1.2])
    expected = 2 * x + 20 * np.pi * np.sin(2 * np.pi * x)
    np.testing.assert_allclose(central_difference_gradient(obj, x), expected, rtol=1e-6)
