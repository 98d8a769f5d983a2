import math

import numpy as np
import pytest
from pydantic import ValidationError

from aniso_swarm.coeffs.cutoff import eval  # noqa: A004
from aniso_swarm.coeffs.models import CoefficientSpec, ExpShifted, ExpSum, Linear
from aniso_swarm.dynamics import (
    DormandPrince,
    Euler,
    NeighborMethod,
    ParticleState,
    SimConfig,
    Termination,
    init_circle,
    init_line,
    rhs,
    simulate,
    step,
    tile_periodically,
    velocities,
)
from aniso_swarm.dynamics.cells import CellGrid, brute_force_pairs
from aniso_swarm.errors import CoincidentParticlesError
from aniso_swarm.field import ForcePair, wrap_displacement
from aniso_swarm.linestab.ansatz import LineAnsatz, line_positions


def _linear_pair(r_cutoff: float, epsilon: float = 0.0) -> ForcePair:
    return ForcePair(
        f_s=CoefficientSpec(family=Linear(a=-0.2, b=0.1), r_cutoff=r_cutoff, epsilon=epsilon),
        f_l=CoefficientSpec(family=Linear(a=-3.0, b=0.1), r_cutoff=r_cutoff, epsilon=epsilon),
    )


def _close_pair_state() -> ParticleState:
    return ParticleState(positions=np.array([[0.5, 0.45], [0.5, 0.55]]))


def _circular_gaps(y: np.ndarray) -> np.ndarray:
    """Gaps between consecutive coordinates on the unit circle, including the wrap-around gap."""
    ordered = np.sort(y)
    return np.diff(np.append(ordered, ordered[0] + 1.0))


class TestParticleState:
    def test_positions_read_only(self, two_particles):
        """Test positions cannot be modified in place."""
        with pytest.raises(ValueError):
            two_particles.positions[0, 0] = 0.1

    def test_outside_domain_rejected(self):
        """Test coordinates must lie in [0, delta)."""
        with pytest.raises(ValidationError) as excinfo:
            ParticleState(positions=np.array([[0.5, 1.0], [0.1, 0.1]]))
        assert "[0, 1.0)" in str(excinfo.value)

    def test_single_particle_rejected(self):
        """Test at least two particles are needed."""
        with pytest.raises(ValidationError) as excinfo:
            ParticleState(positions=np.array([[0.5, 0.5]]))
        assert "At least two particles" in str(excinfo.value)

    def test_wrapped(self):
        """Test the wrapping constructor maps coordinates into the domain."""
        state = ParticleState.wrapped(np.array([[1.25, -0.25], [0.5, 2.0]]))
        np.testing.assert_array_equal(state.positions, [[0.25, 0.75], [0.5, 0.0]])


class TestCellGrid:
    def test_every_particle_in_one_cell(self, random_states):
        """Test the cell index covers each particle exactly once."""
        state = random_states(300, seed=1)
        grid = CellGrid(state.positions, 0.1, 1.0)
        assert grid.cell_size >= 0.1
        assert sorted(grid.order.tolist()) == list(range(300))
        assert grid.counts.sum() == 300

    def test_small_grid_offsets_deduplicated(self):
        """Test two cells per side visit each neighbor cell once."""
        grid = CellGrid(np.array([[0.1, 0.1], [0.9, 0.9]]), 0.5, 1.0)
        assert grid.cells_per_side == 2
        assert len(grid.neighbor_offsets()) == 4

    def test_candidates_cover_close_pairs(self, random_states):
        """Test every pair within R_c is a cell-list candidate."""
        state = random_states(150, seed=4)
        j, k = CellGrid(state.positions, 0.2, 1.0).candidate_pairs()
        candidates = set(zip(j.tolist(), k.tolist()))
        bj, bk = brute_force_pairs(150)
        d = state.positions[bj] - state.positions[bk]
        d -= np.floor(d + 0.5)
        close = np.hypot(d[:, 0], d[:, 1]) < 0.2
        assert set(zip(bj[close].tolist(), bk[close].tolist())) <= candidates


class TestVelocities:
    def test_two_particles(self, two_particles, canonical_field, exp_linear_pair):
        """Test two particles 0.4 apart move apart along s with equal speed."""
        config = SimConfig(pair=exp_linear_pair, field=canonical_field)
        v = rhs(two_particles, config)
        f_s, _ = eval(exp_linear_pair.f_s, 0.4)
        np.testing.assert_allclose(v, [[0.0, -f_s * 0.4 / 2], [0.0, f_s * 0.4 / 2]], rtol=1e-12, atol=1e-300)

    def test_far_apart(self, canonical_field, linear_pair):
        """Test particles further apart than R_c do not move."""
        state = ParticleState(positions=np.array([[0.1, 0.1], [0.6, 0.6], [0.1, 0.6]]))
        np.testing.assert_array_equal(rhs(state, SimConfig(pair=linear_pair, field=canonical_field)), 0.0)

    def test_vertical_line_is_steady(self, canonical_field, exp_linear_pair):
        """Test three equally spaced particles on a vertical line are at rest."""
        state = ParticleState(positions=np.array([[0.5, 0.0], [0.5, 1 / 3], [0.5, 2 / 3]]))
        v = rhs(state, SimConfig(pair=exp_linear_pair, field=canonical_field))
        assert np.max(np.abs(v)) < 1e-15

    @pytest.mark.parametrize("r_cutoff", [0.1, 0.3, 0.5])
    def test_cell_list_matches_brute_force(self, random_states, canonical_field, r_cutoff):
        """Test both neighbor methods agree bit for bit."""
        pair = _linear_pair(r_cutoff)
        field = canonical_field.rotated(0.3)
        for seed in range(20):
            positions = random_states(200, seed).positions
            brute = velocities(positions, field, pair, NeighborMethod.BRUTE_FORCE)
            cells = velocities(positions, field, pair, NeighborMethod.CELL_LIST)
            np.testing.assert_array_equal(cells, brute)

    def test_action_reaction(self, random_states, canonical_field, exp_pair):
        """Test the velocities sum to zero."""
        for seed in range(5):
            v = velocities(random_states(100, seed).positions, canonical_field, exp_pair)
            assert np.max(np.abs(v.sum(axis=0))) < 1e-12

    def test_coincident_particles(self, canonical_field, linear_pair):
        """Test coincident particles are reported by index."""
        state = ParticleState(positions=np.array([[0.2, 0.2], [0.7, 0.7], [0.2, 0.2]]))
        with pytest.raises(CoincidentParticlesError) as excinfo:
            rhs(state, SimConfig(pair=linear_pair, field=canonical_field))
        assert excinfo.value.pair == (0, 2)


class TestStep:
    def test_euler_step(self, two_particles, canonical_field, exp_linear_pair):
        """Test one Euler step moves each particle by dt times its velocity."""
        config = SimConfig(pair=exp_linear_pair, field=canonical_field, integrator=Euler(dt=0.1))
        v = rhs(two_particles, config)
        moved = step(two_particles, config)
        np.testing.assert_array_equal(moved.positions, two_particles.positions + 0.1 * v)
        assert moved.time == pytest.approx(0.1)

    def test_fixed_point(self, canonical_field, linear_pair):
        """Test a state at rest only advances in time."""
        state = ParticleState(positions=np.array([[0.1, 0.1], [0.6, 0.6]]))
        moved = step(state, SimConfig(pair=linear_pair, field=canonical_field, integrator=Euler(dt=0.01)))
        np.testing.assert_array_equal(moved.positions, state.positions)
        assert moved.time == pytest.approx(0.01)

    def test_euler_first_order(self, canonical_field, linear_pair):
        """Test one step of dt and two steps of dt/2 differ by O(dt^2)."""
        state = _close_pair_state()

        def difference(dt: float) -> float:
            full = step(state, SimConfig(pair=linear_pair, field=canonical_field, integrator=Euler(dt=dt)))
            half_config = SimConfig(pair=linear_pair, field=canonical_field, integrator=Euler(dt=dt / 2))
            halves = step(step(state, half_config), half_config)
            return float(np.max(np.abs(full.positions - halves.positions)))

        for dt in (0.2, 0.1, 0.05):
            assert 3.5 <= difference(dt) / difference(dt / 2) <= 4.5

    def test_center_of_mass(self, random_states, canonical_field, exp_pair):
        """Test an unwrapped Euler step keeps the center of mass."""
        state = random_states(80, seed=3)
        config = SimConfig(pair=exp_pair, field=canonical_field, integrator=Euler(dt=1e-2))
        shadow = state.positions + 1e-2 * rhs(state, config)
        np.testing.assert_allclose(shadow.sum(axis=0), state.positions.sum(axis=0), rtol=0, atol=1e-12)

    def test_dormand_prince_step_wraps(self, canonical_field, linear_pair):
        """Test an adaptive step keeps positions inside the domain."""
        state = ParticleState(positions=np.array([[0.5, 0.999], [0.5, 0.899]]))
        moved = step(state, SimConfig(pair=linear_pair, field=canonical_field, integrator=DormandPrince(dt_init=0.5)))
        assert moved.time > 0
        assert np.all(moved.positions >= 0) and np.all(moved.positions < 1)


class TestSimulate:
    def test_stationary_start(self, canonical_field, linear_pair):
        """Test a state at rest terminates before the first step."""
        state = ParticleState(positions=np.array([[0.1, 0.1], [0.6, 0.6]]))
        result = simulate(state, SimConfig(pair=linear_pair, field=canonical_field))
        assert result.termination is Termination.STATIONARY
        assert result.steps == 0
        assert result.final is state
        assert len(result.snapshots) == 1
        assert result.snapshots[0] is state

    def test_time_exhausted(self, canonical_field, linear_pair):
        """Test the run stops at t_max with a snapshot per cadence."""
        config = SimConfig(
            pair=linear_pair,
            field=canonical_field,
            integrator=Euler(dt=1 / 64),
            t_max=0.125,
            stationary_tol=0.0,
            snapshot_every=0.0625,
        )
        seen = []
        result = simulate(_close_pair_state(), config, on_snapshot=seen.append)
        assert result.termination is Termination.TIME_EXHAUSTED
        assert result.final.time == 0.125
        assert result.steps == 8
        assert [s.time for s in result.snapshots] == [0.0, 0.0625, 0.125]
        assert [s.time for s in seen] == [0.0, 0.0625, 0.125]

    def test_dormand_prince_matches_fine_euler(self, canonical_field, linear_pair):
        """Test the adaptive integrator against Euler with dt = 1e-5."""
        state = _close_pair_state()
        adaptive = simulate(
            state,
            SimConfig(
                pair=linear_pair,
                field=canonical_field,
                integrator=DormandPrince(abs_tol=1e-12, rel_tol=1e-10),
                t_max=0.1,
                stationary_tol=0.0,
            ),
        )
        fine = simulate(
            state,
            SimConfig(
                pair=linear_pair, field=canonical_field, integrator=Euler(dt=1e-5), t_max=0.1, stationary_tol=0.0
            ),
        )
        assert adaptive.final.time == pytest.approx(0.1)
        np.testing.assert_allclose(adaptive.final.positions, fine.final.positions, rtol=0, atol=1e-6)

    def test_reproducible(self, canonical_field, exp_pair):
        """Test identical inputs give identical trajectories."""
        config = SimConfig(pair=exp_pair, field=canonical_field, integrator=Euler(dt=1e-3), t_max=0.05)
        first = simulate(init_circle(50, radius=0.05), config)
        second = simulate(init_circle(50, radius=0.05), config)
        np.testing.assert_array_equal(first.final.positions, second.final.positions)

    @pytest.mark.slow
    def test_exponential_pattern_is_vertical_line(self, canonical_field):
        """Test the circle relaxes to a single vertical line for exponential coefficients."""
        pair = ForcePair(
            f_s=CoefficientSpec(family=ExpShifted(c=0.1, e_s=100.0), r_cutoff=0.5, cutoff_mode="shift_then_blend"),
            f_l=CoefficientSpec(
                family=ExpSum(c1=0.13, c2=-0.03, e1=100.0, e2=10.0), r_cutoff=0.5, cutoff_mode="shift_then_blend"
            ),
        )
        config = SimConfig(pair=pair, field=canonical_field, integrator=DormandPrince(), t_max=2000.0)
        result = simulate(init_circle(600), config)
        assert result.termination is Termination.STATIONARY
        positions = result.final.positions
        assert np.max(np.abs(positions[:, 0] - 0.5)) < 5e-3
        gaps = _circular_gaps(positions[:, 1])
        assert 1 - gaps.max() > 0.95
        assert np.all(np.abs(gaps - 1 / 600) < 0.25 / 600)

    @pytest.mark.slow
    def test_linear_pattern_forms_clusters(self, canonical_field, linear_pair):
        """Test the circle collapses to several clusters on a vertical line for linear coefficients."""
        config = SimConfig(pair=linear_pair, field=canonical_field, integrator=DormandPrince(), t_max=2000.0)
        positions = simulate(init_circle(600), config).final.positions
        assert np.max(np.abs(positions[:, 0] - 0.5)) < 5e-3
        assert _circular_gaps(positions[:, 1]).max() > 5 / 600


class TestInitialData:
    def test_circle(self):
        """Test four points at right angles around the center."""
        state = init_circle(4, center=(0.5, 0.5), radius=0.005)
        np.testing.assert_allclose(
            state.positions, [[0.505, 0.5], [0.5, 0.505], [0.495, 0.5], [0.5, 0.495]], rtol=0, atol=1e-15
        )

    def test_circle_center_of_mass(self):
        """Test the default circle is centered."""
        state = init_circle(600)
        np.testing.assert_allclose(state.positions.mean(axis=0), [0.5, 0.5], rtol=0, atol=1e-12)

    def test_circle_validation(self):
        """Test degenerate circles are rejected."""
        with pytest.raises(ValueError) as excinfo:
            init_circle(1)
        assert "At least two particles" in str(excinfo.value)
        with pytest.raises(ValueError) as excinfo:
            init_circle(10, radius=0.0)
        assert "radius must be positive" in str(excinfo.value)

    def test_tiles(self):
        """Test tiling replicates the state into every cell of the larger domain."""
        state = tile_periodically(init_circle(10, radius=0.1), 3)
        assert state.n_particles == 90
        assert state.domain_size == 3.0
        np.testing.assert_allclose(state.positions.mean(axis=0), [1.5, 1.5], atol=1e-12)

    def test_line_without_jitter(self):
        """Test zero jitter reproduces the ansatz."""
        ansatz = LineAnsatz(n=20, theta=math.pi / 2)
        np.testing.assert_array_equal(init_line(ansatz).positions, line_positions(ansatz))

    def test_line_jitter_is_seeded(self):
        """Test the same seed reproduces the same perturbation and a new seed changes it."""
        ansatz = LineAnsatz(n=100, theta=math.pi / 2)
        first = init_line(ansatz, jitter=1e-4, seed=42).positions
        np.testing.assert_array_equal(first, init_line(ansatz, jitter=1e-4, seed=42).positions)
        assert not np.array_equal(first, init_line(ansatz, jitter=1e-4, seed=43).positions)
        deviation = wrap_displacement(first - line_positions(ansatz), 1.0)
        assert np.max(np.abs(deviation)) <= 1e-4 + 1e-15
