"""Quasi-static elastic equilibrium of the tendon-driven stack.

Edges act as linear springs about their neutral-fold rest lengths: slant
(mountain) edges are stiff because they guard the triangular facets, tendon
diagonals (valleys) are soft.  A commanded tendon contraction caps the
routed tendon length; lengths beyond the cap incur a one-sided quadratic
penalty (a taut tendon pulls, a slack one does nothing).  Equilibria are
minima of elastic energy plus penalty over the movable units' reduced
coordinates (height, twist, tilt 2-vector per unit), found with L-BFGS-B
driving the analytic-gradient kernel.

Everything here is deterministic: fixed summation order in the kernel,
fixed iteration schedule, no randomness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .errors import NonPositiveValue, NotConverged
from .geometry import SpatialFrame, UnitSpec
from .kinematics import (TENDON_COLUMN_OFFSET_DEG, UnitConfiguration,
                         StackConfiguration, columns_for_units, compose_bend_angle,
                         chain_frames, neutral_configuration, neutral_twist,
                         neutral_valley_length)
from .sizing import OrthosisDesign

#: Virtual fingertip marker: distance (mm) beyond the palm frame along its
#: normal, standing in for a motion-capture marker on the middle finger.
MARKER_OFFSET_MM = 80.0

#: Default facet-to-crease stiffness ratio.
DEFAULT_STIFFNESS_RATIO = 100.0

#: Default penalty weight as a multiple of the crease stiffness.
DEFAULT_PENALTY_FACTOR = 1e3

#: Axial height floor per unit as a fraction of its section height.  The
#: limb occupies the tube, so the rings cannot crush flat; without this
#: floor an extreme tendon pull prefers total axial collapse over bending.
DEFAULT_MIN_HEIGHT_FRACTION = 0.3

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class TendonCommand:
    """Commanded fractional shortening (0..1) of each tendon's neutral
    routed length, ordered tendon 1..6."""

    contraction: tuple

    def __post_init__(self):
        object.__setattr__(self, "contraction",
                           tuple(float(c) for c in self.contraction))
        if len(self.contraction) != 6:
            raise NonPositiveValue("a tendon command holds exactly 6 values")
        for c in self.contraction:
            if not 0.0 <= c <= 1.0:
                raise NonPositiveValue(f"contraction must lie in [0, 1], got {c}")

    @classmethod
    def zeros(cls) -> "TendonCommand":
        return cls((0.0,) * 6)

    @classmethod
    def uniform(cls, amount: float) -> "TendonCommand":
        return cls((amount,) * 6)

    @classmethod
    def single(cls, tendon: int, amount: float) -> "TendonCommand":
        if tendon not in (1, 2, 3, 4, 5, 6):
            raise NonPositiveValue(f"tendon index must be 1..6, got {tendon}")
        values = [0.0] * 6
        values[tendon - 1] = amount
        return cls(tuple(values))


@dataclass(frozen=True)
class SolveOptions:
    """Solver knobs.

    Convergence requires the projected gradient inf-norm (in a length-scaled
    metric where angle derivatives are divided by the hexagon radius, so all
    components are in N) to drop below energy_tolerance * crease_stiffness *
    (mean valley rest length).  penalty_weight defaults to 1e3 * crease
    stiffness.  Commands are approached in deterministic continuation steps
    no larger than max_command_step per tendon, which keeps each solve on
    the quasi-static branch connected to its seed.
    """

    energy_tolerance: float = 1e-8
    max_iterations: int = 5000
    penalty_weight: float | None = None
    seed_configuration: object | None = None
    max_command_step: float = 0.125

    def __post_init__(self):
        if not self.energy_tolerance > 0.0:
            raise NonPositiveValue("energy tolerance must be positive")
        if not self.max_iterations > 0:
            raise NonPositiveValue("max iterations must be positive")
        if self.penalty_weight is not None and not self.penalty_weight > 0.0:
            raise NonPositiveValue("penalty weight must be positive")
        if not 0.0 < self.max_command_step <= 1.0:
            raise NonPositiveValue("max command step must lie in (0, 1]")


@dataclass
class ElasticModel:
    """Bar-and-hinge springs for a stack of units.

    ``units``/``heights`` are ordered palm to forearm; ``locked`` holds the
    0-based indices of units frozen at their neutral fold (the collars, plus
    section 2 when pinned).  Rest lengths come from each unit's neutral fold
    at its section height.  The remaining fields are precomputed kernel
    inputs.
    """

    units: tuple
    heights: tuple
    crease_stiffness: float
    facet_stiffness: float
    locked: frozenset
    design: OrthosisDesign | None = None
    min_height_fraction: float = DEFAULT_MIN_HEIGHT_FRACTION

    def __post_init__(self):
        if not self.crease_stiffness > 0.0:
            raise NonPositiveValue("crease stiffness must be positive")
        if self.facet_stiffness < self.crease_stiffness:
            raise NonPositiveValue(
                "facet stiffness must be at least the crease stiffness")
        if not 0.0 <= self.min_height_fraction < 1.0:
            raise NonPositiveValue("min height fraction must lie in [0, 1)")
        n = len(self.units)
        if len(self.heights) != n:
            raise NonPositiveValue("one height per unit required")
        self.n_units = n
        self.movable = tuple(i for i in range(n) if i not in self.locked)
        if not self.movable:
            raise NonPositiveValue("at least one unit must stay movable")
        self.neutral_twists = tuple(neutral_twist(u, h)
                                    for u, h in zip(self.units, self.heights))
        self.mountain_rest = np.array([u.b for u in self.units])
        self.valley_rest = np.array([neutral_valley_length(u, h)
                                     for u, h in zip(self.units, self.heights)])
        self.neutral_tendon_length = float(self.valley_rest.sum())
        self.length_scale = float(self.valley_rest.mean())

        mv = list(self.movable)
        self._a1 = np.ascontiguousarray([self.units[i].a1 for i in mv])
        self._a2 = np.ascontiguousarray([self.units[i].a2 for i in mv])
        self._shift = np.ascontiguousarray(
            [self.units[i].column_shift for i in mv], dtype=np.int64)
        self._b_rest = np.ascontiguousarray([self.units[i].b for i in mv])
        self._d_rest = np.ascontiguousarray([self.valley_rest[i] for i in mv])
        cols = columns_for_units(self.units)
        self._cols = np.ascontiguousarray(cols[:, mv], dtype=np.int64)
        locked_sum = float(sum(self.valley_rest[i] for i in self.locked))
        self._l_base = np.full(6, locked_sum)
        cos_tab, sin_tab = kernels.hexagon_tables(TENDON_COLUMN_OFFSET_DEG)
        self._cos_tab = np.ascontiguousarray(cos_tab)
        self._sin_tab = np.ascontiguousarray(sin_tab)

        # Length-scaled optimizer metric: angle coordinates are multiplied by
        # the unit's top radius so every scaled coordinate is in mm and every
        # scaled gradient component in N.
        scale = np.ones(4 * len(mv))
        lower = np.empty(4 * len(mv))
        upper = np.empty(4 * len(mv))
        for slot, i in enumerate(mv):
            a2 = self.units[i].a2
            scale[4 * slot + 1: 4 * slot + 4] = a2
            lower[4 * slot] = self.min_height_fraction * self.heights[i]
            upper[4 * slot] = 3.0 * self.units[i].b
            lower[4 * slot + 1] = -math.pi * a2
            upper[4 * slot + 1] = math.pi * a2
            lower[4 * slot + 2: 4 * slot + 4] = -0.5 * math.pi * a2
            upper[4 * slot + 2: 4 * slot + 4] = 0.5 * math.pi * a2
        self._scale = scale
        self._lower = lower
        self._upper = upper

    @property
    def n_parameters(self) -> int:
        return 4 * len(self.movable)

    def neutral_parameters(self) -> np.ndarray:
        x = np.zeros(self.n_parameters)
        for slot, i in enumerate(self.movable):
            x[4 * slot] = self.heights[i]
            x[4 * slot + 1] = math.radians(self.neutral_twists[i])
        return x

    def neutral_unit_configurations(self) -> tuple:
        return tuple(neutral_configuration(u, h)
                     for u, h in zip(self.units, self.heights))


def build_elastic_model(design: OrthosisDesign, crease_stiffness: float = 1.0,
                        facet_stiffness: float | None = None,
                        pin_section2: bool = False,
                        min_height_fraction: float = DEFAULT_MIN_HEIGHT_FRACTION
                        ) -> ElasticModel:
    """Elastic model of a five-unit design.

    Collar sections 1 and 5 are locked; ``pin_section2`` additionally locks
    section 2 (it barely moves on the palm in practice, and this exposes the
    choice).  Default stiffnesses: crease 1 N/mm, facet 100x.
    """
    if facet_stiffness is None:
        facet_stiffness = DEFAULT_STIFFNESS_RATIO * crease_stiffness
    locked = {0, 4}
    if pin_section2:
        locked.add(1)
    return ElasticModel(tuple(design.units), tuple(design.section_heights),
                        float(crease_stiffness), float(facet_stiffness),
                        frozenset(locked), design=design,
                        min_height_fraction=min_height_fraction)


def build_unit_model(spec: UnitSpec, height: float, crease_stiffness: float = 1.0,
                     facet_stiffness: float | None = None,
                     min_height_fraction: float = DEFAULT_MIN_HEIGHT_FRACTION
                     ) -> ElasticModel:
    """Single free unit; used for analysis, oracles, and benchmarks."""
    if facet_stiffness is None:
        facet_stiffness = DEFAULT_STIFFNESS_RATIO * crease_stiffness
    return ElasticModel((spec,), (float(height),), float(crease_stiffness),
                        float(facet_stiffness), frozenset(),
                        min_height_fraction=min_height_fraction)


# --- parameter vector <-> configurations -------------------------------------------


def parameters_from_configurations(model: ElasticModel, configs) -> np.ndarray:
    """Pack movable units' poses into the optimizer vector
    (height mm, twist rad, tilt_x rad, tilt_y rad per unit)."""
    x = np.zeros(model.n_parameters)
    for slot, i in enumerate(model.movable):
        c = configs[i]
        beta = math.radians(c.bend_angle)
        phi = math.radians(c.bend_azimuth)
        x[4 * slot] = c.height
        x[4 * slot + 1] = math.radians(c.twist)
        x[4 * slot + 2] = beta * math.cos(phi)
        x[4 * slot + 3] = beta * math.sin(phi)
    return x


def configurations_from_parameters(model: ElasticModel, x) -> tuple:
    """Unpack the optimizer vector; locked units get their neutral pose."""
    configs = list(model.neutral_unit_configurations())
    for slot, i in enumerate(model.movable):
        h = float(x[4 * slot])
        twist = math.degrees(float(x[4 * slot + 1]))
        u = float(x[4 * slot + 2])
        v = float(x[4 * slot + 3])
        beta = math.hypot(u, v)
        beta = math.remainder(beta, 2.0 * math.pi)
        phi = math.atan2(v, u) if beta > 1e-15 else 0.0
        if beta < 0.0:
            beta, phi = -beta, phi + math.pi
        configs[i] = UnitConfiguration(max(h, 0.0), twist,
                                       math.degrees(math.atan2(math.sin(phi),
                                                               math.cos(phi))),
                                       math.degrees(beta))
    return tuple(configs)


@dataclass(frozen=True)
class SolveResult:
    """Equilibrium solve outcome.

    ``configuration`` is a StackConfiguration for five-unit models and None
    otherwise; ``unit_configurations`` always holds the per-unit poses.
    ``energy`` is the objective (elastic + penalty) in N*mm.
    """

    unit_configurations: tuple
    configuration: StackConfiguration | None
    energy: float
    converged: bool
    gradient_norm: float
    iterations: int
    tendon_lengths: np.ndarray


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    marker: np.ndarray
    beta: float
    phi: float
    tendon_lengths: np.ndarray


@dataclass(frozen=True)
class Trajectory:
    """Time series of quasi-static equilibria."""

    samples: tuple

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        for a, b in zip(self.samples, self.samples[1:]):
            if not b.t > a.t:
                raise NonPositiveValue("trajectory timestamps must strictly increase")

    @property
    def duration(self) -> float:
        return self.samples[-1].t if self.samples else 0.0

    def max_bend(self) -> tuple:
        """(largest bend angle, its time)."""
        best = max(self.samples, key=lambda s: s.beta)
        return best.beta, best.t


# --- objective ----------------------------------------------------------------------


def _objective(model: ElasticModel, l_cmd: np.ndarray, weight: float):
    grad = np.zeros(model.n_parameters)
    tendons = np.zeros(6)

    def fun(x):
        f = kernels.stack_objective(
            np.ascontiguousarray(x, dtype=np.float64),
            model._a1, model._a2, model._shift, model._b_rest, model._d_rest,
            model.facet_stiffness, model.crease_stiffness, model._cols,
            model._l_base, l_cmd, weight, model._cos_tab, model._sin_tab,
            grad, tendons)
        return f, grad.copy()

    return fun, tendons


def total_energy(model: ElasticModel, parameters) -> tuple:
    """Elastic energy (N*mm) and its analytic gradient, no tendon penalty.

    ``parameters`` is the optimizer vector: (height mm, twist rad, tilt_x,
    tilt_y) per movable unit.
    """
    x = np.ascontiguousarray(parameters, dtype=np.float64)
    if x.shape != (model.n_parameters,):
        raise ValueError(f"expected {model.n_parameters} parameters, got {x.shape}")
    fun, _ = _objective(model, np.full(6, np.inf), 0.0)
    return fun(x)


def tendon_command_lengths(model: ElasticModel, command: TendonCommand) -> np.ndarray:
    """Commanded routed length per tendon (mm)."""
    c = np.asarray(command.contraction)
    return (1.0 - c) * model.neutral_tendon_length


def _gradient_tolerance(model: ElasticModel, options: SolveOptions) -> float:
    return options.energy_tolerance * model.crease_stiffness * model.length_scale


def _projected_gradient_norm(z, g, lower, upper) -> float:
    """Inf-norm of the gradient with components pointing into an active
    bound zeroed out."""
    masked = np.where((z <= lower) & (g > 0.0), 0.0,
                      np.where((z >= upper) & (g < 0.0), 0.0, g))
    return float(np.max(np.abs(masked))) if masked.size else 0.0


def _lbfgs_stage(fun, z, bounds, lower, upper, gtol, budget):
    """L-BFGS-B with memory-reset restarts until the gradient target, an
    energy stall, or the iteration budget."""
    spent = 0
    f_prev = np.inf
    stalls = 0
    while spent < budget:
        res = minimize(fun, z, jac=True, method="L-BFGS-B", bounds=bounds,
                       options={"maxiter": budget - spent, "ftol": 0.0,
                                "gtol": gtol, "maxcor": 20, "maxls": 100})
        spent += max(int(res.nit), 1)
        z = np.asarray(res.x, dtype=np.float64)
        f, g = fun(z)
        if _projected_gradient_norm(z, g, lower, upper) <= gtol:
            break
        if f >= f_prev:
            stalls += 1
            if stalls >= 2:
                break
        else:
            stalls = 0
        f_prev = f
    return z, spent


def _newton_polish(fun, z, lower, upper, gtol, max_steps=25):
    """Damped Newton steps on the free coordinates.

    L-BFGS-B stops when objective differences fall below float resolution;
    Newton steps on the analytic gradient (finite-difference Hessian) push
    the stationarity residual several orders further, which pins equilibria
    tightly enough for the symmetry and monotonicity guarantees.
    """
    f, g = fun(z)
    gnorm = _projected_gradient_norm(z, g, lower, upper)
    damping = 1e-8
    for _ in range(max_steps):
        if gnorm <= gtol:
            break
        free = ~(((z <= lower) & (g > 0.0)) | ((z >= upper) & (g < 0.0)))
        idx = np.flatnonzero(free)
        if idx.size == 0:
            break
        hstep = 1e-5
        hess = np.empty((idx.size, idx.size))
        for col, i in enumerate(idx):
            zp = z.copy()
            zp[i] += hstep
            _, gp = fun(zp)
            zm = z.copy()
            zm[i] -= hstep
            _, gm = fun(zm)
            hess[:, col] = (gp[idx] - gm[idx]) / (2.0 * hstep)
        hess = 0.5 * (hess + hess.T)
        step = None
        trace = float(np.trace(hess)) / idx.size
        lam = damping * max(abs(trace), 1.0)
        for _ in range(12):
            try:
                step = np.linalg.solve(hess + lam * np.eye(idx.size), -g[idx])
                break
            except np.linalg.LinAlgError:
                lam *= 100.0
        if step is None:
            break
        z_try = z.copy()
        z_try[idx] += step
        np.clip(z_try, lower, upper, out=z_try)
        f_try, g_try = fun(z_try)
        g_try_norm = _projected_gradient_norm(z_try, g_try, lower, upper)
        if g_try_norm < gnorm:
            z, g, gnorm = z_try, g_try, g_try_norm
            damping = max(damping * 0.1, 1e-10)
        else:
            damping *= 100.0
            if damping > 1e6:
                break
    return z, gnorm


def _solve_vector(model: ElasticModel, command_from: np.ndarray,
                  command_to: np.ndarray, options: SolveOptions,
                  x0: np.ndarray):
    """Follow the quasi-static branch from one command to another.

    The contraction vector is ramped in at most ``max_command_step`` sized
    increments; each increment is minimised with warm starts and the final
    state is Newton-polished to the gradient tolerance.
    """
    weight = options.penalty_weight
    if weight is None:
        weight = DEFAULT_PENALTY_FACTOR * model.crease_stiffness
    gtol = _gradient_tolerance(model, options)
    scale = model._scale
    lower, upper = model._lower, model._upper
    bounds = list(zip(lower, upper))

    delta = float(np.max(np.abs(command_to - command_from)))
    n_sub = max(1, int(math.ceil(delta / options.max_command_step - 1e-12)))

    z = np.asarray(x0, dtype=np.float64) * scale
    np.clip(z, lower, upper, out=z)
    spent = 0
    fun = None
    tendons = None
    for k in range(1, n_sub + 1):
        lam = k / n_sub
        cvec = (1.0 - lam) * command_from + lam * command_to
        l_cmd = np.ascontiguousarray((1.0 - cvec) * model.neutral_tendon_length)
        raw, tendons = _objective(model, l_cmd, weight)

        def fun(zv, _raw=raw):
            f, g = _raw(zv / scale)
            return f, g / scale

        z, nit = _lbfgs_stage(fun, z, bounds, lower, upper, gtol,
                              max(options.max_iterations - spent, 1))
        spent += nit
    z, gnorm = _newton_polish(fun, z, lower, upper, gtol)
    f_final, _ = fun(z)
    converged = gnorm <= gtol and spent < options.max_iterations
    return z / scale, f_final, tendons.copy(), gnorm, converged, spent


def _seed_vector(model: ElasticModel, options: SolveOptions) -> np.ndarray:
    seed = options.seed_configuration
    if seed is None:
        return model.neutral_parameters()
    if isinstance(seed, StackConfiguration):
        return parameters_from_configurations(model, seed.unit_configs)
    if isinstance(seed, np.ndarray):
        return np.asarray(seed, dtype=np.float64).copy()
    return parameters_from_configurations(model, tuple(seed))


def _result(model: ElasticModel, x, f, tendons, gnorm, converged, nit,
            base_pose: SpatialFrame | None = None) -> SolveResult:
    configs = configurations_from_parameters(model, x)
    stack = None
    if model.n_units == 5:
        pose = base_pose if base_pose is not None else \
            SpatialFrame.axis_aligned(model.units[4].a1)
        stack = StackConfiguration(configs, pose)
    return SolveResult(configs, stack, f, converged, gnorm, nit, tendons)


def solve_equilibrium(model: ElasticModel, command: TendonCommand,
                      options: SolveOptions | None = None) -> SolveResult:
    """Minimise elastic energy plus tendon penalty from the seed (default:
    the neutral fold), ramping the command in from zero so the returned
    state lies on the quasi-static branch.  Always returns a result;
    ``converged`` reports whether the gradient threshold was met."""
    options = options or SolveOptions()
    x0 = _seed_vector(model, options)
    target = np.asarray(command.contraction)
    x, f, tendons, gnorm, converged, nit = _solve_vector(
        model, np.zeros(6), target, options, x0)
    return _result(model, x, f, tendons, gnorm, converged, nit)


# --- trajectories -------------------------------------------------------------------


def _sample(model: ElasticModel, x, tendons, t: float,
            base_pose: SpatialFrame) -> TrajectorySample:
    configs = configurations_from_parameters(model, x)
    frames = chain_frames(model.units, configs, base_pose)
    palm = frames[-1]
    marker = palm.center + MARKER_OFFSET_MM * palm.normal
    beta, phi = compose_bend_angle(configs, base_pose)
    return TrajectorySample(float(t), marker, beta, phi, tendons)


def _run_commands(model: ElasticModel, times, commands,
                  options: SolveOptions | None) -> Trajectory:
    options = options or SolveOptions()
    base_pose = SpatialFrame.axis_aligned(model.units[-1].a1)
    x = _seed_vector(model, options)
    previous = np.zeros(6)
    samples = []
    for t, command in zip(times, commands):
        target = np.asarray(command.contraction)
        x, f, tendons, gnorm, converged, nit = _solve_vector(
            model, previous, target, options, x)
        if not converged:
            raise NotConverged(
                f"step at t={t:.3f}s stopped at gradient norm {gnorm:.3e}")
        previous = target
        samples.append(_sample(model, x, tendons, t, base_pose))
    return Trajectory(tuple(samples))


def sweep_single_tendon(model: ElasticModel, tendon: int, steps: int,
                        max_contraction: float = 1.0,
                        options: SolveOptions | None = None) -> Trajectory:
    """Triangle pull of one tendon: 0 to max over 7 s, back to 0 over 7 s,
    sampled at ``steps`` evenly spaced times with warm-started solves."""
    if steps < 2:
        raise NonPositiveValue("a sweep needs at least 2 steps")
    if not 0.0 < max_contraction <= 1.0:
        raise NonPositiveValue("max contraction must lie in (0, 1]")
    times = [14.0 * j / (steps - 1) for j in range(steps)]
    commands = []
    for t in times:
        level = t / 7.0 if t <= 7.0 else 2.0 - t / 7.0
        level = min(max(level, 0.0), 1.0)
        commands.append(TendonCommand.single(tendon, max_contraction * level))
    return _run_commands(model, times, commands, options)


def run_schedule(model: ElasticModel, schedule, samples_per_second: float,
                 options: SolveOptions | None = None) -> Trajectory:
    """Quasi-static playback of a tendon schedule with warm starts."""
    if not samples_per_second > 0.0:
        raise NonPositiveValue("sample rate must be positive")
    n = int(round(schedule.duration * samples_per_second))
    times = [j / samples_per_second for j in range(n + 1)]
    commands = [TendonCommand(schedule.values_at(t)) for t in times]
    return _run_commands(model, times, commands, options)
