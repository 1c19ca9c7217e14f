import numpy as np
import pytest

from kwrist.equilibrium import build_elastic_model, build_unit_model
from kwrist.kernels import BACKEND, backend_module, hexagon_tables
from kwrist import make_unit_spec

from conftest import uniform_tko_design
from oracles import unit_edges


def _kernel_args(model, x, l_cmd, weight=1000.0):
    x = np.ascontiguousarray(x, dtype=np.float64)
    return (x, model._a1, model._a2, model._shift, model._b_rest,
            model._d_rest, model.facet_stiffness, model.crease_stiffness,
            model._cols, model._l_base, np.ascontiguousarray(l_cmd), weight,
            model._cos_tab, model._sin_tab)


def _random_states(model, n, seed=0):
    rng = np.random.default_rng(seed)
    x0 = model.neutral_parameters()
    spread = np.tile([3.0, 0.3, 0.2, 0.2], len(model.movable))
    return [x0 + rng.normal(scale=spread) for _ in range(n)]


@pytest.fixture(scope="module")
def stack_model():
    return build_elastic_model(uniform_tko_design())


def test_active_backend_reported():
    assert BACKEND in ("compiled", "python")


def test_backends_agree_bitwise(stack_model):
    try:
        compiled = backend_module("compiled")
    except ImportError:
        pytest.skip("compiled kernel not built")
    reference = backend_module("python")
    m = stack_model
    rng = np.random.default_rng(3)
    for x in _random_states(m, 100, seed=5):
        l_cmd = rng.uniform(0.2, 1.0, 6) * m.neutral_tendon_length
        args = _kernel_args(m, x, l_cmd)
        g1, t1 = np.zeros(m.n_parameters), np.zeros(6)
        g2, t2 = np.zeros(m.n_parameters), np.zeros(6)
        f1 = compiled.stack_objective(*args, g1, t1)
        f2 = reference.stack_objective(*args, g2, t2)
        assert f1 == f2
        assert np.array_equal(g1, g2)
        assert np.array_equal(t1, t2)


def test_energy_matches_independent_edge_arithmetic():
    # cross-check against the vectorised rotation-matrix oracle
    spec = make_unit_spec("TKO", 32.0, 32.0, 32.0, 60.0, "CW")
    model = build_unit_model(spec, 26.0)
    ref = backend_module("python")
    rng = np.random.default_rng(11)
    for _ in range(50):
        h = rng.uniform(8.0, 30.0)
        th = rng.uniform(-1.5, 1.5)
        beta = rng.uniform(0.0, 0.6)
        phi = rng.uniform(0.0, 2 * np.pi)
        x = np.array([h, th, beta * np.cos(phi), beta * np.sin(phi)])
        g, t = np.zeros(4), np.zeros(6)
        f = ref.stack_objective(*_kernel_args(model, x, np.full(6, 1e9), 0.0),
                                g, t)
        mountain, valley = unit_edges(spec, h, th, beta, phi)
        want = (0.5 * model.facet_stiffness * ((mountain - spec.b) ** 2).sum()
                + 0.5 * model.crease_stiffness
                * ((valley - model.valley_rest[0]) ** 2).sum())
        assert f == pytest.approx(want, rel=1e-12)
        np.testing.assert_allclose(np.sort(t), np.sort(valley), rtol=1e-12)


def test_tilt_series_continuous_at_threshold(stack_model):
    # the Rodrigues coefficients switch to series below 1e-4 rad; energies
    # on both sides of the switch must agree to near machine precision
    m = stack_model
    ref = backend_module("python")
    x = m.neutral_parameters()
    values = []
    for tilt in (1e-4 - 1e-9, 1e-4 + 1e-9):
        xt = x.copy()
        xt[2] = tilt
        g, t = np.zeros(m.n_parameters), np.zeros(6)
        f = ref.stack_objective(*_kernel_args(m, xt, np.full(6, 1e9), 0.0),
                                g, t)
        values.append(f)
    assert values[0] == pytest.approx(values[1], rel=1e-7)


def test_gradient_smooth_through_zero_tilt(stack_model):
    # tilt parameterisation is regular at beta = 0: central differences
    # straddling zero match the analytic gradient
    m = stack_model
    ref = backend_module("python")
    x = m.neutral_parameters()
    x[0] -= 4.0  # compress so the state is away from rest
    g, t = np.zeros(m.n_parameters), np.zeros(6)
    args = _kernel_args(m, x, np.full(6, 1e9), 0.0)
    ref.stack_objective(*args, g, t)
    eps = 1e-7
    for i in (2, 3):
        xp, xm = x.copy(), x.copy()
        xp[i] += eps
        xm[i] -= eps
        gp, tp = np.zeros(m.n_parameters), np.zeros(6)
        fp = ref.stack_objective(*_kernel_args(m, xp, np.full(6, 1e9), 0.0),
                                 gp, tp)
        fm = ref.stack_objective(*_kernel_args(m, xm, np.full(6, 1e9), 0.0),
                                 gp, tp)
        fd = (fp - fm) / (2 * eps)
        assert g[i] == pytest.approx(fd, abs=1e-6)


def test_hexagon_tables_offset():
    cos_tab, sin_tab = hexagon_tables(0.0)
    np.testing.assert_allclose(cos_tab[0], 1.0, atol=1e-15)
    np.testing.assert_allclose(sin_tab[3], 0.0, atol=1e-12)
    cos_off, sin_off = hexagon_tables(60.0)
    np.testing.assert_allclose(cos_off, np.roll(cos_tab, -1), atol=1e-12)
