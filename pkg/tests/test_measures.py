import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import bell_state, random_density, random_pure
from wmono.errors import DomainError
from wmono.lin import DensityMatrix, PureState
from wmono.measures import (ALPHA_2XD_MAX, ALPHA_TWO_QUBIT_MIN, RenyiOrder,
                            concurrence_pure, e_alpha_pair, f_alpha, negativity,
                            renyi_entropy, wootters_concurrence)
from wmono.wclass import reduced_pair

WINDOW_ALPHAS = np.linspace(ALPHA_TWO_QUBIT_MIN, ALPHA_2XD_MAX, 20)


def f_alpha_mp(x, alpha, digits=50):
    """High-precision reference for f_alpha with exact rational input."""
    with mpmath.workdps(digits):
        x, alpha = mpmath.mpf(x), mpmath.mpf(alpha)
        r = mpmath.sqrt(1 - x)
        lo, hi = (1 - r) / 2, (1 + r) / 2
        if alpha == 1:
            return -(lo * mpmath.log(lo, 2) + hi * mpmath.log(hi, 2))
        return mpmath.log(lo ** alpha + hi ** alpha, 2) / (1 - alpha)


def test_renyi_order_window_flags():
    assert RenyiOrder(0.9).in_2xd_window
    assert RenyiOrder((np.sqrt(7) - 1) / 2).in_2xd_window
    assert RenyiOrder((np.sqrt(13) - 1) / 2).in_2xd_window
    assert not RenyiOrder(0.8).in_2xd_window
    assert not RenyiOrder(1.31).in_2xd_window
    assert RenyiOrder(3.0).in_two_qubit_window
    assert ALPHA_TWO_QUBIT_MIN == pytest.approx(0.822876, abs=1e-6)
    assert ALPHA_2XD_MAX == pytest.approx(1.302776, abs=1e-6)
    with pytest.raises(DomainError):
        RenyiOrder(0.0)


def test_concurrence_pure_examples(paper):
    from wmono.wclass import make_wclass
    assert concurrence_pure(bell_state(), [1]) == pytest.approx(1, abs=1e-12)
    assert concurrence_pure(PureState(2, [0, 0, 1, 0]), [1]) == pytest.approx(0, abs=1e-12)
    closed = 2 * abs(paper.b[0]) * np.sqrt(sum(abs(x) ** 2 for x in paper.b[1:]))
    assert concurrence_pure(make_wclass(paper), [1]) == pytest.approx(closed, abs=1e-12)


def test_concurrence_pure_rejects_trivial_cut():
    with pytest.raises(DomainError):
        concurrence_pure(bell_state(), [1, 2])
    with pytest.raises(DomainError):
        concurrence_pure(bell_state(), [])


def test_negativity_examples(rng):
    assert negativity(bell_state().density(), [2]) == pytest.approx(1, abs=1e-12)
    mix = DensityMatrix((2, 2), np.diag([0.5, 0, 0, 0.5]))
    assert negativity(mix, [2]) == pytest.approx(0, abs=1e-12)
    a, b = random_density(rng, 1), random_density(rng, 1)
    c, d = random_density(rng, 1), random_density(rng, 1)
    sep = DensityMatrix((2, 2), 0.3 * np.kron(a.entries, b.entries) + 0.7 * np.kron(c.entries, d.entries))
    assert negativity(sep, [1]) == pytest.approx(0, abs=1e-12)


def test_negativity_equals_schmidt_concurrence(rng):
    # 2 x 4 pure state: both measures equal 2 s1 s2 from the Schmidt coefficients
    for _ in range(50):
        psi = random_pure(rng, 3)
        s = np.linalg.svd(psi.amplitudes.reshape(2, 4), compute_uv=False)
        assert negativity(psi, [1]) == pytest.approx(2 * s[0] * s[1], abs=1e-10)
        assert concurrence_pure(psi, [1]) == pytest.approx(2 * s[0] * s[1], abs=1e-10)


@pytest.mark.parametrize("num_qubits", [2, 3, 4])
def test_concurrence_equals_negativity_on_2xd(rng, num_qubits):
    for _ in range(333):
        psi = random_pure(rng, num_qubits)
        assert abs(concurrence_pure(psi, [1]) - negativity(psi, [1])) <= 1e-10


def test_wootters_examples(paper):
    assert wootters_concurrence(bell_state().density()) == pytest.approx(1, abs=1e-12)
    assert wootters_concurrence(DensityMatrix((2, 2), np.eye(4) / 4)) == pytest.approx(0, abs=1e-12)
    assert wootters_concurrence(reduced_pair(paper, 3)) == pytest.approx(2 * np.sqrt(2) / 15, abs=1e-12)
    with pytest.raises(DomainError):
        wootters_concurrence(DensityMatrix((2,), np.eye(2) / 2))


def test_wootters_matches_nonhermitian_eigen_route(rng):
    yy = np.kron([[0, -1j], [1j, 0]], [[0, -1j], [1j, 0]])
    for _ in range(50):
        rho = random_density(rng, 2)
        r = rho.entries @ yy @ rho.entries.conj() @ yy
        lam = np.sort(np.sqrt(np.abs(np.linalg.eigvals(r))))[::-1]
        expected = max(0.0, lam[0] - lam[1] - lam[2] - lam[3])
        assert wootters_concurrence(rho) == pytest.approx(expected, abs=1e-9)


def test_wootters_on_pure_states_equals_concurrence(rng):
    for _ in range(50):
        psi = random_pure(rng, 2)
        assert wootters_concurrence(psi.density()) == pytest.approx(concurrence_pure(psi, [1]), abs=1e-9)


def test_renyi_entropy_examples():
    half = DensityMatrix((2,), np.eye(2) / 2)
    for alpha in (0.5, 0.9, 1.0, 2.0, 5.0):
        assert renyi_entropy(half, alpha) == pytest.approx(1, abs=1e-12)
        assert renyi_entropy(bell_state().density(), alpha) == pytest.approx(0, abs=1e-12)
    skew = DensityMatrix((2,), np.diag([0.75, 0.25]))
    assert renyi_entropy(skew, 2) == pytest.approx(np.log2(8 / 5), abs=1e-12)
    assert renyi_entropy(skew, 2) == pytest.approx(0.678072, abs=1e-6)


def test_renyi_entropy_nonincreasing_in_alpha(rng):
    alphas = np.linspace(0.5, 3.0, 26)
    for _ in range(50):
        rho = random_density(rng, 2)
        values = [renyi_entropy(rho, a) for a in alphas]
        assert np.all(np.diff(values) <= 1e-12)


def test_renyi_entropy_limit_continuity(rng):
    for _ in range(20):
        rho = random_density(rng, 2)
        limit = renyi_entropy(rho, 1.0)
        for alpha in (1 - 1e-7, 1 + 1e-7):
            assert abs(renyi_entropy(rho, alpha) - limit) <= 1e-6
        # just outside the limit band the closed form takes over; the change
        # must be explained by the slope in alpha alone
        slope = abs(renyi_entropy(rho, 1.001) - renyi_entropy(rho, 0.999)) / 0.002
        for alpha in (1 - 1.01e-6, 1 + 1.01e-6):
            assert abs(renyi_entropy(rho, alpha) - limit) <= 1.1 * slope * 1.01e-6 + 1e-9


def test_f_alpha_endpoints():
    for alpha in list(WINDOW_ALPHAS) + [0.5, 2.0, 4.0]:
        assert f_alpha(0.0, alpha) == pytest.approx(0, abs=1e-12)
        assert f_alpha(1.0, alpha) == pytest.approx(1, abs=1e-12)


def test_f_alpha_binary_entropy_limit():
    expected = float(f_alpha_mp(mpmath.mpf(1) / 2, 1))
    assert expected == pytest.approx(0.600876, abs=1e-6)
    assert f_alpha(0.5, 1.0) == pytest.approx(expected, abs=1e-12)
    assert f_alpha(0.5, 1 + 1e-7) == pytest.approx(expected, abs=1e-12)


def test_f_alpha_against_high_precision(rng):
    for _ in range(200):
        x, alpha = rng.uniform(0, 1), rng.uniform(0.3, 4.0)
        assert f_alpha(x, alpha) == pytest.approx(float(f_alpha_mp(x, alpha)), abs=1e-10)


def test_f_alpha_domain():
    assert f_alpha(-1e-13, 0.9) == 0.0
    assert f_alpha(1 + 1e-13, 0.9) == pytest.approx(1, abs=1e-12)
    with pytest.raises(DomainError):
        f_alpha(-1e-6, 0.9)
    with pytest.raises(DomainError):
        f_alpha(1.1, 0.9)


def test_f_alpha_array_input():
    xs = np.array([0.0, 0.5, 1.0])
    assert np.allclose(f_alpha(xs, 2.0), [f_alpha(x, 2.0) for x in xs])


def test_f_alpha_monotone_and_concave_in_window():
    grid = np.linspace(0, 1, 1001)
    for alpha in WINDOW_ALPHAS:
        f = f_alpha(grid, alpha)
        assert np.min(np.diff(f)) >= -1e-10
        assert np.max(f[:-2] - 2 * f[1:-1] + f[2:]) <= 1e-8


@settings(max_examples=200, deadline=None)
@given(st.floats(0, 1), st.floats(0.3, 4.0), st.floats(0.3, 4.0))
def test_f_alpha_nonincreasing_in_alpha(x, a1, a2):
    lo, hi = sorted((a1, a2))
    assert f_alpha(x, hi) <= f_alpha(x, lo) + 1e-12


def test_e_alpha_pair_values():
    assert e_alpha_pair(1.0, 0.9) == pytest.approx(1, abs=1e-12)
    assert e_alpha_pair(0.0, 0.9) == 0
    for alpha in (0.85, 0.9, 1.2):
        r = np.sqrt(73 / 75)
        printed = np.log2(((1 - r) / 2) ** alpha + ((1 + r) / 2) ** alpha) / (1 - alpha)
        assert e_alpha_pair(2 / 75, alpha) == pytest.approx(printed, abs=1e-12)


def test_e_alpha_pair_windows():
    with pytest.raises(DomainError, match="2 x d"):
        e_alpha_pair(0.5, 0.8)
    with pytest.raises(DomainError):
        e_alpha_pair(0.5, 1.5)
    assert e_alpha_pair(0.5, 1.5, system="2x2") == pytest.approx(f_alpha(0.5, 1.5))
    with pytest.raises(DomainError):
        e_alpha_pair(0.5, 0.8, system="2x2")
    with pytest.raises(DomainError):
        e_alpha_pair(0.5, 0.9, system="3x3")


def test_two_qubit_renyi_matches_pure_state_entropy(rng):
    # for pure two-qubit states E_alpha = S_alpha(rho_A) = f_alpha(C^2)
    from wmono.lin import partial_trace
    for _ in range(30):
        psi = random_pure(rng, 2)
        c = concurrence_pure(psi, [1])
        red = partial_trace(psi.density(), [1])
        for alpha in (0.9, 1.0, 2.0):
            assert f_alpha(c ** 2, alpha) == pytest.approx(renyi_entropy(red, alpha), abs=1e-9)


@pytest.mark.parametrize("alpha", [1 - 1e-5, 1 - 1.1e-6, 1 + 1.1e-6, 1 + 1e-5])
def test_f_alpha_precise_next_to_limit_band(alpha):
    assert abs(f_alpha(1.0, alpha) - 1.0) <= 1e-14
    with mpmath.workdps(40):
        assert f_alpha(0.3, alpha) == pytest.approx(float(f_alpha_mp(0.3, alpha)), abs=1e-14)
