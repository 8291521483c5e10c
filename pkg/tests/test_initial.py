import math

import numpy as np
import pytest

from kickent.classical import ModeCutoff
from kickent.entanglement import schmidt_spectrum, von_neumann_entropy
from kickent.errors import DomainError
from kickent.initial import (
    GaussianSpec,
    TruncationWarning,
    classical_gaussian_coeffs,
    coherent_state,
    product_initial,
    sigma_for_dimension,
)

DEFAULT_CUTOFF = ModeCutoff(24, 40)


def test_gaussian_peak_value():
    st = classical_gaussian_coeffs(DEFAULT_CUTOFF, GaussianSpec(sigma=0.1))
    peak = st.coeffs[DEFAULT_CUTOFF.m_max, DEFAULT_CUTOFF.n_max,
                     DEFAULT_CUTOFF.m_max, DEFAULT_CUTOFF.n_max]
    # sqrt(8 pi sigma^2)^2 at the origin of both particles
    assert abs(peak - 8.0 * math.pi * 0.01) < 1e-14
    single = math.sqrt(8.0 * math.pi * 0.01)
    assert abs(single - 0.5013256549262001) < 1e-15


def test_gaussian_norm_near_unity():
    st = classical_gaussian_coeffs(DEFAULT_CUTOFF, GaussianSpec(sigma=0.1))
    # the wrapped Gaussian differs from the plane one at order
    # exp(-1/(8 sigma^2)), so unit norm holds only to ~1.5e-5 here
    assert abs(st.norm() - 1.0000149066682347) < 1e-12
    assert abs(st.norm() - 1.0) < 5e-5
    assert st.norm0 == st.norm()


def test_gaussian_symmetries():
    cut = ModeCutoff(6, 9)
    st = classical_gaussian_coeffs(cut, GaussianSpec(sigma=0.16))
    c = st.coeffs
    assert np.array_equal(c, c[::-1, :, :, :])
    assert np.array_equal(c, c[:, ::-1, :, :])
    assert np.array_equal(c, c.transpose(2, 3, 0, 1))
    assert np.all(c.imag == 0.0)
    assert np.all(c.real > 0.0)


def test_gaussian_is_product():
    st = classical_gaussian_coeffs(ModeCutoff(8, 12), GaussianSpec(sigma=0.12))
    dim = st.coeffs.shape[0] * st.coeffs.shape[1]
    s = von_neumann_entropy(schmidt_spectrum(st.coeffs.reshape(-1), dim, dim))
    assert s < 1e-12


def test_truncation_warning_fires_when_cutoff_is_tight():
    with pytest.warns(TruncationWarning):
        classical_gaussian_coeffs(ModeCutoff(2, 3), GaussianSpec(sigma=0.05))


def test_default_cutoff_is_quiet_at_default_sigma():
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("error", TruncationWarning)
        classical_gaussian_coeffs(DEFAULT_CUTOFF, GaussianSpec(sigma=0.1))


def test_coherent_state_norm_and_peak():
    for n in (8, 50):
        psi = coherent_state(n, 0.0, 0.0)
        assert abs(np.linalg.norm(psi) - 1.0) < 1e-14
        # the origin sits between grid points n-1 and 0
        top = set(np.argsort(np.abs(psi))[-2:].tolist())
        assert top == {0, n - 1}


def test_coherent_states_far_apart_nearly_orthogonal():
    n = 50
    a = coherent_state(n, 0.0, 0.0)
    b = coherent_state(n, 0.5, 0.5)
    assert abs(np.vdot(a, b)) < 1e-8


def test_coherent_momentum_boost_changes_phases_not_weights():
    # away from the antipode, where wrapped images interfere at ~1e-11,
    # the weight profile is independent of the momentum center
    n = 32
    a = np.abs(coherent_state(n, 0.25, 0.0))
    b = np.abs(coherent_state(n, 0.25, 0.3))
    mask = a > 1e-8
    assert mask.sum() > n // 2
    assert np.max(np.abs(a[mask] - b[mask])) < 1e-12


def test_product_initial_is_pure_product():
    n = 20
    st = product_initial(n)
    assert abs(st.norm() - 1.0) < 1e-14
    s = von_neumann_entropy(schmidt_spectrum(st.amps, n, n))
    assert s < 1e-12
    assert st.time == 0


def test_sigma_for_dimension():
    assert abs(sigma_for_dimension(25) - 0.2) < 1e-15
    with pytest.raises(DomainError):
        sigma_for_dimension(0)


def test_spec_domain():
    with pytest.raises(DomainError):
        GaussianSpec(sigma=0.0)
    with pytest.raises(DomainError):
        GaussianSpec(sigma=0.3)
    with pytest.raises(DomainError):
        coherent_state(7, 0.0, 0.0)
