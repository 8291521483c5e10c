import math

import numpy as np
import pytest

from kickent.entanglement import (
    SchmidtSpectrum,
    reduced_density_oracle,
    schmidt_spectrum,
    von_neumann_entropy,
)
from kickent.errors import DegenerateStateError, DimensionError, DomainError


def _entropy_of(vec, da, db):
    return von_neumann_entropy(schmidt_spectrum(vec, da, db))


def test_product_state_has_zero_entropy():
    a = np.array([0.3, -0.7, 0.64])
    b = np.array([1.0, 2.0, -0.5, 0.25])
    vec = np.outer(a, b).reshape(-1)
    s = _entropy_of(vec, 3, 4)
    assert s == 0.0
    assert math.copysign(1.0, s) == 1.0   # never -0.0


def test_maximally_entangled_pair():
    vec = np.zeros(4)
    vec[0] = vec[3] = 1.0 / math.sqrt(2.0)
    spec = schmidt_spectrum(vec, 2, 2)
    assert np.allclose(spec.probs, [0.5, 0.5], atol=1e-15)
    assert abs(von_neumann_entropy(spec) - math.log(2.0)) < 1e-14


def test_frozen_two_level_entropy():
    # singular values 0.8 and 0.6 -> probabilities 0.64, 0.36
    mat = np.diag([0.8, 0.6])
    spec = schmidt_spectrum(mat.reshape(-1), 2, 2)
    assert np.allclose(spec.probs, [0.64, 0.36], atol=1e-15)
    assert abs(von_neumann_entropy(spec) - 0.6534181947937018) < 1e-14


def test_raw_norm_is_squared_l2():
    rng = np.random.default_rng(11)
    vec = rng.normal(size=12) + 1j * rng.normal(size=12)
    spec = schmidt_spectrum(vec, 3, 4)
    assert abs(spec.raw_norm - np.vdot(vec, vec).real) < 1e-12
    # renormalization happens on probs, not raw_norm
    assert abs(spec.probs.sum() - 1.0) < 1e-12


def test_probs_sorted_and_sized():
    rng = np.random.default_rng(5)
    for da, db in [(2, 2), (3, 7), (7, 3), (16, 5)]:
        vec = rng.normal(size=da * db) + 1j * rng.normal(size=da * db)
        spec = schmidt_spectrum(vec, da, db)
        assert spec.probs.shape == (min(da, db),)
        assert np.all(np.diff(spec.probs) <= 1e-15)
        assert abs(spec.probs.sum() - 1.0) < 1e-12


def test_matches_reduced_density_eigenvalues():
    rng = np.random.default_rng(23)
    for da, db in [(2, 3), (4, 4), (6, 11), (13, 5)]:
        for _ in range(4):
            vec = rng.normal(size=da * db) + 1j * rng.normal(size=da * db)
            spec = schmidt_spectrum(vec, da, db)
            rho = reduced_density_oracle(vec, da, db)
            evals = np.sort(np.linalg.eigvalsh(rho))[::-1]
            assert np.max(np.abs(evals[: spec.probs.size]
                                 - spec.probs)) < 1e-10


def test_swap_symmetry():
    rng = np.random.default_rng(31)
    for da, db in [(4, 4), (3, 9)]:
        vec = rng.normal(size=da * db) + 1j * rng.normal(size=da * db)
        p1 = schmidt_spectrum(vec, da, db).probs
        swapped = vec.reshape(da, db).T.reshape(-1)
        p2 = schmidt_spectrum(swapped, db, da).probs
        k = min(da, db)
        assert np.max(np.abs(p1[:k] - p2[:k])) < 1e-12


def test_local_unitary_invariance():
    rng = np.random.default_rng(47)
    da, db = 5, 8
    vec = rng.normal(size=da * db) + 1j * rng.normal(size=da * db)
    base = schmidt_spectrum(vec, da, db).probs
    for _ in range(3):
        u, _ = np.linalg.qr(rng.normal(size=(da, da))
                            + 1j * rng.normal(size=(da, da)))
        v, _ = np.linalg.qr(rng.normal(size=(db, db))
                            + 1j * rng.normal(size=(db, db)))
        rotated = (u @ vec.reshape(da, db) @ v.T).reshape(-1)
        probs = schmidt_spectrum(rotated, da, db).probs
        assert np.max(np.abs(probs - base)) < 1e-10


def test_entropy_bounds():
    rng = np.random.default_rng(59)
    for da, db in [(2, 5), (6, 6), (9, 4)]:
        for _ in range(5):
            vec = rng.normal(size=da * db) + 1j * rng.normal(size=da * db)
            s = _entropy_of(vec, da, db)
            assert 0.0 <= s <= math.log(min(da, db)) + 1e-12


def test_crop_keeps_spectrum():
    rng = np.random.default_rng(67)
    core = rng.normal(size=(4, 6))
    # embed in a larger matrix padded by rows/columns far below crop scale
    big = np.zeros((7, 9))
    big[:4, :6] = core
    big[5, :] = 1e-200
    big[:, 7] = 1e-200
    p_small = schmidt_spectrum(core.reshape(-1), 4, 6).probs
    p_big = schmidt_spectrum(big.reshape(-1), 7, 9).probs
    assert np.max(np.abs(p_big[:4] - p_small)) < 1e-12
    s_small = _entropy_of(core.reshape(-1), 4, 6)
    s_big = _entropy_of(big.reshape(-1), 7, 9)
    assert abs(s_big - s_small) < 1e-10


def test_p_floor_drops_negligible_weight():
    probs = np.array([1.0 - 1e-16, 1e-16])
    spec = SchmidtSpectrum(probs=probs, raw_norm=1.0)
    assert von_neumann_entropy(spec) < 1e-14


def test_effective_rank():
    mat = np.diag([0.9, 0.435889894354, 1e-8])
    spec = schmidt_spectrum(mat.reshape(-1), 3, 3)
    assert spec.effective_rank() == 2


def test_norm_floor_guard():
    vec = np.full(6, 1e-6)
    with pytest.raises(DegenerateStateError):
        schmidt_spectrum(vec, 2, 3)


def test_dimension_guards():
    vec = np.ones(6)
    with pytest.raises(DimensionError):
        schmidt_spectrum(vec, 2, 4)
    with pytest.raises(DimensionError):
        schmidt_spectrum(vec, 0, 6)
    with pytest.raises(DimensionError):
        reduced_density_oracle(vec, 3, 3)


def test_oracle_scale_guard():
    with pytest.raises(DomainError):
        reduced_density_oracle(np.ones(4_000_000), 2000, 2000)
