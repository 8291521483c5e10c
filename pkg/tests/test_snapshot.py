import json

import numpy as np
import pytest

from kickent.classical import MapParams, ModeCutoff, new_state
from kickent.errors import ConfigError, DimensionError
from kickent.quantum import QuantumDims, QuantumState
from kickent.snapshot import (
    load_classical,
    load_quantum,
    read_metadata,
    save_classical,
    save_quantum,
)


def _classical(seed=0):
    rng = np.random.default_rng(seed)
    st = new_state(ModeCutoff(2, 3))
    st.coeffs[:] = rng.normal(size=st.coeffs.shape) \
        + 1j * rng.normal(size=st.coeffs.shape)
    st.time = 5
    st.norm0 = st.norm()
    st.last_step_loss = 0.125
    return st


def test_classical_round_trip(tmp_path):
    st = _classical()
    params = MapParams(k1=6.0, k2=5.0, b=0.05)
    base = tmp_path / "run"
    save_classical(base, st, params)
    back, p = load_classical(base)
    assert np.array_equal(back.coeffs, st.coeffs)
    assert back.time == 5
    assert back.norm0 == st.norm0
    assert back.last_step_loss == 0.125
    assert back.cutoff == st.cutoff
    assert p == params


def test_classical_without_params(tmp_path):
    base = tmp_path / "bare"
    save_classical(base, _classical())
    back, p = load_classical(base)
    assert p is None
    assert back.time == 5


def test_quantum_round_trip(tmp_path):
    rng = np.random.default_rng(1)
    amps = rng.normal(size=36) + 1j * rng.normal(size=36)
    st = QuantumState(amps=amps, dims=QuantumDims(6), time=9)
    base = tmp_path / "q"
    save_quantum(base, st, MapParams(1.0, 2.0, 0.3))
    back, p = load_quantum(base)
    assert np.array_equal(back.amps, amps)
    assert back.dims.n == 6
    assert back.time == 9
    assert p == MapParams(1.0, 2.0, 0.3)


def test_kind_mismatch(tmp_path):
    base = tmp_path / "x"
    save_classical(base, _classical())
    with pytest.raises(ConfigError):
        load_quantum(base)
    qbase = tmp_path / "y"
    save_quantum(qbase, QuantumState(np.ones(16, complex), QuantumDims(4)))
    with pytest.raises(ConfigError):
        load_classical(qbase)


def test_shape_mismatch(tmp_path):
    base = tmp_path / "bad"
    save_classical(base, _classical())
    # corrupt the sidecar so the array no longer matches the cutoff
    js = base.with_suffix(".json")
    meta = json.loads(js.read_text())
    meta["m_max"] = 4
    js.write_text(json.dumps(meta))
    with pytest.raises(DimensionError):
        load_classical(base)


def test_version_guard(tmp_path):
    base = tmp_path / "v"
    save_classical(base, _classical())
    js = base.with_suffix(".json")
    meta = json.loads(js.read_text())
    meta["version"] = 99
    js.write_text(json.dumps(meta))
    with pytest.raises(ConfigError):
        read_metadata(base)
