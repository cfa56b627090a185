import json
from pathlib import Path

import numpy as np
import pytest

from cqexp import channel_from_dict, load_channel, save_channel
from cqexp.errors import InvalidChannelSpec

from conftest import random_channel

CHANNELS_DIR = Path(__file__).resolve().parent.parent / "channels"


def test_roundtrip(rng, tmp_path):
    ch = random_channel(3, 2, rng)
    path = tmp_path / "ch.json"
    save_channel(ch, path)
    back = load_channel(path)
    assert back.alphabet == ch.alphabet
    assert np.allclose(back.outputs, ch.outputs, atol=1e-12)


def test_stochastic_shorthand():
    ch = channel_from_dict({"cqspec": 1, "stochastic_matrix": [[0.9, 0.1], [0.1, 0.9]]})
    assert ch.size == 2 and ch.dim == 2
    assert np.allclose(ch.outputs[0], np.diag([0.9, 0.1]), atol=1e-12)
    assert ch.is_classical()


def test_bundled_examples_parse():
    for name in ("bsc01.json", "noiseless_bit.json", "pure_pair.json"):
        ch = load_channel(CHANNELS_DIR / name)
        assert ch.size == 2

    pure = load_channel(CHANNELS_DIR / "pure_pair.json")
    assert pure.alphabet == ("z", "x")
    assert np.allclose(pure.outputs[1], np.array([[0.5, 0.5], [0.5, 0.5]]), atol=1e-12)


def test_missing_version_rejected():
    with pytest.raises(InvalidChannelSpec):
        channel_from_dict({"stochastic_matrix": [[1.0]]})
    with pytest.raises(InvalidChannelSpec):
        channel_from_dict({"cqspec": 2, "stochastic_matrix": [[1.0]]})


def test_bad_json_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(InvalidChannelSpec):
        load_channel(path)


def test_missing_file_rejected(tmp_path):
    with pytest.raises(InvalidChannelSpec):
        load_channel(tmp_path / "nope.json")


def test_non_hermitian_rejected():
    doc = {
        "cqspec": 1,
        "dim": 2,
        "outputs": [[[[0.5, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]],
    }
    with pytest.raises(InvalidChannelSpec):
        channel_from_dict(doc)


def test_wrong_trace_rejected():
    doc = {
        "cqspec": 1,
        "dim": 2,
        "outputs": [[[[0.9, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.3, 0.0]]]],
    }
    with pytest.raises(InvalidChannelSpec):
        channel_from_dict(doc)


def test_negative_eigenvalue_rejected():
    doc = {
        "cqspec": 1,
        "dim": 2,
        "outputs": [[[[1.1, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-0.1, 0.0]]]],
    }
    with pytest.raises(InvalidChannelSpec):
        channel_from_dict(doc)


def test_alphabet_length_mismatch():
    with pytest.raises(InvalidChannelSpec):
        channel_from_dict({
            "cqspec": 1,
            "alphabet": ["a"],
            "stochastic_matrix": [[0.9, 0.1], [0.1, 0.9]],
        })


def test_small_drift_is_repaired():
    # Entries within the load tolerance are symmetrized and renormalized.
    doc = {
        "cqspec": 1,
        "dim": 2,
        "outputs": [[[[0.5 + 3e-9, 0.0], [0.1, 1e-9]], [[0.1, -1e-9], [0.5, 0.0]]]],
    }
    ch = channel_from_dict(doc)
    assert abs(np.trace(ch.outputs[0]).real - 1.0) < 1e-14
    assert np.allclose(ch.outputs[0], ch.outputs[0].conj().T, atol=1e-15)
