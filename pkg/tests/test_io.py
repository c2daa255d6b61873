import numpy as np
import pytest

from isoread.io import (
    load_features,
    read_features_csv,
    read_features_json,
    vector_json,
    write_features_csv,
    write_features_json,
)


def test_csv_roundtrip():
    M = np.random.default_rng(0).standard_normal((5, 3))
    assert np.array_equal(read_features_csv(write_features_csv(M)), M)
    assert write_features_csv(np.eye(1)).endswith("\r\n")


def test_json_roundtrip():
    M = np.arange(6.0).reshape(3, 2)
    assert np.array_equal(read_features_json(write_features_json(M)), M)
    with pytest.raises(ValueError):
        read_features_json('{"n": 2, "d": 2, "data": [[1, 2]]}')


def test_csv_errors():
    with pytest.raises(ValueError):
        read_features_csv("")
    with pytest.raises(ValueError):
        read_features_csv("1,2\n3\n")
    with pytest.raises(ValueError):
        read_features_csv("1,x\n")


def test_load_features(tmp_path):
    f = tmp_path / "m.csv"
    f.write_text("1,2\n3,4\n")
    assert load_features(str(f)).tolist() == [[1, 2], [3, 4]]
    f.write_text('{"n": 1, "d": 2, "data": [[5, 6]]}')
    assert load_features(str(f)).tolist() == [[5, 6]]


def test_vector_json():
    assert vector_json(np.array([1.0, 0.5])) == "[1.0, 0.5]"
