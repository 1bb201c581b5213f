import numpy as np
import pytest
from hypothesis import given, strategies as st

from stratx.data import decode_labels, drop_column, encode_labels, from_columns, load_csv
from stratx.errors import DataError


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_load_three_rows(tmp_path):
    p = write(tmp_path, "h,sex,weight\n60,F,120\n70,M,170\n65,F,140\n")
    ds = load_csv(p, "weight", {"sex"})
    assert ds.p == 2 and ds.n == 3
    assert ds.names == ["h", "sex"]
    assert set(ds.features[:, 1]) == {0.0, 1.0}
    assert ds.col_meta[1].category_labels == ("F", "M")
    np.testing.assert_array_equal(ds.response, [120, 170, 140])


def test_labels_sorted_lexicographically(tmp_path):
    p = write(tmp_path, "state,x,y\nCA,1,2\nAZ,2,3\nCA,3,4\n")
    ds = load_csv(p, "y", ["state"])
    meta = ds.col_meta[0]
    assert meta.category_labels == ("AZ", "CA")
    np.testing.assert_array_equal(ds.features[:, 0], [1, 0, 1])
    assert decode_labels(ds.features[:, 0], meta.category_labels) == ["CA", "AZ", "CA"]


def test_empty_cell_rejected(tmp_path):
    p = write(tmp_path, "a,b,y\n1,2,3\n4,,6\n")
    with pytest.raises(DataError, match="missing value at row 2, col b"):
        load_csv(p, "y")


@pytest.mark.parametrize("text,msg", [
    ("a,b,y\n1,x,3\n", "non-numeric"),
    ("a,b,y\n1,nan,3\n", "missing value"),
    ("a,b\n1,2\n", "missing column 'y'"),
    ("a,y\n1,2\n", "at least two feature columns"),
    ("a,b,y\n1,2\n", "fields"),
])
def test_bad_csv(tmp_path, text, msg):
    with pytest.raises(DataError, match=msg):
        load_csv(write(tmp_path, text), "y")


def test_missing_file(tmp_path):
    with pytest.raises(DataError, match="no such file"):
        load_csv(tmp_path / "nope.csv", "y")


def test_missing_categorical_column(tmp_path):
    with pytest.raises(DataError, match="missing column 'zz'"):
        load_csv(write(tmp_path, "a,b,y\n1,2,3\n"), "y", ["zz"])


def test_dataset_is_read_only():
    ds = from_columns({"a": [1.0, 2.0], "b": [3.0, 4.0]}, [0.0, 1.0])
    with pytest.raises(ValueError):
        ds.features[0, 0] = 9.0


@given(st.lists(st.text(min_size=1, max_size=4), min_size=1, max_size=30))
def test_encode_round_trip(values):
    codes, labels = encode_labels(values)
    assert decode_labels(codes, labels) == values
    assert list(labels) == sorted(set(values))
    assert set(codes.astype(int)) == set(range(len(labels)))


def test_drop_column():
    ds = from_columns({"a": [1, 2], "b": [3, 4], "c": [5, 6]}, [0, 1])
    d = drop_column(ds, 1)
    assert d.names == ["a", "c"]
    np.testing.assert_array_equal(d.features, ds.features[:, [0, 2]])
    np.testing.assert_array_equal(d.response, ds.response)


def test_drop_to_one_column_then_stale_index():
    ds = from_columns({"a": [1, 2], "b": [3, 4]}, [0, 1])
    d = drop_column(ds, 0)
    assert d.p == 1
    with pytest.raises(DataError):
        drop_column(d, 1)
    with pytest.raises(DataError):
        drop_column(ds, 2)


@given(st.integers(2, 6), st.integers(1, 20), st.data())
def test_drop_column_bit_identical(p, n, data):
    j = data.draw(st.integers(0, p - 1))
    X = np.random.default_rng(p * 100 + n).normal(size=(n, p))
    ds = from_columns({f"c{k}": X[:, k] for k in range(p)}, np.zeros(n))
    d = drop_column(ds, j)
    assert d.features.tobytes() == np.delete(X, j, axis=1).tobytes()
