import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crowdfs import Dataset, DatasetError, fit_scaler, load_csv, write_csv
from conftest import DATA_DIR, make_dataset


def _write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_load_small_csv(tmp_path):
    ds = load_csv(_write(tmp_path, "f1,f2,class\n1,2,A\n3,4,B\n5,6,A\n"))
    assert (ds.n_samples, ds.n_features) == (3, 2)
    assert ds.labels.tolist() == [0, 1, 0]
    assert ds.label_names == ("A", "B")
    assert ds.feature_names == ("f1", "f2")
    assert ds.features.tolist() == [[1, 2], [3, 4], [5, 6]]


def test_label_column_defaults(tmp_path):
    # no "class" column: last column is the label
    ds = load_csv(_write(tmp_path, "a,b,target\n1,2,x\n3,4,y\n"))
    assert ds.feature_names == ("a", "b")
    # "class" wins even when it is not last
    ds = load_csv(_write(tmp_path, "class,a,b\nx,1,2\ny,3,4\n"))
    assert ds.feature_names == ("a", "b")
    ds = load_csv(_write(tmp_path, "a,lab,b\n1,x,2\n3,y,4\n"), label_column="lab")
    assert ds.feature_names == ("a", "b")
    assert ds.features.tolist() == [[1, 2], [3, 4]]


def test_nan_reports_row_and_column(tmp_path):
    with pytest.raises(DatasetError, match=r"row 3, column 2"):
        load_csv(_write(tmp_path, "f1,f2,class\n1,2,A\n3,NaN,B\n"))


@pytest.mark.parametrize(
    "text, msg",
    [
        ("f1,f2,class\n1,,A\n2,3,B\n", "missing value"),
        ("f1,f2,class\n1,x,A\n2,3,B\n", "cannot parse"),
        ("f1,f2,class\n1,2,A\n2,3,A\n", "single class"),
        ("f1,f1,class\n1,2,A\n2,3,B\n", "duplicate feature names"),
        ("f1,f2,class\n1,2\n2,3,B\n", "fields"),
        ("f1,f2,class\n1,inf,A\n2,3,B\n", "missing value"),
    ],
)
def test_rejects_bad_input(tmp_path, text, msg):
    with pytest.raises(DatasetError, match=msg):
        load_csv(_write(tmp_path, text))


def test_missing_label_column(tmp_path):
    with pytest.raises(DatasetError, match="not found"):
        load_csv(_write(tmp_path, "a,b\n1,x\n2,y\n"), label_column="nope")


def test_dataset_is_read_only():
    ds = make_dataset([[1.0], [2.0]], [0, 1])
    with pytest.raises(ValueError):
        ds.features[0, 0] = 5.0


def test_bundled_datasets_match_table_shapes():
    ion = load_csv(DATA_DIR / "ionosphere.csv")
    assert (ion.n_samples, ion.n_features) == (351, 34)
    br = load_csv(DATA_DIR / "breast.csv")
    assert (br.n_samples, br.n_features) == (569, 30)
    so = load_csv(DATA_DIR / "sonar.csv")
    assert (so.n_samples, so.n_features) == (208, 60)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(2, 8).flatmap(
        lambda m: st.tuples(
            st.lists(
                st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=3, max_size=3),
                min_size=m,
                max_size=m,
            ),
            st.lists(st.sampled_from(["x", "y", "z"]), min_size=m, max_size=m).filter(lambda v: len(set(v)) > 1),
        )
    )
)
def test_csv_round_trip(tmp_path_factory, data):
    X, y = data
    ds = make_dataset(X, y)
    p = tmp_path_factory.mktemp("rt") / "d.csv"
    write_csv(ds, p)
    again = load_csv(p)
    # labels re-encode by first appearance, so compare decoded values
    assert np.array_equal(again.features, ds.features)
    assert [again.label_names[i] for i in again.labels] == [ds.label_names[i] for i in ds.labels]
    write_csv(again, p)
    assert load_csv(p) == again


def test_scaler_single_row_maps_to_zero():
    X = np.array([[3.0, -1.0], [5.0, 2.0]])
    sc = fit_scaler(X, [1])
    assert sc.transform(X[[1]]).tolist() == [[0.0, 0.0]]
    assert sc.transform(X[[0]]).tolist() == [[0.0, 0.0]]


def test_scaler_linear_and_unclamped():
    X = np.array([[0.0], [10.0], [20.0]])
    sc = fit_scaler(X, [0, 1])
    assert (sc.minimum[0], sc.maximum[0]) == (0.0, 10.0)
    assert sc.transform(np.array([[5.0]]))[0, 0] == 0.5
    assert sc.transform(X[[2]])[0, 0] == 2.0


def test_scaler_rejects_empty():
    with pytest.raises(ValueError):
        fit_scaler(np.zeros((3, 2)), [])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_scaler_only_reads_given_rows(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(10, 4))
    rows = rng.choice(10, size=6, replace=False)
    sc = fit_scaler(X, rows)
    poisoned = X.copy()
    others = np.setdiff1d(np.arange(10), rows)
    poisoned[others] = rng.normal(scale=1e6, size=(len(others), 4))
    sc2 = fit_scaler(poisoned, rows)
    assert np.array_equal(sc.minimum, sc2.minimum) and np.array_equal(sc.maximum, sc2.maximum)
    scaled = sc.transform(X[rows])
    assert scaled.min() >= 0.0 and scaled.max() <= 1.0


def test_dataset_subset_keeps_order():
    ds = make_dataset([[1, 2, 3], [4, 5, 6]], [0, 1])
    sub = ds.subset([2, 0])
    assert sub.feature_names == ("f3", "f1")
    assert sub.features.tolist() == [[3, 1], [6, 4]]
    assert isinstance(sub, Dataset)
