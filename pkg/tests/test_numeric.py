import numpy as np
import pytest

from hanoi_schreier import numeric as nm
from hanoi_schreier.graph import adjacency, build_graph
from hanoi_schreier.spectrum import X1, char_poly_factored, level_spectrum


def test_small_matrices():
    r = nm.dense_sym_eig(np.ones((3, 3)))
    assert r.eigenvalues == pytest.approx([0, 0, 3], abs=1e-14)
    assert nm.dense_sym_eig(np.diag([3.0, 1.0, 2.0])).eigenvalues.tolist() == [1.0, 2.0, 3.0]
    assert nm.dense_sym_eig(np.zeros((0, 0))).size == 0
    with pytest.raises(ValueError):
        nm.dense_sym_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        nm.dense_sym_eig(np.zeros((2, 3)))


def test_random_against_lapack():
    rng = np.random.default_rng(1)
    for size in (1, 2, 5, 40, 150):
        a = rng.standard_normal((size, size))
        a = a + a.T
        ours = nm.dense_sym_eig(a).eigenvalues
        assert np.max(np.abs(ours - np.linalg.eigvalsh(a))) < 1e-11 * max(1.0, np.abs(a).max() * size)


def test_repeated_eigenvalues():
    q, _ = np.linalg.qr(np.random.default_rng(2).standard_normal((60, 60)))
    d = np.repeat([-1.0, 0.0, 2.0], 20)
    a = (q * d) @ q.T
    a = (a + a.T) / 2
    assert np.max(np.abs(nm.dense_sym_eig(a).eigenvalues - np.sort(d))) < 1e-12


@pytest.mark.parametrize("size", [9, 81, 243, 729])
def test_householder_orthogonality(size):
    n = round(np.log(size) / np.log(3))
    m = adjacency(build_graph(3, n)).toarray().astype(float)
    d, e, q = nm.householder_tridiagonal(m, accumulate=True)
    cols = np.random.default_rng(0).choice(size, min(size, 32), replace=False)
    qc = q[:, cols]
    assert np.max(np.abs(qc.T @ qc - np.eye(cols.size))) <= 1e-10
    t = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    assert np.max(np.abs(q.T @ m @ q - t)) <= 1e-10


@pytest.mark.parametrize("n", range(0, 6))
def test_trace_and_frobenius(n):
    a = adjacency(build_graph(3, n))
    r = nm.dense_sym_eig(a, level=n)
    assert r.size == 3**n
    assert r.trace_residual <= 1e-8 * 3**n
    assert abs(r.eigenvalues.sum() - 3) <= 1e-8 * 3**n
    assert r.frobenius_residual <= 1e-8 * 3**n
    assert r.eigenvalues.max() == pytest.approx(3.0, abs=1e-12)
    assert r.eigenvalues.min() >= -3 - 1e-12


def test_deterministic():
    a = adjacency(build_graph(3, 4))
    assert np.array_equal(nm.dense_sym_eig(a).eigenvalues, nm.dense_sym_eig(a).eigenvalues)


def test_cluster():
    assert nm.cluster([0.0, 1e-10, 5.0], 1e-6) == [(5e-11, 2), (5.0, 1)]
    assert nm.cluster([], 1.0) == []
    with pytest.warns(UserWarning):
        nm.cluster([0.0, 1.0], 0.4, min_separation=0.5)


@pytest.mark.parametrize("n,groups", [(3, 11), (4, 23)])
def test_cluster_counts(n, groups):
    r = nm.dense_sym_eig(adjacency(build_graph(3, n)), gap=3e-6)
    assert len(r.clusters) == groups


def test_level_two_counts():
    rep = nm.compare_with_closed_form(2)
    assert rep.passed
    assert rep.cluster_counts == [1, 2, 3, 2, 1]


@pytest.mark.parametrize("n", range(1, 7))
def test_compare_with_closed_form(n):
    rep = nm.compare_with_closed_form(n)
    assert rep.passed, rep.mismatches
    assert rep.max_deviation <= 1e-8
    assert rep.cluster_counts == rep.closed_form_counts
    assert rep.cluster_counts[-1] == 1  # the eigenvalue 3


def test_comparison_names_bad_path(monkeypatch):
    import hanoi_schreier.spectrum as sp

    real = sp.multiplicity_a
    monkeypatch.setattr(sp, "multiplicity_a", lambda m: real(m) + (1 if m == 2 else 0))
    rep = nm.compare_with_closed_form(3)
    assert not rep.passed
    assert all("path" in mm for mm in rep.mismatches)


def test_convergence_error_reported():
    d = np.array([1.0, 2.0, 3.0])
    e = np.array([1.0, 1.0])
    from hanoi_schreier import kernels

    dd, ee = d.copy(), np.append(e, 0.0)
    assert kernels.tridiag_ql(dd, ee, 0) == 0
    err = nm.ConvergenceError(4)
    assert err.block == 4 and "4" in str(err)


@pytest.mark.parametrize("n", range(0, 7))
def test_char_poly_coefficients_enclosed(n):
    ok, bad = nm.compare_char_poly(n)
    assert ok and bad == 0


def test_char_poly_enclosure_detects_wrong_polynomial():
    coeffs = char_poly_factored(3).expand().coefficients()
    coeffs[5] += 1
    assert not nm.compare_char_poly(3, coefficients=coeffs)[0]
    shifted = (char_poly_factored(3).expand() * (X1 + 2)).coefficients()
    assert not nm.compare_char_poly(3, coefficients=shifted)[0]


def test_histogram_roundtrip():
    r = nm.dense_sym_eig(adjacency(build_graph(3, 3)), gap=3e-6)
    text = nm.histogram_csv(r.clusters)
    assert text.startswith("eigenvalue,count\n")
    assert nm.histogram_from_csv(text) == r.clusters
    assert sum(c for _, c in r.clusters) == 27
    assert len(r.clusters) == level_spectrum(3).distinct_count


def test_size_cap():
    with pytest.raises(ValueError):
        nm.compare_with_closed_form(8)
