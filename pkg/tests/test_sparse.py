import numpy as np
import pytest
import scipy.sparse as sp

from pslr.sparse import (
    MatrixMarketError,
    Permutation,
    extract_submatrix,
    matvec,
    permute_symmetric,
    read_matrix_market,
    write_matrix_market,
)


class TestMatvec:
    def test_identity(self):
        A = sp.identity(3, format="csr")
        np.testing.assert_array_equal(matvec(A, [1.0, 2.0, 3.0]), [1.0, 2.0, 3.0])

    def test_zero_rows(self):
        A = sp.csr_matrix((2, 3))
        np.testing.assert_array_equal(matvec(A, [1.0, 2.0, 3.0]), [0.0, 0.0])

    def test_hand_computed(self):
        A = sp.csr_matrix(np.array([[2.0, 1.0], [0.0, 3.0]]))
        np.testing.assert_array_equal(matvec(A, [1.0, 1.0]), [3.0, 3.0])

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            matvec(sp.identity(3, format="csr"), np.ones(4))

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_dense(self, seed):
        rng = np.random.default_rng(seed)
        n = 200
        A = sp.random(n, n, density=0.05, random_state=seed, format="csr")
        x = rng.standard_normal(n)
        y = matvec(A, x)
        ref = A.toarray() @ x
        assert np.linalg.norm(y - ref) <= 1e-13 * max(np.linalg.norm(ref), 1.0)


class TestPermutation:
    def test_forward_inverse_roundtrip(self):
        p = Permutation.from_forward([2, 0, 1])
        np.testing.assert_array_equal(p.forward[p.inverse], np.arange(3))
        np.testing.assert_array_equal(p.inverse[p.forward], np.arange(3))

    def test_not_bijection(self):
        with pytest.raises(ValueError):
            Permutation.from_forward([0, 0, 1])


class TestPermuteSymmetric:
    def test_identity_permutation(self):
        A = sp.random(10, 10, density=0.3, random_state=0, format="csr")
        B = permute_symmetric(A, Permutation.identity(10))
        assert (B != A).nnz == 0

    def test_inverse_roundtrip(self):
        A = sp.random(12, 12, density=0.3, random_state=1, format="csr")
        p = Permutation.from_forward(np.random.default_rng(2).permutation(12))
        pinv = Permutation.from_forward(p.inverse)
        B = permute_symmetric(permute_symmetric(A, p), pinv)
        assert (B != A).nnz == 0

    def test_diagonal_relabeling(self):
        A = sp.diags([1.0, 2.0, 3.0]).tocsr()
        p = Permutation.from_forward([2, 0, 1])
        B = permute_symmetric(A, p)
        np.testing.assert_array_equal(B.diagonal(), [2.0, 3.0, 1.0])

    def test_entry_mapping_matches_dense(self):
        rng = np.random.default_rng(3)
        A = sp.random(15, 15, density=0.3, random_state=3, format="csr")
        fwd = rng.permutation(15)
        p = Permutation.from_forward(fwd)
        B = permute_symmetric(A, p).toarray()
        Ad = A.toarray()
        ref = np.zeros_like(Ad)
        for i in range(15):
            for j in range(15):
                ref[fwd[i], fwd[j]] = Ad[i, j]
        np.testing.assert_array_equal(B, ref)

    def test_spectrum_preserved(self):
        A = sp.random(60, 60, density=0.1, random_state=4, format="csr")
        p = Permutation.from_forward(np.random.default_rng(5).permutation(60))
        e0 = np.sort_complex(np.linalg.eigvals(A.toarray()))
        e1 = np.sort_complex(np.linalg.eigvals(permute_symmetric(A, p).toarray()))
        assert np.max(np.abs(e0 - e1)) <= 1e-10

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            permute_symmetric(sp.identity(4, format="csr"), Permutation.identity(3))


class TestExtractSubmatrix:
    def test_full_sets_copy(self):
        A = sp.random(8, 8, density=0.4, random_state=6, format="csr")
        B = extract_submatrix(A, np.arange(8), np.arange(8))
        assert (B != A).nnz == 0

    def test_empty_row_set(self):
        A = sp.identity(5, format="csr")
        B = extract_submatrix(A, [], np.arange(3))
        assert B.shape == (0, 3)

    def test_leading_block_matches_dense(self):
        A = sp.csr_matrix(np.arange(16, dtype=float).reshape(4, 4) + 1)
        B = extract_submatrix(A, [0, 1], [0, 1])
        np.testing.assert_array_equal(B.toarray(), A.toarray()[:2, :2])

    def test_unsorted_rejected(self):
        A = sp.identity(5, format="csr")
        with pytest.raises(ValueError):
            extract_submatrix(A, [1, 0], [0])

    def test_out_of_range_rejected(self):
        A = sp.identity(5, format="csr")
        with pytest.raises(ValueError):
            extract_submatrix(A, [0, 5], [0])


class TestMatrixMarket:
    def test_identity_roundtrip(self, tmp_path):
        path = tmp_path / "eye.mtx"
        path.write_text("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n2 2 1.0\n")
        A = read_matrix_market(path)
        assert A.shape == (2, 2) and A.nnz == 2

    def test_symmetric_expansion(self, tmp_path):
        # lower triangle of the 3x3 tridiagonal: 3 diagonal + 2 off entries
        path = tmp_path / "tri.mtx"
        path.write_text(
            "%%MatrixMarket matrix coordinate real symmetric\n"
            "3 3 5\n1 1 2.0\n2 1 -1.0\n2 2 2.0\n3 2 -1.0\n3 3 2.0\n")
        A = read_matrix_market(path)
        assert A.nnz == 7
        np.testing.assert_array_equal(A.toarray(), A.toarray().T)

    def test_zero_index_rejected(self, tmp_path):
        path = tmp_path / "bad.mtx"
        path.write_text("%%MatrixMarket matrix coordinate real general\n2 2 1\n0 1 1.0\n")
        with pytest.raises(MatrixMarketError) as exc:
            read_matrix_market(path)
        assert exc.value.line == 3

    def test_complex_rejected(self, tmp_path):
        path = tmp_path / "cplx.mtx"
        path.write_text("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1.0 0.0\n")
        with pytest.raises(MatrixMarketError):
            read_matrix_market(path)

    def test_malformed_header(self, tmp_path):
        path = tmp_path / "hdr.mtx"
        path.write_text("%%NotMatrixMarket\n1 1 0\n")
        with pytest.raises(MatrixMarketError) as exc:
            read_matrix_market(path)
        assert exc.value.line == 1

    def test_duplicates_summed(self, tmp_path):
        path = tmp_path / "dup.mtx"
        path.write_text("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.5\n1 1 2.5\n")
        A = read_matrix_market(path)
        assert A[0, 0] == 4.0

    def test_write_read_value_exact(self, tmp_path):
        rng = np.random.default_rng(7)
        A = sp.random(20, 20, density=0.2, random_state=7, format="csr")
        A.data[:] = rng.standard_normal(A.nnz)
        path = tmp_path / "rt.mtx"
        write_matrix_market(A, path)
        B = read_matrix_market(path)
        assert (B != A).nnz == 0
        np.testing.assert_array_equal(B.data, A.data)
