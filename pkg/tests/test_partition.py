import numpy as np
import pytest
import scipy.sparse as sp

from pslr.partition import (
    classify_and_reorder,
    partition_graph,
    save_assignment_json,
)
from pslr.problems import ProblemSpec, laplacian3d
from pslr.sparse import permute_symmetric

from conftest import lap1d, partitioned, random_sparse


class TestPartitionGraph:
    def test_covers_all_vertices(self):
        spec = partition_graph(lap1d(20), 4)
        assert np.all(spec.assignment >= 0)
        assert set(np.unique(spec.assignment)) == {0, 1, 2, 3}

    def test_single_part(self):
        spec = partition_graph(lap1d(5), 1)
        np.testing.assert_array_equal(spec.assignment, np.zeros(5))

    def test_path_graph_split_contiguous(self):
        # BFS from vertex 0 on a path visits in index order, so bisection
        # of a 1D Laplacian gives two contiguous halves
        spec = partition_graph(lap1d(6), 2)
        np.testing.assert_array_equal(spec.assignment, [0, 0, 0, 1, 1, 1])

    def test_balance(self):
        for s in (2, 3, 5, 8):
            spec = partition_graph(laplacian3d(ProblemSpec(8, 8, 8)), s)
            counts = np.bincount(spec.assignment, minlength=s)
            assert counts.min() >= 0.5 * counts.max()

    def test_disconnected_components(self):
        # two disjoint 3-paths: each component should become one part
        A = sp.block_diag([lap1d(3), lap1d(3)], format="csr")
        spec = partition_graph(A, 2)
        assert len(set(spec.assignment[:3])) == 1
        assert len(set(spec.assignment[3:])) == 1
        assert spec.assignment[0] != spec.assignment[3]

    def test_too_many_parts(self):
        with pytest.raises(ValueError):
            partition_graph(lap1d(3), 4)

    def test_nonsquare_rejected(self):
        with pytest.raises(ValueError):
            partition_graph(sp.csr_matrix((3, 4)), 2)

    def test_deterministic(self):
        A = random_sparse(100, seed=3)
        a = partition_graph(A, 6).assignment
        b = partition_graph(A, 6).assignment
        np.testing.assert_array_equal(a, b)


class TestClassifyAndReorder:
    def test_lap6_blocks(self, lap6_system):
        _, ps = lap6_system
        assert ps.num_parts == 2
        assert ps.p == 4 and ps.q == 2
        np.testing.assert_array_equal(ps.interior_sizes, [2, 2])
        np.testing.assert_array_equal(ps.interface_sizes, [1, 1])
        # vertices 2 and 3 straddle the cut on the path 0-1-2-3-4-5
        is_interface = ps.perm.forward >= ps.p
        np.testing.assert_array_equal(np.flatnonzero(is_interface), [2, 3])

    def test_reassembly_exact(self, lap3d_small_system):
        A, ps = lap3d_small_system
        n, p, q = ps.n, ps.p, ps.q
        reassembled = sp.bmat([[ps.B, ps.E], [ps.F, ps.C]], format="csr")
        assert (reassembled != ps.matrix).nnz == 0
        # undo the permutation: must reproduce A bit for bit
        from pslr.sparse import Permutation
        back = permute_symmetric(ps.matrix, Permutation.from_forward(ps.perm.inverse))
        assert (back != A).nnz == 0
        np.testing.assert_array_equal(back.data, A.data)

    def test_B_block_diagonal(self, lap3d_small_system):
        _, ps = lap3d_small_system
        # no coupling between interiors of different subdomains
        B = ps.B.tocoo()
        block_of = np.repeat(np.arange(ps.num_parts), ps.interior_sizes)
        assert np.all(block_of[B.row] == block_of[B.col])

    def test_interface_definition(self, lap3d_small_system):
        A, ps = lap3d_small_system
        # every interior vertex has all neighbors inside its own subdomain
        spec = partition_graph(A, ps.num_parts)
        part = spec.assignment
        coo = A.tocoo()
        off = coo.row != coo.col
        cross = np.zeros(A.shape[0], dtype=bool)
        mism = part[coo.row[off]] != part[coo.col[off]]
        cross[coo.row[off][mism]] = True
        cross[coo.col[off][mism]] = True
        is_interface = ps.perm.forward >= ps.p
        np.testing.assert_array_equal(is_interface, cross)

    def test_single_part_no_interface(self):
        A = lap1d(10)
        ps = partitioned(A, 1)
        assert ps.q == 0 and ps.p == 10
        assert ps.C.shape == (0, 0)

    def test_sizes_consistent(self, lap3d_small_system):
        _, ps = lap3d_small_system
        assert ps.interior_sizes.sum() == ps.p
        assert ps.interface_sizes.sum() == ps.q
        assert ps.B.shape == (ps.p, ps.p)
        assert ps.E.shape == (ps.p, ps.q)
        assert ps.F.shape == (ps.q, ps.p)
        assert ps.C.shape == (ps.q, ps.q)


def test_save_assignment_json(tmp_path):
    import json
    spec = partition_graph(lap1d(6), 2)
    path = tmp_path / "parts.json"
    save_assignment_json(spec, path)
    data = json.loads(path.read_text())
    np.testing.assert_array_equal(data, spec.assignment)
