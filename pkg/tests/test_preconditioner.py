import numpy as np
import pytest

from pslr.diagnostics import dense_schur
from pslr.krylov import gmres
from pslr.preconditioner import PslrConfig, build
from pslr.problems import ProblemSpec, laplacian3d
from pslr.sparse import matvec

from conftest import lap1d, random_sparse


class TestConfig:
    def test_defaults_valid(self):
        PslrConfig().validate()

    @pytest.mark.parametrize("kwargs", [
        {"num_subdomains": 0},
        {"series_degree": -1},
        {"rank": -2},
        {"droptol": -0.1},
    ])
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(ValueError):
            PslrConfig(**kwargs).validate()


class TestApply:
    def test_matches_dense_application(self):
        """The whole application pipeline against an explicit dense formula."""
        A = laplacian3d(ProblemSpec(5, 5, 5))
        cfg = PslrConfig(num_subdomains=4, series_degree=2, rank=5,
                         droptol=0.0, seed=0)
        P = build(A, cfg)
        oracle = dense_schur(P.system)
        lr = P.correction
        Sapp_inv = oracle.sapp_inv(2, lr.V, lr.G)
        Binv = np.linalg.inv(oracle.B)
        rng = np.random.default_rng(1)
        b = rng.standard_normal(P.system.n)
        f, g = b[:P.system.p], b[P.system.p:]
        y = Sapp_inv @ (g - oracle.F @ (Binv @ f))
        x = Binv @ (f - oracle.E @ y)
        ref = np.concatenate([x, y])
        got = P.apply(b)
        assert np.linalg.norm(got - ref) <= 1e-9 * np.linalg.norm(ref)

    def test_apply_original_consistent(self):
        A = laplacian3d(ProblemSpec(4, 4, 4))
        P = build(A, PslrConfig(num_subdomains=3, droptol=0.0, rank=4))
        rng = np.random.default_rng(2)
        b = rng.standard_normal(A.shape[0])
        perm = P.system.perm
        z = P.apply_original(b)
        zp = P.apply(b[perm.inverse])
        np.testing.assert_allclose(z, zp[perm.forward], atol=1e-14)

    def test_exact_configuration_degenerates_gmres(self):
        # droptol 0 + correction rank up to the interface dimension: the
        # preconditioned spectrum collapses to 1, GMRES needs <= 2 steps
        A = random_sparse(60, density=0.1, seed=3)
        P = build(A, PslrConfig(num_subdomains=3, series_degree=1, rank=60,
                                droptol=0.0, seed=0))
        b = matvec(A, np.random.default_rng(4).standard_normal(60))
        x, rep = gmres(lambda v: matvec(A, v), P.apply_original, b, tol=1e-10)
        assert rep.converged and rep.iterations <= 2
        assert np.linalg.norm(b - matvec(A, x)) <= 1e-10 * np.linalg.norm(b)

    def test_single_subdomain_ilu_only(self):
        A = lap1d(30)
        P = build(A, PslrConfig(num_subdomains=1, droptol=0.0))
        assert P.system.q == 0
        rng = np.random.default_rng(5)
        b = rng.standard_normal(30)
        ref = np.linalg.solve(A.toarray(), b)
        assert np.linalg.norm(P.apply_original(b) - ref) <= 1e-10 * np.linalg.norm(ref)

    def test_accelerates_gmres(self):
        A = laplacian3d(ProblemSpec(8, 8, 8))
        b = matvec(A, np.random.default_rng(6).standard_normal(A.shape[0]))
        _, plain = gmres(lambda v: matvec(A, v), None, b)
        P = build(A, PslrConfig(num_subdomains=4))
        _, prec = gmres(lambda v: matvec(A, v), P.apply_original, b)
        assert prec.converged
        assert prec.iterations < plain.iterations

    def test_length_checked(self):
        P = build(lap1d(10), PslrConfig(num_subdomains=2, rank=2))
        with pytest.raises(ValueError):
            P.apply(np.ones(11))


class TestFillStats:
    def test_accounting_identities(self):
        A = laplacian3d(ProblemSpec(6, 6, 6))
        P = build(A, PslrConfig(num_subdomains=4, rank=8))
        st = P.stats
        assert st.nnz_matrix == A.nnz
        assert st.fill_ilu == pytest.approx(st.nnz_ilu / A.nnz)
        assert st.fill_lowrank == pytest.approx(st.nnz_lowrank / A.nnz)
        assert st.fill_total == pytest.approx(st.fill_ilu + st.fill_lowrank)
        q, r = P.system.q, P.correction.rank
        assert st.nnz_lowrank == q * r + r * r
        assert st.nnz_ilu == P.ctx.b_ilu.nnz + P.ctx.c0_ilu.nnz

    def test_ilu_fill_invariant_under_rank(self):
        A = laplacian3d(ProblemSpec(6, 6, 6))
        fills = set()
        for rank in (0, 4, 12):
            P = build(A, PslrConfig(num_subdomains=4, rank=rank))
            fills.add(P.stats.fill_ilu)
        assert len(fills) == 1

    def test_rank_zero_no_lowrank_storage(self):
        P = build(lap1d(20), PslrConfig(num_subdomains=2, rank=0))
        assert P.stats.fill_lowrank == 0.0
        assert P.stats.fill_total == P.stats.fill_ilu

    def test_json_roundtrip(self):
        import json
        P = build(lap1d(20), PslrConfig(num_subdomains=2, rank=2))
        payload = json.loads(P.stats.to_json())
        assert payload["fill_total"] == P.stats.fill_total


class TestDeterminism:
    def test_same_config_identical_build(self):
        A = laplacian3d(ProblemSpec(5, 5, 5, shift=0.1))
        cfg = PslrConfig(num_subdomains=4, rank=6, seed=7)
        P1, P2 = build(A, cfg), build(A, cfg)
        np.testing.assert_array_equal(P1.correction.V, P2.correction.V)
        np.testing.assert_array_equal(P1.correction.G, P2.correction.G)
        assert P1.stats.nnz_ilu == P2.stats.nnz_ilu
        rng = np.random.default_rng(8)
        b = rng.standard_normal(A.shape[0])
        np.testing.assert_array_equal(P1.apply_original(b), P2.apply_original(b))
