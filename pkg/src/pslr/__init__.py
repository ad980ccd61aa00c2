"""Power-series + low-rank Schur complement preconditioning for sparse linear systems.

The package builds a domain-decomposition preconditioner in four stages:
graph partitioning into an interior/interface block form, threshold ILU of
the diagonal blocks, a truncated power-series approximation of the inverse
Schur complement, and an Arnoldi-based low-rank correction that deflates the
eigenvalues the series cannot handle.  GMRES and CG accelerators plus a
dense diagnostics oracle round out the library.
"""

from .sparse import (
    Permutation,
    matvec,
    permute_symmetric,
    extract_submatrix,
    read_matrix_market,
    write_matrix_market,
    MatrixMarketError,
)
from .partition import PartitionSpec, PartitionedSystem, partition_graph, classify_and_reorder
from .ilu import IluFactor, BlockILU, ilut, factor_blocks, block_solve
from .schur import SchurContext, build_schur_context, apply_S, apply_Es, apply_neumann, apply_Err
from .lowrank import (
    LowRankCorrection,
    CorrectionSingularError,
    arnoldi,
    build_correction,
    apply_correction,
)
from .preconditioner import PslrConfig, PslrPreconditioner, FillStats, build
from .krylov import SolveReport, NotSpdError, gmres, cg
from .problems import ProblemSpec, laplacian3d, convdiff3d, count_negative_eigs_analytic
from .diagnostics import (
    DenseOracle,
    SpectrumReport,
    dense_schur,
    spectrum,
    delta_bound,
    verify_bound,
    emit_spectrum_csv,
)

__version__ = "0.1.0"
