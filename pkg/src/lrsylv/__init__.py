"""Low-rank solvers for Sylvester equations AX - XB = F.

The package provides factored ADI iterations driven by Zolotarev-optimal
shift parameters, explicit singular-value bound calculators, structured
test matrices with known displacement structure, and a finite-difference
Poisson solver that returns its solution in low-rank form.
"""

from lrsylv.adi import (
    DenseOperator,
    DiagonalOperator,
    FiAdiConfig,
    SylvesterProblem,
    TridiagOperator,
    adi_dense,
    estimate_tau,
    fadi,
    fi_adi,
    residual_fro,
    smith,
)
from lrsylv.bounds import (
    BoundCurve,
    BoundParams,
    bound_c3,
    bound_disk,
    bound_interval,
    bound_split_intervals,
    eps_rank_bound,
)
from lrsylv.core import (
    FactoredRhs,
    LowRankFactors,
    compress,
    dense_svd,
    eps_rank,
    frob_norm,
    materialize,
    read_bundle,
    write_bundle,
)
from lrsylv.spectra import (
    Disk,
    Interval,
    MobiusTransform,
    ShiftSchedule,
    disk_mu,
    disk_shift,
    elliptic_K,
    interval_mu,
    interval_shifts,
    jacobi_dn,
    jacobi_sn_dn,
    schedule_for,
    zk_bound,
)

__all__ = [
    "BoundCurve",
    "BoundParams",
    "DenseOperator",
    "DiagonalOperator",
    "Disk",
    "FactoredRhs",
    "FiAdiConfig",
    "Interval",
    "LowRankFactors",
    "MobiusTransform",
    "ShiftSchedule",
    "SylvesterProblem",
    "TridiagOperator",
    "adi_dense",
    "bound_c3",
    "bound_disk",
    "bound_interval",
    "bound_split_intervals",
    "compress",
    "dense_svd",
    "disk_mu",
    "disk_shift",
    "elliptic_K",
    "eps_rank",
    "eps_rank_bound",
    "estimate_tau",
    "fadi",
    "fi_adi",
    "frob_norm",
    "interval_mu",
    "interval_shifts",
    "jacobi_dn",
    "jacobi_sn_dn",
    "materialize",
    "read_bundle",
    "residual_fro",
    "schedule_for",
    "smith",
    "write_bundle",
    "zk_bound",
]
