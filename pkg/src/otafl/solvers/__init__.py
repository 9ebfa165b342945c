from otafl.solvers.boxlin import solve_box_lin_qp
from otafl.solvers.denseqp import solve_dense_qp
from otafl.solvers.qcqp import solve_qcqp
from otafl.solvers.sca import ScaResult, default_multicast_init, sca_multicast_qos
from otafl.solvers.types import (
    BoxLinQP,
    BoxLinQuadQCQP,
    DenseQP,
    QcqpBiasStructure,
    SolveReport,
    SolveStatus,
)

__all__ = [
    "BoxLinQP",
    "BoxLinQuadQCQP",
    "DenseQP",
    "QcqpBiasStructure",
    "ScaResult",
    "SolveReport",
    "SolveStatus",
    "default_multicast_init",
    "sca_multicast_qos",
    "solve_box_lin_qp",
    "solve_dense_qp",
    "solve_qcqp",
]
