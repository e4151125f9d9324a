"""Bound report use case."""

import logging
from typing import Optional, Sequence, Union

from src.domain.kinds import DiffusionKind, NormSource, VcKind
from src.domain.models import (
    BoundInputs,
    BoundReport,
    Dataset,
    DiffusionOperator,
    ExpectedTrcConfig,
    GnnModel,
)
from src.infrastructure.bounds.expected_bounds import expected_trc_sbm
from src.infrastructure.bounds.trc_bounds import (
    C4,
    C5,
    gen_gap_slack,
    residual_trc_upper,
    trc_upper,
)
from src.infrastructure.bounds.vc_bounds import is_upper_bound, vc_dimension, vc_gap_bound
from src.infrastructure.gnn.metrics import measure_param_norms
from src.infrastructure.graph.graph_ops import (
    inf_norm,
    max_col_two_norm,
    norm_chain,
    numerical_rank,
)

logger = logging.getLogger(__name__)


class BoundReportUseCase:
    """Collects every bound for one dataset, diffusion and architecture."""

    def __init__(self, dataset: Dataset, diffusion: DiffusionOperator):
        """Initialize bound report use case.

        Matrix norms that do not depend on the parameter norms are computed once here.

        Args:
            dataset: Dataset providing X and the labeled split.
            diffusion: Diffusion operator S.
        """
        if diffusion.n != dataset.n:
            raise ValueError(f"Diffusion has n={diffusion.n}, dataset has n={dataset.n}")
        self._dataset = dataset
        self._diffusion = diffusion
        matrix, features = diffusion.matrix, dataset.features
        self._s_inf = inf_norm(matrix)
        self._sx_2inf = max_col_two_norm(matrix @ features)
        self._x_inf = inf_norm(features)
        self._chain = norm_chain(matrix, features)
        self._rank_s = numerical_rank(matrix)

    @property
    def rank_s(self) -> int:
        return self._rank_s

    @property
    def spectral_converged(self) -> bool:
        return self._chain.converged

    @property
    def s_spectral(self) -> float:
        return self._chain.s_spectral

    def bound_inputs(
        self,
        num_layers: int,
        omega: float,
        beta: float,
        lipschitz: float = 1.0,
        delta: float = 0.05,
    ) -> BoundInputs:
        return BoundInputs(
            n=self._dataset.n,
            m=self._dataset.m,
            K=num_layers,
            d=self._dataset.d,
            lipschitz=lipschitz,
            omega=omega,
            beta=beta,
            s_inf=self._s_inf,
            sx_2inf=self._sx_2inf,
            x_inf=self._x_inf,
            delta=delta,
        )

    def execute(
        self,
        layer_dims: Sequence[int],
        omega: float = 0.1,
        beta: float = 0.1,
        delta: float = 0.05,
        lipschitz: float = 1.0,
        vc_kind: Union[VcKind, str] = VcKind.LINEAR,
        model: Optional[GnnModel] = None,
        residual_alpha: Optional[float] = None,
        expected_kind: Optional[Union[DiffusionKind, str]] = None,
        c6: float = 1.0,
        c7: float = 1.0,
        c8: float = 1.0,
    ) -> BoundReport:
        """Build the report.

        Args:
            layer_dims: (d_0, ..., d_K) of the architecture.
            omega: Weight inf-norm radius used when no model is given.
            beta: Bias 1-norm radius used when no model is given.
            delta: Confidence parameter.
            lipschitz: Activation Lipschitz constant.
            vc_kind: Which VC formula to report.
            model: Trained model; when given, omega and beta are measured from it.
            residual_alpha: Adds the residual TRC bound when set.
            expected_kind: Adds the expected planted bound when set and the dataset is planted.
            c6: Correction constant of the expected bound.
            c7: Correction constant of the expected bound.
            c8: Correction constant of the expected bound.

        Returns:
            The assembled BoundReport.
        """
        vc_kind = VcKind(vc_kind)
        num_layers = len(layer_dims) - 1
        if num_layers < 1:
            raise ValueError(f"layer_dims needs at least two entries, got {list(layer_dims)}")
        norm_source = NormSource.FIXED
        if model is not None:
            omega, beta = measure_param_norms(model)
            norm_source = NormSource.MEASURED

        inputs = self.bound_inputs(num_layers, omega, beta, lipschitz, delta)
        n, m = inputs.n, inputs.m
        vc_cap = vc_dimension(vc_kind, self._dataset.d, self._rank_s, list(layer_dims[1:-1]))
        trc = trc_upper(inputs)
        c4_term, c5_term = gen_gap_slack(n, m, delta)

        report = BoundReport(
            n=n,
            m=m,
            K=num_layers,
            d=self._dataset.d,
            diffusion=self._diffusion.kind.value,
            norm_source=norm_source,
            omega=omega,
            beta=beta,
            delta=delta,
            s_inf=self._s_inf,
            sx_2inf=self._sx_2inf,
            x_inf=self._x_inf,
            s_spectral=self._chain.s_spectral,
            sx_spectral_upper=self._chain.sx_spectral_upper,
            s_spectral_converged=self._chain.converged,
            rank_s=self._rank_s,
            c1=inputs.c1,
            c2=inputs.c2,
            c3=inputs.c3,
            vc_kind=vc_kind,
            vc_cap=vc_cap,
            vc_is_upper_bound=is_upper_bound(vc_kind),
            vc_gap_bound=vc_gap_bound(m, vc_cap, delta),
            trc_upper=trc,
            slack_c4_term=c4_term,
            slack_c5_term=c5_term,
            total_gap_bound=trc + c4_term + c5_term,
            c4=C4,
            c5=C5,
        )
        if residual_alpha is not None:
            report.residual_alpha = residual_alpha
            report.residual_trc_upper = residual_trc_upper(inputs, residual_alpha)
        if expected_kind is not None and self._dataset.planted is not None:
            planted = self._dataset.planted
            gamma = self._dataset.labels.gamma_actual if self._dataset.labels else None
            expected = ExpectedTrcConfig.from_planted(
                planted,
                num_layers,
                omega,
                beta,
                gamma=gamma,
                lipschitz=lipschitz,
                c6=c6,
                c7=c7,
                c8=c8,
            )
            report.expected_kind = DiffusionKind(expected_kind).value
            report.expected_trc_sbm = expected_trc_sbm(expected, expected_kind, m)

        logger.info(
            "Bounds (%s, K=%d, omega=%.4f, beta=%.4f): trc=%.4f vc=%.4f total=%.4f",
            norm_source.value,
            num_layers,
            omega,
            beta,
            trc,
            report.vc_gap_bound,
            report.total_gap_bound,
        )
        return report


def build_bound_report(
    dataset: Dataset,
    diffusion: DiffusionOperator,
    layer_dims: Sequence[int],
    **kwargs,
) -> BoundReport:
    return BoundReportUseCase(dataset, diffusion).execute(layer_dims, **kwargs)
