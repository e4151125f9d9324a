"""Application layer: use cases."""

from src.application.bound_report_use_case import BoundReportUseCase
from src.application.norm_validation_use_case import NormValidationUseCase
from src.application.sweep_use_case import SweepUseCase
from src.application.training_use_case import TrainingUseCase

__all__ = ["BoundReportUseCase", "NormValidationUseCase", "SweepUseCase", "TrainingUseCase"]
