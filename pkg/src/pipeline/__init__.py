"""
Experiment pipeline: generate, noise, denoise, score, render
"""
from src.pipeline.orchestrator import ExperimentConfig, ExperimentOrchestrator, Stage, StageResult

__all__ = [
    "ExperimentConfig",
    "ExperimentOrchestrator",
    "Stage",
    "StageResult",
]
