"""
Experiment Orchestrator
Runs generate -> noise -> denoise -> score -> render on one image
"""
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator
from rich.console import Console
from rich.table import Table

from src.config import config
from src.denoise import DenoiseParams, mse, nlmeans, nlmeans_defaults, nlmmse
from src.imaging import GENERATORS, RenderStyle, generate, read_mvi, render, resolve_style, write_mvi
from src.manifolds.image import ManifoldImage
from src.noise import NoiseSpec, RngState, add_noise

console = Console(stderr=True)


class Stage(Enum):
    """Stages of an experiment"""
    LOAD = "load"
    NOISE = "noise"
    DENOISE = "denoise"
    NLMEANS = "nlmeans"
    SCORE = "score"
    RENDER = "render"


@dataclass
class StageResult:
    """Result of one stage"""
    success: bool
    stage: Stage
    data: Dict[str, Any] = field(default_factory=dict)
    error: Optional[str] = None
    execution_time_ms: int = 0


class ExperimentConfig(BaseModel):
    """One denoising experiment: clean image source, noise, parameters, outputs"""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    generator: Optional[str] = None
    input_path: Optional[Path] = None
    dims: Tuple[int, int] = (64, 64)
    noise: NoiseSpec
    seed: int = Field(default=0, ge=0)
    # DenoiseParams fields overriding the published defaults
    overrides: Dict[str, float] = Field(default_factory=dict)
    preset: str = "synthetic"
    accelerate: bool = True
    run_nlmeans: bool = False
    render: bool = True
    workers: Optional[int] = None
    output_dir: Optional[Path] = None

    @model_validator(mode="after")
    def _check_source(self) -> "ExperimentConfig":
        if (self.generator is None) == (self.input_path is None):
            raise ValueError("give exactly one of a generator name or an input file")
        if self.generator is not None and self.generator not in GENERATORS:
            raise ValueError(f"unknown generator '{self.generator}'")
        if self.input_path is not None and not self.input_path.is_file():
            raise ValueError(f"input file {self.input_path} does not exist")
        unknown = set(self.overrides) - set(DenoiseParams.model_fields)
        if unknown:
            raise ValueError(f"unknown denoising parameters {sorted(unknown)}")
        return self


def _timed(stage: Stage, fn: Callable[[], Dict[str, Any]]) -> StageResult:
    start_time = time.time()
    try:
        data = fn()
        return StageResult(
            success=True,
            stage=stage,
            data=data,
            execution_time_ms=int((time.time() - start_time) * 1000),
        )
    except Exception as e:
        console.print(f"[red]✗ {stage.value} failed: {e}[/red]")
        return StageResult(
            success=False,
            stage=stage,
            error=str(e),
            execution_time_ms=int((time.time() - start_time) * 1000),
        )


class ExperimentOrchestrator:
    """
    Coordinates the stages of a denoising experiment.

    Stage failures do not raise: the run stops at the failing stage and
    reports it in the returned results.
    """

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.output_dir = config.setup_directories(cfg.output_dir)
        self.images: Dict[str, ManifoldImage] = {}

    def _save(self, name: str, image: ManifoldImage) -> str:
        self.images[name] = image
        return str(write_mvi(image, self.output_dir / f"{name}.mvi"))

    # -- stages ---------------------------------------------------------

    def load(self) -> Dict[str, Any]:
        if self.cfg.generator is not None:
            clean = generate(self.cfg.generator, self.cfg.dims, self.cfg.seed)
        else:
            clean = read_mvi(self.cfg.input_path)
        console.print(f"[green]✓[/green] clean image: {clean.descriptor} {clean.dims[0]}x{clean.dims[1]}")
        return {"clean": self._save("clean", clean)}

    def add_noise(self) -> Dict[str, Any]:
        noisy = add_noise(self.images["clean"], self.cfg.noise, RngState(self.cfg.seed))
        return {"noisy": self._save("noisy", noisy)}

    def params(self) -> DenoiseParams:
        noisy = self.images["noisy"]
        return DenoiseParams.for_image(
            noisy.descriptor, noisy.dims, self.cfg.noise.sigma,
            preset=self.cfg.preset, accelerate=self.cfg.accelerate, **self.cfg.overrides,
        )

    def denoise(self) -> Dict[str, Any]:
        params = self.params()
        console.print(
            f"  s=({params.s1},{params.s2}) w=({params.w1},{params.w2}) "
            f"K=({params.k1},{params.k2}) gamma={params.gamma:g}"
        )
        oracle, final = nlmmse(self.images["noisy"], params, workers=self.cfg.workers)
        return {"oracle": self._save("oracle", oracle), "final": self._save("final", final)}

    def nlmeans(self) -> Dict[str, Any]:
        noisy = self.images["noisy"]
        p = nlmeans_defaults(noisy.descriptor, noisy.dims)
        restored = nlmeans(noisy, int(p["s"]), int(p["w"]), int(p["k"]), p["delta"], p["tau"], workers=self.cfg.workers)
        return {"nlmeans": self._save("nlmeans", restored)}

    def score(self) -> Dict[str, Any]:
        clean = self.images["clean"]
        errors = {name: mse(image, clean) for name, image in self.images.items() if name != "clean"}
        table = Table(title="Mean squared geodesic error")
        table.add_column("image", style="cyan")
        table.add_column("epsilon", justify="right")
        table.add_column("ratio to noisy", justify="right")
        for name, eps in errors.items():
            ratio = eps / errors["noisy"] if errors["noisy"] > 0 else float("nan")
            table.add_row(name, f"{eps:.6g}", f"{ratio:.3f}")
        console.print(table)
        return {"mse": errors}

    def render(self) -> Dict[str, Any]:
        figures = {}
        for name, image in self.images.items():
            glyphs = resolve_style(image) is RenderStyle.GLYPHS
            path = self.output_dir / f"{name}.{'svg' if glyphs else 'ppm'}"
            figures[name] = str(render(image, path))
        return {"figures": figures}

    # -- driver ---------------------------------------------------------

    def run(self) -> Dict[str, Any]:
        """Run every stage; returns status, per-stage timings, errors and outputs"""
        console.print("\n" + "=" * 60)
        source = self.cfg.generator or str(self.cfg.input_path)
        console.print(f"[bold magenta]NL-MMSE experiment: {source}, sigma={self.cfg.noise.sigma:g}[/bold magenta]")
        console.print("=" * 60)

        results: Dict[str, Any] = {"status": "processing", "stages": {}, "outputs": {}, "errors": []}
        stages = [(Stage.LOAD, self.load), (Stage.NOISE, self.add_noise), (Stage.DENOISE, self.denoise)]
        if self.cfg.run_nlmeans:
            stages.append((Stage.NLMEANS, self.nlmeans))
        stages.append((Stage.SCORE, self.score))
        if self.cfg.render:
            stages.append((Stage.RENDER, self.render))

        for i, (stage, fn) in enumerate(stages, start=1):
            console.print(f"\n[bold]Stage {i}/{len(stages)}: {stage.value}[/bold]")
            result = _timed(stage, fn)
            results["stages"][stage.value] = {"success": result.success, "time_ms": result.execution_time_ms}
            if not result.success:
                results["status"] = "failed"
                results["errors"].append(f"{stage.value} failed: {result.error}")
                return results
            if stage is Stage.SCORE:
                results["mse"] = result.data["mse"]
            else:
                results["outputs"].update(result.data)

        results["status"] = "completed"
        console.print("\n[bold green]✓ Experiment complete[/bold green]")
        return results
