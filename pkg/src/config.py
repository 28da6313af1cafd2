"""
NL-MMSE Configuration Module
"""
import os
from pathlib import Path
from dotenv import load_dotenv
from pydantic import BaseModel

# Load environment variables
load_dotenv()


def _env_flag(name: str, default: str = "false") -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


class KarcherSettings(BaseModel):
    """Gradient descent settings for intrinsic means"""
    max_iters: int = int(os.getenv("NLMMSE_KARCHER_MAX_ITERS", "50"))
    grad_tol: float = float(os.getenv("NLMMSE_KARCHER_GRAD_TOL", "1e-10"))
    step: float = float(os.getenv("NLMMSE_KARCHER_STEP", "1.0"))


class NoiseSettings(BaseModel):
    """Noise simulation settings"""
    wrap_terms: int = int(os.getenv("NLMMSE_WRAP_TERMS", "10"))
    simplex_retries: int = int(os.getenv("NLMMSE_SIMPLEX_RETRIES", "100"))
    said_batch: int = int(os.getenv("NLMMSE_SAID_BATCH", "64"))


class DenoiseSettings(BaseModel):
    """Denoiser runtime settings"""
    workers: int = int(os.getenv("NLMMSE_WORKERS", "1"))
    # rows of estimates reduced per vectorised aggregation chunk
    aggregation_chunk: int = int(os.getenv("NLMMSE_AGGREGATION_CHUNK", "200000"))
    verbose: bool = _env_flag("NLMMSE_VERBOSE")


class OutputSettings(BaseModel):
    """Experiment output configuration"""
    output_dir: Path = Path(os.getenv("NLMMSE_OUTPUT_DIR", "./output"))


class Config:
    """Main configuration class"""
    karcher: KarcherSettings = KarcherSettings()
    noise: NoiseSettings = NoiseSettings()
    denoise: DenoiseSettings = DenoiseSettings()
    output: OutputSettings = OutputSettings()

    # Project paths
    BASE_DIR: Path = Path(__file__).parent.parent

    @classmethod
    def setup_directories(cls, output_dir: Path = None) -> Path:
        """Create the experiment output directory"""
        target = Path(output_dir) if output_dir is not None else cls.output.output_dir
        target.mkdir(parents=True, exist_ok=True)
        return target


# Initialize config
config = Config()
