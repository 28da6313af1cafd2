"""
NL-MMSE: nonlocal denoising of manifold-valued images
Main entry point for the application

Usage:
    python main.py generate s1-shapes --dims 64 64 --seed 1 -o clean.mvi
    python main.py noise -i clean.mvi --model tangent --sigma 0.3 --seed 2 -o noisy.mvi
    python main.py denoise -i noisy.mvi --sigma 0.3 -o final.mvi --oracle-out oracle.mvi
    python main.py nlmeans -i noisy.mvi --s 5 --w 31 --k 50 --delta 2.5 --tau 1 -o nlm.mvi
    python main.py mse -a clean.mvi -b final.mvi
    python main.py render -i final.mvi -o final.ppm
    python main.py experiment s1-shapes --dims 64 64 --sigma 0.3 --seed 1 -o output/s1
"""
import argparse
import sys
from pathlib import Path
from typing import List, Optional

from rich.console import Console

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src.config import config
from src.denoise import DenoiseParams, mse, nlmeans, nlmeans_defaults, nlmmse
from src.errors import ManifoldError
from src.imaging import GENERATORS, RenderStyle, generate, read_mvi, render, write_mvi
from src.noise import NoiseModel, NoiseSpec, RngState, add_noise
from src.pipeline import ExperimentConfig, ExperimentOrchestrator

console = Console(stderr=True)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    """Bad command line"""


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors by exception instead of exiting with status 2"""

    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def format_mse(eps: float) -> str:
    """epsilon with 6 significant digits"""
    return "0.000000" if eps == 0.0 else f"{eps:.6g}"


# -- subcommands -------------------------------------------------------

def cmd_generate(args) -> int:
    image = generate(args.name, tuple(args.dims), args.seed)
    write_mvi(image, args.output)
    console.print(f"[green]✓[/green] {args.name} {image.dims[0]}x{image.dims[1]} ({image.descriptor}) -> {args.output}")
    return EXIT_OK


def cmd_noise(args) -> int:
    image = read_mvi(args.input)
    spec = NoiseSpec(model=NoiseModel(args.model), sigma=args.sigma)
    noisy = add_noise(image, spec, RngState(args.seed))
    write_mvi(noisy, args.output)
    console.print(f"[green]✓[/green] {args.model} noise, sigma={args.sigma:g} -> {args.output}")
    return EXIT_OK


def cmd_denoise(args) -> int:
    image = read_mvi(args.input)
    params = DenoiseParams.for_image(
        image.descriptor, image.dims, args.sigma, preset=args.preset,
        s1=args.s1, s2=args.s2, w1=args.w1, w2=args.w2, k1=args.k1, k2=args.k2, gamma=args.gamma,
        accelerate=not args.no_accel,
    )
    console.print(
        f"[bold blue]NL-MMSE[/bold blue] s=({params.s1},{params.s2}) w=({params.w1},{params.w2}) "
        f"K=({params.k1},{params.k2}) gamma={params.gamma:g} sigma={params.sigma:g}"
    )
    oracle, final = nlmmse(image, params, workers=args.workers)
    if args.oracle_out:
        write_mvi(oracle, args.oracle_out)
    write_mvi(final, args.output)
    console.print(f"[green]✓[/green] denoised -> {args.output}")
    return EXIT_OK


def cmd_nlmeans(args) -> int:
    image = read_mvi(args.input)
    defaults = nlmeans_defaults(image.descriptor, image.dims)
    s = args.s if args.s is not None else int(defaults["s"])
    w = args.w if args.w is not None else int(defaults["w"])
    k = args.k if args.k is not None else int(defaults["k"])
    delta = args.delta if args.delta is not None else s / 2.0
    tau = args.tau if args.tau is not None else defaults["tau"]
    console.print(f"[bold blue]NL-means[/bold blue] s={s} w={w} K={k} delta={delta:g} tau={tau:g}")
    restored = nlmeans(image, s, w, k, delta, tau, workers=args.workers)
    write_mvi(restored, args.output)
    console.print(f"[green]✓[/green] denoised -> {args.output}")
    return EXIT_OK


def cmd_mse(args) -> int:
    eps = mse(read_mvi(args.a), read_mvi(args.b))
    print(format_mse(eps))
    return EXIT_OK


def cmd_render(args) -> int:
    image = read_mvi(args.input)
    render(image, args.output, args.style)
    console.print(f"[green]✓[/green] rendered -> {args.output}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    try:
        cfg = ExperimentConfig(
            generator=args.name,
            dims=tuple(args.dims),
            noise=NoiseSpec(model=NoiseModel(args.model), sigma=args.sigma),
            seed=args.seed,
            preset=args.preset,
            accelerate=not args.no_accel,
            run_nlmeans=args.nlmeans,
            render=not args.no_render,
            workers=args.workers,
            output_dir=args.output,
        )
    except ValueError as e:
        raise UsageError(str(e)) from e
    results = ExperimentOrchestrator(cfg).run()
    if results["status"] != "completed":
        for error in results["errors"]:
            console.print(f"[red]✗ {error}[/red]")
        return EXIT_DATA
    for name, eps in results["mse"].items():
        print(f"{name}\t{format_mse(eps)}")
    return EXIT_OK


# -- parser -------------------------------------------------------------

def _odd(text: str) -> int:
    value = int(text)
    if value < 1 or value % 2 == 0:
        raise argparse.ArgumentTypeError(f"expected a positive odd integer, got {text}")
    return value


def _nonneg(text: str) -> float:
    value = float(text)
    if not value >= 0.0:
        raise argparse.ArgumentTypeError(f"expected a non-negative number, got {text}")
    return value


def build_parser() -> CliParser:
    parser = CliParser(
        prog="main.py",
        description="NL-MMSE: nonlocal denoising of manifold-valued images",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Manifold tags:
  eucl:<d>   real vectors        s1        unit circle
  s2         unit sphere         spd:<r>   SPD matrices, r = 1, 2, 3
  simplex:1  probability pairs   h2        hyperbolic plane

Exit codes: 0 success, 1 usage error, 2 invalid data or parameters
        """,
    )
    parser.add_argument("--verbose", action="store_true", help="Show progress bars")
    sub = parser.add_subparsers(dest="command", parser_class=CliParser)

    p = sub.add_parser("generate", help="Write a synthetic test image")
    p.add_argument("name", choices=sorted(GENERATORS))
    p.add_argument("--dims", type=int, nargs=2, metavar=("H", "W"), default=[64, 64])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("noise", help="Add intrinsic Gaussian noise")
    p.add_argument("-i", "--input", type=Path, required=True)
    p.add_argument("--model", choices=[m.value for m in NoiseModel], default=NoiseModel.TANGENT.value)
    p.add_argument("--sigma", type=_nonneg, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("denoise", help="Two-step NL-MMSE denoising")
    p.add_argument("-i", "--input", type=Path, required=True)
    p.add_argument("--sigma", type=_nonneg, required=True)
    for name in ("s1", "s2", "w1", "w2"):
        p.add_argument(f"--{name}", type=_odd)
    p.add_argument("--k1", type=int)
    p.add_argument("--k2", type=int)
    p.add_argument("--gamma", type=_nonneg)
    p.add_argument("--preset", choices=["synthetic", "photo"], default="synthetic")
    p.add_argument("--no-accel", action="store_true", help="Use every patch as a reference")
    p.add_argument("--workers", type=int, help="Threads per block of references (default from NLMMSE_WORKERS)")
    p.add_argument("--oracle-out", type=Path, help="Also write the first-step image")
    p.add_argument("-o", "--output", type=Path, required=True)
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("nlmeans", help="Nonlocal means baseline")
    p.add_argument("-i", "--input", type=Path, required=True)
    p.add_argument("--sigma", type=_nonneg, help="Noise level of the input, for the log only")
    p.add_argument("--s", type=_odd)
    p.add_argument("--w", type=_odd)
    p.add_argument("--k", type=int)
    p.add_argument("--delta", type=float)
    p.add_argument("--tau", type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.set_defaults(func=cmd_nlmeans)

    p = sub.add_parser("mse", help="Mean squared geodesic distance of two images")
    p.add_argument("-a", type=Path, required=True)
    p.add_argument("-b", type=Path, required=True)
    p.set_defaults(func=cmd_mse)

    p = sub.add_parser("render", help="Draw an image as SVG glyphs or a PPM picture")
    p.add_argument("-i", "--input", type=Path, required=True)
    p.add_argument("--style", choices=[s.value for s in RenderStyle], default=RenderStyle.AUTO.value)
    p.add_argument("-o", "--output", type=Path, required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("experiment", help="generate -> noise -> denoise -> score -> render")
    p.add_argument("name", choices=sorted(GENERATORS))
    p.add_argument("--dims", type=int, nargs=2, metavar=("H", "W"), default=[64, 64])
    p.add_argument("--sigma", type=_nonneg, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model", choices=[m.value for m in NoiseModel], default=NoiseModel.TANGENT.value)
    p.add_argument("--preset", choices=["synthetic", "photo"], default="synthetic")
    p.add_argument("--nlmeans", action="store_true", help="Also run the NL-means baseline")
    p.add_argument("--no-render", action="store_true")
    p.add_argument("--no-accel", action="store_true")
    p.add_argument("--workers", type=int)
    p.add_argument("-o", "--output", type=Path, default=config.output.output_dir)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        if args.verbose:
            config.denoise.verbose = True
        return args.func(args)
    except UsageError as e:
        console.print(str(e), markup=False, highlight=False)
        return EXIT_USAGE
    except (ManifoldError, OSError) as e:
        console.print(f"[red]✗ {type(e).__name__}: {e}[/red]")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
