"""
Image files, synthetic test images and figures
"""
from src.imaging.generators import GENERATORS, generate, vortex_cores
from src.imaging.mvi import decode_mvi, encode_mvi, read_mvi, write_mvi
from src.imaging.render import RenderStyle, color_pixels, glyph_axes, render, render_svg, resolve_style

__all__ = [
    "read_mvi",
    "write_mvi",
    "encode_mvi",
    "decode_mvi",
    "GENERATORS",
    "generate",
    "vortex_cores",
    "RenderStyle",
    "render",
    "render_svg",
    "color_pixels",
    "glyph_axes",
    "resolve_style",
]
