"""
Figures of manifold-valued images.

SPD(2) and SPD(3) pixels are drawn as ellipse glyphs in SVG: the glyph of
A is the image of the unit circle (unit sphere, projected on the first two
axes for r = 3) under A. Every other manifold is mapped to colours and
written as a binary PPM through Pillow.
"""
from enum import Enum
from pathlib import Path
from typing import Dict, Union

import numpy as np
from PIL import Image

from src.errors import ParameterError
from src.manifolds.descriptor import ManifoldKind
from src.manifolds.image import ManifoldImage

CELL = 20.0
GLYPH_FILL = 0.45  # largest semi-axis, in cells
SVG_NS = "http://www.w3.org/2000/svg"


class RenderStyle(str, Enum):
    AUTO = "auto"
    GLYPHS = "glyphs"
    COLOR = "color"


def _props(d: Dict[str, object]) -> str:
    return " ".join(f'{k.replace("_", "-")}="{v}"' for k, v in d.items())


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def glyph_axes(image: ManifoldImage):
    """
    Semi-axes (N1, N2, 2), largest first, and the angle in degrees of the
    major axis, measured from the column direction towards the row direction.
    """
    if image.descriptor.kind is not ManifoldKind.SPD or image.descriptor.param not in (2, 3):
        raise ParameterError(f"ellipse glyphs need SPD(2) or SPD(3) pixels, got {image.descriptor}")
    r = image.descriptor.param
    a = image.data.reshape(image.dims + (r, r))
    shape = (a @ a)[..., :2, :2]
    lam, vec = np.linalg.eigh(shape)
    axes = np.sqrt(np.maximum(lam[..., ::-1], 0.0))
    major = vec[..., :, 1]
    angle = np.degrees(np.arctan2(major[..., 1], major[..., 0]))
    return axes, angle


def render_svg(image: ManifoldImage) -> str:
    axes, angle = glyph_axes(image)
    n1, n2 = image.dims
    scale = GLYPH_FILL * CELL / max(float(np.max(axes)), np.finfo(float).tiny)
    hue = np.mod(angle, 180.0) * 2.0

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg {_props(dict(xmlns=SVG_NS, version="1.1", width=_fmt(n2 * CELL), height=_fmt(n1 * CELL)))}>',
    ]
    for i in range(n1):
        for j in range(n2):
            cx, cy = (j + 0.5) * CELL, (i + 0.5) * CELL
            attrs = dict(
                cx=_fmt(cx),
                cy=_fmt(cy),
                rx=_fmt(scale * axes[i, j, 0]),
                ry=_fmt(scale * axes[i, j, 1]),
                transform=f"rotate({_fmt(angle[i, j])} {_fmt(cx)} {_fmt(cy)})",
                fill=f"hsl({hue[i, j]:.1f},70%,55%)",
                stroke="black",
                stroke_width="0.5",
            )
            lines.append(f"<ellipse {_props(attrs)}/>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _unit(x: np.ndarray) -> np.ndarray:
    lo, hi = float(np.min(x)), float(np.max(x))
    return np.zeros_like(x) if hi <= lo else (x - lo) / (hi - lo)


def _bytes(x: np.ndarray) -> np.ndarray:
    return np.round(np.clip(x, 0.0, 1.0) * 255.0).astype(np.uint8)


def color_pixels(image: ManifoldImage) -> Image.Image:
    """RGB picture of an image, one pixel per manifold value"""
    kind = image.descriptor.kind
    x = image.data
    if kind is ManifoldKind.CIRCLE:
        hue = np.mod(np.arctan2(x[..., 1], x[..., 0]), 2.0 * np.pi) / (2.0 * np.pi)
        full = Image.fromarray(np.full(hue.shape, 255, np.uint8))
        return Image.merge("HSV", (Image.fromarray(_bytes(hue)), full, full)).convert("RGB")
    if kind is ManifoldKind.SPHERE2:
        rgb = (x + 1.0) / 2.0
    elif kind is ManifoldKind.SIMPLEX1:
        rgb = np.repeat(x[..., :1], 3, axis=-1)
    elif kind is ManifoldKind.HYPERBOLIC2:
        disk = x[..., :2] / (1.0 + x[..., 2:3])
        rgb = np.concatenate([(disk + 1.0) / 2.0, 1.0 - np.linalg.norm(disk, axis=-1, keepdims=True)], -1)
    elif kind is ManifoldKind.SPD:
        r = image.descriptor.param
        _, logdet = np.linalg.slogdet(x.reshape(image.dims + (r, r)))
        rgb = np.repeat(_unit(logdet)[..., None], 3, axis=-1)
    else:
        channels = [_unit(x[..., k]) for k in range(min(3, x.shape[-1]))]
        if len(channels) == 1:
            channels *= 3
        while len(channels) < 3:
            channels.append(np.zeros(image.dims))
        rgb = np.stack(channels, axis=-1)
    return Image.fromarray(_bytes(rgb))


def resolve_style(image: ManifoldImage, style: Union[str, RenderStyle] = RenderStyle.AUTO) -> RenderStyle:
    try:
        style = RenderStyle(style)
    except ValueError:
        raise ParameterError(f"unknown render style '{style}'") from None
    if style is RenderStyle.AUTO:
        glyphs = image.descriptor.kind is ManifoldKind.SPD and image.descriptor.param in (2, 3)
        return RenderStyle.GLYPHS if glyphs else RenderStyle.COLOR
    return style


def render(image: ManifoldImage, path: Union[str, Path], style: Union[str, RenderStyle] = RenderStyle.AUTO) -> Path:
    """Write an SVG glyph figure or a PPM colour picture; returns the path"""
    path = Path(path)
    if resolve_style(image, style) is RenderStyle.GLYPHS:
        path.write_text(render_svg(image), encoding="utf-8")
    else:
        color_pixels(image).save(path, format="PPM")
    return path
