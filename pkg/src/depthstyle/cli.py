"""Command-line interface: stylize, reconstruct, inspect-weights."""

from __future__ import annotations

import functools
import sys
from pathlib import Path

import click

from . import nn
from .depth import DepthControls, load_depth
from .errors import DepthStyleError
from .image_io import load_image, save_image
from .pipeline import Engine, StylizeParams, reconstruct, stylize
from .weights import load_weights


def _diagnostics(f):
    """Turn engine errors into one-line diagnostics with exit code 1."""

    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except DepthStyleError as exc:
            raise click.ClickException(str(exc)) from exc
        except OSError as exc:
            raise click.ClickException(str(exc)) from exc

    return wrapper


@click.group()
def main():
    """Depth-aware arbitrary style transfer."""


@main.command(name="stylize")
@click.option("--content", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--style", "styles", required=True, multiple=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Style image; repeat with --style-weight to mix styles.")
@click.option("--style-weight", "style_weights", multiple=True, type=float,
              help="Mixing weight per style; must sum to 1.")
@click.option("--depth", type=click.Path(exists=True, dir_okay=False),
              help="Grayscale depth file, larger sample = more distant.")
@click.option("--mask", type=click.Path(exists=True, dir_okay=False),
              help="Explicit grayscale strength mask (excludes --depth).")
@click.option("--alpha", default=1.0, show_default=True,
              help="Global stylization strength in [0, 1].")
@click.option("--depth-min", default=0.0, show_default=True)
@click.option("--depth-max", default=1.0, show_default=True)
@click.option("--invert-depth", is_flag=True,
              help="Apply more style to near pixels instead of distant ones.")
@click.option("--out", default="out.png", show_default=True,
              type=click.Path(dir_okay=False))
@click.option("--weights", default="weights", show_default=True,
              type=click.Path(exists=True, file_okay=False),
              help="Directory holding encoder.adsw and decoder.adsw.")
@_diagnostics
def stylize_cmd(content, styles, style_weights, depth, mask, alpha,
                depth_min, depth_max, invert_depth, out, weights):
    """Render the content image in the given style(s)."""
    if depth and mask:
        raise click.ClickException("--depth and --mask are mutually exclusive")
    if style_weights and len(style_weights) != len(styles):
        raise click.ClickException(
            "--style-weight must be given once per --style"
        )
    engine = Engine.load(weights)
    params = StylizeParams(
        alpha=alpha,
        depth_controls=DepthControls(dmin=depth_min, dmax=depth_max, invert=invert_depth),
        style_weights=tuple(style_weights) or None,
    )
    result = stylize(
        engine,
        load_image(content),
        [load_image(p) for p in styles],
        params,
        depth=load_depth(depth) if depth else None,
        mask=load_depth(mask) if mask else None,
    )
    save_image(result, out)
    click.echo(f"wrote {out}")


@main.command(name="reconstruct")
@click.option("--content", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", default="out.png", show_default=True,
              type=click.Path(dir_okay=False))
@click.option("--weights", default="weights", show_default=True,
              type=click.Path(exists=True, file_okay=False))
@_diagnostics
def reconstruct_cmd(content, out, weights):
    """Decode the re-encoded content image (zero-style baseline)."""
    engine = Engine.load(weights)
    save_image(reconstruct(engine, load_image(content)), out)
    click.echo(f"wrote {out}")


@main.command(name="inspect-weights")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--expect", type=click.Choice(["encoder", "decoder"]),
              help="Fail unless the file matches this manifest exactly.")
@_diagnostics
def inspect_weights_cmd(file, expect):
    """Validate a weight file and print its entries."""
    store = load_weights(Path(file).read_bytes())
    for name, values in store.items():
        dims = "x".join(str(d) for d in values.shape)
        click.echo(f"{name}  {dims}")
    matched = None
    for role in ("encoder", "decoder"):
        try:
            nn.validate_store(store, nn.load_manifest(role))
            matched = role
            break
        except DepthStyleError:
            continue
    if expect and matched != expect:
        raise click.ClickException(
            f"file does not match the {expect} manifest"
        )
    if matched:
        click.echo(f"manifest: matches {matched}")
    else:
        click.echo("manifest: no match")
    click.echo(f"{len(store)} entries, checksum ok")


def run():
    main()


if __name__ == "__main__":
    run()
