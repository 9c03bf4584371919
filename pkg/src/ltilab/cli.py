"""Command-line interface.

Every analysis command takes a transfer-function expression as its
positional argument, with ``--param name=value`` supplying bindings for any
free symbols.  Output goes to stdout or ``--out`` as CSV or JSON, and the
plotting commands can additionally render a figure file with ``--plot``.

Exit codes: 0 on success, 2 for expression errors, 3 for numeric failures.
"""

from __future__ import annotations

import json
import math
import sys
from typing import Optional

import click

from . import frequency, timeresp
from .export import EXPORT_TARGETS, generate_code
from .parsing import ExpressionError, parse_expression
from .transfer import TransferFunction

EXIT_PARSE_ERROR = 2
EXIT_NUMERIC_ERROR = 3


def _parse_params(pairs: tuple[str, ...]) -> dict[str, float]:
    env = {}
    for pair in pairs:
        if "=" not in pair:
            raise click.UsageError(f"--param needs name=value, got {pair!r}")
        name, _, raw = pair.partition("=")
        try:
            env[name.strip()] = float(raw)
        except ValueError:
            raise click.UsageError(f"--param value for {name!r} is not a number")
    return env


def _load_tf(expression: str, params: tuple[str, ...]) -> TransferFunction:
    try:
        return parse_expression(expression, _parse_params(params))
    except ExpressionError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_PARSE_ERROR)


def _emit(text: str, out: Optional[str]) -> None:
    if out and out != "-":
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _csv(headers: list[str], rows: list[list], comments: Optional[list[str]] = None) -> str:
    lines = [f"# {c}" for c in (comments or [])]
    lines.append(",".join(headers))
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        value = float(value)  # numpy scalars repr as np.float64(...)
        if math.isinf(value):
            return "inf"
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


_common = [
    click.option("--param", "params", multiple=True, help="Bind a symbol, e.g. --param T_1=2."),
    click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True),
    click.option("--out", default=None, help="Output file (default: stdout)."),
]

_freq_opts = [
    click.option("--wmin", type=float, default=frequency.WMIN_DEFAULT, show_default=True),
    click.option("--wmax", type=float, default=frequency.WMAX_DEFAULT, show_default=True),
    click.option("--points", type=int, default=frequency.POINTS_DEFAULT, show_default=True),
]


def _apply(options):
    def wrap(fn):
        for opt in reversed(options):
            fn = opt(fn)
        return fn

    return wrap


@click.group()
def main() -> None:
    """Transfer-function analysis toolbox."""


@main.command()
@click.argument("expression")
@_apply(_common)
def parse(expression: str, params, fmt, out) -> None:
    """Normalize an expression to coefficient form."""
    tf = _load_tf(expression, params)
    if fmt == "json":
        _emit(
            _json_text(
                {
                    "num": list(tf.num.coeffs),
                    "den": list(tf.den.coeffs),
                    "delay": tf.delay,
                }
            ),
            out,
        )
        return
    rows = [["num", k, c] for k, c in enumerate(tf.num.coeffs)]
    rows += [["den", k, c] for k, c in enumerate(tf.den.coeffs)]
    rows.append(["delay", 0, tf.delay])
    _emit(_csv(["part", "degree", "value"], rows), out)


def _frequency_response(tf: TransferFunction, wmin, wmax, points):
    grid = frequency.densify_for_delay(frequency.log_grid(wmin, wmax, points), tf.delay)
    return frequency.freq_response(tf, grid)


@main.command()
@click.argument("expression")
@_apply(_common + _freq_opts)
@click.option("--plot", default=None, help="Also render a figure to this file.")
def bode(expression, params, fmt, out, wmin, wmax, points, plot) -> None:
    """Frequency response: magnitude and unwrapped phase."""
    tf = _load_tf(expression, params)
    try:
        fr = _frequency_response(tf, wmin, wmax, points)
        if plot:
            from . import plotting

            plotting.save_figure(plotting.bode_figure([(expression, fr)]), plot)
    except (ValueError, ArithmeticError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_NUMERIC_ERROR)
    if fmt == "json":
        payload = {
            "omega": fr.omegas.tolist(),
            "re": fr.values.real.tolist(),
            "im": fr.values.imag.tolist(),
            "mag_db": [m if math.isfinite(m) else None for m in fr.mag_db.tolist()],
            "phase_deg": [p if math.isfinite(p) else None for p in fr.phase_deg.tolist()],
        }
        _emit(_json_text(payload), out)
        return
    rows = [
        [w, v.real, v.imag, m, p]
        for w, v, m, p in zip(fr.omegas, fr.values, fr.mag_db, fr.phase_deg)
        if math.isfinite(m)
    ]
    _emit(_csv(["omega", "re", "im", "mag_db", "phase_deg"], rows), out)


@main.command()
@click.argument("expression")
@_apply(_common + _freq_opts)
@click.option("--plot", default=None, help="Also render a figure to this file.")
def nyquist(expression, params, fmt, out, wmin, wmax, points, plot) -> None:
    """Nyquist curve from the Bode data."""
    tf = _load_tf(expression, params)
    try:
        fr = _frequency_response(tf, wmin, wmax, points)
        curve = frequency.nyquist_curve(fr)
        if plot:
            from . import plotting

            plotting.save_figure(plotting.nyquist_figure([(expression, fr)]), plot)
    except (ValueError, ArithmeticError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_NUMERIC_ERROR)
    omegas = fr.omegas[~fr.singular]
    if fmt == "json":
        payload = {
            "omega": omegas.tolist(),
            "re": curve[:, 0].tolist(),
            "im": curve[:, 1].tolist(),
        }
        _emit(_json_text(payload), out)
        return
    rows = [[w, x, y] for w, (x, y) in zip(omegas, curve)]
    _emit(_csv(["omega", "re", "im"], rows), out)


@main.command()
@click.argument("expression")
@_apply(_common)
@click.option("--tmax", type=float, default=None, help="End of the time window [s].")
@click.option("--points", type=int, default=timeresp.TIME_POINTS_DEFAULT, show_default=True)
@click.option("--input", "input_kind", type=click.Choice(["step", "impulse"]), default="step", show_default=True)
@click.option("--plot", default=None, help="Also render a figure to this file.")
def step(expression, params, fmt, out, tmax, points, input_kind, plot) -> None:
    """Step or impulse response (closed form or Gaver-Stehfest)."""
    tf = _load_tf(expression, params)
    try:
        if tmax is not None:
            grid = timeresp.linear_grid(tmax, points)
        else:
            grid = timeresp.default_time_grid(tf, points)
        resp = timeresp.respond(tf, input_kind, grid)
        if plot:
            from . import plotting

            plotting.save_figure(plotting.step_figure([(expression, resp)]), plot)
    except (ValueError, ArithmeticError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_NUMERIC_ERROR)
    if fmt == "json":
        payload = {
            "t": resp.times.tolist(),
            "y": [v if math.isfinite(v) else None for v in resp.values.tolist()],
            "method": resp.method,
            "input_kind": resp.input_kind,
        }
        _emit(_json_text(payload), out)
        return
    rows = list(zip(resp.times.tolist(), resp.values.tolist()))
    _emit(
        _csv(
            ["t", "y"],
            [list(r) for r in rows],
            comments=[f"method={resp.method}", f"input_kind={resp.input_kind}"],
        ),
        out,
    )


@main.command()
@click.argument("expression")
@_apply(_common)
def margins(expression, params, fmt, out) -> None:
    """Gain and phase margins with crossover frequencies."""
    tf = _load_tf(expression, params)
    try:
        m = frequency.margins(tf)
    except (ValueError, ArithmeticError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_NUMERIC_ERROR)
    if fmt == "json":
        payload = {
            "gain_margin": m.gain_margin if math.isfinite(m.gain_margin) else None,
            "gm_db": m.gm_db if math.isfinite(m.gm_db) else None,
            "omega_pc": m.omega_pc,
            "phase_margin_deg": m.phase_margin_deg,
            "omega_gc": m.omega_gc,
        }
        _emit(_json_text(payload), out)
        return
    row = [m.gain_margin, m.gm_db, m.omega_pc, m.phase_margin_deg, m.omega_gc]
    _emit(
        _csv(["gain_margin", "gm_db", "omega_pc", "phase_margin_deg", "omega_gc"], [row]),
        out,
    )


@main.command()
@click.argument("expression")
@_apply(_common)
@click.option("--plot", default=None, help="Also render a figure to this file.")
def pzmap(expression, params, fmt, out, plot) -> None:
    """Pole and zero locations."""
    tf = _load_tf(expression, params)
    try:
        poles = tf.poles()
        zeros = tf.zeros()
        if plot:
            from . import plotting

            plotting.save_figure(plotting.pzmap_figure([(expression, tf)]), plot)
    except (ValueError, ArithmeticError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_NUMERIC_ERROR)
    if fmt == "json":
        payload = {
            "poles": [{"re": p.real, "im": p.imag} for p in poles],
            "zeros": [{"re": z.real, "im": z.imag} for z in zeros],
        }
        _emit(_json_text(payload), out)
        return
    rows = [["pole", p.real, p.imag] for p in poles]
    rows += [["zero", z.real, z.imag] for z in zeros]
    _emit(_csv(["kind", "re", "im"], rows), out)


@main.command()
@click.argument("expression")
@click.option("--param", "params", multiple=True, help="Bind a symbol, e.g. --param T_1=2.")
@click.option("--target", type=click.Choice(list(EXPORT_TARGETS)), required=True)
@click.option("--out", default=None, help="Output file (default: stdout).")
def export(expression, params, target, out) -> None:
    """Generate a runnable analysis script for another ecosystem."""
    tf = _load_tf(expression, params)
    code = generate_code(tf, target)
    _emit(code.text, out)


@main.command()
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--data-dir", default=None)
@click.option("--config", "config_path", default=None)
def serve(host, port, data_dir, config_path) -> None:
    """Run the HTTP API server."""
    import uvicorn

    from pathlib import Path

    from .config import load_config
    from .server import create_app

    cfg = load_config(Path(config_path) if config_path else None)
    if data_dir:
        cfg = type(cfg)(data_dir=Path(data_dir), host=cfg.host, port=cfg.port)
    if host:
        cfg = type(cfg)(data_dir=cfg.data_dir, host=host, port=cfg.port)
    if port:
        cfg = type(cfg)(data_dir=cfg.data_dir, host=cfg.host, port=port)
    uvicorn.run(create_app(cfg), host=cfg.host, port=cfg.port)


if __name__ == "__main__":
    main()
