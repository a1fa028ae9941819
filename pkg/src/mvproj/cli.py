"""Command-line front end.

The CLI is a thin client of the HTTP service: every command builds a
request, sends it (in-process by default, or to --server / $MVPROJ_SERVER),
and formats the JSON response.  Exit codes: 0 success, 1 negative verdict
(not projective, ranges differ, not archimedean, oracle refutation,
invalid function, not cyclic), 2 input error.
"""
from __future__ import annotations

import asyncio
import json
import os
import sys
from typing import Any, Optional

import click
import httpx

from .errors import InputError
from .wire import load_json


def _use_color() -> bool:
    return os.environ.get("MVPROJ_COLOR", "1") != "0" and sys.stdout.isatty()


def _style(text: str, **kw) -> str:
    return click.style(text, **kw) if _use_color() else text


class Client:
    """HTTP access to the service; in-process ASGI unless a server URL is
    configured, so the CLI works with no server running."""

    def __init__(self, server: Optional[str]):
        self.server = server

    def post(self, path: str, payload: dict) -> tuple[int, Any]:
        return asyncio.run(self._request("POST", path, payload))

    async def _request(self, method: str, path: str, payload: dict):
        if self.server:
            transport = None
            base = self.server.rstrip("/")
        else:
            from .service import create_app
            transport = httpx.ASGITransport(app=create_app())
            base = "http://mvproj.internal"
        async with httpx.AsyncClient(transport=transport, base_url=base,
                                     timeout=600.0) as client:
            resp = await client.request(method, path, json=payload)
        content_type = resp.headers.get("content-type", "")
        if "image/svg" in content_type:
            return resp.status_code, resp.text
        try:
            return resp.status_code, resp.json()
        except json.JSONDecodeError:
            return resp.status_code, {"detail": resp.text}


def _run(ctx: click.Context, path: str, payload: dict) -> Any:
    """POST and handle transport/input failures uniformly."""
    client: Client = ctx.obj["client"]
    try:
        status, body = client.post(path, payload)
    except httpx.HTTPError as exc:
        click.echo(f"error: cannot reach service ({exc})", err=True)
        sys.exit(2)
    if status >= 400:
        detail = body.get("detail", body) if isinstance(body, dict) else body
        click.echo(f"error: {detail}", err=True)
        sys.exit(2)
    return body


def _emit(ctx: click.Context, body: Any, text: str, ok: bool) -> None:
    if ctx.obj["json"]:
        click.echo(json.dumps(body, indent=2, sort_keys=True))
    elif text:
        click.echo(text)
    if not ok:
        sys.exit(1)


def _load_file(path: str) -> Any:
    try:
        return load_json(path)
    except InputError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)


def _write_svg(ctx: click.Context, endpoint: str, payload: dict, out: str) -> None:
    body = _run(ctx, endpoint, payload)
    with open(out, "w") as handle:
        handle.write(body)
    click.echo(f"wrote {out}")


@click.group()
@click.option("--server", envvar="MVPROJ_SERVER", default=None,
              help="Base URL of a running service; in-process by default.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.pass_context
def main(ctx: click.Context, server: Optional[str], as_json: bool) -> None:
    """Exact computation with McNaughton functions."""
    ctx.ensure_object(dict)
    ctx.obj["client"] = Client(server)
    ctx.obj["json"] = as_json


@main.group()
def chain() -> None:
    """Finite chain orbits."""


@chain.command("orbit")
@click.argument("element")
@click.pass_context
def chain_orbit(ctx: click.Context, element: str) -> None:
    """Print the descent orbit of M/P."""
    try:
        m, p = (int(part) for part in element.split("/"))
    except ValueError:
        click.echo("error: element must look like 3/13", err=True)
        sys.exit(2)
    body = _run(ctx, "/chain/orbit", {"m": m, "p": p})
    _emit(ctx, body, body["line"], ok=body["cyclic"])


@main.group()
def eta() -> None:
    """Distinguished zero-pinning terms."""


@eta.command("build")
@click.argument("m", type=int)
@click.argument("p", type=int)
@click.option("--compile", "do_compile", is_flag=True, help="Also compile to node lists.")
@click.option("--svg", "svg_out", default=None, help="Plot the compiled functions.")
@click.pass_context
def eta_build(ctx: click.Context, m: int, p: int, do_compile: bool, svg_out: str) -> None:
    """Build the terms pinned at M/P and their composition."""
    body = _run(ctx, "/eta/build", {"m": m, "p": p, "compile": do_compile or bool(svg_out)})
    lines = [
        f"multipliers: {body['multipliers']}",
        f"descent term:    {body['descent_term']}",
        f"unit-zero term:  {body['unit_zero_term']}",
        f"point-zero term: {body['point_zero_term']}",
    ]
    if do_compile and body.get("compiled"):
        for name, nodes in body["compiled"].items():
            lines.append(f"{name}: {json.dumps(nodes)}")
    _emit(ctx, body, "\n".join(lines), ok=True)
    if svg_out:
        plots = [{"function": body["compiled"]["descent"], "label": f"descent {m}/{p}"},
                 {"function": body["compiled"]["unit_zero"], "label": f"unit zero 1/{p}"},
                 {"function": body["compiled"]["point_zero"], "label": f"point zero {m}/{p}"}]
        _write_svg(ctx, "/svg/functions", {"functions": plots}, svg_out)


@main.group()
def fn() -> None:
    """Single functions."""


@fn.command("eval")
@click.argument("file", type=click.Path())
@click.argument("at")
@click.option("--approx", is_flag=True, help="Add a decimal display column.")
@click.pass_context
def fn_eval(ctx: click.Context, file: str, at: str, approx: bool) -> None:
    """Evaluate the function in FILE at the point AT ("1/3" or "1/3,2/5")."""
    data = _load_file(file)
    args = [part.strip() for part in at.split(",")]
    body = _run(ctx, "/fn/eval", {"function": data, "at": args})
    text = body["value"]
    if approx:
        from fractions import Fraction
        text += f"  (~ {float(Fraction(text)):.6g})"
    _emit(ctx, body, text, ok=True)


@fn.command("validate")
@click.argument("file", type=click.Path())
@click.pass_context
def fn_validate(ctx: click.Context, file: str) -> None:
    """Check the free-algebra conditions."""
    data = _load_file(file)
    body = _run(ctx, "/fn/validate", {"function": data})
    if body["valid"]:
        _emit(ctx, body, _style("valid", fg="green"), ok=True)
    else:
        text = "\n".join([_style("invalid:", fg="red")] + body["violations"])
        _emit(ctx, body, text, ok=False)


@main.command("archimedean")
@click.argument("file", type=click.Path())
@click.pass_context
def archimedean_cmd(ctx: click.Context, file: str) -> None:
    """Decide whether the function in FILE is archimedean."""
    data = _load_file(file)
    body = _run(ctx, "/fn/archimedean", {"function": data})
    verdict = "archimedean" if body["archimedean"] else "not archimedean"
    text = f"{verdict} (min = {body['min_value']})"
    _emit(ctx, body, text, ok=body["archimedean"])


@main.command("extremals")
@click.argument("f_file", type=click.Path())
@click.argument("g_file", type=click.Path())
@click.option("--svg", "svg_out", default=None, help="Plot the range broken line.")
@click.pass_context
def extremals_cmd(ctx: click.Context, f_file: str, g_file: str, svg_out: str) -> None:
    """Corner points of the range of the pair (F, G)."""
    f, g = _load_file(f_file), _load_file(g_file)
    body = _run(ctx, "/pair/extremals", {"f": f, "g": g})
    pts = ", ".join("(" + ", ".join(p) + ")" for p in body["extremals"])
    _emit(ctx, body, pts, ok=True)
    if svg_out:
        _write_svg(ctx, "/svg/range", {"f": f, "g": g}, svg_out)


@main.command("iso")
@click.argument("f_file", type=click.Path())
@click.argument("g_file", type=click.Path())
@click.argument("f1_file", type=click.Path())
@click.argument("g1_file", type=click.Path())
@click.pass_context
def iso_cmd(ctx: click.Context, f_file, g_file, f1_file, g1_file) -> None:
    """Compare the ranges of two pairs; equality implies isomorphism."""
    body = _run(ctx, "/pair/iso", {
        "f": _load_file(f_file), "g": _load_file(g_file),
        "f1": _load_file(f1_file), "g1": _load_file(g1_file)})
    _emit(ctx, body, body["conclusion"], ok=body["ranges_equal"])


@main.command("equalizer")
@click.argument("pair_file", type=click.Path())
@click.option("--svg", "svg_out", default=None)
@click.pass_context
def equalizer_cmd(ctx: click.Context, pair_file: str, svg_out: str) -> None:
    """Fixed-point locus of the substitution pair."""
    pair = _load_file(pair_file)
    body = _run(ctx, "/pair/equalizer", {"pair": pair})
    text = (f"{len(body['cells'])} cells; connected: {body['connected']}; "
            f"contains origin: {body['contains_origin']}")
    _emit(ctx, body, text, ok=True)
    if svg_out:
        _write_svg(ctx, "/svg/pair", {"pair": pair}, svg_out)


@main.command("check-projective")
@click.argument("pair_file", type=click.Path())
@click.option("--svg", "svg_out", default=None)
@click.pass_context
def check_projective_cmd(ctx: click.Context, pair_file: str, svg_out: str) -> None:
    """Decide whether the pair presents a projective subalgebra."""
    pair = _load_file(pair_file)
    body = _run(ctx, "/pair/check-projective", {"pair": pair})
    if svg_out:
        _write_svg(ctx, "/svg/pair", {"pair": pair}, svg_out)
    if body["projective"]:
        text = (_style("projective: true", fg="green")
                + f"  (equalizer cells: {len(body['equalizer'])})")
        _emit(ctx, body, text, ok=True)
    else:
        witness = "(" + ", ".join(body["witness"]) + ")"
        text = (_style("projective: false", fg="red")
                + f"  witness u = {witness}"
                + f"  (equalizer cells: {len(body['equalizer'])}, "
                  f"connected: {body['connected']})")
        _emit(ctx, body, text, ok=False)


@main.group()
def oracle() -> None:
    """Independent cross-checks."""


@oracle.command("grid")
@click.argument("pair_file", type=click.Path())
@click.option("-D", "--denominator", "denominator", type=int, required=True)
@click.pass_context
def oracle_grid(ctx: click.Context, pair_file: str, denominator: int) -> None:
    """Search a rational grid for points refuting projectivity."""
    body = _run(ctx, "/pair/oracle",
                {"pair": _load_file(pair_file), "denominator": denominator})
    if body["refuted"]:
        pts = ", ".join("(" + ", ".join(p) + ")" for p in body["counterexamples"])
        _emit(ctx, body, f"refuted: counterexamples {pts}", ok=False)
    else:
        _emit(ctx, body, f"no counterexample on the {denominator}-grid "
                         f"({body['checked']} points)", ok=True)


@main.command("eta-bridge")
@click.argument("pair_file", type=click.Path())
@click.option("--primes", type=int, default=5, help="Prime bound (default 5).")
@click.pass_context
def eta_bridge_cmd(ctx: click.Context, pair_file: str, primes: int) -> None:
    """Check the equalizer/archimedean biconditional on rational points."""
    body = _run(ctx, "/pair/eta-bridge",
                {"pair": _load_file(pair_file), "prime_bound": primes})
    if body["holds"]:
        _emit(ctx, body, f"biconditional holds at all {body['points_checked']} points",
              ok=True)
    else:
        _emit(ctx, body, f"violations at {len(body['violations'])} of "
                         f"{body['points_checked']} points", ok=False)


@main.group()
def build() -> None:
    """Constructive generator pairs."""


def _emit_build(ctx: click.Context, body: dict, out: Optional[str],
                svg_out: Optional[str], summary: str) -> None:
    if out:
        from .wire import dump_json
        dump_json(body["pair"], out)
        summary += f"; wrote {out}"
    _emit(ctx, body, summary, ok=body["projective"])
    if svg_out:
        _write_svg(ctx, "/svg/regions", {"pair": body["pair"]}, svg_out)


@build.command("case-i")
@click.option("--spec", "spec_file", type=click.Path(), required=True,
              help="JSON file with f1, f2, g1, g2 node lists.")
@click.option("--out", default=None, help="Write the pair to this file.")
@click.option("--svg", "svg_out", default=None)
@click.pass_context
def build_case_i_cmd(ctx: click.Context, spec_file: str, out: str, svg_out: str) -> None:
    """Build from four pinching boundary functions."""
    data = _load_file(spec_file)
    body = _run(ctx, "/build/case-i", data)
    summary = (f"projective: {str(body['projective']).lower()}; "
               f"equalizer cells: {len(body['equalizer'])}")
    _emit_build(ctx, body, out, svg_out, summary)


@build.command("case-ii")
@click.option("-a", type=int, required=True)
@click.option("-b", type=int, required=True)
@click.option("-c", type=int, required=True)
@click.option("-d", type=int, required=True)
@click.option("--out", default=None)
@click.option("--svg", "svg_out", default=None)
@click.pass_context
def build_case_ii_cmd(ctx, a: int, b: int, c: int, d: int, out: str, svg_out: str) -> None:
    """Build from the two-piece roof with integer parameters A <= B, C <= D."""
    body = _run(ctx, "/build/case-ii", {"a": a, "b": b, "c": c, "d": d})
    k = body["constants"]
    parts = [f"P = ({', '.join(k['P'])})", f"case: {k['case']}"]
    if k["x_S"]:
        parts.append(f"x_S = {k['x_S']}")
    if k["x_U"]:
        parts.append(f"x_U = {k['x_U']}")
    summary = (f"projective: {str(body['projective']).lower()}; " + "; ".join(parts))
    _emit_build(ctx, body, out, svg_out, summary)


@build.command("case-iii")
@click.option("--fan", "fan_file", type=click.Path(), required=True,
              help="JSON file with the triangle list.")
@click.option("--out", default=None)
@click.option("--svg", "svg_out", default=None)
@click.pass_context
def build_case_iii_cmd(ctx: click.Context, fan_file: str, out: str, svg_out: str) -> None:
    """Build from a triangle (or fan of triangles) with a vertex at 0."""
    data = _load_file(fan_file)
    body = _run(ctx, "/build/case-iii", data)
    summary = (f"projective: {str(body['projective']).lower()}; "
               f"triangles: {len(body['parameters'])}")
    _emit_build(ctx, body, out, svg_out, summary)


@main.group()
def term() -> None:
    """Concrete term syntax."""


@term.command("parse")
@click.argument("source")
@click.option("--arity", type=int, default=2)
@click.option("--compile", "do_compile", is_flag=True)
@click.pass_context
def term_parse_cmd(ctx: click.Context, source: str, arity: int, do_compile: bool) -> None:
    """Parse SOURCE and print it back in canonical syntax."""
    body = _run(ctx, "/term/parse",
                {"source": source, "arity": arity, "compile": do_compile})
    lines = [body["printed"]]
    if do_compile:
        lines.append(json.dumps(body["compiled"]))
    _emit(ctx, body, "\n".join(lines), ok=True)


@main.command("serve")
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app
    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
