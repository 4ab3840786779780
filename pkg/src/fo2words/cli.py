"""Command-line client for the workbench service.

Every command talks HTTP: against ``--server URL`` when given, otherwise
against an in-process instance of the same service, so behavior is
identical either way.  Exit codes: 0 ok, 1 property violated, 2 usage or
parse error, 3 resource guard.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx

EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_GUARD = 3


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server.rstrip("/"), timeout=None)
    # no server given: run the same service in-process behind a sync shim
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DeprecationWarning)
        from starlette.testclient import TestClient

    from .service import create_app

    return TestClient(create_app(), raise_server_exceptions=False)


def _fail(resp: httpx.Response) -> None:
    try:
        detail = resp.json().get("detail", resp.text)
    except Exception:
        detail = resp.text
    click.echo(f"error: {detail}", err=True)
    sys.exit(EXIT_GUARD if resp.status_code == 429 else EXIT_USAGE)


@click.group()
@click.option("--server", default=None, help="Base URL of a running service;"
              " default is an embedded in-process service.")
@click.pass_context
def main(ctx, server):
    ctx.obj = server


@main.command("eval")
@click.argument("formula_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("word")
@click.option("--sig", default="less", help="'+'-joined predicate identifiers")
@click.option("--position", type=int, default=None,
              help="bind the single free variable to this position")
@click.pass_obj
def cmd_eval(server, formula_file, word, sig, position):
    """Evaluate a formula file on a word."""
    text = Path(formula_file).read_text(encoding="utf-8")
    with _client(server) as client:
        resp = client.post("/eval", json={
            "formula": text, "word": word, "sig": sig, "position": position})
    if resp.status_code != 200:
        _fail(resp)
    click.echo("true" if resp.json()["value"] else "false")


@main.command("game")
@click.argument("u")
@click.argument("v")
@click.argument("s", type=int)
@click.argument("m", type=int)
@click.option("--sig", default="less")
@click.option("--mode", type=click.Choice(["solve", "play"]), default="solve")
@click.option("--unbounded-alternations", is_flag=True,
              help="ignore M and let Spoiler switch words freely")
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="write the winner's strategy table here (solve mode)")
@click.option("--role", type=click.Choice(["spoiler", "duplicator"]),
              default="spoiler", help="your role in play mode")
@click.pass_obj
def cmd_game(server, u, v, s, m, sig, mode, unbounded_alternations, out, role):
    """Solve or interactively play the two-pebble game on (U, V)."""
    alternations = None if unbounded_alternations else m
    with _client(server) as client:
        if mode == "solve":
            resp = client.post("/solve", json={
                "u": u, "v": v, "s": s, "m": alternations, "sig": sig,
                "include_table": bool(out)})
            if resp.status_code != 200:
                _fail(resp)
            data = resp.json()
            click.echo(data["winner"].capitalize())
            if out:
                Path(out).write_text(
                    "\n".join([f"# game u={u} v={v} s={s} m={alternations} sig={sig}",
                               f"# winner {data['winner']}"] + (data["table"] or []))
                    + "\n", encoding="utf-8")
            return
        _play(client, u, v, s, alternations, sig, role)


def _render(state: dict) -> str:
    lines = []
    for side in ("u", "v"):
        word = state["words"][side]
        marks = [" "] * len(word)
        idx = 0 if side == "u" else 1
        prev, cur = state["pebbles"]["previous"], state["pebbles"]["current"]
        if prev:
            marks[prev[idx]] = "o"
        if cur:
            marks[cur[idx]] = "*"
        pend = state.get("pending")
        if pend and pend["side"] == side:
            marks[pend["position"]] = "?"
        lines.append(f"  {side}: {word}")
        lines.append(f"     {''.join(marks)}")
    lines.append(f"  round {state['roundsUsed']}/{state['rounds']}"
                 f"  switches {state['alternationsUsed']}"
                 + (f"/{state['alternations']}" if state["alternations"] is not None else "")
                 + f"  turn: {state['turn']}")
    return "\n".join(lines)


def _play(client: httpx.Client, u, v, s, m, sig, role) -> None:
    resp = client.post("/games", json={
        "u": u, "v": v, "s": s, "m": m, "sig": sig, "humanRole": role})
    if resp.status_code != 200:
        _fail(resp)
    data = resp.json()
    gid = data["id"]
    state = data["state"]
    click.echo(f"playing as {role}; moves look like 'u 3' or 'v 0'; 'hint' or 'quit'")
    while True:
        click.echo(_render(state))
        if state.get("winner"):
            click.echo(f"winner: {state['winner']} ({state.get('reason')})")
            return
        line = click.prompt("move", default="", show_default=False).strip()
        if line in ("q", "quit", "exit"):
            return
        if line in ("h", "hint"):
            hresp = client.get(f"/games/{gid}/hint")
            if hresp.status_code != 200:
                _fail(hresp)
            h = hresp.json()
            flag = "winning" if h["winning"] else "not certified winning"
            click.echo(f"hint: {h['side']} {h['position']} ({flag})")
            continue
        parts = line.split()
        if len(parts) != 2 or parts[0] not in ("u", "v") or not parts[1].isdigit():
            click.echo("  ? enter: <u|v> <position>")
            continue
        mresp = client.post(f"/games/{gid}/moves",
                            json={"side": parts[0], "position": int(parts[1])})
        if mresp.status_code == 422:
            click.echo(f"  illegal: {mresp.json().get('detail')}")
            continue
        if mresp.status_code != 200:
            _fail(mresp)
        state = mresp.json()["state"]


@main.command("transform")
@click.argument("formula_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--sig", default="less")
@click.option("--alphabet", default="ac")
@click.option("--neutral", default="c")
@click.option("--out", type=click.Path(file_okay=False), default=None,
              help="directory for the output formula and environment manifest")
@click.option("--check-upto", type=int, default=0,
              help="verify agreement on all words up to this length")
@click.pass_obj
def cmd_transform(server, formula_file, sig, alphabet, neutral, out, check_upto):
    """Rewrite a formula over order plus finite-degree predicates."""
    text = Path(formula_file).read_text(encoding="utf-8")
    with _client(server) as client:
        resp = client.post("/transform", json={
            "formula": text, "sig": sig, "alphabet": alphabet,
            "neutral": neutral, "check_upto": check_upto})
    if resp.status_code != 200:
        _fail(resp)
    data = resp.json()
    if out:
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "formula.fo").write_text(data["formula"] + "\n", encoding="utf-8")
        (outdir / "environment.json").write_text(json.dumps({
            "predicates": data["environment"],
            "source_sig": sig,
            "neutral": neutral,
            "alphabet": alphabet,
        }, indent=2) + "\n", encoding="utf-8")
        click.echo(f"wrote {outdir}/formula.fo and {outdir}/environment.json")
    else:
        click.echo(data["formula"])
    if data.get("agreement") is not None:
        click.echo(f"agreement up to {data['checked_upto']}: {data['agreement']}")
        if not data["agreement"]:
            sys.exit(EXIT_VIOLATION)


@main.command("extract")
@click.option("--p", "count", type=int, required=True, help="number of positions")
@click.option("--s", "radius", type=int, required=True, help="neighborhood radius")
@click.option("--sig", required=True)
@click.option("--well-typed", is_flag=True)
@click.option("--ceiling", type=int, default=10**6)
@click.pass_obj
def cmd_extract(server, count, radius, sig, well_typed, ceiling):
    """Positions with disjoint, separated neighborhoods."""
    with _client(server) as client:
        resp = client.post("/extract", json={
            "sig": sig, "p": count, "s": radius,
            "well_typed": well_typed, "ceiling": ceiling})
    if resp.status_code != 200:
        _fail(resp)
    click.echo(" ".join(str(x) for x in resp.json()["positions"]))


@main.command("types")
@click.option("--sig", required=True)
@click.option("--s", "radius", type=int, required=True)
@click.option("--triple", "triples", multiple=True, required=True,
              help="comma-separated triple, repeatable: --triple 0,2,4")
@click.pass_obj
def cmd_types(server, sig, radius, triples):
    """Canonical triple types; reports whether all given triples agree."""
    parsed = []
    for t in triples:
        parts = [p.strip() for p in t.split(",")]
        if len(parts) != 3 or not all(p.isdigit() for p in parts):
            click.echo(f"error: bad triple {t!r}", err=True)
            sys.exit(EXIT_USAGE)
        parsed.append([int(p) for p in parts])
    with _client(server) as client:
        resp = client.post("/types", json={"sig": sig, "s": radius, "triples": parsed})
    if resp.status_code != 200:
        _fail(resp)
    data = resp.json()
    for t, text in zip(triples, data["types"]):
        click.echo(f"{t}\t{text}")
    click.echo(f"all equivalent: {data['all_equivalent']}")


@main.command("check-collapse")
@click.option("--suite", type=click.Choice(["prop2", "thm3", "sec53"]), required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--param", "params", multiple=True,
              help="suite parameter as key=value, repeatable")
@click.pass_obj
def cmd_check_collapse(server, suite, out, params):
    """Run an acceptance battery and report violations."""
    kwargs = {}
    for kv in params:
        key, _, value = kv.partition("=")
        kwargs[key] = int(value) if value.lstrip("-").isdigit() else value
    with _client(server) as client:
        resp = client.post("/suites", json={"suite": suite, "params": kwargs})
    if resp.status_code != 200:
        _fail(resp)
    data = resp.json()
    if out:
        Path(out).write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    click.echo(json.dumps(data["summary"]))
    if not data["ok"]:
        click.echo("FALSIFIED: at least one instance violated the property", err=True)
        sys.exit(EXIT_VIOLATION)


@main.command("serve")
@click.option("--port", type=int, default=8717)
@click.option("--host", default="127.0.0.1")
def cmd_serve(port, host):
    """Run the HTTP service (health: GET /catalogue)."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
