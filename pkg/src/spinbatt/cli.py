"""Command-line front end, a thin client of the HTTP service.

By default requests are served in process (the FastAPI app mounted on a
test transport); point --server or SPINBATT_SERVER at a running instance
to talk to it over the network instead.  All numerical work happens
service-side; the CLI just shapes requests and writes byte-stable files.

Exit codes: 0 success, 1 numeric failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import httpx

SERVER_ENV_VAR = "SPINBATT_SERVER"

USAGE_EXIT = 2
NUMERIC_EXIT = 1


def _make_client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=None)
    import warnings

    with warnings.catch_warnings():
        # the in-process transport is an implementation detail; keep stderr clean
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _post(client: httpx.Client, path: str, payload: dict):
    """POST and return (exit_code, body); non-200 prints the detail."""
    response = client.post(path, json=payload)
    if response.status_code == 200:
        return 0, response.json()
    try:
        detail = response.json().get("detail", response.text)
    except ValueError:
        detail = response.text
    print(f"error ({response.status_code}): {detail}", file=sys.stderr)
    code = USAGE_EXIT if response.status_code == 422 else NUMERIC_EXIT
    return code, None


def _fmt(value) -> str:
    """One CSV cell: 15 significant digits for floats, empty for missing."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.15g}"
    if isinstance(value, int):
        return str(value)
    text = str(value)
    if any(ch in text for ch in ',"\n'):
        text = '"' + text.replace('"', '""') + '"'
    return text


def _round_floats(obj):
    """Clamp every float to 15 significant digits for stable JSON files."""
    if isinstance(obj, float):
        return float(f"{obj:.15g}")
    if isinstance(obj, list):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    return obj


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _emit_json(doc, out: str | None) -> None:
    _emit(json.dumps(_round_floats(doc), indent=2) + "\n", out)


def _emit_csv(header: list[str], rows, out: str | None) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
    _emit("\n".join(lines) + "\n", out)


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _add_param_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--nb", type=int, required=True, help="battery cells N_b")
    sub.add_argument("--nc", type=int, required=True, help="charger units N_c")
    sub.add_argument("--m", type=int, required=True, help="excited charger units m")
    sub.add_argument("--coupling", type=float, default=1.0, help="flip-flop strength A")
    sub.add_argument("--omega", type=float, default=1.0, help="level splitting")


def _param_payload(args) -> dict:
    return {
        "n_b": args.nb,
        "n_c": args.nc,
        "m": args.m,
        "coupling": args.coupling,
        "omega": args.omega,
    }


def _cmd_simulate(client, args) -> int:
    payload = _param_payload(args)
    payload.update(
        t_max=args.tmax, samples=args.samples, populations=args.populations == "on"
    )
    code, body = _post(client, "/simulate", payload)
    if code:
        return code
    if args.format == "json":
        _emit_json(body, args.out)
        return 0
    pops = body.get("populations")
    header = ["t", "delta_e", "eta"]
    if pops is not None:
        header += [f"p{j}" for j in range(len(pops[0]))]
    rows = []
    for i, t in enumerate(body["times"]):
        row = [t, body["delta_e"][i], body["eta"][i]]
        if pops is not None:
            row += pops[i]
        rows.append(row)
    _emit_csv(header, rows, args.out)
    return 0


def _cmd_report(client, args) -> int:
    payload = _param_payload(args)
    payload.update(window=args.window, threshold=args.threshold)
    code, body = _post(client, "/report", payload)
    if code:
        return code
    _emit_json(body, args.out)
    return 0


def _cmd_sweep(client, args) -> int:
    try:
        spec = json.loads(Path(args.spec).read_text())
    except OSError as exc:
        print(f"cannot read sweep spec: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except json.JSONDecodeError as exc:
        print(f"sweep spec is not valid JSON: {exc}", file=sys.stderr)
        return USAGE_EXIT
    code, body = _post(client, "/sweep", {"spec": spec, "jobs": args.jobs})
    if code:
        return code
    columns = body["columns"]
    rows = [[row.get(col) for col in columns] for row in body["rows"]]
    _emit_csv(columns, rows, args.out)
    return 0


def _cmd_scaling(client, args) -> int:
    payload = {"n_values": args.nb, "window": args.window, "threshold": args.threshold}
    code, body = _post(client, "/scaling", payload)
    if code:
        return code
    _emit_json(body, args.out)
    return 0


def _cmd_collapse(client, args) -> int:
    payload = {
        "n_b_values": args.nb,
        "ratios": args.ratios,
        "m_equals_n_b": args.m_rule == "nb",
        "window": args.window,
        "threshold": args.threshold,
    }
    code, body = _post(client, "/collapse", payload)
    if code:
        return code
    rows = []
    for curve in body["curves"]:
        for point in curve["points"]:
            rows.append([curve["n_b"], point["ratio"], point["n_c"], point["eta_max"]])
    _emit_csv(["n_b", "ratio", "n_c", "eta_max"], rows, args.out)
    return 0


def _cmd_verify(client, args) -> int:
    payload = {"max_spins": args.max_spins, "samples": args.samples, "t_max": args.tmax}
    code, body = _post(client, "/verify", payload)
    if code:
        return code
    worst = body["worst"]
    print(f"cases checked: {body['cases']} (all n_b + n_c <= {body['max_spins']})")
    print(
        "worst deviation: {dev:.3e} at n_b={n_b} n_c={n_c} m={m}".format(
            dev=worst["deviation"], n_b=worst["n_b"], n_c=worst["n_c"], m=worst["m"]
        )
    )
    print(f"tolerance: {body['tolerance']:g}")
    print("PASS" if body["passed"] else "FAIL")
    return 0 if body["passed"] else NUMERIC_EXIT


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("spinbatt.service:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinbatt",
        description="Central-spin quantum battery laboratory (thin client).",
    )
    parser.add_argument(
        "--server",
        default=os.environ.get(SERVER_ENV_VAR),
        help="base URL of a running service; defaults to in-process execution",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="sample a charging trajectory")
    _add_param_flags(sim)
    sim.add_argument("--tmax", type=float, default=None, help="sampling horizon")
    sim.add_argument("--samples", type=int, default=2001)
    sim.add_argument("--out", default=None, help="output path (default stdout)")
    sim.add_argument("--format", choices=("csv", "json"), default="csv")
    sim.add_argument("--populations", choices=("on", "off"), default="off")
    sim.set_defaults(handler=_cmd_simulate)

    rep = sub.add_parser("report", help="charging time, powers and advantage")
    _add_param_flags(rep)
    rep.add_argument("--window", type=float, default=None, help="search window override")
    rep.add_argument("--threshold", type=float, default=10.0, help="regime ratio threshold")
    rep.add_argument("--out", default=None)
    rep.set_defaults(handler=_cmd_report)

    swp = sub.add_parser("sweep", help="run a parameter sweep from a JSON spec")
    swp.add_argument("spec", help="path to the sweep spec JSON file")
    swp.add_argument("--jobs", type=int, default=None, help="worker processes")
    swp.add_argument("--out", default=None)
    swp.set_defaults(handler=_cmd_sweep)

    sca = sub.add_parser("scaling", help="advantage scaling along n_b = m = n_c")
    sca.add_argument("--nb", type=_int_list, required=True, help="comma-separated sizes")
    sca.add_argument("--window", type=float, default=None)
    sca.add_argument("--threshold", type=float, default=10.0)
    sca.add_argument("--out", default=None)
    sca.set_defaults(handler=_cmd_scaling)

    col = sub.add_parser("collapse", help="peak efficiency vs charger/battery ratio")
    col.add_argument("--nb", type=_int_list, required=True, help="comma-separated sizes")
    col.add_argument("--ratios", type=_float_list, required=True)
    col.add_argument("--m-rule", choices=("nb", "nc"), default="nb",
                     help="pin m to the battery size or to the charger size")
    col.add_argument("--window", type=float, default=None)
    col.add_argument("--threshold", type=float, default=10.0)
    col.add_argument("--out", default=None)
    col.set_defaults(handler=_cmd_collapse)

    ver = sub.add_parser("verify", help="sector dynamics vs full-space oracle")
    ver.add_argument("--max-spins", type=int, required=True)
    ver.add_argument("--samples", type=int, default=100)
    ver.add_argument("--tmax", type=float, default=10.0)
    ver.set_defaults(handler=_cmd_verify)

    srv = sub.add_parser("serve", help="run the HTTP service")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    srv.set_defaults(handler=None)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return _cmd_serve(args)
    client = _make_client(args.server)
    try:
        return args.handler(client, args)
    except httpx.HTTPError as exc:
        print(f"service unreachable: {exc}", file=sys.stderr)
        return NUMERIC_EXIT
    finally:
        client.close()


if __name__ == "__main__":
    sys.exit(main())
