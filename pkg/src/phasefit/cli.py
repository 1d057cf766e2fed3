"""Command-line front end: a thin client of the compute service.

Every command builds a service request model, sends it (in-process by
default, or to a remote instance via --server), and formats the response.
Subcommands: shifts | phi | search | compare | serve. Exit codes: 0 success,
2 validation error, 3 solver error.
"""

from __future__ import annotations

import argparse
import json
import sys
import urllib.error
import urllib.request
from pathlib import Path

from .errors import DomainError, PhasefitError, SolverError
from .formats import (
    RunConfig,
    format_result_line,
    parse_config_file,
    parse_layers,
    parse_shifts_csv,
    sci,
)
from .service import run_compare, run_phi, run_search, run_shifts
from .service.schemas import (
    CompareRequest,
    PhiRequest,
    PotentialModel,
    SearchRequest,
    SearchSettings,
    ShiftsRequest,
)

DEFAULT_SEED = 1729
_HANDLERS = {
    "shifts": run_shifts,
    "phi": run_phi,
    "search": run_search,
    "compare": run_compare,
}


class _RemoteSolverError(SolverError):
    pass


class _RemoteValidationError(DomainError):
    pass


def _call(server: str | None, endpoint: str, request_model):
    """Dispatch a request: in-process handler, or HTTP POST to a server."""
    if server is None:
        return _HANDLERS[endpoint](request_model)
    url = server.rstrip("/") + "/" + endpoint
    data = request_model.model_dump_json().encode()
    req = urllib.request.Request(url, data=data, headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req) as resp:
            payload = json.loads(resp.read().decode())
    except urllib.error.HTTPError as exc:
        try:
            detail = json.loads(exc.read().decode()).get("detail")
        except Exception:
            detail = None
        message = detail.get("message") if isinstance(detail, dict) else str(detail)
        kind = detail.get("kind") if isinstance(detail, dict) else None
        if exc.code == 400 or kind == "solver":
            raise _RemoteSolverError(message or f"server error {exc.code}") from None
        raise _RemoteValidationError(message or f"server rejected request ({exc.code})") from None
    except urllib.error.URLError as exc:
        raise _RemoteSolverError(f"cannot reach server {server}: {exc.reason}") from None
    return payload


def _field(result, name):
    """Uniform access for in-process models and remote JSON payloads."""
    if isinstance(result, dict):
        return result[name]
    return getattr(result, name)


def _load_config(args) -> RunConfig:
    cfg = parse_config_file(args.config) if args.config else RunConfig()
    if getattr(args, "layers", None):
        radii, values = parse_layers(args.layers)
        cfg.layers = list(zip(radii, values))
    if getattr(args, "target_layers", None):
        radii, values = parse_layers(args.target_layers)
        cfg.target_layers = list(zip(radii, values))
    for attr, key in (
        ("k", "k"),
        ("lmax", "lmax"),
        ("l_start", "l_start"),
        ("l_end", "l_end"),
        ("jobs", "jobs"),
        ("batch", "L"),
        ("gamma", "gamma"),
        ("grid_points", "grid_points"),
        ("csv_out", "csv_out"),
        ("results_out", "results_out"),
        ("target_shifts_csv", "target_shifts_csv"),
    ):
        value = getattr(args, attr, None)
        if value is not None:
            cfg.set(key, value)
    seed = getattr(args, "seed", None)
    if seed is not None:
        if seed == "time":
            import time

            cfg.scalars["seed"] = int(time.time_ns() % 2**63)
        else:
            try:
                cfg.scalars["seed"] = int(seed)
            except ValueError:
                raise DomainError(f"--seed must be an integer or 'time', got {seed!r}") from None
    return cfg


def _potential_model(pairs, what: str, allow_empty: bool = False) -> PotentialModel | None:
    if not pairs:
        if allow_empty:
            return None
        raise DomainError(f"no {what} given: add 'layer = r,v' lines or --layers")
    return PotentialModel(radii=[r for r, _ in pairs], values=[v for _, v in pairs])


def _target_arguments(cfg: RunConfig):
    """(target_model, target_delta) for phi/search requests."""
    csv_path = cfg.get("target_shifts_csv")
    if csv_path:
        return None, parse_shifts_csv(csv_path)
    if not cfg.target_layers:
        raise DomainError("no target given: add 'target_layer = r,v' lines, --target-layers, "
                          "or target_shifts_csv")
    return _potential_model(cfg.target_layers, "target"), None


def _write_or_print(text: str, path: str | None):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_shifts(args) -> int:
    cfg = _load_config(args)
    model = _potential_model(cfg.layers, "potential", allow_empty=True)
    if model is None:
        model = PotentialModel(radii=[1.0], values=[0.0])
    req = ShiftsRequest(
        potential=model,
        k=cfg.get("k", 3.0),
        l_max=cfg.get("lmax", 20),
        method=args.method,
    )
    result = _call(args.server, "shifts", req)
    delta = _field(result, "delta")
    digits = args.precision
    lines = [f"{l:3d}  {sci(d, digits)}" for l, d in enumerate(delta)]
    print("\n".join(lines))
    discrepancy = _field(result, "max_discrepancy") if args.method == "ode" else None
    if discrepancy is not None:
        print(f"# max discrepancy vs matrix method: {sci(discrepancy, digits)}")
    csv_out = cfg.get("csv_out")
    if csv_out:
        rows = ["l,delta"] + [f"{l},{sci(d, digits)}" for l, d in enumerate(delta)]
        Path(csv_out).write_text("\n".join(rows) + "\n")
    return 0


def cmd_phi(args) -> int:
    cfg = _load_config(args)
    target_model, target_delta = _target_arguments(cfg)
    req = PhiRequest(
        candidate=_potential_model(cfg.layers, "candidate potential"),
        target=target_model,
        target_delta=target_delta,
        k=cfg.get("k", 3.0),
        l_start=cfg.get("l_start", 1),
        l_end=cfg.get("l_end", 20),
    )
    result = _call(args.server, "phi", req)
    print(sci(_field(result, "phi"), max(args.precision, 8)))
    return 0


def cmd_search(args) -> int:
    cfg = _load_config(args)
    target_model, target_delta = _target_arguments(cfg)
    settings = SearchSettings(
        L=cfg.get("L", 10000),
        gamma=cfg.get("gamma", 0.01),
        seed=cfg.get("seed", DEFAULT_SEED),
        M_max=cfg.get("M_max", 6),
        R=cfg.get("R", 3.0),
        q_low=cfg.get("q_low", 0.0),
        q_high=cfg.get("q_high", 9.0),
        eps_r=cfg.get("eps_r", 0.1),
        dedup_tol=cfg.get("dedup_tol", 0.05),
        line_tol=cfg.get("line_tol", 1e-5),
        f_tol=cfg.get("f_tol", 1e-8),
        max_sweeps=cfg.get("max_sweeps", 50),
    )
    req = SearchRequest(
        target=target_model,
        target_delta=target_delta,
        k=cfg.get("k", 3.0),
        l_start=cfg.get("l_start", 1),
        l_end=cfg.get("l_end", 20),
        settings=settings,
        jobs=cfg.get("jobs", 1),
    )
    result = _call(args.server, "search", req)
    minima = _field(result, "minima")
    lines = [
        format_result_line(_field(m, "phi"), _field(m, "radii"), _field(m, "values"))
        for m in minima
    ]
    text = "\n".join(lines) + ("\n" if lines else "")
    results_out = cfg.get("results_out")
    if results_out:
        Path(results_out).write_text(text)
    print(f"# minima: {len(minima)}  evaluations: {_field(result, 'evaluations')}  "
          f"wall_time: {_field(result, 'wall_time'):.1f}s  seed: {settings.seed}")
    for rank, m in enumerate(minima[:10], start=1):
        print(f"{rank:2d}  phi={sci(_field(m, 'phi'), 8)}  layers="
              + ",".join(f"{r:.4f}:{v:.4f}" for r, v in zip(_field(m, "radii"), _field(m, "values"))))
    if not results_out:
        sys.stdout.write(text)
    return 0


def cmd_compare(args) -> int:
    cfg = _load_config(args)
    if not cfg.target_layers:
        raise DomainError("no original potential given: add 'target_layer = r,v' or --target-layers")
    req = CompareRequest(
        candidate=_potential_model(cfg.layers, "candidate potential"),
        original=_potential_model(cfg.target_layers, "original potential"),
        k=cfg.get("k", 3.0),
        l_max=cfg.get("lmax", 20),
        l_start=cfg.get("l_start", 1),
        l_end=cfg.get("l_end", 20),
        grid_points=cfg.get("grid_points", 1000),
    )
    result = _call(args.server, "compare", req)
    digits = args.precision
    r = _field(result, "r")
    q_c = _field(result, "q_candidate")
    q_o = _field(result, "q_original")
    profile = ["r,q_candidate,q_original"]
    profile += [f"{sci(ri, digits)},{sci(a, digits)},{sci(b, digits)}"
                for ri, a, b in zip(r, q_c, q_o)]
    _write_or_print("\n".join(profile) + "\n", cfg.get("csv_out"))
    print("l,delta_candidate,delta_original")
    for l, (dc, do) in enumerate(zip(_field(result, "delta_candidate"), _field(result, "delta_original"))):
        print(f"{l},{sci(dc, digits)},{sci(do, digits)}")
    print(f"phi = {sci(_field(result, 'phi'), max(digits, 8))}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("phasefit.service.app:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasefit",
        description="Phase shifts of layered radial potentials and equivalent-potential search",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, *, seeded: bool = False):
        p.add_argument("--config", help="key = value config file")
        p.add_argument("--server", help="base URL of a running service (default: in-process)")
        p.add_argument("--k", type=float, help="wavenumber (energy k^2)")
        p.add_argument("--precision", type=int, default=6, help="significant digits in output")
        p.add_argument("--layers", help="candidate potential as r1:v1,r2:v2,...")
        if seeded:
            p.add_argument("--seed", help="integer seed, or 'time'")
            p.add_argument("--jobs", type=int, help="parallel local searches")

    p_shifts = sub.add_parser("shifts", help="phase-shift table of a potential")
    common(p_shifts)
    p_shifts.add_argument("--lmax", type=int, help="largest angular momentum")
    p_shifts.add_argument("--method", choices=("matrix", "ode"), default="matrix")
    p_shifts.add_argument("--csv-out", dest="csv_out", help="also write l,delta CSV here")
    p_shifts.set_defaults(func=cmd_shifts)

    p_phi = sub.add_parser("phi", help="misfit of a candidate against target shifts")
    common(p_phi)
    p_phi.add_argument("--target-layers", dest="target_layers", help="target potential as r1:v1,...")
    p_phi.add_argument("--target-shifts-csv", dest="target_shifts_csv", help="target shifts CSV")
    p_phi.add_argument("--l-start", dest="l_start", type=int, help="first summed l (0 or 1)")
    p_phi.add_argument("--l-end", dest="l_end", type=int, help="last summed l")
    p_phi.set_defaults(func=cmd_phi)

    p_search = sub.add_parser("search", help="multistart search for shift-equivalent potentials")
    common(p_search, seeded=True)
    p_search.add_argument("--target-layers", dest="target_layers", help="target potential as r1:v1,...")
    p_search.add_argument("--target-shifts-csv", dest="target_shifts_csv", help="target shifts CSV")
    p_search.add_argument("--L", dest="batch", type=int, help="batch size")
    p_search.add_argument("--gamma", type=float, help="fraction of the batch kept")
    p_search.add_argument("--l-start", dest="l_start", type=int)
    p_search.add_argument("--l-end", dest="l_end", type=int)
    p_search.add_argument("--results-out", dest="results_out", help="write minima lines here")
    p_search.set_defaults(func=cmd_search)

    p_cmp = sub.add_parser("compare", help="profiles, shift tables and misfit of two potentials")
    common(p_cmp)
    p_cmp.add_argument("--target-layers", dest="target_layers", help="original potential as r1:v1,...")
    p_cmp.add_argument("--lmax", type=int)
    p_cmp.add_argument("--l-start", dest="l_start", type=int)
    p_cmp.add_argument("--l-end", dest="l_end", type=int)
    p_cmp.add_argument("--grid-points", dest="grid_points", type=int)
    p_cmp.add_argument("--csv-out", dest="csv_out", help="write the profile CSV here")
    p_cmp.set_defaults(func=cmd_compare)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    import pydantic

    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3
    except (DomainError, PhasefitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except pydantic.ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
