"""Command line front end.

One invocation runs one experiment and writes one table (CSV by default,
JSON with --format json). Grids are given as "logspace:lo:hi:n",
"linspace:lo:hi:n", a comma list, or a single scalar. Outputs are
deterministic: the same inputs produce byte-identical files.

Exit codes: 0 success, 1 numerical failure at a grid point, 2 invalid
arguments or configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

from .capacity import (
    ea_capacity,
    gaussian_vs_nb_capacity_error,
    holevo_capacity,
    homodyne_capacity,
    information_rate,
    mode_count,
    ultimate_capacity,
)
from .detection import (
    DetectionModel,
    GAUSSIAN_APPROX,
    NEGATIVE_BINOMIAL,
    OH,
    OPA_IDLER,
    OPA_RETURN,
    OPC,
    Priors,
    RECEIVERS,
    _COUNTING_RECEIVERS,
    error_probability,
    optimal_threshold,
    pe_surface,
    pe_sweep,
    receiver_mode_stats,
    threshold_balance_root,
)
from .receivers import ChannelParams, IDLER_PORT, RETURN_PORT

EXPERIMENTS = (
    "pe_sweep",
    "threshold_sweep",
    "pe_surface",
    "capacity_m1",
    "capacity_multimode",
    "info_rate",
    "gauss_vs_nb",
    "mode_count",
)

_DEFAULT_M_GRID = "logspace:1:10000:25"
_DEFAULT_P0_LIST = "0.5,0.45"
_DEFAULT_P0_SURFACE = "linspace:0.05:0.95:19"
_DEFAULT_NS_CAPACITY = "logspace:0.001:0.1:13"
_DEFAULT_NS_GVN = "logspace:0.001:1:7"

_MODEL_SHORT = {NEGATIVE_BINOMIAL: "nb", GAUSSIAN_APPROX: "gauss"}
_MODEL_ALIASES = {
    "nb": NEGATIVE_BINOMIAL,
    "negative_binomial": NEGATIVE_BINOMIAL,
    "gauss": GAUSSIAN_APPROX,
    "gaussian": GAUSSIAN_APPROX,
    "gaussian_approx": GAUSSIAN_APPROX,
}
_PORT_NAME = {OPA_RETURN: RETURN_PORT, OPA_IDLER: IDLER_PORT}

_CONFIG_KEYS = (
    "experiment", "ns", "nb", "eta", "gain", "modes", "p0", "receiver",
    "model", "nth", "lambda_m", "dlambda_m", "tm_s", "out", "format",
)


class _ValidationFailure(Exception):
    pass


class _NumericalFailure(Exception):
    pass


def _parse_grid(text: str, field: str) -> list[float]:
    t = text.strip()
    try:
        if t.startswith("logspace:") or t.startswith("linspace:"):
            parts = t.split(":")
            if len(parts) != 4:
                raise ValueError(f"expected {parts[0]}:lo:hi:n")
            lo, hi, n = float(parts[1]), float(parts[2]), int(parts[3])
            if n < 1:
                raise ValueError("point count must be >= 1")
            if n == 1:
                return [lo]
            if parts[0] == "logspace":
                if lo <= 0.0 or hi <= 0.0:
                    raise ValueError("logspace endpoints must be > 0")
                la, lb = math.log10(lo), math.log10(hi)
                return [10.0 ** (la + i * (lb - la) / (n - 1)) for i in range(n)]
            return [lo + i * (hi - lo) / (n - 1) for i in range(n)]
        if "," in t:
            vals = [float(x) for x in t.split(",") if x.strip() != ""]
            if not vals:
                raise ValueError("empty list")
            return vals
        return [float(t)]
    except (ValueError, OverflowError) as exc:
        raise _ValidationFailure(f"{field}: cannot parse grid {text!r} ({exc})") from None


def _parse_int_grid(text: str, field: str) -> list[int]:
    out: list[int] = []
    for v in _parse_grid(text, field):
        k = int(round(v))
        if k < 1:
            raise _ValidationFailure(f"{field}: values must round to integers >= 1, got {v}")
        if k not in out:
            out.append(k)
    return out


def _parse_scalar(text: str, field: str) -> float:
    vals = _parse_grid(text, field)
    if len(vals) != 1:
        raise _ValidationFailure(f"{field}: expected a single value, got a grid of {len(vals)}")
    return vals[0]


def _normalize_receiver(name: str) -> str:
    r = name.strip().lower().replace("-", "_")
    if r not in RECEIVERS:
        raise _ValidationFailure(
            f"receiver: unknown receiver {name!r} (choose from {', '.join(RECEIVERS)})"
        )
    return r


def _normalize_model(name: str) -> str:
    k = name.strip().lower().replace("-", "_")
    if k not in _MODEL_ALIASES:
        raise _ValidationFailure(
            f"model: unknown model {name!r} (choose from nb, gauss)"
        )
    return _MODEL_ALIASES[k]


def _native_kind(receiver: str) -> str:
    return NEGATIVE_BINOMIAL if receiver in _COUNTING_RECEIVERS else GAUSSIAN_APPROX


def _select_models(receiver_opt, model_opt, default_receivers) -> list[DetectionModel]:
    receivers = [_normalize_receiver(receiver_opt)] if receiver_opt else list(default_receivers)
    models: list[DetectionModel] = []
    for r in receivers:
        if model_opt:
            kinds = [_normalize_model(model_opt)]
        elif r in _COUNTING_RECEIVERS:
            kinds = [NEGATIVE_BINOMIAL, GAUSSIAN_APPROX]
        else:
            kinds = [GAUSSIAN_APPROX]
        for kind in kinds:
            try:
                models.append(DetectionModel(kind=kind, receiver=r))
            except ValueError as exc:
                raise _ValidationFailure(f"model: {exc}") from None
    return models


def _base_params(o, with_ns: bool = True) -> ChannelParams:
    # grid experiments own --ns themselves and pass with_ns=False
    try:
        return ChannelParams(
            n_s=_parse_scalar(o.ns, "ns") if (with_ns and o.ns) else 0.01,
            n_b=_parse_scalar(o.nb, "nb") if o.nb else 1.0,
            eta=_parse_scalar(o.eta, "eta") if o.eta else 0.01,
            gain=_parse_scalar(o.gain, "gain") if o.gain else 1.1,
            modes=1,
        )
    except ValueError as exc:
        raise _ValidationFailure(str(exc)) from None


def _priors_list(o) -> list[Priors]:
    try:
        return [Priors.from_p0(v) for v in _parse_grid(o.p0 or _DEFAULT_P0_LIST, "p0")]
    except ValueError as exc:
        raise _ValidationFailure(f"p0: {exc}") from None


# ---------------------------------------------------------------- experiments

def _exp_pe_sweep(o):
    p = _base_params(o)
    m_values = _parse_int_grid(o.modes or _DEFAULT_M_GRID, "modes")
    priors = _priors_list(o)
    models = _select_models(o.receiver, o.model, RECEIVERS)
    try:
        rows = pe_sweep(p, m_values, priors, models)
    except ArithmeticError as exc:
        raise _NumericalFailure(f"pe_sweep failed: {exc}") from None
    for r in rows:
        r["model"] = _MODEL_SHORT[r["model"]]
    meta = {
        "experiment": "pe_sweep", "ns": p.n_s, "nb": p.n_b, "eta": p.eta,
        "gain": p.gain, "modes_grid": o.modes or _DEFAULT_M_GRID,
    }
    return meta, ["M", "receiver", "model", "p0", "threshold", "pe"], rows


def _exp_threshold_sweep(o):
    p = _base_params(o)
    m_values = _parse_int_grid(o.modes or _DEFAULT_M_GRID, "modes")
    priors = _priors_list(o) if o.p0 else [Priors.from_p0(0.45)]
    rows = []
    for receiver in (OPA_RETURN, OPA_IDLER):
        model = DetectionModel(kind=GAUSSIAN_APPROX, receiver=receiver)
        for pri in priors:
            for m in m_values:
                params = replace(p, modes=m)
                try:
                    root = threshold_balance_root(pri, model, params)
                except ArithmeticError as exc:
                    raise _NumericalFailure(
                        f"threshold_sweep: failure at port={_PORT_NAME[receiver]} "
                        f"p0={pri.p0} M={m}: {exc}"
                    ) from None
                rows.append({
                    "M": m, "port": _PORT_NAME[receiver],
                    "p0": pri.p0, "threshold": root.threshold,
                })
    meta = {
        "experiment": "threshold_sweep", "ns": p.n_s, "nb": p.n_b,
        "eta": p.eta, "gain": p.gain, "modes_grid": o.modes or _DEFAULT_M_GRID,
    }
    return meta, ["M", "port", "p0", "threshold"], rows


def _exp_pe_surface(o):
    p = _base_params(o)
    m = _parse_int_grid(o.modes, "modes")[0] if o.modes else 1
    params = replace(p, modes=m)
    receiver = _normalize_receiver(o.receiver) if o.receiver else OPA_IDLER
    kind = _normalize_model(o.model) if o.model else _native_kind(receiver)
    try:
        model = DetectionModel(kind=kind, receiver=receiver)
    except ValueError as exc:
        raise _ValidationFailure(f"model: {exc}") from None
    p0_grid = _parse_grid(o.p0 or _DEFAULT_P0_SURFACE, "p0")
    if o.nth:
        nth_grid = _parse_grid(o.nth, "nth")
    else:
        stats0, _ = receiver_mode_stats(model, params)
        hi = m * stats0.mean + 10.0 * math.sqrt(m) * stats0.std
        if kind == NEGATIVE_BINOMIAL:
            nth_grid = [float(t) for t in range(0, math.ceil(hi) + 1)]
        else:
            nth_grid = [hi * i / 120 for i in range(121)]
    try:
        surface = pe_surface(params, model, p0_grid, nth_grid)
    except (ArithmeticError, ValueError) as exc:
        raise _NumericalFailure(f"pe_surface failed: {exc}") from None
    rows = [
        {"p0": p0, "n_th": t, "pe": surface[i][j]}
        for i, p0 in enumerate(p0_grid)
        for j, t in enumerate(nth_grid)
    ]
    meta = {
        "experiment": "pe_surface", "ns": p.n_s, "nb": p.n_b, "eta": p.eta,
        "gain": p.gain, "modes": m, "receiver": receiver,
        "model": _MODEL_SHORT[kind],
    }
    return meta, ["p0", "n_th", "pe"], rows


def _capacity_rows(o, default_modes: int):
    p = _base_params(o, with_ns=False)
    m = _parse_int_grid(o.modes, "modes")[0] if o.modes else default_modes
    ns_grid = _parse_grid(o.ns, "ns") if o.ns else _parse_grid(_DEFAULT_NS_CAPACITY, "ns")
    models = _select_models(o.receiver, o.model, (OPA_IDLER, OPC, OH))
    rows = []
    for ns in ns_grid:
        try:
            params = replace(p, n_s=ns, modes=m)
            refs = (
                holevo_capacity(params),
                homodyne_capacity(params),
                ultimate_capacity(params),
            )
            for model in models:
                res = ea_capacity(model, params)
                rows.append({
                    "ns": ns, "receiver": model.receiver,
                    "model": _MODEL_SHORT[model.kind],
                    "capacity": res.capacity, "best_p0": res.best_p0,
                    "best_threshold": res.best_threshold,
                    "holevo": refs[0], "homodyne": refs[1], "ultimate": refs[2],
                })
        except (ArithmeticError, ValueError) as exc:
            raise _NumericalFailure(f"capacity: failure at ns={ns}: {exc}") from None
    header = ["ns", "receiver", "model", "capacity", "best_p0",
              "best_threshold", "holevo", "homodyne", "ultimate"]
    meta = {
        "nb": p.n_b, "eta": p.eta, "gain": p.gain, "modes": m,
        "ns_grid": o.ns or _DEFAULT_NS_CAPACITY,
    }
    return meta, header, rows


def _exp_capacity_m1(o):
    meta, header, rows = _capacity_rows(o, default_modes=1)
    meta = {"experiment": "capacity_m1", **meta}
    return meta, header, rows


def _exp_capacity_multimode(o):
    meta, header, rows = _capacity_rows(o, default_modes=10)
    meta = {"experiment": "capacity_multimode", **meta}
    return meta, header, rows


def _exp_info_rate(o):
    p = _base_params(o)
    m_values = _parse_int_grid(o.modes or _DEFAULT_M_GRID, "modes")
    priors = _priors_list(o)
    receivers = [_normalize_receiver(o.receiver)] if o.receiver else [OPA_IDLER, OPC, OH]
    rows = []
    for receiver in receivers:
        kind = _normalize_model(o.model) if o.model else _native_kind(receiver)
        try:
            model = DetectionModel(kind=kind, receiver=receiver)
        except ValueError as exc:
            raise _ValidationFailure(f"model: {exc}") from None
        for pri in priors:
            for m in m_values:
                params = replace(p, modes=m)
                try:
                    thr = optimal_threshold(pri, model, params)
                    pe = error_probability(pri, thr.threshold, model, params)
                    rate = information_rate(pe, m)
                    ratio = rate / holevo_capacity(params)
                except (ArithmeticError, ValueError) as exc:
                    raise _NumericalFailure(
                        f"info_rate: failure at receiver={receiver} p0={pri.p0} M={m}: {exc}"
                    ) from None
                rows.append({
                    "M": m, "receiver": receiver, "p0": pri.p0,
                    "pe": pe, "rate": rate, "rate_over_holevo": ratio,
                })
    rows.sort(key=lambda r: (r["receiver"], r["p0"], r["M"]))
    meta = {
        "experiment": "info_rate", "ns": p.n_s, "nb": p.n_b, "eta": p.eta,
        "gain": p.gain, "modes_grid": o.modes or _DEFAULT_M_GRID,
    }
    return meta, ["M", "receiver", "p0", "pe", "rate", "rate_over_holevo"], rows


def _exp_gauss_vs_nb(o):
    p = _base_params(o, with_ns=False)
    m = _parse_int_grid(o.modes, "modes")[0] if o.modes else 10
    ns_grid = _parse_grid(o.ns, "ns") if o.ns else _parse_grid(_DEFAULT_NS_GVN, "ns")
    try:
        rows = gaussian_vs_nb_capacity_error(replace(p, modes=m), ns_grid)
    except (ArithmeticError, ValueError) as exc:
        raise _NumericalFailure(f"gauss_vs_nb failed: {exc}") from None
    meta = {
        "experiment": "gauss_vs_nb", "nb": p.n_b, "eta": p.eta,
        "gain": p.gain, "modes": m, "ns_grid": o.ns or _DEFAULT_NS_GVN,
    }
    return meta, ["ns", "M", "c_gauss", "c_nb", "delta"], rows


def _exp_mode_count(o):
    lam = _parse_scalar(o.lambda_m, "lambda_m") if o.lambda_m else 1550e-9
    dlam = _parse_scalar(o.dlambda_m, "dlambda_m") if o.dlambda_m else 35e-9
    tm = _parse_scalar(o.tm_s, "tm_s") if o.tm_s else 1e-6
    try:
        bw, modes = mode_count(lam, dlam, tm)
    except ValueError as exc:
        raise _ValidationFailure(str(exc)) from None
    rows = [{
        "lambda_m": lam, "dlambda_m": dlam, "tm_s": tm,
        "bandwidth_hz": bw, "modes": modes,
    }]
    meta = {"experiment": "mode_count"}
    return meta, ["lambda_m", "dlambda_m", "tm_s", "bandwidth_hz", "modes"], rows


_RUNNERS = {
    "pe_sweep": _exp_pe_sweep,
    "threshold_sweep": _exp_threshold_sweep,
    "pe_surface": _exp_pe_surface,
    "capacity_m1": _exp_capacity_m1,
    "capacity_multimode": _exp_capacity_multimode,
    "info_rate": _exp_info_rate,
    "gauss_vs_nb": _exp_gauss_vs_nb,
    "mode_count": _exp_mode_count,
}


# -------------------------------------------------------------------- output

def _fmt_value(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def _emit(out: str, fmt: str, meta: dict, header: list[str], rows: list[dict]) -> None:
    if fmt == "csv":
        lines = [f"# {k}={_fmt_value(v)}" for k, v in meta.items()]
        lines.append(",".join(header))
        for r in rows:
            lines.append(",".join(_fmt_value(r[h]) for h in header))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps({"meta": meta, "rows": rows}, indent=2) + "\n"
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# -------------------------------------------------------------- arg handling

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="eabpsk",
        description="Entanglement-assisted BPSK receiver experiments.",
    )
    ap.add_argument("--experiment", choices=EXPERIMENTS)
    ap.add_argument("--ns", help="signal mean photon number (scalar or grid)")
    ap.add_argument("--nb", help="background mean photon number")
    ap.add_argument("--eta", help="channel transmissivity")
    ap.add_argument("--gain", help="amplifier gain")
    ap.add_argument("-M", "--modes", help="mode count (scalar or grid)")
    ap.add_argument("--p0", help="prior on the zero-phase symbol (scalar or list)")
    ap.add_argument("--receiver", help="opa_return, opa_idler, opc or oh")
    ap.add_argument("--model", help="nb or gauss")
    ap.add_argument("--nth", help="threshold grid for pe_surface")
    ap.add_argument("--lambda-m", dest="lambda_m", help="center wavelength in meters")
    ap.add_argument("--dlambda-m", dest="dlambda_m", help="bandwidth in meters")
    ap.add_argument("--tm-s", dest="tm_s", help="measurement interval in seconds")
    ap.add_argument("--config", help="file of key=value defaults; flags win")
    ap.add_argument("--out", default="-", help="output path, - for stdout")
    ap.add_argument("--format", choices=("csv", "json"), default=None)
    return ap


def _apply_config(o) -> None:
    try:
        with open(o.config, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise _ValidationFailure(f"config: cannot read {o.config!r}: {exc}") from None
    for i, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise _ValidationFailure(f"config: line {i} is not key=value: {line!r}")
        key, value = line.split("=", 1)
        key = key.strip().lower().replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise _ValidationFailure(f"config: unknown key {key!r} on line {i}")
        # "-" is the untouched default for out; flags given on the
        # command line keep their values
        if getattr(o, key, None) in (None, "-"):
            setattr(o, key, value.strip())


def main(argv=None) -> int:
    parser = _build_parser()
    o = parser.parse_args(argv)
    try:
        if o.config:
            _apply_config(o)
        if o.format is None:
            o.format = "csv"
        if o.format not in ("csv", "json"):
            raise _ValidationFailure(f"format: must be csv or json, got {o.format!r}")
        if not o.experiment:
            raise _ValidationFailure("experiment: required (no --experiment or config entry)")
        if o.experiment not in _RUNNERS:
            raise _ValidationFailure(f"experiment: unknown experiment {o.experiment!r}")
        meta, header, rows = _RUNNERS[o.experiment](o)
    except _ValidationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _NumericalFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        _emit(o.out, o.format, meta, header, rows)
    except OSError as exc:
        print(f"error: out: cannot write {o.out!r}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
