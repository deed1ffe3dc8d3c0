"""Command-line interface: reproducible scans and optimizations.

Subcommands: fisher-scan, optimize, scaling, dynamic-range, noise-scan,
coherent-compare.  Grids go to CSV (meta as leading ``#`` comment
lines), structured results to JSON; identical configurations produce
byte-identical files.  A JSON config file can preset any flag; explicit
flags override it.  TSENSE_THREADS caps grid parallelism (0 = auto).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass
from importlib import resources
from typing import Optional

from . import __version__
from .errors import (
    ConfigurationError,
    NumericError,
    ResourceError,
    UndefinedBoundError,
)
from .ladder import FockConfig, InteractionKind
from .metrology import (
    BinaryFock,
    FullPNR,
    SequentialS0,
    cramer_rao,
    dynamic_range,
    dynamic_range_formula,
    scan,
)
from .optimize import asymptotic_prediction, optimize_config, scaling_table
from .probes import CoherentProduct, NoisyFock, PureFock

SUBCOMMANDS = (
    "fisher-scan",
    "optimize",
    "scaling",
    "dynamic-range",
    "noise-scan",
    "coherent-compare",
)

DEFAULTS = {
    "interaction": "I",
    "state": None,
    "eps": None,
    "alpha": None,
    "scheme": "pnr",
    "time": 1.0,
    "theta_max": 1.0,
    "steps": 401,
    "total": None,
    "n_max": 30,
    "trials": 1,
    "out": None,
    "format": "csv",
}


@dataclass
class RunConfig:
    subcommand: str
    interaction: str
    state: Optional[tuple[int, ...]]
    eps: Optional[tuple[float, ...]]
    alpha: Optional[tuple[complex, ...]]
    scheme: str
    time: float
    theta_max: float
    steps: int
    total: Optional[int]
    n_max: int
    trials: int
    out: Optional[str]
    format: str

    def to_dict(self) -> dict:
        d = asdict(self)
        if self.state is not None:
            d["state"] = list(self.state)
        if self.eps is not None:
            d["eps"] = list(self.eps)
        if self.alpha is not None:
            d["alpha"] = [[a.real, a.imag] for a in self.alpha]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        kw = dict(d)
        if kw.get("state") is not None:
            kw["state"] = tuple(int(n) for n in kw["state"])
        if kw.get("eps") is not None:
            kw["eps"] = tuple(float(e) for e in kw["eps"])
        if kw.get("alpha") is not None:
            kw["alpha"] = tuple(complex(re, im) for re, im in kw["alpha"])
        return cls(**kw)


def _parse_state(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse occupations from {text!r}") from exc


def _parse_eps(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise ConfigurationError(f"cannot parse eps from {text!r}") from exc


def _parse_alpha(text: str) -> tuple[complex, ...]:
    out = []
    for part in text.split(","):
        try:
            out.append(complex(part.strip().replace("i", "j")))
        except ValueError as exc:
            raise ConfigurationError(f"cannot parse amplitude {part!r}") from exc
    return tuple(out)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tsense",
        description="Fisher-information analysis of trilinear coupling sensing",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        sub = subs.add_parser(name)
        sub.add_argument("--interaction", choices=("I", "II"), default=None)
        sub.add_argument("--state", default=None, help="occupations, e.g. 2,1,1")
        sub.add_argument("--eps", default=None, help="per-mode eps or one broadcast value")
        sub.add_argument("--alpha", default=None, help="coherent amplitudes re+imi, comma separated")
        sub.add_argument("--scheme", choices=("pnr", "binary", "s0"), default=None)
        sub.add_argument("--time", type=float, default=None)
        sub.add_argument("--theta-max", dest="theta_max", type=float, default=None)
        sub.add_argument("--steps", type=int, default=None)
        sub.add_argument("--total", type=int, default=None)
        sub.add_argument("--n-max", dest="n_max", type=int, default=None)
        sub.add_argument("--trials", type=int, default=None)
        sub.add_argument("--out", default=None)
        sub.add_argument("--format", choices=("csv", "json"), default=None)
        sub.add_argument("--config", default=None, help="JSON file presetting any flag")
    return parser


def parse_config(argv: list[str]) -> RunConfig:
    """Merge defaults, an optional config file, and explicit flags."""
    ns = _build_parser().parse_args(argv)
    merged = dict(DEFAULTS)
    if ns.subcommand == "optimize":
        merged["format"] = "json"
    if ns.config is not None:
        try:
            with open(ns.config, encoding="utf-8") as fh:
                loaded = json.load(fh)
        except OSError:
            raise
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"invalid config file: {exc}") from exc
        loaded.pop("subcommand", None)
        unknown = set(loaded) - set(DEFAULTS)
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        merged.update(loaded)
    for key in DEFAULTS:
        value = getattr(ns, key)
        if value is not None:
            merged[key] = value
    merged["state"] = _norm_state(merged["state"])
    merged["eps"] = _norm_eps(merged["eps"])
    merged["alpha"] = _norm_alpha(merged["alpha"])
    return RunConfig(subcommand=ns.subcommand, **merged)


def _norm_state(value) -> Optional[tuple[int, ...]]:
    if value is None:
        return None
    if isinstance(value, str):
        return _parse_state(value)
    return tuple(int(n) for n in value)


def _norm_eps(value) -> Optional[tuple[float, ...]]:
    if value is None:
        return None
    if isinstance(value, str):
        return _parse_eps(value)
    return tuple(float(e) for e in value)


def _norm_alpha(value) -> Optional[tuple[complex, ...]]:
    if value is None:
        return None
    if isinstance(value, str):
        return _parse_alpha(value)
    out = []
    for item in value:
        if isinstance(item, complex):
            out.append(item)
        else:
            re, im = item
            out.append(complex(re, im))
    return tuple(out)


def _kind(cfg: RunConfig) -> InteractionKind:
    return InteractionKind(cfg.interaction)


def _broadcast_eps(eps: tuple[float, ...], n_modes: int) -> tuple[float, ...]:
    if len(eps) == 1:
        return eps * n_modes
    if len(eps) != n_modes:
        raise ConfigurationError(f"need 1 or {n_modes} eps values, got {len(eps)}")
    return eps


def _build_probe(cfg: RunConfig):
    kind = _kind(cfg)
    if cfg.alpha is not None:
        if cfg.state is not None or cfg.eps is not None:
            raise ConfigurationError("--alpha cannot be combined with --state/--eps here")
        return CoherentProduct(alphas=cfg.alpha)
    if cfg.state is None:
        raise ConfigurationError("--state is required (occupations, e.g. 2,1,1)")
    if cfg.eps is not None:
        return NoisyFock(nominal=cfg.state, eps=_broadcast_eps(cfg.eps, kind.n_modes))
    return PureFock(occupations=cfg.state)


def _reference_occupation(cfg: RunConfig) -> int:
    if cfg.state is not None:
        return cfg.state[0]
    if cfg.alpha is not None:
        return round(abs(cfg.alpha[0]) ** 2)
    raise ConfigurationError("--state is required (occupations, e.g. 2,1,1)")


def _build_scheme(cfg: RunConfig):
    if cfg.scheme == "pnr":
        return FullPNR()
    n = _reference_occupation(cfg)
    return BinaryFock(n=n) if cfg.scheme == "binary" else SequentialS0(n=n)


def _probe_label(probe) -> str:
    if isinstance(probe, PureFock):
        return "fock(" + ",".join(str(n) for n in probe.occupations) + ")"
    if isinstance(probe, NoisyFock):
        occ = ",".join(str(n) for n in probe.nominal)
        eps = ",".join(repr(e) for e in probe.eps)
        return f"noisy({occ}; eps={eps})"
    amps = ",".join(f"{a.real!r}+{a.imag!r}i" for a in probe.alphas)
    return f"coherent({amps})"


def _scheme_label(scheme) -> str:
    if isinstance(scheme, FullPNR):
        return "pnr"
    if isinstance(scheme, BinaryFock):
        return f"binary(n={scheme.n})"
    return f"s0(n={scheme.n})"


def _meta(cfg: RunConfig, **extra) -> dict:
    meta = {
        "subcommand": cfg.subcommand,
        "version": __version__,
        "interaction": cfg.interaction,
    }
    meta.update(extra)
    return meta


def _workers() -> int:
    raw = os.environ.get("TSENSE_THREADS")
    if raw is None:
        return 1
    try:
        cap = int(raw)
    except ValueError:
        raise ConfigurationError(f"TSENSE_THREADS must be an integer, got {raw!r}")
    if cap < 0:
        raise ConfigurationError("TSENSE_THREADS must be >= 0")
    if cap == 0:
        return os.cpu_count() or 1
    return cap


def cmd_fisher_scan(cfg: RunConfig) -> dict:
    kind = _kind(cfg)
    probe = _build_probe(cfg)
    scheme = _build_scheme(cfg)
    profile = scan(
        probe, kind, scheme,
        t=cfg.time, theta_max=cfg.theta_max, steps=cfg.steps, workers=_workers(),
    )
    cr = None
    if profile.f_zero > 0.0:
        cr = cramer_rao(profile.f_zero, cfg.trials)
    meta = _meta(
        cfg,
        probe=_probe_label(probe),
        scheme=_scheme_label(scheme),
        time=cfg.time,
        theta_max=cfg.theta_max,
        steps=cfg.steps,
        trials=cfg.trials,
        f_zero=float(profile.f_zero),
        qfi_zero=None if profile.qfi_zero is None else float(profile.qfi_zero),
        cramer_rao_zero=cr,
    )
    rows = [
        [float(th), float(f)]
        for th, f in zip(profile.couplings, profile.fisher)
    ]
    return {"meta": meta, "columns": ["coupling", "fisher"], "rows": rows}


def cmd_optimize(cfg: RunConfig) -> dict:
    if cfg.format != "json":
        raise ConfigurationError("optimize writes structured JSON; use --format json")
    if cfg.total is None:
        raise ConfigurationError("--total is required for optimize")
    res = optimize_config(_kind(cfg), cfg.total, t=cfg.time)
    return {
        "meta": _meta(cfg, time=cfg.time),
        "n": res.n,
        "kind": res.kind.value,
        "maximizers": [list(m.occupations) for m in res.maximizers],
        "f0": float(res.f0),
        "relaxation": None if res.relaxation is None else [float(v) for v in res.relaxation],
        "asymptote": float(res.asymptote),
    }


def cmd_scaling(cfg: RunConfig) -> dict:
    kind = _kind(cfg)
    schemes = [1, 2, 3] if kind is InteractionKind.I else [1, 2]
    tables = {m: dict(scaling_table(kind, cfg.n_max, m, t=cfg.time)) for m in schemes}
    names = {1: "f0_one", 2: "f0_two", 3: "f0_three"}
    columns = ["n"] + [names[m] for m in schemes] + ["asymptote"]
    rows = []
    for n in range(1, cfg.n_max + 1):
        row: list = [n]
        for m in schemes:
            v = tables[m][n]
            row.append(None if v is None else float(v))
        row.append(float(asymptotic_prediction(kind, n, cfg.time)))
        rows.append(row)
    return {
        "meta": _meta(cfg, time=cfg.time, n_max=cfg.n_max),
        "columns": columns,
        "rows": rows,
    }


def cmd_dynamic_range(cfg: RunConfig) -> dict:
    kind = _kind(cfg)
    if cfg.state is None:
        raise ConfigurationError("--state is required (occupations, e.g. 2,1,1)")
    probe = PureFock(occupations=cfg.state)
    scheme = _build_scheme(cfg)
    profile = scan(
        probe, kind, scheme,
        t=cfg.time, theta_max=cfg.theta_max, steps=cfg.steps, workers=_workers(),
    )
    empirical = dynamic_range(profile)
    formula = dynamic_range_formula(FockConfig(cfg.state), kind, cfg.time)
    state_label = ",".join(str(n) for n in cfg.state)
    meta = _meta(
        cfg,
        scheme=_scheme_label(scheme),
        time=cfg.time,
        theta_max=cfg.theta_max,
        steps=cfg.steps,
    )
    row = [
        state_label,
        None if empirical is None else float(empirical),
        None if formula is None else float(formula),
    ]
    return {
        "meta": meta,
        "columns": ["state", "theta_min_empirical", "theta_min_formula"],
        "rows": [row],
    }


def cmd_noise_scan(cfg: RunConfig) -> dict:
    kind = _kind(cfg)
    if cfg.state is None:
        raise ConfigurationError("--state is required (occupations, e.g. 2,1,1)")
    if cfg.eps is None:
        raise ConfigurationError("--eps is required for noise-scan")
    eps = _broadcast_eps(cfg.eps, kind.n_modes)
    scheme = _build_scheme(cfg)
    workers = _workers()
    pure = scan(
        PureFock(cfg.state), kind, scheme,
        t=cfg.time, theta_max=cfg.theta_max, steps=cfg.steps, workers=workers,
    )
    noisy = scan(
        NoisyFock(cfg.state, eps), kind, scheme,
        t=cfg.time, theta_max=cfg.theta_max, steps=cfg.steps, workers=workers,
    )
    meta = _meta(
        cfg,
        probe=_probe_label(NoisyFock(cfg.state, eps)),
        scheme=_scheme_label(scheme),
        time=cfg.time,
        theta_max=cfg.theta_max,
        steps=cfg.steps,
    )
    rows = [
        [float(th), float(fp), float(fn)]
        for th, fp, fn in zip(pure.couplings, pure.fisher, noisy.fisher)
    ]
    return {
        "meta": meta,
        "columns": ["coupling", "fisher_pure", "fisher_noisy"],
        "rows": rows,
    }


def cmd_coherent_compare(cfg: RunConfig) -> dict:
    kind = _kind(cfg)
    if cfg.state is None:
        raise ConfigurationError("--state is required (occupations, e.g. 2,1,1)")
    alphas = cfg.alpha
    if alphas is None:
        alphas = tuple(complex(math.sqrt(n)) for n in cfg.state)
    if len(alphas) != kind.n_modes:
        raise ConfigurationError(
            f"need {kind.n_modes} coherent amplitudes, got {len(alphas)}"
        )
    scheme = _build_scheme(cfg)
    workers = _workers()
    fock = scan(
        PureFock(cfg.state), kind, scheme,
        t=cfg.time, theta_max=cfg.theta_max, steps=cfg.steps, workers=workers,
    )
    coherent = scan(
        CoherentProduct(alphas), kind, scheme,
        t=cfg.time, theta_max=cfg.theta_max, steps=cfg.steps, workers=workers,
    )
    qfi = coherent.qfi_zero
    meta = _meta(
        cfg,
        probe=_probe_label(CoherentProduct(alphas)),
        fock_state=",".join(str(n) for n in cfg.state),
        scheme=_scheme_label(scheme),
        time=cfg.time,
        theta_max=cfg.theta_max,
        steps=cfg.steps,
    )
    rows = [
        [float(th), float(ff), float(fc), float(qfi)]
        for th, ff, fc in zip(fock.couplings, fock.fisher, coherent.fisher)
    ]
    return {
        "meta": meta,
        "columns": ["coupling", "fisher_fock", "fisher_coherent", "qfi_coherent"],
        "rows": rows,
    }


COMMANDS = {
    "fisher-scan": cmd_fisher_scan,
    "optimize": cmd_optimize,
    "scaling": cmd_scaling,
    "dynamic-range": cmd_dynamic_range,
    "noise-scan": cmd_noise_scan,
    "coherent-compare": cmd_coherent_compare,
}


def _fmt_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(doc: dict) -> str:
    buf = io.StringIO()
    for key, value in doc["meta"].items():
        buf.write(f"# {key}: {_fmt_cell(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(doc["columns"])
    for row in doc["rows"]:
        writer.writerow([_fmt_cell(v) for v in row])
    return buf.getvalue()


def render_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def render(doc: dict, fmt: str) -> str:
    if fmt == "csv":
        if "columns" not in doc:
            raise ConfigurationError("structured results support only --format json")
        return render_csv(doc)
    return render_json(doc)


def output_schema() -> dict:
    """The shipped JSON schema all JSON outputs validate against."""
    path = resources.files("tsense").joinpath("schemas/output.schema.json")
    return json.loads(path.read_text(encoding="utf-8"))


def run(cfg: RunConfig) -> str:
    doc = COMMANDS[cfg.subcommand](cfg)
    return render(doc, cfg.format)


def main(argv: Optional[list[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        cfg = parse_config(list(argv))
        text = run(cfg)
        if cfg.out is None:
            sys.stdout.write(text)
        else:
            with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        return 0
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
        return code if isinstance(code, int) else 2
    except (ConfigurationError, UndefinedBoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("run 'tsense <subcommand> --help' for usage", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except (NumericError, ResourceError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
