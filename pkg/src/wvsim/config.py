"""Run configuration: TOML documents, command-line flags, validation.

Config schema (``schema_version = 1``)::

    schema_version = 1
    experiment = "stimulated"   # weak-values | stimulated | spontaneous | ensemble | sweep
    q0 = 40.0
    d = 1.0
    lambda = 100.0
    waist_factor = 1.0
    trials = 100000
    seed = 42
    absorption = false          # ground atom absorbing instead of emitting
    timestamp = false           # add a creation time to output metadata

    [selection]                 # either alpha/beta ...
    alpha = 4                   # number, "4i" / "1+2j" string, or [re, im]
    beta = 3
    # ... or explicit amplitudes (pre) with optional post and positions
    # pre = [4, -3]
    # post = [1, 1]
    # positions = [1.0, -1.0]

    [output]
    path = "run.csv"
    format = "csv"              # csv | json

    [sweep]
    axis = "q0"                 # q0 | lambda | d | alpha
    values = [10, 20, 40]
    target = "stimulated"       # optional; defaults by axis

Command-line flags override document values.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import asdict, dataclass

from .errors import ParseError, ValidationError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

SCHEMA_VERSION = 1
EXPERIMENTS = ("weak-values", "stimulated", "spontaneous", "ensemble", "sweep")
SWEEP_AXES = ("q0", "lambda", "d", "alpha")
SWEEP_TARGETS = ("weak-values", "stimulated", "spontaneous", "ensemble")
DEFAULT_TARGET = {"q0": "stimulated", "lambda": "spontaneous", "d": "spontaneous", "alpha": "spontaneous"}

DEFAULTS = dict(
    alpha=4.0 + 0j, beta=3.0 + 0j, q0=40.0, d=1.0, lam=100.0, waist_factor=1.0,
    trials=100_000, seed=42, format="csv", absorption=False, timestamp=False,
)


@dataclass(frozen=True)
class RunConfig:
    experiment: str
    alpha: complex = DEFAULTS["alpha"]
    beta: complex = DEFAULTS["beta"]
    pre: tuple | None = None
    post: tuple | None = None
    positions: tuple | None = None
    q0: float = DEFAULTS["q0"]
    d: float = DEFAULTS["d"]
    lam: float = DEFAULTS["lam"]
    waist_factor: float = DEFAULTS["waist_factor"]
    trials: int = DEFAULTS["trials"]
    seed: int = DEFAULTS["seed"]
    output_path: str | None = None
    format: str = DEFAULTS["format"]
    sweep_axis: str | None = None
    sweep_values: tuple | None = None
    sweep_target: str | None = None
    absorption: bool = False
    timestamp: bool = False

    def echo(self) -> dict:
        """JSON-safe copy; complex values become [re, im] pairs.

        The output path is left out so a result's bytes do not depend on
        where it is written.
        """
        def enc(v):
            if isinstance(v, complex):
                return [v.real, v.imag]
            if isinstance(v, tuple):
                return [enc(x) for x in v]
            return v
        out = {k: enc(v) for k, v in asdict(self).items() if k != "output_path"}
        out["schema_version"] = SCHEMA_VERSION
        return out

    @property
    def n_arms(self) -> int:
        return len(self.pre) if self.pre is not None else 2


def parse_complex(v, field=None) -> complex:
    """Accept numbers, [re, im] pairs and strings like ``4i``, ``1+2j``."""
    if isinstance(v, bool):
        raise ParseError("expected a number", field=field)
    if isinstance(v, (int, float, complex)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    if isinstance(v, str):
        s = re.sub(r"(?<![0-9.])j", "1j", v.strip().replace(" ", "").replace("i", "j"))
        try:
            return complex(s)
        except ValueError:
            pass
    raise ParseError(f"cannot read {v!r} as a complex number", field=field)


def _complex_list(v, field):
    if isinstance(v, str):
        v = [x for x in v.split(",") if x.strip()]
    if not isinstance(v, (list, tuple)):
        raise ParseError("expected a list of amplitudes", field=field)
    return tuple(parse_complex(x, field) for x in v)


def _float_list(v, field):
    if isinstance(v, str):
        v = [x for x in v.split(",") if x.strip()]
    if not isinstance(v, (list, tuple)):
        raise ParseError("expected a list of numbers", field=field)
    out = []
    for x in v:
        try:
            if isinstance(x, bool):
                raise ValueError
            out.append(float(x))
        except (TypeError, ValueError):
            raise ParseError(f"cannot read {x!r} as a number", field=field) from None
    return tuple(out)


def _scalar(v, kind, field):
    try:
        if isinstance(v, bool) and kind is not bool:
            raise ValueError
        if kind is int:
            if isinstance(v, float) and not v.is_integer():
                raise ValueError
            return int(v)
        if kind is bool:
            if isinstance(v, bool):
                return v
            raise ValueError
        return kind(v)
    except (TypeError, ValueError):
        raise ParseError(f"cannot read {v!r} as {kind.__name__}", field=field) from None


def _from_document(text: str) -> dict:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        line = None
        msg = str(exc)
        if "line " in msg:
            try:
                line = int(msg.split("line ")[1].split(",")[0].split(")")[0])
            except ValueError:
                pass
        raise ParseError(f"invalid config document: {msg}", line=line) from None
    version = doc.pop("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema_version {version!r}", field="schema_version")
    out = {}
    sections = {"selection", "output", "sweep"}
    keymap = {"lambda": "lam"}
    top = {"experiment", "q0", "d", "lambda", "waist_factor", "trials", "seed", "absorption", "timestamp"}
    for k, v in doc.items():
        if k in sections:
            if not isinstance(v, dict):
                raise ParseError("expected a table", field=k)
            continue
        if k not in top:
            raise ParseError("unknown key", field=k)
        out[keymap.get(k, k)] = v
    sel = doc.get("selection", {})
    for k, v in sel.items():
        if k not in ("alpha", "beta", "pre", "post", "positions"):
            raise ParseError("unknown key", field=f"selection.{k}")
        out[k] = v
    outp = doc.get("output", {})
    for k, v in outp.items():
        if k not in ("path", "format"):
            raise ParseError("unknown key", field=f"output.{k}")
        out["output_path" if k == "path" else "format"] = v
    sw = doc.get("sweep", {})
    for k, v in sw.items():
        if k not in ("axis", "values", "target"):
            raise ParseError("unknown key", field=f"sweep.{k}")
        out[f"sweep_{k}"] = v
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def build_arg_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wvsim", description="Weak-value light-matter interaction simulator.")
    a = p.add_argument
    a("--config", help="TOML config document; flags override its values")
    a("--experiment", choices=EXPERIMENTS)
    a("--alpha", help="right-arm amplitude (complex allowed, e.g. 4i)")
    a("--beta", help="left-arm amplitude magnitude; the state is alpha|R> - beta|L>")
    a("--pre", help="explicit comma-separated pre-selection amplitudes (N arms)")
    a("--post", help="comma-separated post-selection amplitudes (default: uniform)")
    a("--positions", help="comma-separated arm positions for N-arm emission")
    a("--q0", type=float)
    a("--d", type=float)
    a("--lambda", dest="lam", type=float)
    a("--waist-factor", dest="waist_factor", type=float)
    a("--trials", type=int)
    a("--seed", type=int)
    a("--absorption", action="store_const", const=True, default=None)
    a("--timestamp", action="store_const", const=True, default=None)
    a("--out", dest="output_path")
    a("--format", choices=("csv", "json"))
    a("--sweep-axis", dest="sweep_axis", choices=SWEEP_AXES)
    a("--sweep-values", dest="sweep_values", help="comma-separated values")
    a("--sweep-target", dest="sweep_target", choices=SWEEP_TARGETS)
    return p


def parse_config(text: str | None = None, flags=None) -> RunConfig:
    """Build a validated :class:`RunConfig` from a TOML document and/or flags.

    Raises
    ------
    ParseError
        Unreadable document, unknown key, wrong type, or missing experiment.
    ValidationError
        A value violates its constraint.
    """
    raw = {}
    ns = None
    if flags is not None:
        ns = build_arg_parser().parse_args(list(flags))
        if ns.config is not None and text is None:
            try:
                with open(ns.config, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise ParseError(f"cannot read config: {exc}", field="config") from None
    if text is not None:
        raw.update(_from_document(text))
    if ns is not None:
        raw.update({k: v for k, v in vars(ns).items() if v is not None and k != "config"})
    return _resolve(raw)


def _resolve(raw: dict) -> RunConfig:
    if "experiment" not in raw:
        raise ParseError("no experiment given", field="experiment")
    exp = raw["experiment"]
    if exp not in EXPERIMENTS:
        raise ValidationError("experiment", f"must be one of {', '.join(EXPERIMENTS)}, got {exp!r}")
    kw = {"experiment": exp}
    for f in ("alpha", "beta"):
        if f in raw:
            kw[f] = parse_complex(raw[f], f)
    for f in ("pre", "post"):
        if f in raw:
            kw[f] = _complex_list(raw[f], f)
    if "positions" in raw:
        kw["positions"] = _float_list(raw["positions"], "positions")
    for f in ("q0", "d", "lam", "waist_factor"):
        if f in raw:
            kw[f] = _scalar(raw[f], float, f)
    for f in ("trials", "seed"):
        if f in raw:
            kw[f] = _scalar(raw[f], int, f)
    for f in ("absorption", "timestamp"):
        if f in raw:
            kw[f] = _scalar(raw[f], bool, f)
    for f in ("output_path", "format", "sweep_axis", "sweep_target"):
        if f in raw:
            kw[f] = _scalar(raw[f], str, f)
    if "sweep_values" in raw:
        kw["sweep_values"] = _float_list(raw["sweep_values"], "sweep_values")
    cfg = RunConfig(**kw)
    validate(cfg)
    return cfg


def validate(cfg: RunConfig) -> None:
    def need(ok, field, msg):
        if not ok:
            raise ValidationError(field, msg)

    need(cfg.experiment in EXPERIMENTS, "experiment", f"must be one of {EXPERIMENTS}")
    need(cfg.q0 > 0, "q0", "must be positive")
    need(cfg.d > 0, "d", "must be positive")
    need(cfg.lam > 0, "lambda", "must be positive")
    need(cfg.waist_factor > 0, "waist_factor", "must be positive")
    need(cfg.trials >= 1, "trials", "must be at least 1")
    need(cfg.seed >= 0, "seed", "must be non-negative")
    need(cfg.format in ("csv", "json"), "format", "must be csv or json")
    if cfg.pre is not None:
        need(any(abs(a) > 0 for a in cfg.pre), "pre", "amplitudes are all zero")
        need(len(cfg.pre) >= 2, "pre", "needs at least two arms")
    else:
        need(abs(cfg.alpha) > 0 or abs(cfg.beta) > 0, "alpha", "alpha and beta are both zero")
    if cfg.post is not None:
        need(len(cfg.post) == cfg.n_arms, "post", f"needs {cfg.n_arms} amplitudes")
        need(any(abs(a) > 0 for a in cfg.post), "post", "amplitudes are all zero")
    if cfg.positions is not None:
        need(len(cfg.positions) == cfg.n_arms, "positions", f"needs {cfg.n_arms} values")
        need(len(set(cfg.positions)) == len(cfg.positions), "positions", "must be distinct")
    if cfg.experiment == "sweep":
        need(cfg.sweep_axis in SWEEP_AXES, "sweep_axis", f"must be one of {SWEEP_AXES}")
        need(bool(cfg.sweep_values), "sweep_values", "must list at least one value")
        if cfg.sweep_target is not None:
            need(cfg.sweep_target in SWEEP_TARGETS, "sweep_target", f"must be one of {SWEEP_TARGETS}")
        if cfg.sweep_axis in ("q0", "lambda", "d"):
            need(all(v > 0 for v in cfg.sweep_values), "sweep_values", f"{cfg.sweep_axis} values must be positive")
        if cfg.sweep_axis == "alpha":
            need(cfg.pre is None, "sweep_axis", "alpha sweeps need the alpha/beta selection, not explicit pre")
