"""Command-line front end: ``wvsim --experiment ...`` or ``python -m wvsim``.

Exit codes: 0 success, 2 invalid input, 3 numeric failure (orthogonal
selection, vanishing norm, stalled sampler, no accepted trials).
"""

from __future__ import annotations

import dataclasses
import datetime as _dt
import math
import sys

import numpy as np

from . import __version__
from .config import DEFAULT_TARGET, RunConfig, parse_config
from .ensemble import run_ensemble
from .errors import ParseError, ValidationError, WVSimError
from .qcore import make_state, uniform_state
from .spontaneous import EmissionConfig, pattern_report
from .stimulated import StimulatedConfig, report
from .tables import ResultTable
from .tsvf import TwoStateVector, arm_weak_values, photon_count_rule_applies, postselect_probability

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3


def arm_labels(n):
    return ["R", "L"] if n == 2 else [str(i) for i in range(n)]


def build_tsv(cfg: RunConfig) -> TwoStateVector:
    pre = make_state(cfg.pre if cfg.pre is not None else [cfg.alpha, -cfg.beta])
    post = uniform_state(pre.dim) if cfg.post is None else make_state(cfg.post)
    return TwoStateVector(pre, post)


def arm_positions(cfg: RunConfig):
    if cfg.positions is not None:
        return cfg.positions
    n = cfg.n_arms
    return tuple((n - 1 - 2.0 * i) * cfg.d for i in range(n))


def stimulated_config(cfg: RunConfig) -> StimulatedConfig:
    return StimulatedConfig(build_tsv(cfg), cfg.q0, -1 if cfg.absorption else 1)


def emission_config(cfg: RunConfig) -> EmissionConfig:
    return EmissionConfig(build_tsv(cfg), arm_positions(cfg), cfg.lam, cfg.waist_factor)


def _metadata(cfg: RunConfig, **extra):
    meta = {"tool": "wvsim", "version": __version__, "config": cfg.echo(), "seed": cfg.seed}
    if cfg.pre is None:
        # whether the weak values read directly as extra / missing photon counts
        meta["photon_count_rule"] = photon_count_rule_applies(cfg.alpha, cfg.beta)
    if cfg.timestamp:
        meta["created"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    meta.update(extra)
    return meta


def _weak_values(cfg):
    tsv = build_tsv(cfg)
    wv = arm_weak_values(tsv)
    rows = [(f"Pi_{lab}", float(w.real), float(w.imag)) for lab, w in zip(arm_labels(tsv.dim), wv)]
    t = ResultTable(["operator", "re", "im"], rows, _metadata(cfg, postselect_probability=postselect_probability(tsv)))
    return t, f"post-selection probability |<post|pre>|^2 = {postselect_probability(tsv):.6g}"


def _stimulated(cfg):
    rep = report(stimulated_config(cfg))
    labels = arm_labels(len(rep))
    rows = [
        (labels[r.arm], r.excess_weak, r.excess_exact, r.excess_single_beam, r.error,
         r.success_probability_exact, r.success_probability_naive)
        for r in rep
    ]
    cols = ["arm", "excess_weak", "excess_exact", "excess_single_beam", "error",
            "success_probability_exact", "success_probability_naive"]
    total = sum(r.excess_exact for r in rep)
    return ResultTable(cols, rows, _metadata(cfg)), f"sum of exact excesses = {total:.10g} (weak-value sum {sum(r.excess_weak for r in rep):.10g})"


def _spontaneous(cfg):
    ecfg = emission_config(cfg)
    r = pattern_report(ecfg)
    cols = ["peak_x", "phantom_prediction", "peak_error", "mean_x", "mean_p", "predicted_mean_p",
            "postselect_probability", "long_wavelength"]
    rows = [(r.peak_x, r.phantom_prediction, abs(r.peak_x - r.phantom_prediction), r.mean_x, r.mean_p,
             r.predicted_mean_p, postselect_probability(ecfg.tsv), ecfg.long_wavelength)]
    note = "" if ecfg.long_wavelength else "\nwarning: lambda is not much larger than the phantom distance"
    return ResultTable(cols, rows, _metadata(cfg)), f"intensity peak {r.peak_x:.6g} vs phantom position {r.phantom_prediction:.6g}{note}"


def _ensemble(cfg):
    scfg = stimulated_config(cfg)
    stats = run_ensemble(scfg, cfg.trials, cfg.seed)
    rep = report(scfg)
    labels = arm_labels(len(rep))
    rows = [
        (labels[a], stats.mean_excess[a], stats.stderr[a], stats.excess_std[a], rep[a].excess_exact,
         rep[a].excess_weak, stats.n_trials, stats.n_accepted, stats.acceptance_rate, rep[a].success_probability_exact)
        for a in range(len(rep))
    ]
    cols = ["arm", "mean_excess", "stderr", "excess_std", "excess_exact", "excess_weak",
            "n_trials", "n_accepted", "acceptance_rate", "acceptance_exact"]
    return ResultTable(cols, rows, _metadata(cfg)), (
        f"{stats.n_accepted}/{stats.n_trials} trials post-selected (rate {stats.acceptance_rate:.5g})"
    )


RUNNERS = {"weak-values": _weak_values, "stimulated": _stimulated, "spontaneous": _spontaneous, "ensemble": _ensemble}


def _apply_axis(cfg: RunConfig, axis: str, value: float) -> RunConfig:
    if axis == "q0":
        return dataclasses.replace(cfg, q0=value)
    if axis == "lambda":
        return dataclasses.replace(cfg, lam=value)
    if axis == "d":
        return dataclasses.replace(cfg, d=value)
    if axis == "alpha":
        # the alpha = beta + 1 family
        return dataclasses.replace(cfg, alpha=complex(value), beta=complex(value - 1.0))
    raise ValidationError("sweep_axis", f"unknown axis {axis!r}")


def _headline(target, cfg):
    """(column names, values) summarizing one sweep point; last column is the error."""
    if target == "stimulated":
        rep = report(stimulated_config(cfg))
        labels = arm_labels(len(rep))
        names = [f"excess_exact_{lab}" for lab in labels] + [f"excess_weak_{lab}" for lab in labels]
        vals = [r.excess_exact for r in rep] + [r.excess_weak for r in rep]
        names += ["success_probability_exact", "error"]
        vals += [rep[0].success_probability_exact, max(r.error for r in rep)]
        return names, vals
    if target == "spontaneous":
        ecfg = emission_config(cfg)
        r = pattern_report(ecfg)
        return (["peak_x", "phantom_prediction", "postselect_probability", "error"],
                [r.peak_x, r.phantom_prediction, postselect_probability(ecfg.tsv), abs(r.peak_x - r.phantom_prediction)])
    if target == "ensemble":
        scfg = stimulated_config(cfg)
        stats = run_ensemble(scfg, cfg.trials, cfg.seed)
        rep = report(scfg)
        labels = arm_labels(len(rep))
        names = [f"mean_excess_{lab}" for lab in labels] + [f"stderr_{lab}" for lab in labels]
        vals = list(stats.mean_excess) + list(stats.stderr)
        names += ["acceptance_rate", "error"]
        vals += [stats.acceptance_rate, max(abs(m - r.excess_exact) for m, r in zip(stats.mean_excess, rep))]
        return names, vals
    if target == "weak-values":
        tsv = build_tsv(cfg)
        wv = arm_weak_values(tsv)
        labels = arm_labels(tsv.dim)
        names = [f"weak_{lab}_re" for lab in labels] + [f"weak_{lab}_im" for lab in labels]
        names += ["postselect_probability", "error"]
        vals = [float(w.real) for w in wv] + [float(w.imag) for w in wv]
        vals += [postselect_probability(tsv), abs(complex(np.sum(wv)) - 1.0)]
        return names, vals
    raise ValidationError("sweep_target", f"unknown target {target!r}")


def sweep(cfg: RunConfig, axis: str, values) -> ResultTable:
    """One row per axis value; a failing point is recorded in ``status`` and does not stop the sweep."""
    values = list(values)
    if not values:
        raise ValidationError("sweep_values", "must list at least one value")
    target = cfg.sweep_target or DEFAULT_TARGET[axis]
    names = None
    results = []
    for v in values:
        try:
            n, vals = _headline(target, _apply_axis(cfg, axis, float(v)))
            names = names or n
            results.append((float(v), vals, "ok"))
        except WVSimError as exc:
            results.append((float(v), None, f"{type(exc).__name__}: {exc}"))
    if names is None:
        names = ["error"]
    rows = [
        (v, *(vals if vals is not None else [math.nan] * len(names)), status)
        for v, vals, status in results
    ]
    return ResultTable([axis, *names, "status"], rows, _metadata(cfg, sweep_target=target))


def run(cfg: RunConfig):
    """Dispatch ``cfg`` and return (table, summary text, exit code)."""
    try:
        if cfg.experiment == "sweep":
            t = sweep(cfg, cfg.sweep_axis, cfg.sweep_values)
            summary = f"sweep over {cfg.sweep_axis}: {len(t.rows)} points"
        else:
            t, summary = RUNNERS[cfg.experiment](cfg)
    except ValidationError as exc:
        return None, f"invalid configuration: {exc}", EXIT_INVALID
    except WVSimError as exc:
        return None, f"numeric failure: {type(exc).__name__}: {exc}", EXIT_NUMERIC
    return t, summary, EXIT_OK


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(flags=argv)
    except (ParseError, ValidationError) as exc:
        print(f"wvsim: {exc}", file=sys.stderr)
        return EXIT_INVALID
    table, summary, code = run(cfg)
    if code != EXIT_OK:
        print(f"wvsim: {summary}", file=sys.stderr)
        return code
    print(f"[{cfg.experiment}]")
    print(table.render())
    print(summary)
    if cfg.output_path:
        try:
            table.write(cfg.output_path, cfg.format)
        except OSError as exc:
            print(f"wvsim: cannot write {cfg.output_path}: {exc}", file=sys.stderr)
            return EXIT_INVALID
        print(f"wrote {cfg.output_path}", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
