"""Command-line front end.

Usage::

    fermi-gig verify --n 3 --seed 1
    fermi-gig embed-check --config payload.yaml --format csv --out report.csv

Configuration files are YAML (JSON is accepted, being a subset).  Complex
entries are written as ``[re, im]`` pairs and matrices as row-major nested
lists.  Exit codes: 0 when every check passes, 1 when a check fails, 2 for
configuration errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import yaml

from . import car, channels, gig, semigroups, suites
from .errors import ConfigError, FermiGigError, ParseError, ValidationError
from .rng import SplitMix64, random_pair, random_params
from .tolerances import Tolerances

COMMANDS = ("verify", "evolve", "spectrum", "classify", "embed-check", "steady-states")

# Allowed payload keys per command; every entry is (name, kind).
PAYLOAD_KEYS = {
    "verify": {"suites": "list"},
    "evolve": {"g": "matrix", "a": "matrix", "q": "matrix", "times": "list"},
    "spectrum": {"h": "matrix", "t_sym": "matrix"},
    "classify": {"s": "matrix", "r": "matrix", "branch": "str"},
    "embed-check": {"g": "matrix", "r": "matrix"},
    "steady-states": {"s": "matrix", "r": "matrix"},
}
TOP_KEYS = ("command", "n_modes", "seed", "tolerances")


@dataclass
class RunConfig:
    command: str
    n_modes: int = 2
    seed: int = 0
    tolerances: Tolerances = field(default_factory=Tolerances)
    payload: dict = field(default_factory=dict)


@dataclass
class Report:
    command: dict
    checks: list
    results: dict

    @property
    def summary(self) -> dict:
        passed = sum(1 for c in self.checks if c.passed)
        return {"passed": passed, "failed": len(self.checks) - passed, "total": len(self.checks)}

    @property
    def exit_code(self) -> int:
        return 0 if all(c.passed for c in self.checks) else 1

    def as_dict(self, timing: bool = True) -> dict:
        recs = []
        for c in self.checks:
            rec = {"name": c.name, "status": c.status, "residual": _num(c.residual), "tolerance": c.tolerance}
            if timing:
                rec["wall_time_ms"] = round(c.wall_time_ms, 3)
            recs.append(rec)
        return {"command": self.command, "checks": recs, "results": self.results, "summary": self.summary}

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.as_dict(timing), indent=2, sort_keys=False) + "\n"

    def to_csv(self, timing: bool = True) -> str:
        buf = io.StringIO()
        cols = ["name", "status", "residual", "tolerance"] + (["wall_time_ms"] if timing else [])
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for rec in self.as_dict(timing)["checks"]:
            w.writerow([rec[c] for c in cols])
        return buf.getvalue()


def _num(x: float):
    if np.isfinite(x):
        return float(x)
    return "inf" if x > 0 else "-inf"


# ---------------------------------------------------------------------------
# parsing and validation


def _load_document(text: str) -> Any:
    try:
        return yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line = mark.line + 1 if mark else None
        col = mark.column + 1 if mark else None
        raise ParseError(str(exc.problem or exc), line, col) from exc
    except yaml.YAMLError as exc:
        raise ParseError(str(exc), None, None) from exc


def parse_matrix(value, name: str, n: int) -> np.ndarray:
    """Read an ``n x n`` complex matrix written as nested ``[re, im]`` pairs."""
    if not isinstance(value, list) or len(value) != n or any(not isinstance(r, list) or len(r) != n for r in value):
        raise ValidationError(name, f"expected {n}x{n}")
    out = np.zeros((n, n), dtype=np.complex128)
    for i, row in enumerate(value):
        for j, entry in enumerate(row):
            if isinstance(entry, list) and len(entry) == 2 and all(isinstance(x, (int, float)) for x in entry):
                out[i, j] = complex(float(entry[0]), float(entry[1]))
            elif isinstance(entry, (int, float)) and not isinstance(entry, bool):
                out[i, j] = float(entry)
            else:
                raise ValidationError(name, f"entry ({i},{j}) must be a number or an [re, im] pair")
    if not np.all(np.isfinite(out)):
        raise ValidationError(name, "entries must be finite")
    return out


def matrix_to_pairs(m: np.ndarray) -> list:
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def parse_config(source: str | dict, inline: bool = False) -> RunConfig:
    """Parse a config from a path, an inline YAML/JSON document, or an already-loaded mapping."""
    if isinstance(source, dict):
        doc = source
    else:
        if not inline:
            try:
                with open(source, encoding="utf-8") as fh:
                    source = fh.read()
            except OSError as exc:
                raise ConfigError(f"cannot read config: {exc}") from exc
        doc = _load_document(source)
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise ValidationError("<root>", "config must be a mapping")
    command = doc.get("command")
    if command not in COMMANDS:
        raise ValidationError("command", f"must be one of {', '.join(COMMANDS)}")
    allowed = set(TOP_KEYS) | set(PAYLOAD_KEYS[command])
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise ValidationError(unknown[0], "unknown key")
    n = doc.get("n_modes", 2)
    if not isinstance(n, int) or isinstance(n, bool) or not (1 <= n <= 10):
        raise ValidationError("n_modes", "must be an integer in 1..10")
    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or not (0 <= seed < 1 << 64):
        raise ValidationError("seed", "must be an unsigned 64-bit integer")
    tol_doc = doc.get("tolerances", {}) or {}
    if not isinstance(tol_doc, dict):
        raise ValidationError("tolerances", "must be a mapping")
    try:
        tols = Tolerances().with_overrides(tol_doc)
    except KeyError as exc:
        raise ValidationError("tolerances", f"unknown tolerance {exc.args[0]}") from exc
    except (TypeError, ValueError) as exc:
        raise ValidationError("tolerances", "values must be numbers") from exc
    payload = {}
    for key, kind in PAYLOAD_KEYS[command].items():
        if key not in doc:
            continue
        val = doc[key]
        if kind == "matrix":
            payload[key] = parse_matrix(val, key, n)
        elif kind == "list":
            if not isinstance(val, list):
                raise ValidationError(key, "expected a list")
            payload[key] = list(val)
        else:
            if not isinstance(val, str):
                raise ValidationError(key, "expected a string")
            payload[key] = val
    if command == "verify" and "suites" in payload:
        bad = [s for s in payload["suites"] if s not in suites.SUITES]
        if bad:
            raise ValidationError("suites", f"unknown suite {bad[0]}")
    if command == "classify" and payload.get("branch", channels.CP_COVARIANT) not in channels.BRANCHES:
        raise ValidationError("branch", f"must be one of {', '.join(channels.BRANCHES)}")
    if command == "evolve" and "times" in payload:
        if any(not isinstance(t, (int, float)) or t < 0 for t in payload["times"]):
            raise ValidationError("times", "must be nonnegative numbers")
    return RunConfig(command, n, seed, tols, payload)


# ---------------------------------------------------------------------------
# commands


def _threads() -> int:
    env = os.environ.get("FERMI_GIG_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def cmd_verify(cfg: RunConfig):
    names = cfg.payload.get("suites") or list(suites.SUITES)
    with ThreadPoolExecutor(max_workers=min(_threads(), len(names))) as pool:
        futures = [pool.submit(suites.run_suite, name, cfg.n_modes, cfg.seed, cfg.tolerances) for name in names]
        checks = [c for f in futures for c in f.result()]
    return checks, {"suites": names}


def cmd_evolve(cfg: RunConfig):
    n = cfg.n_modes
    rng = SplitMix64(cfg.seed)
    if "g" in cfg.payload or "a" in cfg.payload:
        g = cfg.payload.get("g", -np.eye(n))
        a = cfg.payload.get("a", np.zeros((n, n)))
    else:
        g, a = random_params(n, rng)
    params = semigroups.SemigroupParams.make(g, a)
    q = cfg.payload.get("q", 0.5 * np.eye(n))
    times = [float(t) for t in cfg.payload.get("times", [0.0, 0.5, 1.0])]
    rep = car.build_rep(n)
    rho0 = gig.rho_from_symbol(rep, q).rho
    checks, traj = [], []
    for t in times:
        rho_t = semigroups.evolve(params, rep, rho0, t)
        sym = gig.symbol_of(rep, 0.5 * (rho_t + rho_t.conj().T))
        err = float(np.linalg.norm(sym - params.symbol_map(q, t)))
        checks.append(suites.check(f"symbol_trajectory[t={t:g}]", err, 1e-9))
        traj.append({"t": t, "symbol": matrix_to_pairs(sym)})
    return checks, {"trajectory": traj}


def cmd_spectrum(cfg: RunConfig):
    n = cfg.n_modes
    rng = SplitMix64(cfg.seed)
    h = cfg.payload.get("h")
    t = cfg.payload.get("t_sym")
    if h is None:
        h = np.diag(1.0 + np.arange(n, dtype=float))
    if t is None:
        w, v = np.linalg.eigh(h)
        t = (v * (0.1 + 0.8 * rng.uniform(n))[None, :]) @ v.conj().T
    rep = car.build_rep(n)
    hb = semigroups.hermite_basis(rep, h, t)
    evs = sorted((float(e) for e in hb.eigenvalues), reverse=True)
    checks = []
    if n <= 3:
        ch = channels.EHKChannel(rep, semigroups.mehler_pair(h, t))
        dense = np.sort(np.linalg.eigvals(ch.superop).real)[::-1]
        checks.append(suites.check("hermite_vs_dense_spectrum", float(np.abs(dense - np.array(evs)).max()),
                                   cfg.tolerances.spectrum))
    dual = None
    if n <= 4:
        dual = channels.EHKChannel(rep, semigroups.mehler_pair(h, t)).dual()
        worst = max(float(np.linalg.norm(dual(o) - e * o)) for o, e in zip(hb.operators, hb.eigenvalues))
        checks.append(suites.check("hermite_eigen_equation", worst, 1e-9))
    return checks, {"eigenvalues": [round(e, 15) for e in evs]}


def cmd_classify(cfg: RunConfig):
    n = cfg.n_modes
    rng = SplitMix64(cfg.seed)
    if "s" in cfg.payload:
        s = cfg.payload["s"]
        r = cfg.payload.get("r", np.zeros((n, n)))
    else:
        s, r = random_pair(n, rng, max_norm=0.9)
    pair = channels.CompatiblePair.make(s, r)
    rep = car.build_rep(n)
    ch = channels.EHKChannel(rep, pair)
    branch = cfg.payload.get("branch", channels.CP_COVARIANT)
    tr = channels.transpose_channel(rep)
    ph = channels.particle_hole_channel(rep)
    target = {
        channels.CP_COVARIANT: ch,
        channels.COCP_COVARIANT: ch.compose(tr),
        channels.CP_CONTRAVARIANT: ch.compose(ph),
        channels.COCP_CONTRAVARIANT: ch.compose(ph).compose(tr),
    }[branch]
    res = channels.classify(target, rep)
    err = float(np.linalg.norm(channels.align_phase(res.s, pair.s) - pair.s) + np.linalg.norm(res.r - pair.r))
    checks = [suites.check("branch", 0.0 if res.branch == branch else 1.0, 0.0),
              suites.check("recovered_pair", err, cfg.tolerances.classify)]
    return checks, {"branch": res.branch, "verification_residual": res.residual,
                    "s": matrix_to_pairs(channels.align_phase(res.s, pair.s)), "r": matrix_to_pairs(res.r)}


def cmd_embed(cfg: RunConfig):
    n = cfg.n_modes
    if "g" in cfg.payload:
        g = cfg.payload["g"]
        r = cfg.payload.get("r", np.zeros((n, n)))
    else:
        g, r = suites.nonembeddable_example()
        if n != 2:
            raise ValidationError("g", "the built-in example has n_modes = 2; supply g and r")
    res = semigroups.embed_check(g, r)
    checks = [suites.check("a_hermitian", float(np.linalg.norm(res.a - res.a.conj().T)), 1e-10)]
    if res.embeddable:
        checks.append(suites.check("roundtrip", res.roundtrip, cfg.tolerances.embed_roundtrip))
    return checks, {"status": res.kind, "min_eig_a": float(res.min_eig_a), "min_eig_gap": float(res.min_eig_gap),
                    "a": matrix_to_pairs(res.a)}


def cmd_steady(cfg: RunConfig):
    n = cfg.n_modes
    rng = SplitMix64(cfg.seed)
    if "s" in cfg.payload:
        s = cfg.payload["s"]
        r = cfg.payload.get("r", np.zeros((n, n)))
    else:
        s, r = random_pair(n, rng, max_norm=0.9)
    pair = channels.CompatiblePair.make(s, r)
    st = semigroups.steady_states(pair)
    checks = [suites.check("prp_zero", st.prp_residual, 1e-10),
              suites.check("p_idempotent", float(np.linalg.norm(st.p @ st.p - st.p)), 1e-9)]
    if n <= 3:
        rep = car.build_rep(n)
        ch = channels.EHKChannel(rep, pair)
        q = st.fixed_symbol(0.5 * np.eye(n))
        rho = gig.rho_from_symbol(rep, q).rho
        checks.append(suites.check("fixed_by_channel", float(np.linalg.norm(ch(rho) - rho)), cfg.tolerances.steady))
    return checks, {"unique": bool(st.unique), "p": matrix_to_pairs(st.p), "r_inf": matrix_to_pairs(st.r_inf)}


DISPATCH = {
    "verify": cmd_verify,
    "evolve": cmd_evolve,
    "spectrum": cmd_spectrum,
    "classify": cmd_classify,
    "embed-check": cmd_embed,
    "steady-states": cmd_steady,
}


def run_command(cfg: RunConfig) -> Report:
    echo = {"name": cfg.command, "n_modes": cfg.n_modes, "seed": cfg.seed}
    start = time.perf_counter()
    try:
        checks, results = DISPATCH[cfg.command](cfg)
        if cfg.command != "verify":
            share = (time.perf_counter() - start) * 1000.0 / max(1, len(checks))
            for c in checks:
                c.wall_time_ms = share
    except ValidationError:
        raise
    except FermiGigError as exc:
        checks = [suites.Check(f"{cfg.command}:{type(exc).__name__}", False, float("inf"), 0.0,
                               (time.perf_counter() - start) * 1000.0)]
        results = {"error": str(exc)}
    return Report(echo, checks, results)


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fermi-gig", description="GIG fermionic states, channels and semigroups")
    p.add_argument("command", nargs="?", choices=COMMANDS, help="subcommand (may also come from --config)")
    p.add_argument("--config", help="YAML or JSON config file")
    p.add_argument("--n", type=int, dest="n_modes", help="number of modes")
    p.add_argument("--seed", type=int, help="unsigned 64-bit seed")
    p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE", help="override a tolerance")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--no-timing", action="store_true", help="omit wall-clock fields from the report")
    return p


def _merge(args) -> RunConfig:
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                doc = _load_document(fh.read()) or {}
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
        if not isinstance(doc, dict):
            raise ValidationError("<root>", "config must be a mapping")
    else:
        doc = {}
    if args.command:
        if "command" in doc and doc["command"] != args.command:
            raise ValidationError("command", "conflicts with the command line")
        doc["command"] = args.command
    if args.n_modes is not None:
        doc["n_modes"] = args.n_modes
    if args.seed is not None:
        doc["seed"] = args.seed
    if args.tol:
        tol_doc = dict(doc.get("tolerances") or {})
        for item in args.tol:
            name, sep, value = item.partition("=")
            if not sep:
                raise ValidationError("tol", f"expected NAME=VALUE, got {item!r}")
            try:
                tol_doc[name.strip()] = float(value)
            except ValueError as exc:
                raise ValidationError("tol", f"{name}: not a number") from exc
        doc["tolerances"] = tol_doc
    return parse_config(doc)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _merge(args)
        report = run_command(cfg)
    except ParseError as exc:
        print(f"config parse error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"config error: {exc.field}: {exc.message}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    text = report.to_csv(not args.no_timing) if args.format == "csv" else report.to_json(not args.no_timing)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
