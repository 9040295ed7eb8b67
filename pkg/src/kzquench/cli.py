"""Command-line driver: parameter sweeps and figure datasets as CSV.

Usage::

    kzquench kinks   --tau 1,10,100,1000 --out results/
    kzquench entropy --model xx --tau 200,400,800 --L 2..64
    kzquench ou      --omega 0.5,1,2 --n_paths 100000
    kzquench exact   --N 8,10,12 --L 1..64
    kzquench lmg-check --N 2..6 --lambda 0,0.5,1
    kzquench figures --out figs/ --gnuplot

Config files hold ``section.key = value`` lines (``#`` starts a comment); any
key can be overridden by the flag named after its last component, e.g.
``sweep.tau`` by ``--tau``. The default output directory comes from
``$KZQUENCH_OUT``.

Exit codes: 0 ok, 2 config error, 3 numeric failure, 4 statistical check
failed, 5 I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import exact_baselines as eb
from . import kzm_defects as kd
from . import lmg
from . import stochastic_phase as ou
from . import tables
from .models import ModelKind

log = logging.getLogger("kzquench")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_STATS, EXIT_IO = 0, 2, 3, 4, 5
OUT_ENV = "KZQUENCH_OUT"
LMG_TOLERANCE = 1e-12
OU_Z_LIMIT = 4.0

FIGURE_IDS = ("fig1_left", "fig1_right", "fig2_left", "fig2_right", "fig3", "fig4_left", "fig4_right")


class ConfigError(ValueError):
    pass


def _floats(text):
    return [float(x) for x in _split(text)]


def _ints(text):
    out = []
    for item in _split(text):
        if ".." in item:
            lo, hi = item.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(item))
    return out


def _split(text):
    return [p.strip() for p in str(text).split(",") if p.strip()]


def _models(text):
    return [ModelKind.parse(m).value for m in _split(text)]


def _seed(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return v


KEYS = {
    "run.out": str,
    "run.seed": _seed,
    "sweep.model": _models,
    "sweep.tau": _floats,
    "sweep.L": _ints,
    "numerics.tol": float,
    "ou.omega": _floats,
    "ou.n_paths": int,
    "ou.dt": float,
    "ou.t_max": float,
    "ou.lags": _floats,
    "ou.scheme": str,
    "chain.N": _ints,
    "chain.lambda": _floats,
    "chain.max_N": int,
}

FLAG_TO_KEY = {key.split(".", 1)[1]: key for key in KEYS}


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    """Parse ``section.key = value`` lines into a raw string mapping."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}:{lineno}: expected 'section.key = value'")
        key, value = (s.strip() for s in stripped.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        raw[key] = value
    return raw


@dataclass
class RunConfig:
    command: str
    values: dict = field(default_factory=dict)
    sources: dict = field(default_factory=dict)

    def get(self, key, default=None):
        return self.values.get(key, default)

    @property
    def out(self) -> Path:
        return Path(self.values.get("run.out") or os.environ.get(OUT_ENV) or "kzquench_out")

    @property
    def seed(self) -> int:
        return self.values.get("run.seed", 20240601)

    @property
    def tol(self) -> float:
        return self.values.get("numerics.tol", kd.DEFAULT_TOL)


def build_config(command: str, raw: dict[str, str], sources: dict[str, str]) -> RunConfig:
    values = {}
    for key, text in raw.items():
        try:
            values[key] = KEYS[key](text)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{sources.get(key, key)}: bad value for {key!r}: {exc}") from None
    for key in ("sweep.model", "sweep.tau", "sweep.L", "ou.omega", "ou.lags", "chain.N", "chain.lambda"):
        if key in values and not values[key]:
            raise ConfigError(f"{sources.get(key, key)}: {key} must be a non-empty list")
    return RunConfig(command, values, sources)


# -- commands -----------------------------------------------------------------


def _write(cfg: RunConfig, name: str, header, rows) -> tuple[str, int, str]:
    cfg.out.mkdir(parents=True, exist_ok=True)
    n, digest = tables.write_csv(cfg.out / name, header, rows)
    log.info("wrote %s (%d rows)", cfg.out / name, n)
    return name, n, digest


def _taus(cfg, default):
    taus = cfg.get("sweep.tau", default)
    if any(t <= 0 for t in taus):
        raise ConfigError("sweep.tau: quench times must be positive")
    return taus


def cmd_kinks(cfg: RunConfig) -> int:
    models = cfg.get("sweep.model", list(tables.MODEL_ORDER))
    taus = _taus(cfg, [1.0, 10.0, 100.0, 1000.0])
    header, rows = tables.kink_rows(models, taus, cfg.tol)
    _write(cfg, "kinks.csv", header, rows)
    return EXIT_OK


def _entropy_taus(cfg, default):
    taus = _taus(cfg, default)
    if any(t <= 1 for t in taus):
        raise ConfigError("sweep.tau: the entropy laws need tau_q > 1")
    return taus


def _block_sizes(cfg, default):
    Ls = cfg.get("sweep.L", default)
    if any(L < 2 for L in Ls):
        raise ConfigError("sweep.L: block sizes must be >= 2")
    return Ls


def cmd_entropy(cfg: RunConfig) -> int:
    models = cfg.get("sweep.model", list(tables.MODEL_ORDER))
    taus = _entropy_taus(cfg, [200.0, 400.0, 800.0])
    Ls = _block_sizes(cfg, list(range(2, 65)))
    header, rows = tables.entropy_rows(models, taus, Ls)
    _write(cfg, "entropy.csv", header, rows)
    return EXIT_OK


def cmd_ou(cfg: RunConfig) -> int:
    omegas = cfg.get("ou.omega", [1.0])
    lags = cfg.get("ou.lags", [0.0, 0.5, 1.0, 2.0])
    dt = cfg.get("ou.dt", 0.05)
    t_max = cfg.get("ou.t_max", max(4.0, max(lags)))
    n_paths = cfg.get("ou.n_paths", 100_000)
    scheme = cfg.get("ou.scheme", "exact")
    overlay, summary = [], []
    worst = 0.0
    for i, w in enumerate(sorted(omegas)):
        params = ou.OUParams(omega=w, dt=dt, t_max=t_max, n_paths=n_paths, seed=cfg.seed + i, scheme=scheme)
        ens = ou.simulate(params)
        header, rows = tables.ou_overlay_rows(ens, lags)
        overlay.extend(rows)
        worst = max([worst] + [abs(r[-1]) for r in rows])
        sh, srows = tables.ou_summary_rows(ens)
        summary.extend([[w] + r for r in srows])
    _write(cfg, "ou_correlation.csv", tables.OU_OVERLAY_HEADER, overlay)
    _write(cfg, "ou_summary.csv", ["omega"] + tables.OU_SUMMARY_HEADER, summary)
    if worst > OU_Z_LIMIT:
        log.error("correlation estimate %.2f standard errors from the analytic curve", worst)
        return EXIT_STATS
    return EXIT_OK


def cmd_exact(cfg: RunConfig) -> int:
    Ls = cfg.get("sweep.L", list(range(1, 65)))
    if any(L < 1 for L in Ls):
        raise ConfigError("sweep.L: block sizes must be >= 1")
    sizes = cfg.get("chain.N", [8, 10, 12])
    cap = cfg.get("chain.max_N", 14)
    if any(n > cap or n < 2 for n in sizes):
        raise ConfigError(f"chain.N: sizes must lie in [2, {cap}]")
    lams = cfg.get("chain.lambda")
    _write(cfg, "exact_entropy.csv", *tables.exact_entropy_rows(Ls, lams or [0.0]))
    _write(cfg, "exact_concurrence_ising.csv", *tables.concurrence_rows("ising", sizes, lams or [1.0]))
    _write(cfg, "exact_concurrence_xxx.csv", *tables.concurrence_rows("xxx", sizes, lams or [0.0]))
    return EXIT_OK


def cmd_lmg_check(cfg: RunConfig) -> int:
    sizes = cfg.get("chain.N", list(range(2, 7)))
    lams = cfg.get("chain.lambda", [0.0, 0.5, 1.0])
    cap = cfg.get("chain.max_N", 8)
    if any(n > cap or n < 2 for n in sizes):
        raise ConfigError(f"chain.N: sizes must lie in [2, {cap}]")
    rows, failed = [], False
    print(f"{'N':>3} {'lambda':>8} {'H_reg-(H1+H2-1)':>18} {'pairwise-collective':>20}")
    for n in sorted(sizes):
        for lam in sorted(lams):
            spec = lmg.LMGSpec(n, lam)
            res = lmg.decomposition_residual(spec)
            pc = lmg.pairwise_collective_residual(spec)
            ok = res <= LMG_TOLERANCE and pc <= LMG_TOLERANCE
            failed |= not ok
            print(f"{n:>3} {lam:>8.4g} {res:>18.3e} {pc:>20.3e} {'ok' if ok else 'FAIL'}")
            rows.append([n, lam, res])
    _write(cfg, "lmg_check.csv", tables.LMG_RESIDUAL_HEADER, rows)
    return EXIT_NUMERIC if failed else EXIT_OK


FIG_TAUS = [200.0, 400.0, 800.0]
FIG_L = list(range(2, 65))
FIG_TAU_LONG = [float(t) for t in range(200, 2001, 100)]
FIG_TAU_KINKS = [1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0]
FIG_TAU_SMAX = [2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0]

GNUPLOT = {
    "fig1_left": ("L", "S", "using 3:4 title 'S(L,tau_q)', '' using 3:8 title 'exact, lambda=0'"),
    "fig1_right": ("L/sqrt(tau_q)", "S/S_max", "using 7:6"),
    "fig2_left": ("L", "S", "using 3:4 title 'LMG S(L,tau_q)', '' using 3:8 title 'XX exact'"),
    "fig2_right": ("tau_q", "S", "using 2:4"),
    "fig3": ("L/sqrt(tau_q)", "S", "using 7:4"),
    "fig4_left": ("tau_q", "n", "using 2:3"),
    "fig4_right": ("tau_q", "S_max", "using 2:3"),
}


def figure_tables(cfg: RunConfig) -> dict[str, tuple[list, list]]:
    taus = cfg.get("sweep.tau", FIG_TAUS)
    Ls = cfg.get("sweep.L", FIG_L)
    xx = tables.entropy_rows(["xx"], taus, Ls)
    lmg_rows = tables.entropy_rows(["lmg"], taus, Ls, exact_for=())
    # LMG panels are compared with the XX exact curve at lambda=0
    exact = {r[2]: r[7] for r in xx[1]}
    lmg_with_exact = [r[:7] + [exact.get(r[2])] for r in lmg_rows[1]]
    long = tables.entropy_rows(["lmg"], FIG_TAU_LONG, [16, 32, 64], exact_for=())
    return {
        "fig1_left": xx,
        "fig1_right": xx,
        "fig2_left": (tables.ENTROPY_HEADER, lmg_with_exact),
        "fig2_right": long,
        "fig3": lmg_rows,
        "fig4_left": tables.kink_rows(tables.MODEL_ORDER, FIG_TAU_KINKS, cfg.tol),
        "fig4_right": tables.smax_rows(tables.MODEL_ORDER, FIG_TAU_SMAX),
    }


def _gnuplot_script(fig: str) -> str:
    xlabel, ylabel, using = GNUPLOT[fig]
    return (
        "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        f"set xlabel '{xlabel}'\nset ylabel '{ylabel}'\n"
        f"plot '{fig}.csv' {using}\n"
    )


def cmd_figures(cfg: RunConfig, gnuplot: bool = False) -> int:
    out = cfg.out
    out.mkdir(parents=True, exist_ok=True)
    manifest = []
    for fig, (header, rows) in figure_tables(cfg).items():
        manifest.append(_write(cfg, f"{fig}.csv", header, rows))
        if gnuplot:
            data = _gnuplot_script(fig).encode("ascii")
            (out / f"{fig}.gp").write_bytes(data)
            manifest.append((f"{fig}.gp", data.count(b"\n"), hashlib.sha256(data).hexdigest()))
    lines = "".join(f"{name},{digest},{n}\n" for name, n, digest in manifest)
    (out / "manifest.txt").write_text(lines, encoding="ascii")
    meta = {
        "version": __version__,
        "seed": cfg.seed,
        "created": _timestamp(),
        "figures": list(FIGURE_IDS),
        "config": {k: v for k, v in cfg.values.items() if k != "run.out"},
    }
    (out / "metadata.json").write_text(json.dumps(meta, indent=2, default=str) + "\n")
    return EXIT_OK


def _timestamp() -> str:
    from datetime import datetime, timezone

    return datetime.now(timezone.utc).isoformat(timespec="seconds")


COMMANDS = {
    "kinks": cmd_kinks,
    "entropy": cmd_entropy,
    "ou": cmd_ou,
    "exact": cmd_exact,
    "lmg-check": cmd_lmg_check,
    "figures": cmd_figures,
}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kzquench", description="Quench-induced defect and entropy scaling.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path)
        p.add_argument("-v", "--verbose", action="store_true")
        for flag in FLAG_TO_KEY:
            p.add_argument(f"--{flag}", dest=f"opt_{flag}", metavar="VALUE")
        if name == "figures":
            p.add_argument("--gnuplot", action="store_true", help="also write a gnuplot script per panel")
    return parser


def _load(args) -> RunConfig:
    raw, sources = {}, {}
    if args.config is not None:
        try:
            text = args.config.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        file_raw = parse_config_text(text, str(args.config))
        raw.update(file_raw)
        sources.update({k: f"{args.config}:{k}" for k in file_raw})
    for flag, key in FLAG_TO_KEY.items():
        value = getattr(args, f"opt_{flag}")
        if value is not None:
            raw[key] = value
            sources[key] = f"--{flag}"
    return build_config(args.command, raw, sources)


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="kzquench: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = _load(args)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            if args.command == "figures":
                return cmd_figures(cfg, gnuplot=args.gnuplot)
            return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_CONFIG
    except (kd.QuadratureError, eb.DegenerateGroundState, np.linalg.LinAlgError, FloatingPointError, MemoryError) as exc:
        log.error("numeric failure: %s", exc)
        return EXIT_NUMERIC
    except OSError as exc:
        log.error("I/O failure: %s", exc)
        return EXIT_IO
    except ValueError as exc:
        log.error("invalid parameters: %s", exc)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
