"""CSV tables shared by the library and the command line.

Numbers are written with 9 significant digits and a ``.`` decimal point,
independent of locale. Every builder returns ``(header, rows)``.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
from pathlib import Path

import numpy as np

from . import entanglement_scaling as es
from . import exact_baselines as eb
from . import kzm_defects as kd
from . import lmg
from . import stochastic_phase as ou

MODEL_ORDER = ("ising", "xx", "xxx", "lmg")


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".9g")
    return str(value)


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def write_csv(path, header, rows) -> tuple[int, str]:
    """Write a table; return (row count, sha256 of the bytes written)."""
    rows = list(rows)
    data = render_csv(header, rows).encode("ascii")
    Path(path).write_bytes(data)
    return len(rows), hashlib.sha256(data).hexdigest()


def model_key(model: str) -> int:
    return MODEL_ORDER.index(model) if model in MODEL_ORDER else len(MODEL_ORDER)


# -- kink densities ---------------------------------------------------------

KINK_HEADER = ["model", "tau_q", "n_closed", "n_quadrature"]
KINK_AUDIT_HEADER = ["model", "tau_q", "n_closed", "n_quadrature", "abs_diff"]


def kink_rows(models, taus, tol=kd.DEFAULT_TOL, audit=False):
    rows = []
    for model in sorted(models, key=model_key):
        for tau in sorted(taus):
            closed = kd.density_for(model, tau)
            quad = kd.density_for(model, tau, tol)
            row = [model, float(tau), closed, quad]
            if audit:
                row.append(abs(closed - quad))
            rows.append(row)
    return (KINK_AUDIT_HEADER if audit else KINK_HEADER), rows


# -- entanglement -----------------------------------------------------------

ENTROPY_HEADER = ["model", "tau_q", "L", "S_quench", "S_max", "ratio", "L_over_sqrt_tau", "S_exact_bits"]
SCALING_HEADER = ["model", "tau_q", "L", "S_quench", "S_max", "ratio", "L_max"]
SMAX_HEADER = ["model", "tau_q", "S_max"]


def entropy_rows(models, taus, Ls, exact_for=("xx",)):
    exact_cache = {}
    rows = []
    for model in sorted(models, key=model_key):
        for tau in sorted(taus):
            s_max = es.max_entropy(model, tau).value
            for L in sorted(Ls):
                s = es.quench_entropy(L, tau).value
                exact = None
                if model in exact_for:
                    if L not in exact_cache:
                        exact_cache[L] = eb.xx_block_entropy(int(L), 0.0).value
                    exact = exact_cache[L]
                rows.append([model, float(tau), int(L), s, s_max, s / s_max, L / math.sqrt(tau), exact])
    return ENTROPY_HEADER, rows


def scaling_rows(models, taus, Ls):
    rows = []
    for model in sorted(models, key=model_key):
        for tau in sorted(taus):
            s_max = es.max_entropy(model, tau).value
            l_max = es.max_block_size(model, tau)
            for L in sorted(Ls):
                s = es.quench_entropy(L, tau).value
                rows.append([model, float(tau), int(L), s, s_max, s / s_max, l_max])
    return SCALING_HEADER, rows


def smax_rows(models, taus):
    rows = [
        [model, float(tau), es.max_entropy(model, tau).value]
        for model in sorted(models, key=model_key)
        for tau in sorted(taus)
    ]
    return SMAX_HEADER, rows


# -- stochastic phase -------------------------------------------------------

OU_SUMMARY_HEADER = ["t", "mean", "variance"]
OU_CORRELATION_HEADER = ["dt", "mean_product", "std_error"]
OU_OVERLAY_HEADER = ["omega", "dt", "mean_product", "std_error", "analytic", "z_score"]


def ou_summary_rows(ensemble: ou.PathEnsemble):
    mean = ensemble.values.mean(axis=0)
    var = ensemble.values.var(axis=0, ddof=1) if ensemble.values.shape[0] > 1 else np.zeros_like(mean)
    return OU_SUMMARY_HEADER, [[float(t), float(m), float(v)] for t, m, v in zip(ensemble.times, mean, var)]


def ou_correlation_rows(ensemble: ou.PathEnsemble, lags):
    rows = []
    for lag in lags:
        est = ou.stationary_correlation(ensemble, lag)
        rows.append([est.lag, est.mean_product, est.std_error])
    return OU_CORRELATION_HEADER, rows


def ou_overlay_rows(ensemble: ou.PathEnsemble, lags):
    w = ensemble.params.omega
    rows = []
    for lag in lags:
        est = ou.stationary_correlation(ensemble, lag)
        analytic = float(ou.analytic_correlation(w, lag, ensemble.params.calibration))
        z = (est.mean_product - analytic) / est.std_error if est.std_error > 0 else math.inf
        rows.append([w, est.lag, est.mean_product, est.std_error, analytic, z])
    return OU_OVERLAY_HEADER, rows


# -- exact baselines --------------------------------------------------------

EXACT_ENTROPY_HEADER = ["L", "lambda", "S_exact_bits"]
CONCURRENCE_HEADER = ["N", "lambda", "concurrence"]


def exact_entropy_rows(Ls, lams=(0.0,)):
    rows = [
        [int(L), float(lam), eb.xx_block_entropy(int(L), lam).value]
        for lam in sorted(lams)
        for L in sorted(Ls)
    ]
    return EXACT_ENTROPY_HEADER, rows


def concurrence_rows(model: str, sizes, lams):
    from .models import SpinModel

    rows = []
    for lam in sorted(lams):
        for n in sorted(sizes):
            spec = eb.ChainSpec(SpinModel(model, field=lam), int(n))
            rows.append([int(n), float(lam), eb.nn_concurrence(spec).value])
    return CONCURRENCE_HEADER, rows


# -- LMG ----------------------------------------------------------------------

LMG_RESIDUAL_HEADER = ["N", "lambda", "residual"]
LMG_SUMMARY_HEADER = ["tau_q", "n4", "S_max", "L_max"]


def lmg_residual_rows(sizes, lams, pair_set="ring"):
    rows = []
    for n in sorted(sizes):
        for lam in sorted(lams):
            rows.append([int(n), float(lam), lmg.decomposition_residual(lmg.LMGSpec(int(n), lam), pair_set)])
    return LMG_RESIDUAL_HEADER, rows


def lmg_summary_rows(taus):
    rows = []
    for tau in sorted(taus):
        s = lmg.lmg_quench_summary(tau)
        rows.append([s.tau_q, s.n4, s.s_max, s.l_max])
    return LMG_SUMMARY_HEADER, rows
