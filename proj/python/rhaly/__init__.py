"""Generalized Cesaro operators between weighted Dirichlet spaces."""

import json as _json

from ._core import (
    EtaSeq,
    InvalidArgument,
    NonMonotoneError,
    NumericalError,
    apply,
    classical_cesaro,
    dense_section_norm,
    explicit_eta,
    g_b_alpha,
    h_b,
    norm_sq,
    power_log_family,
    residual_norm,
    section_norm,
    weight,
)
from . import _core

__version__ = "0.1.0"


def measure_moments(measure, max_index):
    """eta_n = int t^n dmu(t) for a measure given as a dict
    ({"atoms": [{"t": .., "mass": ..}], "density": {"gamma": .., "scale": ..}})."""
    return _core._measure_moments(_json.dumps(measure), max_index)


def criterion(eta, alpha, beta, min_exp=4, max_exp=16, form="tail"):
    return _json.loads(_core._criterion(eta, alpha, beta, min_exp, max_exp, form))


def carleson_statistic(measure, s, levels=30):
    return _json.loads(_core._carleson(_json.dumps(measure), s, levels))


def lower_bound(eta, alpha, beta, f):
    return _json.loads(_core._lower_bound(eta, alpha, beta, list(f)))


def schur_log_kernel(n):
    return _json.loads(_core._schur_log_kernel(n))


def bennett_uvw(eta, alpha, beta, abs_a, min_exp=4, max_exp=16):
    return _json.loads(_core._bennett_uvw(eta, alpha, beta, list(abs_a), min_exp, max_exp))


def run(config):
    """Run one experiment config (dict). Returns (exit_code, summary, tables)."""
    code, summary, tables = _core._run(_json.dumps(config))
    return code, _json.loads(summary), dict(tables)


def sweep(configs, out_dir="", jobs=1):
    """Returns (exit_code, merged CSV text, error message)."""
    return _core._sweep(_json.dumps(configs), str(out_dir), jobs)
