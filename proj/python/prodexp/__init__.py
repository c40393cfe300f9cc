"""Product code expansion and testability.

Thin wrapper over the compiled ``_core`` module; exact rationals come back as
``fractions.Fraction``.
"""

from fractions import Fraction

from . import _core
from ._core import LimitExceeded, Undefined, describe

__all__ = [
    "LimitExceeded",
    "Undefined",
    "describe",
    "certify_counterexample",
    "verify_certificate",
    "rho_exact",
    "rho_upper_sampled",
    "rho_r_exact",
    "rho_r_sampled",
    "rho_a_exact",
    "check_lemmas",
    "ps_corollary",
    "paper_constants",
    "alpha",
    "run",
]

_FRACTION_KEYS = {"bound", "certified_upper", "heuristic", "upper", "lower_estimate",
                  "lhs", "rhs", "max_delta", "worst_ratio", "alpha_r", "alpha_a"}


def _frac(value):
    return None if value is None else Fraction(value)


def _convert(d):
    return {k: (_frac(v) if k in _FRACTION_KEYS else v) for k, v in d.items()}


def _arg(value):
    return str(Fraction(value))


def certify_counterexample(t):
    return _convert(_core.certify_counterexample(t))


def verify_certificate(text):
    return _convert(_core.verify_certificate(text))


def rho_exact(instance, m, t=1, rate="1/3"):
    return Fraction(_core.rho_exact(instance, m, t, _arg(rate)))


def rho_upper_sampled(instance, m, samples, seed, t=1, rate="1/3", jobs=1):
    return _convert(_core.rho_upper_sampled(instance, m, samples, seed, t, _arg(rate), jobs))


def rho_r_exact(instance, m, k=1, t=1, rate="1/3", jobs=1):
    return Fraction(_core.rho_r_exact(instance, m, k, t, _arg(rate), jobs))


def rho_r_sampled(instance, m, k, random_words, adversarial, seed, t=1, rate="1/3", jobs=1):
    return _convert(_core.rho_r_sampled(instance, m, k, random_words, adversarial, seed, t, _arg(rate), jobs))


def rho_a_exact(instance, m, t=1, rate="1/3", jobs=1):
    return Fraction(_core.rho_a_exact(instance, m, t, _arg(rate), jobs))


def check_lemmas(instance, m, t=1, rate="1/3", jobs=1):
    return [_convert(r) for r in _core.check_lemmas(instance, m, t, _arg(rate), jobs)]


def ps_corollary(t, trials, seed, jobs=1):
    return _convert(_core.ps_corollary(t, trials, seed, jobs))


def paper_constants(m, rho_r_T21=Fraction(1, 72)):
    return _convert(_core.paper_constants(m, _arg(rho_r_T21)))


def alpha(m, rho):
    return Fraction(_core.alpha(m, _arg(rho)))


def run(args):
    """Runs the command-line harness in-process; returns (status, stdout, stderr)."""
    return _core.run([str(a) for a in args])
