"""Signed log-domain arithmetic for underflow-safe products.

Quantities are carried as (sign, log|x|) pairs with sign in {-1, 0, 1} and
log|x| = -inf when x = 0.  Long products of factors with modulus <= 1
underflow in linear double precision past a few dozen terms; accumulating
log-magnitudes keeps every intermediate finite.
"""

import numpy as np

__all__ = ["signed_log", "signed_log_product", "signed_exp"]


def signed_log(x):
    """Decompose x (scalar or array) into (sign, log|x|)."""
    x = np.asarray(x, dtype=float)
    sign = np.sign(x)
    with np.errstate(divide="ignore"):
        logmag = np.where(sign != 0, np.log(np.abs(np.where(sign != 0, x, 1.0))), -np.inf)
    return sign, logmag


def signed_log_product(values, axis=0):
    """Product of `values` along `axis` as a (sign, log|prod|) pair.

    A zero factor makes the product sign 0 and log magnitude -inf.
    """
    sign, logmag = signed_log(values)
    total_sign = np.prod(sign, axis=axis)
    total_log = np.sum(logmag, axis=axis)
    total_log = np.where(total_sign == 0, -np.inf, total_log)
    return total_sign, total_log


def signed_exp(sign, logmag):
    """Map (sign, log|x|) back to x, underflowing gracefully to 0."""
    with np.errstate(over="ignore"):
        mag = np.exp(logmag)
    return sign * mag
