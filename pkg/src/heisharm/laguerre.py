"""Stable evaluation of Laguerre polynomials and Laguerre functions.

Three families appear throughout the radial calculus on H^n:

* the Laguerre polynomials ``L_k^delta(r)`` with the three-term recurrence
  ``(k+1) L_{k+1} = (2k+1+delta-r) L_k - (k+delta) L_{k-1}``;

* the standard Laguerre functions

  ``std_L_k^delta(r) = (k! / Gamma(k+delta+1))^(1/2) L_k^delta(r)
  e^(-r/2) r^(delta/2)``,

  which form an orthonormal system in L^2((0, inf), dr);

* the scaled Laguerre functions
  ``phi_{k,lam}^{n-1}(r) = L_k^{n-1}(|lam| r^2 / 2) e^(-|lam| r^2 / 4)``
  entering the spectral decomposition of radial functions, together with
  their normalized variant ``C_{k,n} phi`` where
  ``C_{k,n} = (k!(n-1)!/(k+n-1)!)^(1/2)``.

Raw polynomial values overflow near k = 150, so all function evaluation
runs a recurrence carried directly on the orthonormal family, whose values
stay bounded; the square-root normalization ratios are folded into the
recurrence coefficients.  Gamma ratios are always taken through log-gamma.

The module also provides the four-region piecewise envelope that dominates
``C_{k,n} |phi_{k,lam}^{n-1}(r)|``: with ``nu = 2(2k+n)`` and the scaled
argument ``w = |lam| r^2 / 2``, the radial axis splits at
``sqrt(2/(nu |lam|))``, ``sqrt(nu/|lam|)`` and ``sqrt(3 nu/|lam|)`` into a
flat core, an oscillatory stretch with ``(nu w)^(-1/4)`` decay, an Airy-type
turning-point window, and an exponentially decaying far zone.  The two free
constants of the envelope are calibrated once and frozen in a fixture.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, roots_genlaguerre

from .errors import DomainError

__all__ = [
    "laguerre_poly",
    "std_laguerre_fn",
    "std_laguerre_table",
    "laguerre_fn",
    "normalized_laguerre_fn",
    "normalized_laguerre_table",
    "laguerre_norm_constant",
    "nu",
    "breakpoints",
    "EnvelopeRegion",
    "bound_envelope",
    "envelope_values",
    "orthonormality_defect",
]


def _check_params(k, delta):
    if k < 0 or k != int(k):
        raise DomainError(f"degree k must be a nonnegative integer, got {k}")
    if delta <= -1:
        raise DomainError(f"Laguerre type must satisfy delta > -1, got {delta}")


def laguerre_poly(k, delta, r):
    """Laguerre polynomial L_k^delta(r) by the three-term recurrence.

    Intended for small and moderate k; the value itself grows factorially
    in k for fixed r, which is why the function families below never go
    through this routine for large degrees.

    Parameters
    ----------
    k : int
        Degree, k >= 0.
    delta : float
        Type parameter, delta > -1.
    r : float or ndarray
        Evaluation points, r >= 0.
    """
    _check_params(k, delta)
    r = np.asarray(r, dtype=float)
    p_prev = np.ones_like(r)
    if k == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p = 1.0 + delta - r
    for j in range(1, k):
        p, p_prev = ((2 * j + 1 + delta - r) * p - (j + delta) * p_prev) / (j + 1), p
    return p if p.ndim else float(p)


def _orthonormal_table(kmax, delta, u):
    """Values c_k L_k^delta(u) e^(-u/2) for all k <= kmax.

    c_k = (Gamma(k+1)/Gamma(k+delta+1))^(1/2) makes the rows bounded, so the
    forward recurrence is stable far past the degree where raw polynomials
    overflow.  Rows times u^(delta/2) are the orthonormal standard Laguerre
    functions.
    """
    u = np.asarray(u, dtype=float)
    out = np.zeros((kmax + 1,) + u.shape)
    base = np.exp(-0.5 * u - 0.5 * gammaln(delta + 1.0))
    out[0] = base
    if kmax >= 1:
        out[1] = (1.0 + delta - u) * base / np.sqrt(1.0 + delta)
    for k in range(1, kmax):
        a = (2.0 * k + 1.0 + delta - u) / np.sqrt((k + 1.0) * (k + 1.0 + delta))
        b = np.sqrt(k * (k + delta) / ((k + 1.0) * (k + 1.0 + delta)))
        out[k + 1] = a * out[k] - b * out[k - 1]
    return out


def std_laguerre_table(kmax, delta, r):
    """Orthonormal standard Laguerre functions for all degrees k <= kmax.

    Returns an array of shape (kmax+1,) + r.shape; row k holds
    std_L_k^delta at the points r.
    """
    _check_params(kmax, delta)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("standard Laguerre functions are defined for r >= 0")
    tab = _orthonormal_table(kmax, delta, r)
    if delta != 0:
        with np.errstate(divide="ignore", invalid="ignore"):
            halfpow = np.where(r > 0, np.power(r, 0.5 * delta), 0.0)
        tab = tab * halfpow
    return tab


def std_laguerre_fn(k, delta, r):
    """Standard Laguerre function std_L_k^delta(r), orthonormal on (0, inf)."""
    scalar = np.isscalar(r) or np.asarray(r).ndim == 0
    tab = std_laguerre_table(k, delta, np.atleast_1d(np.asarray(r, dtype=float)))
    return float(tab[k][0]) if scalar else tab[k]


def orthonormality_defect(kmax, delta, nodes=None):
    """Worst deviation of the Gram matrix of std_L_0..std_L_kmax from the
    identity, measured with a Gauss rule of type delta.

    Every pairwise product is a degree <= 2 kmax polynomial against the
    weight x^delta e^{-x}, so a rule with kmax + 20 nodes integrates the
    whole Gram matrix exactly; any defect is pure rounding.  The node
    count is capped by weight underflow near degree 140.
    """
    _check_params(kmax, delta)
    nodes = int(nodes or (kmax + 20))
    x, w = roots_genlaguerre(nodes, delta)
    if np.any(w <= 0):
        raise DomainError("Gauss-Laguerre weights underflowed; lower the degree")
    tab = _orthonormal_table(kmax, delta, x)
    # w e^x stays polynomial-sized; the exp of the summed logs avoids
    # overflowing e^x on its own for large nodes
    gram = (tab * np.exp(np.log(w) + x)) @ tab.T
    return float(np.max(np.abs(gram - np.eye(kmax + 1))))


def laguerre_norm_constant(k, n):
    """C_{k,n} = (k!(n-1)!/(k+n-1)!)^(1/2) via log-gamma."""
    _check_params(k, n - 1)
    return float(np.exp(0.5 * (gammaln(k + 1.0) + gammaln(float(n)) - gammaln(k + float(n)))))


def normalized_laguerre_table(kmax, lam, n, r):
    """C_{k,n} phi_{k,lam}^{n-1}(r) for all k <= kmax, vectorized in r.

    The workhorse of every radial quadrature: one recurrence sweep yields
    the whole column of degrees at the given radii.
    """
    if lam == 0:
        raise DomainError("scaling parameter lambda must be nonzero")
    if n < 1 or n != int(n):
        raise DomainError(f"dimension n must be a positive integer, got {n}")
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("radii must be nonnegative")
    u = 0.5 * abs(lam) * r * r
    # C_{k,n} phi_k = sqrt(Gamma(n)) * c_k L_k^{n-1}(u) e^{-u/2}
    return np.exp(0.5 * gammaln(float(n))) * _orthonormal_table(kmax, n - 1.0, u)


def normalized_laguerre_fn(k, lam, n, r):
    """C_{k,n} phi_{k,lam}^{n-1}(r); bounded by 1/C_{k,n} in modulus."""
    scalar = np.isscalar(r) or np.asarray(r).ndim == 0
    tab = normalized_laguerre_table(k, lam, n, np.atleast_1d(np.asarray(r, dtype=float)))
    return float(tab[k][0]) if scalar else tab[k]


def laguerre_fn(k, lam, n, r):
    """Scaled Laguerre function phi_{k,lam}^{n-1}(r).

    Evaluated through the orthonormal recurrence (never the raw polynomial),
    then divided by C_{k,n}; phi(0) = (k+n-1)!/(k!(n-1)!).
    """
    return normalized_laguerre_fn(k, lam, n, r) / laguerre_norm_constant(k, n)


# ---------------------------------------------------------------------------
# Piecewise envelope


def nu(k, n):
    """The spectral scale nu(k) = 2(2k+n)."""
    return 2.0 * (2 * np.asarray(k) + n)


def breakpoints(k, lam, n):
    """Region boundaries (sqrt(2/(nu|lam|)), sqrt(nu/|lam|), sqrt(3 nu/|lam|))."""
    if lam == 0:
        raise DomainError("lambda must be nonzero")
    v = nu(k, n)
    al = abs(lam)
    return (np.sqrt(2.0 / (v * al)), np.sqrt(v / al), np.sqrt(3.0 * v / al))


@dataclass(frozen=True)
class EnvelopeRegion:
    """Which of the four envelope regimes a radius falls into."""

    tag: str
    breakpoints: tuple

    def __post_init__(self):
        b1, b2, b3 = self.breakpoints
        if not (b1 < b2 < b3):
            raise DomainError("envelope breakpoints must be strictly increasing")


def envelope_values(k, lam, n, r, c_fit, gamma_fit):
    """Envelope for C_{k,n}|phi_{k,lam}^{n-1}| at the radii r (vectorized).

    The four cases, in the scaled variable w = |lam| r^2 / 2 and with
    s = r sqrt(|lam|):

    ==============  =============================================
    w <= 1/nu       c s^(-(n-1)) (nu w)^((n-1)/2)
    1/nu < w<=nu/2  c s^(-(n-1)) (nu w)^(-1/4)
    nu/2 < w<=3nu/2 c s^(-(n-1)) nu^(-1/4)(nu^(1/3)+|nu-w|)^(-1/4)
    w > 3nu/2       c s^(-(n-1)) e^(-gamma w)
    ==============  =============================================

    r = 0 is assigned the finite core limit c (nu/2)^((n-1)/2).
    """
    if c_fit <= 0 or gamma_fit <= 0:
        raise DomainError("envelope constants must be positive")
    if lam == 0:
        raise DomainError("lambda must be nonzero")
    r = np.asarray(r, dtype=float)
    al = abs(lam)
    v = nu(k, n)
    w = 0.5 * al * r * r
    s = r * np.sqrt(al)
    with np.errstate(divide="ignore", invalid="ignore"):
        spow = np.where(r > 0, s ** (-(n - 1.0)), 1.0)
        # at r = 0 the (n-1)-powers cancel, leaving the finite limit (nu/2)^((n-1)/2)
        core = np.where(r > 0, (v * w) ** (0.5 * (n - 1.0)), (0.5 * v) ** (0.5 * (n - 1.0)))
        osc = np.where(w > 0, (v * w) ** -0.25, np.inf)
        turn = v ** -0.25 * (v ** (1.0 / 3.0) + np.abs(v - w)) ** -0.25
        expo = np.exp(-gamma_fit * w)
    case = np.where(
        w <= 1.0 / v,
        core,
        np.where(w <= 0.5 * v, osc, np.where(w <= 1.5 * v, turn, expo)),
    )
    return c_fit * spow * case


def bound_envelope(k, lam, n, r, c_fit, gamma_fit):
    """Classify the radius r and return (EnvelopeRegion, envelope value)."""
    b = breakpoints(k, lam, n)
    region = EnvelopeRegion(
        tag=("core" if r <= b[0] else "oscillatory" if r <= b[1] else "turning" if r <= b[2] else "exponential"),
        breakpoints=b,
    )
    value = float(envelope_values(k, lam, n, np.atleast_1d(float(r)), c_fit, gamma_fit)[0])
    return region, value
