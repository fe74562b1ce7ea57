"""Compactly supported functions with certified spectral decay.

The construction convolves box factors F_j: the j-th factor is the group
convolution of a normalized ball indicator of radius a*rho_j in z with a
normalized interval indicator of length tau_j^2 in t (their group
convolution is just the pointwise product, since the twist vanishes when
one factor sits at z = 0).  The widths come from a decay profile Theta:

    rho_j = c_n^2 e^2 Theta(j) / j + 2^{-j},      tau_j = 2^{-j}.

Summability of rho_j is the convergence of int_1^inf Theta(t)/t dt, so
profiles declared divergent are refused: no compactly supported function
can decay that fast spectrally.

Spectrally the chain G_N is the entrywise product of factor coefficients.
A z-factor's k-th coefficient depends only on s = lam rho^2 and obeys the
calibrated oscillatory envelope

    |coeff| <= min(1, c_n (rho sqrt((2k+n)|lam|))^{-n+1/2}),

with c_n frozen by the calibration run.  Taking N = adaptive_N factors at
spectral frequency nu = (2k+n)|lam| yields decay e^{-Theta(sqrt(nu)) sqrt(nu)}
up to a constant; verify_decay certifies this numerically by maximizing
the reweighted square q = chain^2 e^{+2 Theta(sqrt(nu)) sqrt(nu)} over a
(k, lam) window, in log space so nothing overflows.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import betainc, gammaln

from .errors import DomainError, ProfileClassError, QuadratureError
from .fixtures import load_fixture
from .grids import radial_rule
from .parallel import deterministic_map
from .transform import SpectralCoefficients, ball_normalizer, plancherel_norm, transform_at_lambda

__all__ = [
    "SequencePlan",
    "InghamChain",
    "plan_sequences",
    "factor_t_hat",
    "factor_coeff",
    "factor_coeff_table",
    "factor_coeff_envelope",
    "calibrate_cn",
    "calibration_grid",
    "factor_bound_check",
    "adaptive_N",
    "chain_coeff",
    "chain_coefficients",
    "build_chain",
    "verify_decay",
    "support_radius",
    "ball_volume",
    "sphere_surface",
    "ball_shift_symmdiff",
    "cauchy_gap",
    "TAU_GAUGE",
]

# Koranyi gauge of the point (0, tau^2/2): (t^2)^{1/4} = tau / sqrt(2)
TAU_GAUGE = 4.0 ** -0.25


@dataclass(frozen=True)
class SequencePlan:
    """Frozen factor widths for one construction run.

    a is the ball-radius constant making each z-factor a probability
    density; c = 4^{-1/4} converts an interval half-length tau^2/2 into its
    Koranyi gauge tau*c.
    """

    theta_name: str
    declared_class: str
    n: int
    J: int
    c_n: float
    rho: np.ndarray
    tau: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=float)
        tau = np.asarray(self.tau, dtype=float)
        if rho.shape != (self.J,) or tau.shape != (self.J,):
            raise DomainError("plan sequences must have length J")
        if np.any(rho <= 0) or np.any(tau <= 0):
            raise DomainError("factor widths must be strictly positive")
        if np.any(np.diff(rho) > 0) or np.any(np.diff(tau) > 0):
            raise DomainError("factor widths must be nonincreasing")
        rho.setflags(write=False)
        tau.setflags(write=False)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "tau", tau)

    @property
    def a(self):
        return ball_normalizer(self.n)

    @property
    def c(self):
        return TAU_GAUGE


@dataclass(frozen=True)
class InghamChain:
    """Spectral form of the partial chain G_N on a grid."""

    plan: SequencePlan
    n: int
    N: int
    coeffs: SpectralCoefficients


def _chain_constant(n, c_n=None, fixtures_dir=None):
    if c_n is not None:
        return float(c_n)
    fx = load_fixture("box_factor_envelope.json", fixtures_dir)
    key = str(n)
    if key not in fx["c_n"]:
        raise DomainError(
            f"no calibrated factor-bound constant for n={n}; rerun calibration")
    return float(fx["c_n"][key])


def plan_sequences(theta, n, J=64, c_n=None, fixtures_dir=None):
    """Factor widths rho_j, tau_j for j = 1..J under the profile theta.

    The additive 2^{-j} keeps rho strictly positive and summable even for
    the zero profile; the leading term meets the required lower bound
    rho_j >= c_n^2 e^2 Theta(j)/j by construction.
    """
    if theta.divergent:
        raise ProfileClassError(
            f"profile {theta.name!r} is declared divergent: no compactly "
            "supported function can have this spectral decay")
    if J < 1:
        raise DomainError("need at least one factor")
    cn = _chain_constant(n, c_n, fixtures_dir)
    j = np.arange(1, J + 1, dtype=float)
    rho = cn ** 2 * np.e ** 2 * theta(j) / j + 2.0 ** -j
    tau = 2.0 ** -j
    return SequencePlan(theta_name=theta.name, declared_class=theta.declared_class,
                        n=n, J=J, c_n=cn, rho=rho, tau=tau)


def _sinc(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    xs = np.where(small, 1.0, x)
    series = 1.0 - x ** 2 / 6.0 + x ** 4 / 120.0
    return np.where(small, series, np.sin(xs) / xs)


def factor_t_hat(j, lam, plan):
    """Transform of the j-th interval factor: sinc(tau_j^2 lam / 2), the
    removable singularity handled by the quartic series below |arg| = 1e-4."""
    if not (1 <= j <= plan.J):
        raise DomainError(f"factor index {j} outside 1..{plan.J}")
    return _sinc(0.5 * plan.tau[j - 1] ** 2 * np.asarray(lam, dtype=float))


def factor_coeff_table(s, k_max, n, nodes_per_panel=64):
    """Coefficients 0..k_max of a unit-width z-factor as a function of the
    scale-invariant argument s = lam rho^2 > 0.

    Substituting r = rho v shows the rho-factor coefficient at lam equals
    the unit-factor coefficient at s, so one table covers every factor.
    """
    if s <= 0:
        raise DomainError("need s > 0")
    a = ball_normalizer(n)
    x, w = radial_rule(s, k_max, n, a, nodes_per_panel)
    return transform_at_lambda(np.ones_like(x), x, w, s, k_max, n)


def factor_coeff(j, k, lam, plan, nodes_per_panel=64):
    """k-th coefficient of the j-th z-factor at lam (1-based j)."""
    if not (1 <= j <= plan.J):
        raise DomainError(f"factor index {j} outside 1..{plan.J}")
    if lam == 0:
        raise DomainError("lam must be nonzero")
    s = abs(lam) * plan.rho[j - 1] ** 2
    return float(factor_coeff_table(s, int(k), plan.n, nodes_per_panel)[int(k)])


def factor_coeff_envelope(k, lam, rho, n, c_n):
    """Oscillatory bound min(1, c_n (rho sqrt((2k+n)|lam|))^{-n+1/2}) on a
    z-factor coefficient, with the trivial unit bound taking over where the
    power blows up."""
    x = rho * np.sqrt((2.0 * np.asarray(k, dtype=float) + n) * np.abs(lam))
    with np.errstate(divide="ignore"):
        return np.minimum(1.0, c_n * np.where(x > 0, x, np.inf) ** (0.5 - n))


def calibration_grid(n, k_max=200, s_lo=1e-9, s_hi=1e3, s_nodes=120):
    """Shared (k, s) sampling for calibrating and validating the factor
    envelope: all degrees up to k_max, s = lam rho^2 log-spaced across the
    lam in [1e-3, 1e3], rho in [1e-3, 1] product range."""
    k = np.arange(k_max + 1)
    s = np.geomspace(s_lo, s_hi, s_nodes)
    return k, s


def calibrate_cn(n, k_max=200, s_nodes=120, nodes_per_panel=48, threads=1,
                 safety=1.1, refine_check=True):
    """Envelope constant: safety * sup over the calibration grid of
    |coeff(k, s)| ((2k+n) s)^{(2n-1)/4}.

    With refine_check the sup is recomputed on a doubled grid (twice the s
    nodes, twice the panel order) and the two sups must agree within 5%, so
    a frozen constant can never be a quadrature artifact.
    """

    def run(nodes, npp):
        k, s = calibration_grid(n, k_max=k_max, s_nodes=nodes)

        def column(si):
            vals = factor_coeff_table(si, k_max, n, npp)
            return np.max(np.abs(vals) * ((2.0 * k + n) * si) ** ((2.0 * n - 1.0) / 4.0))

        return max(deterministic_map(column, list(s), threads=threads))

    sup = run(s_nodes, nodes_per_panel)
    if refine_check:
        fine = run(2 * s_nodes, 2 * nodes_per_panel)
        rel = abs(fine - sup) / max(sup, fine)
        if rel > 0.05:
            raise QuadratureError(
                "factor-bound calibration sup moved under grid refinement",
                disagreement=float(rel))
        sup = max(sup, fine)
    return float(safety * sup)


def factor_bound_check(n, c_n=None, k_max=200, s_nodes=120, nodes_per_panel=48,
                       thin=1, threads=1, fixtures_dir=None):
    """Validate |coeff(k, s)| <= min(1, c_n ((2k+n) s)^{-(2n-1)/4}) over the
    calibration grid, with the frozen c_n by default.

    thin keeps every thin-th s column, trading coverage for speed; the
    certified outcome is zero violations at thin = 1.
    """
    if c_n is None:
        c_n = float(load_fixture("box_factor_envelope.json",
                                 fixtures_dir)["c_n"][str(n)])
    k, s = calibration_grid(n, k_max=k_max, s_nodes=s_nodes)
    s = s[::max(int(thin), 1)]

    def column(si):
        vals = np.abs(factor_coeff_table(si, k_max, n, nodes_per_panel))
        x = np.sqrt((2.0 * k + n) * si)
        env = np.minimum(1.0, c_n * x ** (0.5 - n))
        return float(np.max(vals / env)), int(np.sum(vals > env))

    res = deterministic_map(column, list(s), threads=threads)
    return {
        "n": n,
        "c_n": float(c_n),
        "k_max": k_max,
        "s_columns": int(s.size),
        "points": int((k_max + 1) * s.size),
        "violations": int(sum(r[1] for r in res)),
        "max_ratio": max(r[0] for r in res),
    }


def adaptive_N(theta, k, lam, n):
    """Number of chain factors used at the cell (k, lam):
    floor(Theta(sqrt(nu)) sqrt(nu)) with nu = (2k+n)|lam|, clamped to
    floor(sqrt(nu)) so that every factor index stays below sqrt(nu) even
    for profiles with Theta(0) > 1."""
    lam = np.asarray(lam, dtype=float)
    if np.any(lam == 0):
        raise DomainError("lam must be nonzero")
    nu = (2.0 * np.asarray(k, dtype=float) + n) * np.abs(lam)
    root = np.sqrt(nu)
    raw = np.floor(theta(root) * root)
    return np.minimum(raw, np.floor(root)).astype(int)


def _chain_log_columns(plan, lam, k_max, n_cap, nodes_per_panel):
    """Signed log cumulative products for one lambda column.

    Returns (signs, logmags) of shape (n_cap+1, k_max+1): row N holds the
    chain coefficient of G_N.  Row 0 is the empty product 1.  The j-loop
    runs serially in increasing j; this is the determinism contract.
    """
    signs = np.ones((n_cap + 1, k_max + 1))
    logs = np.zeros((n_cap + 1, k_max + 1))
    for j in range(1, n_cap + 1):
        s = abs(lam) * plan.rho[j - 1] ** 2
        coeffs = factor_coeff_table(s, k_max, plan.n, nodes_per_panel)
        tval = float(_sinc(0.5 * plan.tau[j - 1] ** 2 * lam))
        term = coeffs * tval
        with np.errstate(divide="ignore"):
            logs[j] = logs[j - 1] + np.log(np.abs(term))
        signs[j] = signs[j - 1] * np.sign(term)
    return signs, logs


def chain_coeff(plan, N, k, lam, nodes_per_panel=64):
    """Chain coefficient of G_N at one cell: the signed product of the
    first N factor coefficients and interval transforms.  N = 0 is the
    empty product 1."""
    if N < 0 or N > plan.J:
        raise DomainError(f"chain length {N} outside 0..{plan.J}")
    if N == 0:
        return 1.0
    if lam == 0:
        raise DomainError("lam must be nonzero")
    signs, logs = _chain_log_columns(plan, lam, int(k), N, nodes_per_panel)
    return float(signs[N, int(k)] * np.exp(logs[N, int(k)]))


def chain_coefficients(plan, N, grid, threads=1):
    """SpectralCoefficients of G_N on the grid (even in t, so symmetric)."""
    if N < 0 or N > plan.J:
        raise DomainError(f"chain length {N} outside 0..{plan.J}")

    def column(lam):
        signs, logs = _chain_log_columns(plan, lam, grid.k_max, N,
                                         grid.nodes_per_panel)
        return signs[N] * np.exp(logs[N])

    cols = deterministic_map(column, list(grid.lam), threads=threads)
    vals = np.stack(cols, axis=1)
    return SpectralCoefficients(n=plan.n, grid=grid, values=vals, symmetric=True)


def build_chain(plan, N, grid, threads=1):
    return InghamChain(plan=plan, n=plan.n, N=N,
                       coeffs=chain_coefficients(plan, N, grid, threads=threads))


def _max_log_q(plan, theta, k_max, lam_nodes, nodes_per_panel, threads):
    k = np.arange(k_max + 1, dtype=float)

    def column(lam):
        nu = (2.0 * k + plan.n) * abs(lam)
        root = np.sqrt(nu)
        N = np.minimum(np.floor(theta(root) * root), np.floor(root)).astype(int)
        # a plan only has J factors; using fewer than adaptive_N asks for
        # weakens the certified decay, which is conservative, not wrong
        N = np.minimum(N, plan.J)
        n_cap = int(np.max(N))
        _, logs = _chain_log_columns(plan, lam, k_max, n_cap, nodes_per_panel)
        log_q = 2.0 * logs[N, np.arange(k_max + 1)] + 2.0 * theta(root) * root
        i = int(np.argmax(log_q))
        return float(log_q[i]), i

    results = deterministic_map(column, list(lam_nodes), threads=threads)
    best = max(range(len(results)), key=lambda i: results[i][0])
    return results[best][0], results[best][1], float(lam_nodes[best])


def verify_decay(plan, theta, k_max=64, lambda_min=1e-2, lambda_max=1e2,
                 lambda_nodes=192, nodes_per_panel=64, threads=1,
                 stability_check=True):
    """Certify the decay of the adaptive chain over a (k, lam) window.

    Maximizes q(k, lam) = chain_coeff(plan, adaptive_N, k, lam)^2 *
    e^{+2 Theta(sqrt(nu)) sqrt(nu)} in log space.  The fitted constant is
    C = max q; pass requires a finite maximum that moves by at most 0.1 in
    log when k_max doubles.  Report schema is fixed; byte determinism
    across thread counts is part of the contract.
    """
    if theta.divergent:
        raise ProfileClassError(
            f"profile {theta.name!r} is declared divergent: nothing to certify")
    lam_nodes = np.geomspace(lambda_min, lambda_max, lambda_nodes)
    max_log_q, k_star, lam_star = _max_log_q(plan, theta, k_max, lam_nodes,
                                             nodes_per_panel, threads)
    stable = True
    if stability_check:
        max2, _, _ = _max_log_q(plan, theta, 2 * k_max, lam_nodes,
                                nodes_per_panel, threads)
        stable = bool(abs(max2 - max_log_q) <= 0.1)
    ok = bool(np.isfinite(max_log_q) and stable)
    return {
        "theta": plan.theta_name,
        "n": plan.n,
        "k_max": k_max,
        "lambda_range": [float(lambda_min), float(lambda_max)],
        "max_log_q": float(max_log_q),
        "argmax": {"k": int(k_star), "lambda": float(lam_star)},
        "C": float(np.exp(max_log_q)),
        "pass": ok,
    }


def support_radius(plan, N=None):
    """Koranyi-gauge radius containing supp G_N: triangle inequality over
    the a*rho_j ball factors and tau_j/sqrt(2) interval factors.  N = None
    uses the full plan."""
    if N is None:
        N = plan.J
    if not (1 <= N <= plan.J):
        raise DomainError(f"need 1 <= N <= J = {plan.J}")
    return float(plan.a * np.sum(plan.rho[:N]) + TAU_GAUGE * np.sum(plan.tau[:N]))


def ball_volume(R, dim):
    return float(np.exp(0.5 * dim * np.log(np.pi) - gammaln(0.5 * dim + 1)
                        + dim * np.log(R)))


def sphere_surface(dim, R):
    """Surface measure of the radius-R sphere bounding a ball in R^dim."""
    return float(np.exp(np.log(2.0) + 0.5 * dim * np.log(np.pi)
                        - gammaln(0.5 * dim) + (dim - 1) * np.log(R)))


def ball_shift_symmdiff(dim, R, xi_norm):
    """Volume of B(0,R) symmetric-difference B(xi,R) in R^dim, |xi| given.

    Twice the ball volume minus twice the lens; the lens is two spherical
    caps of height R - |xi|/2, via the regularized incomplete beta.
    """
    if dim < 2 or dim % 2 != 0:
        raise DomainError("dim must be an even integer >= 2")
    if R <= 0 or xi_norm < 0:
        raise DomainError("need R > 0 and xi_norm >= 0")
    V = ball_volume(R, dim)
    if xi_norm >= 2.0 * R:
        return 2.0 * V
    if xi_norm == 0.0:
        return 0.0
    h = R - 0.5 * xi_norm
    x = (2.0 * R * h - h * h) / R ** 2
    cap = 0.5 * V * betainc(0.5 * (dim + 1), 0.5, x)
    return 2.0 * V - 4.0 * cap


def cauchy_gap(plan, k, grid, c3=None, fixtures_dir=None, threads=1):
    """(bound, measured) for the step G_k -> G_{k+1} of the chain.

    bound = tau_{k+1}^2 + c3 rho_{k+1} with the calibrated c3; measured is
    the Plancherel norm of the coefficient difference on the grid.  The
    calibrated envelope constant C (measured <= C * bound) lives in the
    chain-gap fixture next to c3.
    """
    if not (1 <= k < plan.J):
        raise DomainError(f"need 1 <= k < J = {plan.J}")
    if c3 is None:
        c3 = float(load_fixture("chain_gap_constants.json", fixtures_dir)["c3"])
    bound = float(plan.tau[k] ** 2 + c3 * plan.rho[k])

    def column(lam):
        signs, logs = _chain_log_columns(plan, lam, grid.k_max, k + 1,
                                         grid.nodes_per_panel)
        return (signs[k + 1] * np.exp(logs[k + 1])
                - signs[k] * np.exp(logs[k]))

    cols = deterministic_map(column, list(grid.lam), threads=threads)
    diff = SpectralCoefficients(n=plan.n, grid=grid,
                                values=np.stack(cols, axis=1), symmetric=True)
    return bound, float(plancherel_norm(diff))
