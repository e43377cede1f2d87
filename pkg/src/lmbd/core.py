"""Log-domain engine for the multiplicative binomial law of a sum of
exchangeable dependent Bernoulli variables.

The distribution of the success count Y over n trials is

    P(Y = y) = C(n, y) psi^y (1-psi)^(n-y) omega^((n-y) y) / K_n

with K_n the normalizing sum.  ``psi`` is the marginal success probability
the trials would have if they were independent; ``omega`` is the
association parameter (omega < 1 positive association, omega > 1 negative,
omega = 1 reduces the law to Binomial(n, psi)).

Every quantity here is computed in the log domain: the weight
omega^((n-y) y) has a log magnitude of up to n^2/4 * |ln omega|, which
overflows double precision long before n reaches interesting sizes.
The convention 0 * log 0 = 0 keeps psi in {0, 1} exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import gammaln, logsumexp, xlogy

from .constants import ENUMERATION_MAX_N

__all__ = [
    "ModelParams",
    "PmfTable",
    "MomentSummary",
    "JointOutcome",
    "log_k",
    "tau",
    "pmf",
    "cdf",
    "moments",
    "marginal_pi",
    "joint_log_prob",
    "joint_outcome",
    "conditional_cpr",
    "sample",
    "enumerate_pmf_oracle",
]


def _validate(n: int, psi: float, omega: float) -> None:
    if n < 1:
        raise ValueError(f"trial count must be >= 1, got {n}")
    if not 0.0 <= psi <= 1.0:
        raise ValueError(f"psi must lie in [0, 1], got {psi}")
    if not omega > 0.0:
        raise ValueError(f"omega must be > 0, got {omega}")


@dataclass(frozen=True)
class ModelParams:
    """The (n, psi, omega) triple defining one distribution instance."""

    n: int
    psi: float
    omega: float

    def __post_init__(self) -> None:
        _validate(self.n, self.psi, self.omega)


@dataclass(frozen=True)
class PmfTable:
    """Log-probabilities over the support {0..n}.

    ``log_normalizer`` is the log K_n value used before the final
    renormalization pass.
    """

    params: ModelParams
    log_prob: np.ndarray
    log_normalizer: float

    def probs(self) -> np.ndarray:
        return np.exp(self.log_prob)


@dataclass(frozen=True)
class MomentSummary:
    """tau ratios and the induced mean/variance/marginal.

    mean = n psi tau1, variance = n psi eta with
    eta = tau1 - psi (n tau1^2 - (n-1) tau2), and pi = psi tau1 is the
    per-trial marginal success probability.  ``tau2`` is NaN for n = 1
    (it does not exist there and carries coefficient zero).
    """

    tau1: float
    tau2: float
    eta: float
    mean: float
    variance: float
    pi: float


@dataclass(frozen=True)
class JointOutcome:
    """One ordered binary configuration with its log joint probability."""

    bits: tuple[int, ...]
    log_prob: float


def _log_binom(m, i):
    return gammaln(m + 1) - gammaln(i + 1) - gammaln(m - i + 1)


def log_k(n: int, a: int, psi: float, omega: float) -> float:
    """Log of the partial normalizing sum K_{n-a}.

    K_{n-a} = sum_{i=0}^{n-a} C(n-a, i) psi^i (1-psi)^(n-a-i)
              omega^((n-a-i)(i+a)),
    evaluated by log-sum-exp over per-term logs.
    """
    _validate(n, psi, omega)
    if not 0 <= a <= n:
        raise ValueError(f"a must lie in [0, n={n}], got {a}")
    m = n - a
    i = np.arange(m + 1)
    terms = (
        _log_binom(m, i)
        + xlogy(i, psi)
        + xlogy(m - i, 1.0 - psi)
        + (m - i) * (i + a) * math.log(omega)
    )
    return float(logsumexp(terms))


def tau(r: int, params: ModelParams) -> float:
    """The ratio tau_r = K_{n-r} / K_n, r in [1, n]."""
    if not 1 <= r <= params.n:
        raise ValueError(f"r must lie in [1, n={params.n}], got {r}")
    num = log_k(params.n, r, params.psi, params.omega)
    den = log_k(params.n, 0, params.psi, params.omega)
    return math.exp(num - den)


def _point_mass_table(params: ModelParams, at: int) -> PmfTable:
    logp = np.full(params.n + 1, -np.inf)
    logp[at] = 0.0
    return PmfTable(params=params, log_prob=logp, log_normalizer=0.0)


def pmf(params: ModelParams) -> PmfTable:
    """Full log-pmf table over {0..n}, renormalized so the exponentiated
    entries sum to 1.

    psi in {0, 1} short-circuits to an exact point mass at 0 or n.
    """
    n, psi, omega = params.n, params.psi, params.omega
    if psi == 0.0:
        return _point_mass_table(params, 0)
    if psi == 1.0:
        return _point_mass_table(params, n)
    y = np.arange(n + 1)
    logw = (
        _log_binom(n, y)
        + xlogy(y, psi)
        + xlogy(n - y, 1.0 - psi)
        + (n - y) * y * math.log(omega)
    )
    log_norm = float(logsumexp(logw))
    logp = logw - log_norm
    # second renormalization pass removes the last few ulp of drift
    logp = logp - logsumexp(logp)
    return PmfTable(params=params, log_prob=logp, log_normalizer=log_norm)


def cdf(params: ModelParams, y: int) -> float:
    """P(Y <= y), accumulated by log-sum-exp over the table prefix."""
    if not 0 <= y <= params.n:
        raise IndexError(f"y must lie in [0, n={params.n}], got {y}")
    table = pmf(params)
    return min(1.0, float(np.exp(logsumexp(table.log_prob[: y + 1]))))


# Largest n for which the moment formulas are evaluated in exact rational
# arithmetic.  The eta combination cancels O(n^2) terms down to the
# variance, which can be near zero at concentrated parameters; float
# evaluation then loses most relative digits, while Fraction arithmetic
# (floats are exact rationals, and K is a polynomial in psi and omega)
# keeps the stated 1e-10 relative accuracy.
_EXACT_MOMENT_MAX_N = 64


def _exact_k(n: int, a: int, psi: Fraction, omega: Fraction) -> Fraction:
    m = n - a
    return sum(
        math.comb(m, i) * psi ** i * (1 - psi) ** (m - i)
        * omega ** ((m - i) * (i + a))
        for i in range(m + 1)
    )


def moments(params: ModelParams) -> MomentSummary:
    """Closed-form mean/variance through the tau ratios.

    The formulas are exact at psi in {0, 1} as well (mean 0 or n,
    variance 0), so no edge branch is needed.
    """
    n, psi = params.n, params.psi
    if 0.0 < psi < 1.0 and n <= _EXACT_MOMENT_MAX_N:
        fp, fw = Fraction(psi), Fraction(params.omega)
        kn = _exact_k(n, 0, fp, fw)
        t1 = _exact_k(n, 1, fp, fw) / kn
        if n >= 2:
            t2 = _exact_k(n, 2, fp, fw) / kn
            eta = t1 - fp * (n * t1 * t1 - (n - 1) * t2)
        else:
            eta = t1 - fp * t1 * t1
        return MomentSummary(
            tau1=float(t1),
            tau2=float(t2) if n >= 2 else math.nan,
            eta=float(eta),
            mean=float(n * fp * t1),
            variance=max(0.0, float(n * fp * eta)),
            pi=float(fp * t1),
        )
    t1 = tau(1, params)
    if n >= 2:
        t2 = tau(2, params)
        eta = t1 - psi * (n * t1 * t1 - (n - 1) * t2)
    else:
        t2 = math.nan
        eta = t1 - psi * t1 * t1
    mean = n * psi * t1
    variance = max(0.0, n * psi * eta)
    return MomentSummary(tau1=t1, tau2=t2, eta=eta, mean=mean,
                         variance=variance, pi=psi * t1)


def marginal_pi(params: ModelParams) -> float:
    """Per-trial marginal success probability pi = psi * tau_1."""
    return params.psi * tau(1, params)


def joint_log_prob(params: ModelParams, bits) -> float:
    """Log probability of one ordered binary configuration.

    The joint law is exchangeable: the value depends on ``bits`` only
    through y = sum(bits), and equals the pmf at y divided by the
    C(n, y) arrangement count.
    """
    b = np.asarray(bits)
    if b.shape != (params.n,):
        raise ValueError(f"bits must have length n={params.n}, got shape {b.shape}")
    if not np.isin(b, (0, 1)).all():
        raise ValueError("bits must be 0/1 valued")
    n, psi, omega = params.n, params.psi, params.omega
    y = int(b.sum())
    return float(
        xlogy(y, psi)
        + xlogy(n - y, 1.0 - psi)
        + (n - y) * y * math.log(omega)
        - log_k(n, 0, psi, omega)
    )


def joint_outcome(params: ModelParams, bits) -> JointOutcome:
    return JointOutcome(bits=tuple(int(b) for b in bits),
                        log_prob=joint_log_prob(params, bits))


def conditional_cpr(params: ModelParams) -> float:
    """Cross-product ratio of two trials given the remaining n-2.

    Exchangeability makes the value independent of which two trials are
    picked and of the conditioning configuration; the identity
    omega = 1 / sqrt(CPR) holds for every valid parameter triple.
    """
    if params.n < 2:
        raise ValueError("conditional CPR needs n >= 2")
    if not 0.0 < params.psi < 1.0:
        raise ValueError("conditional CPR needs psi in (0, 1)")
    rest = [0] * (params.n - 2)
    lp = {
        pair: joint_log_prob(params, list(pair) + rest)
        for pair in ((1, 1), (0, 0), (1, 0), (0, 1))
    }
    return math.exp(lp[(1, 1)] + lp[(0, 0)] - lp[(1, 0)] - lp[(0, 1)])


def sample(params: ModelParams, count: int, seed: int) -> np.ndarray:
    """i.i.d. success-count draws by inverse cdf over the pmf table.

    Deterministic given ``seed``; the generator is local to the call.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    table = pmf(params)
    cum = np.cumsum(table.probs())
    cum[-1] = 1.0
    rng = np.random.default_rng(seed)
    u = rng.random(count)
    return np.searchsorted(cum, u, side="right").astype(np.int64)


def enumerate_pmf_oracle(params: ModelParams) -> PmfTable:
    """Brute-force pmf by summing the unnormalized joint weight over all
    2^n binary vectors, grouped by y and normalized at the end.

    Test-only ground truth; refuses n > 20.
    """
    n, psi, omega = params.n, params.psi, params.omega
    if n > ENUMERATION_MAX_N:
        raise ValueError(f"enumeration oracle capped at n <= {ENUMERATION_MAX_N}")
    if psi == 0.0:
        return _point_mass_table(params, 0)
    if psi == 1.0:
        return _point_mass_table(params, n)
    codes = np.arange(2 ** n, dtype=np.uint32)
    bits = (codes[:, None] >> np.arange(n)) & 1
    y = bits.sum(axis=1)
    logw = (
        xlogy(y, psi)
        + xlogy(n - y, 1.0 - psi)
        + (n - y) * y * math.log(omega)
    )
    grouped = np.array(
        [logsumexp(logw[y == k]) for k in range(n + 1)]
    )
    log_norm = float(logsumexp(grouped))
    logp = grouped - log_norm
    logp = logp - logsumexp(logp)
    return PmfTable(params=params, log_prob=logp, log_normalizer=log_norm)
