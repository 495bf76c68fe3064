import numpy as np
from core_data_modules.logging import Logger

from src.ewl_core.distribution import quantile
from src.ewl_core.exponentiated_weibull import ew_quantile

log = Logger(__name__)

_MANTISSA_STEPS = 2 ** 53


def _validate_sample_request(n, seed):
    if int(n) != n or n < 1:
        raise ValueError(f"Sample size must be a positive integer, but got {n}")
    if int(seed) != seed or seed < 0:
        raise ValueError(f"Seeds must be non-negative integers, but got {seed}")


def _open_uniforms(rng, n):
    # Midpoints of the 2^53 equal cells of [0, 1), so both 0 and 1 are excluded.
    return (rng.integers(0, _MANTISSA_STEPS, size=n) + 0.5) / _MANTISSA_STEPS


def sample_inverse(p, n, seed):
    """
    Draws n independent EWL variates by applying the quantile function to uniform variates.

    The generator is numpy's default bit generator seeded with `numpy.random.SeedSequence(seed)`, so a given
    (seed, n) always gives the same values.

    :param p: Distribution parameters.
    :type p: src.ewl_core.params.EwlParams
    :param n: Number of draws.
    :type n: int
    :param seed: Non-negative seed.
    :type seed: int
    :rtype: numpy.ndarray
    """
    _validate_sample_request(n, seed)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    return np.asarray(quantile(p, _open_uniforms(rng, int(n))), dtype=float)


def sample_compound(p, n, seed):
    """
    Draws n EWL variates from the compounding construction: N from the logarithmic law, then the maximum of N
    exponentiated Weibull variates.

    `numpy.random.SeedSequence(seed)` is split into two child streams; the first draws the counts N and the second
    the EW variates, in order.

    :param p: Distribution parameters.
    :type p: src.ewl_core.params.EwlParams
    :param n: Number of draws.
    :type n: int
    :param seed: Non-negative seed.
    :type seed: int
    :rtype: numpy.ndarray
    """
    _validate_sample_request(n, seed)
    count_seed, variate_seed = np.random.SeedSequence(seed).spawn(2)
    counts = np.random.default_rng(count_seed).logseries(p.theta, size=int(n))
    log.debug(f"Compound sampler drew {int(counts.sum())} EW variates for {n} maxima")

    variates = ew_quantile(p.alpha, p.beta, p.gamma_,
                           _open_uniforms(np.random.default_rng(variate_seed), int(counts.sum())))
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    return np.maximum.reduceat(np.atleast_1d(variates), starts)
