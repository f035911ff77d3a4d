"""
Energy distance and its permutation test, both from :mod:`dcor`.
"""

from dataclasses import dataclass

import dcor
import numpy as np


@dataclass(frozen=True)
class EnergyTestResult():
    """
    Args:
        statistic: energy test statistic of the two samples
        p_value: permutation p-value
        num_resamples: number of permutations
    """

    statistic: float
    p_value: float
    num_resamples: int

    def rejects(self, level=0.01):
        """
        The statistic exceeds the permutation critical value at ``level``,
        equivalently the p-value is at most ``level``
        """
        return self.p_value <= level


def energy_distance(a, b):
    """Energy distance between two samples of row vectors"""
    return float(dcor.energy_distance(
        np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)))


def energy_test(a, b, num_resamples=1000, rng=None):
    """
    Two-sample permutation test of equal distributions

    Args:
        a, b: samples, (n_a, d) and (n_b, d)
        num_resamples: number of permutations
        rng: numpy Generator driving the permutations

    Returns:
        :class:`EnergyTestResult`
    """
    result = dcor.homogeneity.energy_test(
        np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64),
        num_resamples=int(num_resamples), random_state=rng)
    return EnergyTestResult(float(result.statistic), float(result.pvalue),
                            int(num_resamples))
