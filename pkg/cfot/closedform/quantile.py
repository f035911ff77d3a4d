"""
One dimensional mechanisms with a binary parent and uniform noise,

    t1: x = pa + u
    t2: x = pa + 1 - u
    t3: x = u if pa == 0 else 2 - u

All three give X | PA=pa ~ Uniform(pa, pa + 1). t1 and t2 agree on every
counterfactual although they abduct different noise; t3 reverses the rank of
an observation under intervention.
"""

import pandas as pd

MECHANISMS = ('t1', 't2', 't3')
PARENTS = (0, 1)


class OutOfSupportError(ValueError):
    """Raised when an observation lies outside the support of X | PA=pa"""


def _check_parent(pa):
    if pa not in PARENTS:
        raise ValueError('Parent must be 0 or 1, got {}'.format(pa))


class Mechanism1D():
    """
    Args:
        id: ``t1``, ``t2`` or ``t3``
    """

    def __init__(self, id):
        if id not in MECHANISMS:
            raise ValueError(
                'Unknown mechanism {}, expected one of {}'.format(
                    id, MECHANISMS))
        self.id = id

    def __repr__(self):
        return 'Mechanism1D({!r})'.format(self.id)

    @staticmethod
    def support(pa):
        _check_parent(pa)
        return float(pa), float(pa) + 1.0

    def __call__(self, pa, u):
        _check_parent(pa)
        if self.id == 't1':
            return pa + u
        if self.id == 't2':
            return pa + 1.0 - u
        return u if pa == 0 else 2.0 - u

    def inverse(self, pa, x):
        """The noise u that produces ``x`` at ``pa``"""
        lo, hi = self.support(pa)
        if not lo <= x <= hi:
            raise OutOfSupportError(
                'x={} is outside the support [{}, {}] of X | PA={}'.format(
                    x, lo, hi, pa))
        if self.id == 't1':
            return x - pa
        if self.id == 't2':
            return pa + 1.0 - x
        return x if pa == 0 else 2.0 - x


def rank_1d(mech, pa, x):
    """
    Quantile level of ``x`` under X | PA=pa ~ Uniform(pa, pa + 1), which is
    the same for every mechanism
    """
    lo, hi = Mechanism1D.support(pa)
    if not lo <= x <= hi:
        raise OutOfSupportError(
            'x={} is outside the support [{}, {}] of X | PA={}'.format(
                x, lo, hi, pa))
    return x - lo


def cf_1d(mech, pa, x, pa_star):
    """Abduct u from (pa, x) and run the mechanism at ``pa_star``"""
    _check_parent(pa_star)
    return mech(pa_star, mech.inverse(pa, x))


def quantile_table(pa=0, x=0.8, pa_star=1):
    """
    Abducted noise, counterfactual and ranks of one observation under each
    mechanism

    Returns:
        pandas.DataFrame with columns mechanism, pa, x, pa_star, u, x_star,
        rank_x, rank_x_star
    """
    rows = []
    for id in MECHANISMS:
        mech = Mechanism1D(id)
        x_star = cf_1d(mech, pa, x, pa_star)
        rows.append({
            'mechanism': id,
            'pa': pa,
            'x': x,
            'pa_star': pa_star,
            'u': mech.inverse(pa, x),
            'x_star': x_star,
            'rank_x': rank_1d(mech, pa, x),
            'rank_x_star': rank_1d(mech, pa_star, x_star),
        })
    return pd.DataFrame(rows)
