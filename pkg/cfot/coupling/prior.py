from dataclasses import dataclass


@dataclass(frozen=True)
class PriorConfig():
    """
    Source distribution of the flow

    Args:
        kind: ``uniform_unit_box`` (uniform on [0, 1]^dim) or
            ``standard_gaussian``
        dim: dimension, equal to the dimension of the observation
    """

    kind: str = 'uniform_unit_box'
    dim: int = 2

    KINDS = ('uniform_unit_box', 'standard_gaussian')

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(
                'Unknown prior kind {}, expected one of {}'.format(
                    self.kind, self.KINDS))
        if int(self.dim) < 1:
            raise ValueError('Prior dim must be >= 1, got {}'.format(self.dim))

    def sample(self, rng, n):
        if self.kind == 'uniform_unit_box':
            return rng.uniform(0.0, 1.0, size=(n, self.dim))
        return rng.standard_normal(size=(n, self.dim))
