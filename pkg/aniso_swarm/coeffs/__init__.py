import abc
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    import numpy as np


class RadialFamily(abc.ABC):
    @abc.abstractmethod
    def value(self, r: "np.ndarray") -> "np.ndarray":
        """
        Un-cut coefficient f(r) on an array of nonnegative radii
        """

    @abc.abstractmethod
    def derivative(self, r: "np.ndarray") -> "np.ndarray":
        """
        Analytic derivative f'(r) on an array of nonnegative radii
        """
