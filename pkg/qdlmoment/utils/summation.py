"""Reproducible summation.

`pairwise_sum` reduces with a binary tree whose shape depends only on the number
of terms, so the result does not depend on how the terms were produced.
"""

import numpy as np


def pairwise_sum(values: np.ndarray) -> complex:
    """Sum by a fixed pairwise tree: element i pairs with i ^ 1 at every level."""
    a = np.asarray(values)
    if a.size == 0:
        return 0j
    a = a.ravel()
    while a.size > 1:
        if a.size % 2:
            a = np.concatenate([a, np.zeros(1, dtype=a.dtype)])
        a = a[0::2] + a[1::2]
    return complex(a[0])


def two_sum(u: float, v: float) -> tuple[float, float]:
    """Error-free transformation: u + v == s + t exactly."""
    s = u + v
    up = s - v
    vpp = s - up
    up -= u
    vpp -= v
    return s, -(up + vpp)


class CompensatedSum:
    """Running complex sum carrying the rounding error of every addition."""

    def __init__(self) -> None:
        self._re = (0.0, 0.0)
        self._im = (0.0, 0.0)
        self.abs_total = 0.0

    @staticmethod
    def _add(acc: tuple[float, float], y: float) -> tuple[float, float]:
        s, t = acc
        y, u = two_sum(y, t)
        s, t = two_sum(y, s)
        return s, t + u

    def add(self, value: complex) -> None:
        value = complex(value)
        self._re = self._add(self._re, value.real)
        self._im = self._add(self._im, value.imag)
        self.abs_total += abs(value)

    @property
    def value(self) -> complex:
        return complex(self._re[0] + self._re[1], self._im[0] + self._im[1])
