# -*- coding: utf-8 -*-
"""
Real-valued pulse envelopes for the microwave drive.
"""
from dataclasses import dataclass
from enum import Enum
import logging

import numpy as np

logger = logging.getLogger(__name__)


class EnvelopeShape(str, Enum):
    """Supported envelope shapes."""

    SQUARE = "square"
    SINE_SQUARED = "sine_squared"


# Area of the envelope divided by peak * duration
_AREA_FACTOR = {
    EnvelopeShape.SQUARE: 1.0,
    EnvelopeShape.SINE_SQUARED: 0.5,
}


@dataclass(frozen=True)
class PulseEnvelope:
    """Envelope Omega(t) of a pulse starting at t = 0.

    Parameters
    ----------
    shape : {'square', 'sine_squared'}
        Shape of the envelope. The sine-squared envelope is
        ``peak * sin^2(pi t / duration)``.
    peak : float
        Peak amplitude in rad/us.
    duration : float
        Duration in us.
    """

    shape: EnvelopeShape
    peak: float
    duration: float

    def __post_init__(self):
        try:
            shape = EnvelopeShape(self.shape)
        except ValueError:
            raise ValueError(
                f"Unknown envelope shape: {self.shape}. Choose from: "
                f"{[s.value for s in EnvelopeShape]}"
            )
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "peak", float(self.peak))
        object.__setattr__(self, "duration", float(self.duration))
        if not self.peak > 0:
            raise ValueError(f"Peak amplitude must be positive, got {self.peak}")
        if not self.duration > 0:
            raise ValueError(f"Duration must be positive, got {self.duration}")

    @classmethod
    def for_area(
        cls, shape, peak: float, area: float = np.pi
    ) -> "PulseEnvelope":
        """Envelope with a given peak whose duration yields the requested area."""
        shape = EnvelopeShape(shape)
        if not area > 0:
            raise ValueError(f"Pulse area must be positive, got {area}")
        return cls(shape, peak, area / (peak * _AREA_FACTOR[shape]))

    @property
    def area(self) -> float:
        """Closed-form integral of the envelope over its duration."""
        return self.peak * self.duration * _AREA_FACTOR[self.shape]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t >= 0) & (t <= self.duration)
        if self.shape is EnvelopeShape.SQUARE:
            values = np.full_like(t, self.peak)
        else:
            values = self.peak * np.sin(np.pi * t / self.duration) ** 2
        values = np.where(inside, values, 0.0)
        return float(values) if values.ndim == 0 else values
