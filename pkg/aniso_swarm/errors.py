from __future__ import annotations


class AnisoSwarmError(Exception):
    """Root of every error raised by aniso_swarm."""


class ConfigError(AnisoSwarmError, ValueError):
    def __init__(self, message: str, *, key: str | None = None, line: int | None = None):
        self.key = key
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key `{key}`")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(f"{prefix}{message}")


class DomainError(AnisoSwarmError, ValueError):
    """Input outside the mathematical domain of an operation."""


class CoincidentParticlesError(DomainError):
    def __init__(self, j: int, k: int, distance: float):
        self.pair = (j, k)
        self.distance = distance
        super().__init__(f"Particles {j} and {k} coincide (wrapped distance {distance:.3e})")


class InadmissibleAngleError(DomainError):
    def __init__(self, theta: float, reason: str):
        self.theta = theta
        self.reason = reason
        super().__init__(f"Angle {theta!r} is not admissible: {reason}")


class NumericalError(AnisoSwarmError, ArithmeticError):
    """A numerical method could not make progress."""


class StepSizeUnderflowError(NumericalError):
    def __init__(self, t: float, h: float):
        self.t = t
        self.h = h
        super().__init__(f"Step size {h:.3e} underflowed at t={t!r}")
