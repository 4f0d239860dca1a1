"""D=2 isotropic harmonic oscillator over a Euclidean, hyperbolic or s-form metric.

Dynamics are carried out in dualized coordinates ``x_i = g_ij x^j``, where
Hamilton's equations read ``x_i' = p_i / m`` and ``p_i' = -m w^2 x_i`` for
every metric ``g``.  Metrics stay exact; state vectors are 64-bit floats.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg as la
from .exceptions import DegenerateFormError, DimensionError, NotSymmetricError, SplecticError

__all__ = [
    "Metric",
    "NonFiniteStateError",
    "OscillatorParams",
    "PhasePoint",
    "Trajectory",
    "default_step",
    "dualize",
    "eom_rhs",
    "eom_rhs_contravariant",
    "exact_solution",
    "hamiltonian_value",
    "hamiltonian_value_contravariant",
    "lagrangian_value",
    "legendre_momentum",
    "raise_index",
    "simulate",
    "symplectic_form",
    "verlet_step",
]


class NonFiniteStateError(SplecticError):
    def __init__(self, step: int):
        super().__init__(f"non-finite state at step {step}")
        self.step = step


@dataclass(frozen=True)
class OscillatorParams:
    mass: float = 1.0
    omega: float = 1.0

    def __post_init__(self):
        if not (self.mass > 0 and self.omega > 0):
            raise ValueError(f"mass and omega must be positive, got m={self.mass}, omega={self.omega}")

    @property
    def period(self) -> float:
        return 2 * math.pi / float(self.omega)


NAMED_METRICS = {
    "euclidean": ((1, 0), (0, 1)),
    "hyperbolic": ((-1, 0), (0, 1)),
    "s": ((0, 1), (1, 0)),
}


@dataclass(frozen=True)
class Metric:
    """A 2x2 exact symmetric nondegenerate configuration-space metric."""

    kind: str
    matrix: tuple = field(default=None)

    def __post_init__(self):
        if self.kind in NAMED_METRICS:
            expected = la.matrix(NAMED_METRICS[self.kind])
            m = expected if self.matrix is None else la.matrix(self.matrix)
            if m != expected:
                raise ValueError(f"{self.kind} metric must be {NAMED_METRICS[self.kind]}")
        elif self.kind == "custom":
            if self.matrix is None:
                raise ValueError("custom metric needs a matrix")
            m = la.matrix(self.matrix)
        else:
            raise ValueError(f"unknown metric kind {self.kind!r}")
        if la.shape(m) != (2, 2):
            raise DimensionError("configuration metric must be 2x2")
        if not la.is_symmetric(m):
            raise NotSymmetricError("metric must be symmetric")
        if la.det(m) == 0:
            raise DegenerateFormError("metric is degenerate")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def euclidean(cls) -> "Metric":
        return cls("euclidean")

    @classmethod
    def hyperbolic(cls) -> "Metric":
        return cls("hyperbolic")

    @classmethod
    def sform(cls) -> "Metric":
        return cls("s")

    @classmethod
    def custom(cls, matrix) -> "Metric":
        return cls("custom", matrix)

    @classmethod
    def named(cls, name: str) -> "Metric":
        return cls(name)

    @property
    def inverse(self) -> tuple:
        return la.inverse(self.matrix)

    def as_array(self) -> np.ndarray:
        return la.to_float(self.matrix)

    def inverse_array(self) -> np.ndarray:
        return la.to_float(self.inverse)


def symplectic_form(metric: Metric) -> tuple:
    """``[[0, g^-1], [-g^-1, 0]]`` on dualized coordinates ``(x_1, x_2, p_1, p_2)``."""
    gi = metric.inverse
    z = la.zeros(2)
    return la.from_blocks([[z, gi], [la.scale(-1, gi), z]])


@dataclass(frozen=True)
class PhasePoint:
    """Dualized position ``x_i``, momentum ``p_i`` and time."""

    x: tuple
    p: tuple
    t: float = 0.0

    def __post_init__(self):
        x = tuple(float(v) for v in self.x)
        p = tuple(float(v) for v in self.p)
        if len(x) != 2 or len(p) != 2:
            raise DimensionError("phase points have two positions and two momenta")
        if not all(math.isfinite(v) for v in x + p + (float(self.t),)):
            raise ValueError("phase point entries must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "t", float(self.t))

    @property
    def z(self) -> np.ndarray:
        return np.array(self.x + self.p)

    @classmethod
    def from_z(cls, z: Sequence[float], t: float = 0.0) -> "PhasePoint":
        return cls((z[0], z[1]), (z[2], z[3]), t)


def _mw(params):
    return float(params.mass), float(params.omega)


def dualize(metric: Metric, x_up) -> np.ndarray:
    """Lower the index: ``x_i = g_ij x^j``."""
    return metric.as_array() @ np.asarray(x_up, dtype=float)


def raise_index(metric: Metric, x_low) -> np.ndarray:
    return metric.inverse_array() @ np.asarray(x_low, dtype=float)


def lagrangian_value(params: OscillatorParams, metric: Metric, x, xdot) -> float:
    """``(m/2) g(xdot, xdot) - (m w^2 / 2) g(x, x)`` with contravariant ``x``."""
    m, w = _mw(params)
    g = metric.as_array()
    x, xdot = np.asarray(x, dtype=float), np.asarray(xdot, dtype=float)
    return 0.5 * m * (xdot @ g @ xdot) - 0.5 * m * w**2 * (x @ g @ x)


def legendre_momentum(params: OscillatorParams, metric: Metric, xdot) -> np.ndarray:
    return float(params.mass) * (metric.as_array() @ np.asarray(xdot, dtype=float))


def hamiltonian_value(params: OscillatorParams, metric: Metric, point: PhasePoint) -> float:
    """``(1/2m) g^-1(p, p) + (m w^2 / 2) g^-1(x, x)`` in dualized coordinates."""
    m, w = _mw(params)
    gi = metric.inverse_array()
    x, p = np.array(point.x), np.array(point.p)
    return (p @ gi @ p) / (2 * m) + 0.5 * m * w**2 * (x @ gi @ x)


def hamiltonian_value_contravariant(params: OscillatorParams, metric: Metric, x_up, p) -> float:
    m, w = _mw(params)
    g, gi = metric.as_array(), metric.inverse_array()
    x_up, p = np.asarray(x_up, dtype=float), np.asarray(p, dtype=float)
    return (p @ gi @ p) / (2 * m) + 0.5 * m * w**2 * (x_up @ g @ x_up)


def eom_rhs(params: OscillatorParams, point: PhasePoint) -> tuple[np.ndarray, np.ndarray]:
    m, w = _mw(params)
    x, p = np.array(point.x), np.array(point.p)
    return p / m, -m * w**2 * x


def eom_rhs_contravariant(params: OscillatorParams, metric: Metric, x_up, p) -> tuple[np.ndarray, np.ndarray]:
    """Undualized form: ``x^i' = (1/m) g^ij p_j``, ``p_i' = -m w^2 g_ij x^j``."""
    m, w = _mw(params)
    x_up, p = np.asarray(x_up, dtype=float), np.asarray(p, dtype=float)
    return metric.inverse_array() @ p / m, -m * w**2 * (metric.as_array() @ x_up)


def exact_solution(params: OscillatorParams, point0: PhasePoint, t: float) -> PhasePoint:
    """Closed-form flow from ``point0`` to absolute time ``t``."""
    m, w = _mw(params)
    dt = t - point0.t
    c, s = math.cos(w * dt), math.sin(w * dt)
    x0, p0 = np.array(point0.x), np.array(point0.p)
    x = x0 * c + p0 / (m * w) * s
    p = p0 * c - m * w * x0 * s
    return PhasePoint(tuple(x), tuple(p), t)


def _verlet_arrays(m, w, x, p, h):
    k = m * w * w
    p_half = p - 0.5 * h * k * x
    x_new = x + h * p_half / m
    return x_new, p_half - 0.5 * h * k * x_new


def verlet_step(params: OscillatorParams, point: PhasePoint, h: float) -> PhasePoint:
    """One Stormer-Verlet step: half kick, drift, half kick."""
    if not h > 0:
        raise ValueError("step must be positive")
    m, w = _mw(params)
    x, p = _verlet_arrays(m, w, np.array(point.x), np.array(point.p), h)
    return PhasePoint(tuple(x), tuple(p), point.t + h)


def default_step(params: OscillatorParams) -> float:
    return 1e-3 * params.period


@dataclass(frozen=True)
class Trajectory:
    """Sampled phase-space path; ``states`` rows are ``(x1, x2, p1, p2)``."""

    times: np.ndarray
    states: np.ndarray
    params: OscillatorParams
    metric: Metric
    integrator: str = "exact"

    def __len__(self):
        return len(self.times)

    @property
    def samples(self) -> list[PhasePoint]:
        return [PhasePoint.from_z(z, t) for t, z in zip(self.times, self.states)]

    def columns(self) -> dict[str, np.ndarray]:
        return {
            "t": self.times,
            "x1": self.states[:, 0],
            "x2": self.states[:, 1],
            "p1": self.states[:, 2],
            "p2": self.states[:, 3],
        }

    def to_csv(self, extra: dict[str, np.ndarray] | None = None) -> str:
        cols = self.columns() | (extra or {})
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for row in zip(*cols.values()):
            writer.writerow(repr(float(v)) for v in row)
        return buf.getvalue()

    def to_gnuplot(self, extra: dict[str, np.ndarray] | None = None) -> str:
        cols = self.columns() | (extra or {})
        lines = ["# " + " ".join(cols)]
        lines += [" ".join(repr(float(v)) for v in row) for row in zip(*cols.values())]
        return "\n".join(lines) + "\n"

    def to_dict(self, extra: dict[str, np.ndarray] | None = None) -> dict:
        return {
            "params": {"mass": float(self.params.mass), "omega": float(self.params.omega)},
            "metric": {"kind": self.metric.kind, "matrix": [[str(v) for v in r] for r in self.metric.matrix]},
            "integrator": self.integrator,
            "columns": {k: [float(v) for v in vals] for k, vals in (self.columns() | (extra or {})).items()},
        }

    def to_json(self, extra: dict[str, np.ndarray] | None = None) -> str:
        return json.dumps(self.to_dict(extra))


def _sample_times(t0: float, t_end: float, h: float) -> np.ndarray:
    span = t_end - t0
    n = max(1, math.ceil(span / h - 1e-9))
    times = t0 + h * np.arange(n + 1)
    times[-1] = t_end
    return times


def simulate(
    params: OscillatorParams,
    metric: Metric,
    point0: PhasePoint,
    t_end: float,
    h: float | None = None,
    integrator: str = "exact",
) -> Trajectory:
    """Sample the motion at ``t0, t0 + h, ...`` up to and including ``t_end``."""
    h = default_step(params) if h is None else h
    if not (h > 0 and t_end > point0.t):
        raise ValueError("need h > 0 and t_end after the initial time")
    times = _sample_times(point0.t, t_end, h)
    m, w = _mw(params)
    states = np.empty((len(times), 4))
    if integrator == "exact":
        x0, p0 = np.array(point0.x), np.array(point0.p)
        dt = (times - point0.t)[:, None]
        c, s = np.cos(w * dt), np.sin(w * dt)
        states[:, :2] = x0 * c + p0 / (m * w) * s
        states[:, 2:] = p0 * c - m * w * x0 * s
        bad = ~np.isfinite(states).all(axis=1)
        if bad.any():
            raise NonFiniteStateError(int(np.argmax(bad)))
    elif integrator == "verlet":
        x, p = np.array(point0.x), np.array(point0.p)
        states[0] = np.concatenate([x, p])
        for i in range(1, len(times)):
            x, p = _verlet_arrays(m, w, x, p, times[i] - times[i - 1])
            if not (np.isfinite(x).all() and np.isfinite(p).all()):
                raise NonFiniteStateError(i)
            states[i, :2], states[i, 2:] = x, p
    else:
        raise ValueError(f"unknown integrator {integrator!r}")
    return Trajectory(times, states, params, metric, integrator)

