"""Adam optimizer with the conventional bias-corrected update."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .layers import ParameterSet


@dataclass
class AdamState:
    learning_rate: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)

    @classmethod
    def for_params(cls, params: ParameterSet, learning_rate: float = 0.001):
        state = cls(learning_rate=learning_rate)
        for name, t in params.items():
            state.m[name] = np.zeros_like(t.data)
            state.v[name] = np.zeros_like(t.data)
        return state


def adam_step(params: ParameterSet, state: AdamState):
    """Apply one Adam update in place. Every parameter must have a gradient."""
    for name, t in params.items():
        if t.grad is None:
            raise RuntimeError(f"parameter {name!r} has no gradient")
    state.step += 1
    correction1 = 1.0 - state.beta1**state.step
    correction2 = 1.0 - state.beta2**state.step
    for name, t in params.items():
        g = t.grad
        state.m[name] = state.beta1 * state.m[name] + (1.0 - state.beta1) * g
        state.v[name] = state.beta2 * state.v[name] + (1.0 - state.beta2) * g**2
        m_hat = state.m[name] / correction1
        v_hat = state.v[name] / correction2
        t.data -= state.learning_rate * m_hat / (np.sqrt(v_hat) + state.eps)
