"""Finite-difference verification of autodiff gradients."""

from __future__ import annotations

import math

import numpy as np

from .layers import ParameterSet


def check_gradients(function, params: ParameterSet, epsilon: float = 1e-5) -> float:
    """Compare autodiff gradients with central finite differences.

    ``function(params)`` must rebuild its graph on every call and return a
    scalar tensor. Returns the maximum relative error over every element
    of every parameter; the relative error uses a small absolute floor so
    zero gradients compare as zero.
    """
    loss = function(params)
    if loss.data.size != 1:
        raise ValueError("check_gradients needs a scalar-valued function")
    if not math.isfinite(float(loss.data)):
        raise FloatingPointError(f"loss is not finite: {float(loss.data)}")
    params.zero_grad()
    loss.backward()
    analytic = {
        name: (t.grad.copy() if t.grad is not None else np.zeros_like(t.data))
        for name, t in params.items()
    }

    worst = 0.0
    for name, t in params.items():
        flat = t.data.reshape(-1)
        grads = analytic[name].reshape(-1)
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + epsilon
            upper = float(function(params).data)
            flat[i] = original - epsilon
            lower = float(function(params).data)
            flat[i] = original
            if not (math.isfinite(upper) and math.isfinite(lower)):
                raise FloatingPointError(f"perturbed loss is not finite at {name}[{i}]")
            fd = (upper - lower) / (2.0 * epsilon)
            rel = abs(fd - grads[i]) / max(abs(fd), abs(grads[i]), 1e-6)
            worst = max(worst, rel)
    return worst
