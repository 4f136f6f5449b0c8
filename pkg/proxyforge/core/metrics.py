"""Performance metrics over best-so-far traces"""

from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidClipRange
from .problem import DEFAULT_CLIP_RANGE


def _check_clip(clip_lo: float, clip_hi: float) -> None:
    if clip_lo <= 0 or clip_lo >= clip_hi:
        raise InvalidClipRange(
            f"AOCC clip range must satisfy 0 < lo < hi, got ({clip_lo}, {clip_hi})"
        )


def best_so_far(values: Sequence[float]) -> np.ndarray:
    """Running minimum of a sequence of raw values"""
    return np.minimum.accumulate(np.asarray(values, dtype=float))


def pad_trace(trace: Sequence[float], budget: int) -> np.ndarray:
    """Pad a best-so-far trace with its final value (or truncate) to length budget"""
    trace = np.asarray(trace, dtype=float).reshape(-1)
    if trace.size >= budget:
        return trace[:budget]
    return np.concatenate([trace, np.full(budget - trace.size, trace[-1])])


def normalized_curve(
    trace: Sequence[float],
    budget: int,
    clip_lo: float = DEFAULT_CLIP_RANGE[0],
    clip_hi: float = DEFAULT_CLIP_RANGE[1],
    optimum: Optional[float] = None,
) -> np.ndarray:
    """Log-normalized best-so-far curve in [0, 1], 0 at clip_lo and 1 at clip_hi

    Args:
        trace: Best-so-far values, non-empty and finite
        budget: Curve length B
        clip_lo: Lower clip bound, > 0
        clip_hi: Upper clip bound, > clip_lo
        optimum: Known optimum subtracted before clipping

    Returns:
        Array of length B

    Raises:
        InvalidClipRange: If the clip bounds are invalid
        ValueError: If the trace is empty or holds non-finite values
    """
    _check_clip(clip_lo, clip_hi)
    values = np.asarray(trace, dtype=float).reshape(-1)
    if values.size == 0:
        raise ValueError("AOCC needs a non-empty trace")
    if not np.all(np.isfinite(values)):
        raise ValueError("AOCC needs finite trace values")
    if budget < 1:
        raise ValueError(f"AOCC budget must be positive, got {budget}")
    if optimum is not None:
        values = values - optimum
    padded = pad_trace(values, budget)
    log_lo, log_hi = np.log10(clip_lo), np.log10(clip_hi)
    clipped = np.clip(padded, clip_lo, clip_hi)
    return (np.log10(clipped) - log_lo) / (log_hi - log_lo)


def aocc(
    trace: Sequence[float],
    budget: int,
    clip_lo: float = DEFAULT_CLIP_RANGE[0],
    clip_hi: float = DEFAULT_CLIP_RANGE[1],
    optimum: Optional[float] = None,
) -> float:
    """Area over the convergence curve

    The mean over B evaluations of 1 - norm(y_t), where y_t is the
    best-so-far value, clipped to [clip_lo, clip_hi] and log10-normalized.
    Higher is better; 1.0 means the optimum (clip_lo) from the first call.

    Args:
        trace: Best-so-far values
        budget: Evaluation budget B (traces are padded or truncated to it)
        clip_lo: Lower clip bound
        clip_hi: Upper clip bound
        optimum: Known optimum subtracted before clipping

    Returns:
        AOCC in [0, 1]
    """
    curve = normalized_curve(trace, budget, clip_lo, clip_hi, optimum)
    return float(np.clip(np.mean(1.0 - curve), 0.0, 1.0))


def convergence_curve(
    traces: Sequence[Sequence[float]],
    budget: int,
    clip_range: Tuple[float, float] = DEFAULT_CLIP_RANGE,
    optimum: Optional[float] = None,
) -> np.ndarray:
    """Mean normalized best-so-far curve over several runs (length B)"""
    curves = [normalized_curve(t, budget, clip_range[0], clip_range[1], optimum) for t in traces]
    return np.mean(np.vstack(curves), axis=0)
