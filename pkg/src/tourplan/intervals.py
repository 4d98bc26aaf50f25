"""Half-open [start, end) interval sets used for availability windows."""

from __future__ import annotations

from .errors import ValidationError


def normalize(windows) -> tuple[tuple[float, float], ...]:
    """Sort, validate, and merge overlapping or touching intervals."""
    items = []
    for start, end in windows:
        if start < 0:
            raise ValidationError(f"window start must be >= 0, got {start}")
        if end <= start:
            raise ValidationError(f"window end ({end}) must exceed start ({start})")
        items.append((float(start), float(end)))
    items.sort()
    merged: list[list[float]] = []
    for start, end in items:
        if merged and start <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], end)
        else:
            merged.append([start, end])
    return tuple((s, e) for s, e in merged)


def subtract(windows, hole) -> tuple[tuple[float, float], ...]:
    """Remove ``hole`` from a normalized interval set."""
    hs, he = float(hole[0]), float(hole[1])
    if he <= hs:
        raise ValidationError(f"window end ({he}) must exceed start ({hs})")
    out = []
    for start, end in windows:
        if he <= start or end <= hs:
            out.append((start, end))
            continue
        if start < hs:
            out.append((start, hs))
        if he < end:
            out.append((he, end))
    return tuple(out)


def contains(windows, start: float, end: float, tol: float = 1e-9) -> bool:
    """True if [start, end) fits entirely inside one window."""
    for ws, we in windows:
        if ws - tol <= start and end <= we + tol:
            return True
    return False
