"""Numerical thresholds used by the solvers."""
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class ToleranceConfig:
    """All numerical thresholds in one place.

    Parameters
    ----------
    rank : float
        Singular values ``s_i <= rank * s_1`` are treated as zero.
    zero : float
        Relative threshold for zero tests on inner products.
    collinear : float
        Two unit vectors are collinear when ``|cos| >= 1 - collinear``.
    imag : float
        Eigenvalues with ``|Im l| > imag * (1 + |l|)`` are rejected.
    sep : float
        Minimum relative distance between pencil eigenvalues.
    residual : float
        Largest accepted relative residual of a final decomposition.
    pair_gap : float
        Minimum singular value ratio that makes a rank decision on a slice
        pair unambiguous.
    """

    rank: float = 1e-9
    zero: float = 1e-9
    collinear: float = 1e-6
    imag: float = 1e-7
    sep: float = 1e-8
    residual: float = 1e-8
    pair_gap: float = 1e3

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "pair_gap":
                if not value > 1:
                    raise ValueError("pair_gap must exceed 1")
            elif not 0 < value < 1:
                raise ValueError(f"tolerance {f.name}={value!r} must lie in (0, 1)")

    def with_(self, **changes):
        return replace(self, **changes)


def resolve_tol(tol) -> ToleranceConfig:
    """Accept ``None``, a config, a dict of overrides, or a residual float."""
    if tol is None:
        return ToleranceConfig()
    if isinstance(tol, ToleranceConfig):
        return tol
    if isinstance(tol, dict):
        return ToleranceConfig(**tol)
    return ToleranceConfig(residual=float(tol))
