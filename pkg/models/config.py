"""
Configuration records.

All numerical thresholds live in ToleranceConfig; all generator knobs live in
GenConfig. Nothing is read from the environment.
"""

from dataclasses import dataclass, asdict, fields, replace

from models.errors import InvalidInputError


@dataclass(frozen=True)
class ToleranceConfig:
    """
    Numerical thresholds, all relative and strictly inside (0, 1).

    tol_sym:      symmetry / skew-symmetry check
    tol_pd:       eigenvalue floor for definiteness, relative to max|λ|
    tol_rank:     singular-value floor for rank and kernel decisions
    tol_commute:  commutator norm relative to the product of operand norms
    tol_cluster:  eigenvalue gap below which eigenvalues are grouped
    tol_residual: acceptance threshold for final residuals
    """
    tol_sym: float = 1e-10
    tol_pd: float = 1e-10
    tol_rank: float = 1e-9
    tol_commute: float = 1e-10
    tol_cluster: float = 1e-8
    tol_residual: float = 1e-8

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not 0.0 < value < 1.0:
                raise InvalidInputError(f"{f.name} must lie in (0, 1), got {value!r}")

    def to_dict(self) -> dict:
        return asdict(self)

    def with_overrides(self, **overrides: float | None) -> "ToleranceConfig":
        """Copy with the given fields replaced; None values are ignored."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **changes)

    @classmethod
    def from_dict(cls, data: dict) -> "ToleranceConfig":
        known = {f.name for f in fields(cls)}
        return cls(**{k: float(v) for k, v in data.items() if k in known})


@dataclass(frozen=True)
class GenConfig:
    """Seeded instance-generator settings."""
    seed: int = 0
    n: int = 1
    spread: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError(f"n must be >= 1, got {self.n}")
        if not self.spread > 0:
            raise InvalidInputError(f"spread must be positive, got {self.spread}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "GenConfig":
        return cls(
            seed=int(data.get("seed", 0)),
            n=int(data.get("n", 1)),
            spread=float(data.get("spread", 1.0)),
        )


DEFAULT_TOLERANCES = ToleranceConfig()
