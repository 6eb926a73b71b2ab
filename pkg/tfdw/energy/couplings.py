"""Coupling constants of the functional."""

from dataclasses import dataclass, asdict, fields

import numpy as np

from ..errors import ConfigurationError

PRESETS = (None, "default", "physical")


@dataclass(frozen=True)
class Constants:
    """Couplings c_TF, c_D, c_W and term toggles.

    The toggles switch individual terms off for oracle runs (e.g. the hydrogen problem keeps only the
    Weizsaecker and external terms). Production runs leave them all on.

    Attributes:
        c_tf (float): Thomas-Fermi coupling.
        c_d (float): Dirac coupling.
        c_w (float): von Weizsaecker coupling.
        thomas_fermi (bool): include c_TF int |u|^(10/3).
        dirac (bool): include -c_D int |u|^(8/3).
        hartree (bool): include D(|u|^2, |u|^2).
        external (bool): include int V |u|^2.
    """

    c_tf: float = 1.0
    c_d: float = 1.0
    c_w: float = 1.0
    thomas_fermi: bool = True
    dirac: bool = True
    hartree: bool = True
    external: bool = True

    def __post_init__(self):
        for name in ("c_tf", "c_d", "c_w"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ConfigurationError(f"coupling {name} must be positive, got {value}")

    @classmethod
    def physical(cls, **toggles) -> "Constants":
        """Couplings of the physical model in atomic units."""
        return cls(c_tf=0.3 * (3 * np.pi ** 2) ** (2 / 3), c_d=0.75 * (3 / np.pi) ** (1 / 3), c_w=0.5, **toggles)

    @classmethod
    def from_dict(cls, config: dict) -> "Constants":
        config = dict(config)
        preset = config.pop("preset", None)
        if preset not in PRESETS:
            raise ConfigurationError(f"unknown constants preset '{preset}', expected 'default' or 'physical'")
        base = asdict(cls.physical()) if preset == "physical" else {}
        known = {f.name for f in fields(cls)}
        unknown = set(config) - known
        if unknown:
            raise ConfigurationError(f"unknown constants keys: {sorted(unknown)}")
        base.update(config)
        try:
            return cls(**{k: (float(v) if k.startswith("c_") else bool(v)) for k, v in base.items()})
        except (TypeError, ValueError) as e:
            raise ConfigurationError(f"invalid constants: {e}") from e

    def to_dict(self) -> dict:
        return asdict(self)

    @property
    def all_enabled(self) -> bool:
        return self.thomas_fermi and self.dirac and self.hartree and self.external

    @property
    def square_constant(self) -> float:
        """c_D^2 / (4 c_TF), the constant of the completed square."""
        return self.c_d ** 2 / (4 * self.c_tf)
