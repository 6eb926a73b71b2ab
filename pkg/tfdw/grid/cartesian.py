"""Cartesian representation for non-radial (molecular) problems.

Fields live on an n^3 lattice with spacing h = L/n centered on the origin (the origin is a node).
Kinetic terms are spectral on the n^3 box; the Coulomb solve zero-pads to (2n)^3 and convolves with
a free-space 1/|x| kernel, so there are no periodic images.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import fft
from scipy.ndimage import map_coordinates
from scipy.special import erf

from ..constants import BOX_LENGTH, BOX_N, BOX_MIN_N, BOX_MAX_N, SMEARING_CELLS
from ..errors import ConfigurationError, DomainError, InvalidStateError
from .radial import check_density, evaluate

# integral of 1/|x| over the unit cube centered at the origin
_SELF_CELL = 6 * np.log(1 + np.sqrt(3)) - 3 * np.log(2) - np.pi / 2


@dataclass(frozen=True)
class BoxGrid:
    """Immutable cubic lattice.

    Attributes:
        length (float): edge length L.
        n (int): points per axis, 16 <= n <= 96, with (2n) a fast transform length.
    """

    length: float = BOX_LENGTH
    n: int = BOX_N

    def __post_init__(self):
        if not BOX_MIN_N <= self.n <= BOX_MAX_N:
            raise ConfigurationError(f"box needs {BOX_MIN_N} <= n <= {BOX_MAX_N}, got {self.n}")
        if self.n % 2 or fft.next_fast_len(2 * self.n, real=True) != 2 * self.n:
            raise ConfigurationError(f"n = {self.n} is not transform friendly (use an even n with 2n = 2^a 3^b 5^c)")
        if not self.length > 0:
            raise ConfigurationError(f"box length must be positive, got {self.length}")

    @classmethod
    def from_dict(cls, config: dict) -> "BoxGrid":
        return cls(length=float(config.get("length", BOX_LENGTH)), n=int(config.get("n", BOX_N)))

    def to_dict(self) -> dict:
        return {"length": self.length, "n": self.n}

    @property
    def h(self) -> float:
        return self.length / self.n

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n,) * 3

    @property
    def r_max(self) -> float:
        """Radius of the largest ball centered at the origin inside the box."""
        return self.length / 2 - self.h

    @cached_property
    def axis(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.h

    def contains(self, point) -> bool:
        lo, hi = self.axis[0], self.axis[-1]
        return all(lo < c < hi for c in point)

    def radius(self, center=(0.0, 0.0, 0.0)) -> np.ndarray:
        x, y, z = (self.axis - c for c in center)
        return np.sqrt(x[:, None, None] ** 2 + y[None, :, None] ** 2 + z[None, None, :] ** 2)

    @property
    def weights(self) -> float:
        return self.h ** 3

    def integrate(self, f: np.ndarray) -> float:
        return self.h ** 3 * float(np.sum(f))

    def dot(self, a: np.ndarray, b: np.ndarray) -> float:
        return self.h ** 3 * float(np.sum(a * b))

    # spectral kinetic operator

    @cached_property
    def k_squared(self) -> np.ndarray:
        k = 2 * np.pi * fft.fftfreq(self.n, d=self.h)
        kz = 2 * np.pi * fft.rfftfreq(self.n, d=self.h)
        return k[:, None, None] ** 2 + k[None, :, None] ** 2 + kz[None, None, :] ** 2

    def neg_laplacian(self, values: np.ndarray) -> np.ndarray:
        return fft.irfftn(self.k_squared * fft.rfftn(values), s=self.shape)

    def gradient_energy(self, values: np.ndarray) -> float:
        return self.dot(values, self.neg_laplacian(values))

    def preconditioner(self, sigma: float, c_w: float):
        symbol = sigma + c_w * self.k_squared
        shape = self.shape
        return lambda g: fft.irfftn(fft.rfftn(g) / symbol, s=shape)

    # free-space Coulomb

    @cached_property
    def coulomb_kernel(self) -> np.ndarray:
        """Transform of 1/|x| on the doubled box with wrapped (minimum image) offsets."""
        m = 2 * self.n
        idx = np.arange(m)
        idx = np.where(idx <= self.n, idx, idx - m) * self.h
        r = np.sqrt(idx[:, None, None] ** 2 + idx[None, :, None] ** 2 + idx[None, None, :] ** 2)
        r[0, 0, 0] = 1.0
        g = 1.0 / r
        g[0, 0, 0] = _SELF_CELL / self.h
        return fft.rfftn(g)

    def hartree(self, rho: np.ndarray) -> tuple[np.ndarray, float]:
        m = 2 * self.n
        padded = fft.rfftn(rho, s=(m, m, m))
        phi = fft.irfftn(padded * self.coulomb_kernel, s=(m, m, m))[:self.n, :self.n, :self.n] * self.h ** 3
        return phi, 0.5 * self.dot(rho, phi)

    def boundary_mask(self, fraction: float) -> np.ndarray:
        return self.radius() >= (1 - fraction) * self.r_max


@dataclass(frozen=True, eq=False)
class Field3:
    """Samples u(x) on the n^3 lattice of a BoxGrid.

    Attributes:
        grid (BoxGrid): lattice.
        values (np.ndarray): array of shape (n, n, n), row-major.
        meta (dict): free-form provenance.
    """

    grid: BoxGrid
    values: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise InvalidStateError(f"expected shape {self.grid.shape}, got {values.shape}")
        object.__setattr__(self, "values", values)

    def with_values(self, values: np.ndarray) -> "Field3":
        return Field3(self.grid, values, dict(self.meta))

    def check_finite(self) -> None:
        if not np.all(np.isfinite(self.values)):
            raise InvalidStateError("state has non-finite samples")


def hartree_free_space(rho: Field3) -> tuple[Field3, float]:
    """Free-space Coulomb potential of a density and its self-energy.

    The density is zero-padded to (2n)^3 and convolved with the sampled 1/|x| kernel
    (the self cell uses the exact cube average of 1/|x|).

    Returns:
        tuple[Field3, float]: potential and D(rho, rho) = (h^3/2) sum rho phi.

    Raises:
        DomainError: if rho is negative beyond round-off.
    """
    rho.check_finite()
    check_density(rho.values)
    phi, energy = rho.grid.hartree(rho.values)
    return Field3(rho.grid, phi), energy


def smeared_coulomb(z: float, center, sigma: float, r: np.ndarray) -> np.ndarray:
    """-z erf(r / (sigma sqrt 2)) / r for distances r from `center`; finite at r = 0."""
    safe = np.where(r > 0, r, 1.0)
    v = -z * erf(safe / (sigma * np.sqrt(2))) / safe
    return np.where(r > 0, v, -z * np.sqrt(2 / np.pi) / sigma)


def molecular_potential(grid: BoxGrid, charges, sigma: float | None = None) -> Field3:
    """Potential of Gaussian-smeared nuclei, summed by superposition.

    Args:
        grid (BoxGrid): lattice to sample on.
        charges (list[tuple[float, tuple[float, float, float]]]): (Z_j, r_j) pairs.
        sigma (float): smearing width, at least h (default 2h).

    Raises:
        DomainError: if a charge is negative or a nucleus is not strictly inside the box.
    """
    sigma = SMEARING_CELLS * grid.h if sigma is None else sigma
    if sigma < grid.h:
        raise DomainError(f"smearing width {sigma} is below the grid spacing {grid.h}")
    v = np.zeros(grid.shape)
    for z, center in charges:
        if z < 0:
            raise DomainError(f"nuclear charge must be nonnegative, got {z}")
        if not grid.contains(center):
            raise DomainError(f"nucleus at {tuple(center)} is outside the box")
        if z > 0:
            v += smeared_coulomb(z, center, sigma, grid.radius(center))
    return Field3(grid, v)


def resample_radial(profile, grid: BoxGrid, center=(0.0, 0.0, 0.0)) -> Field3:
    """Samples a radial profile (callable of r, or a RadialFunction) onto the lattice."""
    r = grid.radius(center)
    if callable(profile):
        return Field3(grid, profile(r))
    return Field3(grid, evaluate(profile, r.ravel()).reshape(grid.shape))


def dilate_field(u: Field3, ell: float) -> Field3:
    """Returns ell^(3/2) u(ell x), cubic interpolation, zero outside the box."""
    if not ell > 0:
        raise DomainError(f"dilation factor must be positive, got {ell}")
    if ell == 1:
        return u.with_values(u.values.copy())
    grid = u.grid
    # fractional lattice index of ell * x along each axis
    index = ell * grid.axis / grid.h + grid.n // 2
    coords = np.meshgrid(index, index, index, indexing="ij")
    values = map_coordinates(u.values, coords, order=3, mode="constant", cval=0.0)
    return u.with_values(ell ** 1.5 * values)
