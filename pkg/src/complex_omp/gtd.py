"""Stepped-frequency point-scatterer (GTD) model.

A target of d point scatterers at ranges r_p with complex amplitudes A_p,
observed at frequencies f_l = f0 + l*df, returns

    y_l = sum_p A_p exp(-j 4 pi f_l r_p / s)

which is Psi_raw @ x for the delay dictionary [Psi_raw]_{l,p} = exp(-j 2 pi f_l tau_p),
tau_p = 2 r_p / s, over a grid of candidate ranges.

Noise
-----
Complex white Gaussian noise is generated from numpy's PCG64 bit generator:
``numpy.random.Generator(PCG64(seed)).random(2*m)`` gives uniforms u, split
into u1 = u[:m], u2 = u[m:], and Box-Muller maps them to
re = sqrt(-2 ln(1-u1)) cos(2 pi u2), im = sqrt(-2 ln(1-u1)) sin(2 pi u2),
each scaled by sigma/sqrt(2).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .core import as_cvector
from .dictionary import Dictionary
from .errors import DegenerateInputError, InconsistencyError, ParseError

SPEED_OF_LIGHT = 3e8
GRID_MATCH_TOL = 1e-12

PAPER_SCATTERER_RANGES = (0.3, 0.85, 2.25, 4.0, 4.75)


@dataclass(frozen=True, eq=False)
class GtdScene:
    f0: float
    df: float
    num_freqs: int
    speed: float
    range_grid: np.ndarray
    scatterers: tuple = ()
    random_phase: bool = False
    snr_db: float = math.inf

    def __post_init__(self):
        grid = np.asarray(self.range_grid, dtype=np.float64).reshape(-1).copy()
        if self.num_freqs < 1 or not self.df > 0:
            raise ValueError("need num_freqs >= 1 and a positive frequency step")
        if not self.speed > 0:
            raise ValueError("propagation speed must be positive")
        if grid.size < 2 or np.any(np.diff(grid) <= 0):
            raise ValueError("range grid must be strictly increasing with at least 2 points")
        grid.setflags(write=False)
        object.__setattr__(self, "range_grid", grid)
        scat = tuple((float(r), complex(a)) for r, a in self.scatterers)
        object.__setattr__(self, "scatterers", scat)
        for r, _ in scat:
            self.grid_index(r)

    @property
    def frequencies(self):
        return self.f0 + self.df * np.arange(self.num_freqs)

    @property
    def delays(self):
        return 2.0 * self.range_grid / self.speed

    def grid_index(self, r):
        i = int(np.argmin(np.abs(self.range_grid - r)))
        if abs(self.range_grid[i] - r) > GRID_MATCH_TOL:
            raise InconsistencyError(f"scatterer range {r} m is not on the range grid")
        return i

    def with_scatterers(self, scatterers):
        return GtdScene(
            self.f0, self.df, self.num_freqs, self.speed, self.range_grid,
            tuple(scatterers), self.random_phase, self.snr_db,
        )

    def planted(self):
        """Sparse vector over the grid holding the raw amplitudes."""
        x = np.zeros(self.range_grid.size, dtype=np.complex128)
        for r, a in self.scatterers:
            x[self.grid_index(r)] += a
        return x


def range_grid(start, step, stop):
    """Inclusive, evenly spaced grid; endpoints are rounded onto multiples of ``step``."""
    count = int(round((stop - start) / step)) + 1
    return np.round(start + step * np.arange(count), 12)


def paper_preset(scatterers=None, snr_db=math.inf):
    """1 GHz start, 10 MHz step, 30 frequencies, ranges 0..5 m every 5 cm.

    ``scatterers`` defaults to the five standard locations with unit amplitude.
    """
    if scatterers is None:
        scatterers = [(r, 1.0) for r in PAPER_SCATTERER_RANGES]
    return GtdScene(
        f0=1e9, df=10e6, num_freqs=30, speed=SPEED_OF_LIGHT,
        range_grid=range_grid(0.0, 0.05, 5.0), scatterers=tuple(scatterers),
        random_phase=True, snr_db=snr_db,
    )


def raw_gtd_matrix(scene):
    return np.exp(-2j * np.pi * np.outer(scene.frequencies, scene.delays))


def build_gtd_dictionary(scene):
    """Unit-norm delay dictionary; every raw column has norm sqrt(m)."""
    raw = raw_gtd_matrix(scene)
    return Dictionary(raw / math.sqrt(scene.num_freqs), scene.range_grid)


def synthesize_measurement(scene):
    f = scene.frequencies
    y = np.zeros(scene.num_freqs, dtype=np.complex128)
    for r, a in scene.scatterers:
        scene.grid_index(r)
        y += a * np.exp(-4j * np.pi * f * r / scene.speed)
    return y


def make_rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def cawgn(m, sigma, rng):
    """``m`` samples of CN(0, sigma**2) via Box-Muller on the generator's uniforms."""
    u = rng.random(2 * m)
    rad = np.sqrt(-2.0 * np.log1p(-u[:m]))
    ang = 2.0 * np.pi * u[m:]
    return (sigma / math.sqrt(2.0)) * (rad * np.cos(ang) + 1j * rad * np.sin(ang))


def snr_sigma(y, snr_db):
    """Noise standard deviation giving the requested per-sample SNR."""
    y = as_cvector(y, "y")
    if math.isinf(snr_db) and snr_db > 0:
        return 0.0
    power = float(np.vdot(y, y).real)
    if power == 0.0:
        raise DegenerateInputError("cannot set a finite SNR on a zero signal")
    return math.sqrt(power / (y.size * 10.0 ** (snr_db / 10.0)))


def add_cawgn(y, snr_db, seed):
    """Return ``(y + noise, sigma)``; ``snr_db=inf`` adds nothing."""
    y = as_cvector(y, "y")
    sigma = snr_sigma(y, snr_db)
    if sigma == 0.0:
        return y.copy(), 0.0
    return y + cawgn(y.size, sigma, make_rng(seed)), sigma


def _num(cfg, key, default=None):
    if key not in cfg:
        if default is None:
            raise ParseError("missing key", field=key)
        return default
    val = cfg[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ParseError(f"expected a number, got {val!r}", field=key)
    return val


def parse_snr(val, field_name="snr_db"):
    if isinstance(val, str):
        if val.strip().lower() in ("inf", "+inf", "infinity"):
            return math.inf
        raise ParseError(f"expected a number or 'inf', got {val!r}", field=field_name)
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ParseError(f"expected a number or 'inf', got {val!r}", field=field_name)
    return float(val)


def scene_from_config(cfg):
    """Build a scene from the JSON scene schema.

    Keys: f0_hz, df_hz, num_freqs, speed_mps, range_min_m, range_step_m,
    range_max_m, scatterers (list of {range_m, amp_re, amp_im}), optional
    random_phase (bool) and snr_db (number or "inf").
    """
    if not isinstance(cfg, dict):
        raise ParseError("scene config must be a JSON object")
    grid = range_grid(_num(cfg, "range_min_m"), _num(cfg, "range_step_m"), _num(cfg, "range_max_m"))
    raw = cfg.get("scatterers", [])
    if not isinstance(raw, list):
        raise ParseError("expected a list", field="scatterers")
    scat = []
    for i, s in enumerate(raw):
        where = f"scatterers[{i}]"
        if not isinstance(s, dict):
            raise ParseError("expected an object", field=where)
        r = _num(s, "range_m") if "range_m" in s else None
        if r is None:
            raise ParseError("missing key", field=f"{where}.range_m")
        a = complex(s.get("amp_re", 1.0), s.get("amp_im", 0.0))
        scat.append((r, a))
    num_freqs = _num(cfg, "num_freqs")
    if int(num_freqs) != num_freqs:
        raise ParseError("expected an integer", field="num_freqs")
    try:
        return GtdScene(
            f0=float(_num(cfg, "f0_hz")),
            df=float(_num(cfg, "df_hz")),
            num_freqs=int(num_freqs),
            speed=float(_num(cfg, "speed_mps", SPEED_OF_LIGHT)),
            range_grid=grid,
            scatterers=tuple(scat),
            random_phase=bool(cfg.get("random_phase", False)),
            snr_db=parse_snr(cfg.get("snr_db", "inf")),
        )
    except InconsistencyError as exc:
        raise ParseError(str(exc), field="scatterers") from exc
