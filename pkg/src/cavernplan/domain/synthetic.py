"""Synthetic hourly series with a summer/winter double peak.

Every series is a closed-form function of the hour index plus seeded noise, so
tests can recompute any value. With ``T`` the horizon, ``h = t mod 24`` the
hour of day and ``phi = t / T`` the position in the (possibly compressed) year,
where ``phi = 0`` is mid-winter and ``phi = 0.5`` mid-summer::

    envelope(phi) = (summer * sin^2(pi phi) + winter * cos^2(pi phi))
                    * (1 + cos(4 pi phi)) / 2
    diurnal(h)    = -diurnal_frac * cos(2 pi (h - 3) / 24)
    load          = base * max(0, 1 + envelope + diurnal + noise_frac * z_load)

    wind_noise[0] = z_wind[0]
    wind_noise[t] = 0.9 * wind_noise[t-1] + sqrt(0.19) * z_wind[t]
    wind_cf       = clip(wind_mean + wind_seasonal * cos(2 pi phi)
                         + wind_noise_frac * wind_noise, 0, 1)

    daylight(h)   = max(0, sin(pi (h - 6) / 12))
    solar_cf      = clip(solar_peak * daylight * (1 - solar_seasonal * cos(2 pi phi))
                         * (1 - cloud_frac * u_cloud), 0, 1)

    heat          = heat_frac * base * cos^2(pi phi)

``z_load``, ``z_wind`` (standard normal) and ``u_cloud`` (uniform on [0, 1))
are drawn in that order from ``numpy.random.default_rng(seed)``, each of
length ``T``. The shoulder seasons (``phi`` near 0.25 and 0.75) carry no
seasonal uplift; wind is strongest in winter and weakest in summer.
"""

from __future__ import annotations

import numpy as np

from .types import TimeSeriesBundle

MIN_HORIZON = 24
MAX_HORIZON = 8760


def seasonal_envelope(phi: np.ndarray, summer_peak_frac: float, winter_peak_frac: float) -> np.ndarray:
    phi = np.asarray(phi, dtype=float)
    weight = summer_peak_frac * np.sin(np.pi * phi) ** 2 + winter_peak_frac * np.cos(np.pi * phi) ** 2
    return weight * (1.0 + np.cos(4.0 * np.pi * phi)) / 2.0


def gen_seasonal_series(
    horizon: int,
    base_load: float,
    summer_peak_frac: float,
    winter_peak_frac: float,
    seed: int,
    *,
    diurnal_frac: float = 0.08,
    noise_frac: float = 0.01,
    heat_frac: float = 0.0,
    wind_mean: float = 0.35,
    wind_seasonal: float = 0.15,
    wind_noise_frac: float = 0.12,
    solar_peak: float = 0.8,
    solar_seasonal: float = 0.25,
    cloud_frac: float = 0.4,
) -> TimeSeriesBundle:
    if int(horizon) != horizon or not (MIN_HORIZON <= horizon <= MAX_HORIZON):
        raise ValueError(f"horizon must be an integer in [{MIN_HORIZON}, {MAX_HORIZON}], got {horizon!r}")
    if base_load < 0:
        raise ValueError("base_load must be >= 0")
    if summer_peak_frac < 0 or winter_peak_frac < 0:
        raise ValueError("peak fractions must be >= 0")
    T = int(horizon)
    rng = np.random.default_rng(seed)
    z_load = rng.standard_normal(T)
    z_wind = rng.standard_normal(T)
    u_cloud = rng.random(T)

    t = np.arange(T, dtype=float)
    hod = t % 24.0
    phi = t / T

    envelope = seasonal_envelope(phi, summer_peak_frac, winter_peak_frac)
    diurnal = -diurnal_frac * np.cos(2.0 * np.pi * (hod - 3.0) / 24.0)
    load = base_load * np.maximum(0.0, 1.0 + envelope + diurnal + noise_frac * z_load)

    wind_noise = np.empty(T)
    wind_noise[0] = z_wind[0]
    innov = np.sqrt(1.0 - 0.9 ** 2)
    for k in range(1, T):
        wind_noise[k] = 0.9 * wind_noise[k - 1] + innov * z_wind[k]
    wind = np.clip(wind_mean + wind_seasonal * np.cos(2.0 * np.pi * phi)
                   + wind_noise_frac * wind_noise, 0.0, 1.0)

    daylight = np.maximum(0.0, np.sin(np.pi * (hod - 6.0) / 12.0))
    solar = np.clip(solar_peak * daylight * (1.0 - solar_seasonal * np.cos(2.0 * np.pi * phi))
                    * (1.0 - cloud_frac * u_cloud), 0.0, 1.0)

    heat = heat_frac * base_load * np.cos(np.pi * phi) ** 2
    return TimeSeriesBundle(load, heat, wind, solar)


def season_windows(horizon: int) -> dict:
    """Quarter-length index windows centred on the two peaks and two shoulders.

    The winter window wraps around the horizon ends.
    """
    T = int(horizon)
    q = T // 4
    half = q // 2
    idx = np.arange(T)

    def around(centre):
        return np.sort((centre - half + np.arange(q)) % T)

    return {
        "winter_peak": around(0),
        "spring_shoulder": around(T // 4),
        "summer_peak": around(T // 2),
        "autumn_shoulder": around(3 * T // 4),
        "all": idx,
    }
