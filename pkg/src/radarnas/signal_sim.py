"""Synthetic radar recordings for four object categories.

Scenes are point-scatterer sets approaching the (static) sensor; each frame
is one coherent processing interval rendered as a complex baseband cube
[samples, chirps, antennas] under a standard chirp-sequence model:

  fast-time frequency  2*B*r / (c*T_chirp)      (beat frequency -> range)
  slow-time frequency  2*v*f_c / c              (Doppler -> radial velocity)
  antenna phase ramp   2*pi*(d/lambda)*sin(az)  (uniform linear array)

Amplitudes follow sqrt(RCS)/r^2 with a cosine one-way antenna gain; moving
limbs/wheels are modeled as a sinusoidal modulation of radial velocity.
"""

import json
import math
import struct
from dataclasses import dataclass, field, asdict
from enum import IntEnum
from pathlib import Path

import numpy as np

C_MPS = 299_792_458.0

RAW_MAGIC = b"RRNAS1"
_RAW_HEADER = struct.Struct("<6sHIIIIQ")  # magic, version, n_samples, n_chirps, n_antennas, dtype code, reserved
RAW_DTYPE_C64 = 1  # interleaved little-endian float32 real/imag


class ScattererOutOfUnambiguousRange(ValueError):
    """Scatterer range or velocity falls outside the unambiguous interval."""


class Category(IntEnum):
    CAR = 0
    PEDESTRIAN = 1
    TWO_WHEELER = 2
    OVERRIDABLE = 3


@dataclass
class RadarConfig:
    carrier_freq_hz: float = 76.5e9
    bandwidth_hz: float = 850e6
    cpi_duration_s: float = 16e-3
    n_samples: int = 128
    n_chirps: int = 128
    n_antennas: int = 8
    antenna_spacing_wavelengths: float = 0.5
    noise_floor_db: float = -55.0
    dynamic_range_db: float = 60.0
    rng_seed: int = 0

    def __post_init__(self):
        if min(self.carrier_freq_hz, self.bandwidth_hz, self.cpi_duration_s) <= 0:
            raise ValueError("physical quantities must be positive")
        if self.n_antennas < 2:
            raise ValueError("need at least 2 antennas")
        if self.dynamic_range_db <= 0:
            raise ValueError("dynamic_range_db must be positive")

    @property
    def wavelength_m(self):
        return C_MPS / self.carrier_freq_hz

    @property
    def chirp_duration_s(self):
        return self.cpi_duration_s / self.n_chirps

    @property
    def range_bin_m(self):
        return C_MPS / (2.0 * self.bandwidth_hz)

    @property
    def velocity_bin_mps(self):
        return C_MPS / (2.0 * self.carrier_freq_hz * self.cpi_duration_s)

    @property
    def max_range_m(self):
        return self.n_samples * self.range_bin_m

    @property
    def max_velocity_mps(self):
        """Half-open unambiguous radial velocity interval is +-max_velocity_mps."""
        return C_MPS / (4.0 * self.carrier_freq_hz * self.chirp_duration_s)


@dataclass
class Scatterer:
    range_m: float
    radial_velocity_mps: float
    azimuth_rad: float
    rcs_dbsm: float
    micro_doppler_amplitude_mps: float = 0.0
    micro_doppler_freq_hz: float = 0.0


@dataclass
class SceneObject:
    category: Category
    scatterers: list
    centroid_xy_m: tuple
    lateral_velocity_mps: float = 0.0


@dataclass
class RawFrame:
    iq: np.ndarray  # complex64 [n_samples, n_chirps, n_antennas]
    truth: list  # SceneObject snapshots at frame time


@dataclass
class TrackRecording:
    track_id: int
    category: Category
    frames: list
    scenario_tag: str = ""


@dataclass
class DatasetSpec:
    """Per-category track counts plus frame timing for a generated dataset.

    Default counts keep the source campaign's class imbalance
    (car : pedestrian : two-wheeler : overridable close to 573:223:178:689)
    at desk scale.
    """

    tracks: dict = field(
        default_factory=lambda: {
            Category.CAR: 20,
            Category.PEDESTRIAN: 8,
            Category.TWO_WHEELER: 6,
            Category.OVERRIDABLE: 24,
        }
    )
    frames_per_track: int = 12
    frame_period_s: float = 0.064


# Per-category generator settings: scatterer count range, footprint
# semi-axes (m), per-scatterer RCS normal (mean, sigma, lo, hi) in dBsm,
# micro-Doppler amplitude (m/s) and frequency (Hz) ranges. RCS means are
# ordered car > two-wheeler >= pedestrian > overridable.
_CATEGORY_PARAMS = {
    Category.CAR: dict(n=(5, 15), ax=(2.2, 0.9), rcs=(13.0, 3.0, 6.0, 24.0), md_amp=None, md_freq=None),
    Category.PEDESTRIAN: dict(n=(2, 5), ax=(0.35, 0.35), rcs=(-2.0, 2.0, -8.0, 3.0), md_amp=(0.5, 1.5), md_freq=(120.0, 350.0)),
    Category.TWO_WHEELER: dict(n=(3, 8), ax=(0.9, 0.3), rcs=(5.0, 2.0, 0.0, 10.0), md_amp=(0.8, 2.0), md_freq=(150.0, 400.0)),
    Category.OVERRIDABLE: dict(n=(1, 3), ax=(0.45, 0.45), rcs=(-14.0, 3.0, -22.0, -7.0), md_amp=None, md_freq=None),
}

# Frame-to-frame jitter of scatterer offsets for articulated objects (m).
_NONRIGID_JITTER_M = 0.08


@dataclass
class _ObjectState:
    """Cartesian description of one object, from which per-frame
    SceneObject snapshots are derived."""

    category: Category
    offsets: np.ndarray  # (n, 2) scatterer offsets from the centroid
    rcs_dbsm: np.ndarray
    md_amp: np.ndarray
    md_freq: np.ndarray
    centroid0: np.ndarray  # (2,) at t=0
    vel_xy: np.ndarray  # (2,) relative velocity (x: downrange, y: cross)


def _synth_state(category, rng, x_range=(12.0, 19.0), y_range=(-3.0, 3.0)):
    p = _CATEGORY_PARAMS[Category(category)]
    n = int(rng.integers(p["n"][0], p["n"][1] + 1))
    theta = rng.uniform(0.0, math.pi)
    u = rng.uniform(0.0, 1.0, n)
    ang = rng.uniform(0.0, 2.0 * math.pi, n)
    ex, ey = p["ax"]
    pts = np.stack([np.sqrt(u) * ex * np.cos(ang), np.sqrt(u) * ey * np.sin(ang)], axis=1)
    rot = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
    offsets = pts @ rot.T

    mu, sig, lo, hi = p["rcs"]
    rcs = np.clip(rng.normal(mu, sig, n), lo, hi)
    if p["md_amp"] is None:
        md_amp = np.zeros(n)
        md_freq = np.zeros(n)
        v_lat = 0.0
    else:
        md_amp = rng.uniform(*p["md_amp"], n)
        md_freq = rng.uniform(*p["md_freq"], n)
        v_lat = rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])

    centroid = np.array([rng.uniform(*x_range), rng.uniform(*y_range)])
    return _ObjectState(
        category=Category(category),
        offsets=offsets,
        rcs_dbsm=rcs,
        md_amp=md_amp,
        md_freq=md_freq,
        centroid0=centroid,
        vel_xy=np.array([0.0, v_lat]),
    )


def _snapshot(state, t, jitter_rng=None):
    """SceneObject for a state advanced to time t (optionally with
    non-rigid scatterer jitter for articulated categories)."""
    centroid = state.centroid0 + state.vel_xy * t
    offsets = state.offsets
    if jitter_rng is not None and state.md_amp.any():
        offsets = offsets + jitter_rng.normal(0.0, _NONRIGID_JITTER_M, offsets.shape)
    pos = centroid[None, :] + offsets
    rng_m = np.hypot(pos[:, 0], pos[:, 1])
    az = np.arctan2(pos[:, 1], pos[:, 0])
    # radial velocity = projection of the relative velocity on the line of sight
    vr = (pos @ state.vel_xy) / rng_m
    scatterers = [
        Scatterer(
            range_m=float(rng_m[i]),
            radial_velocity_mps=float(vr[i]),
            azimuth_rad=float(az[i]),
            rcs_dbsm=float(state.rcs_dbsm[i]),
            micro_doppler_amplitude_mps=float(state.md_amp[i]),
            micro_doppler_freq_hz=float(state.md_freq[i]),
        )
        for i in range(len(rng_m))
    ]
    return SceneObject(
        category=state.category,
        scatterers=scatterers,
        centroid_xy_m=(float(centroid[0]), float(centroid[1])),
        lateral_velocity_mps=float(state.vel_xy[1]),
    )


def synth_scene(category, rng):
    """Draw one object of the given category with category-typical
    scatterer count, footprint, RCS level, and micro-Doppler."""
    return _snapshot(_synth_state(category, rng), 0.0)


def render_frame(scene, cfg, rng, add_noise=True):
    """Render one CPI of a scene as the complex baseband cube.

    Each scatterer contributes a separable 2D complex exponential (times an
    antenna phase ramp); micro-Doppler enters as the integrated sinusoidal
    velocity modulation of the slow-time phase. Complex white noise at
    cfg.noise_floor_db is added last.
    """
    n_s, n_c, n_a = cfg.n_samples, cfg.n_chirps, cfg.n_antennas
    iq = np.zeros((n_s, n_c, n_a), dtype=np.complex128)
    lam = cfg.wavelength_m
    t_chirp = cfg.chirp_duration_s
    s_idx = np.arange(n_s)
    t_slow = np.arange(n_c) * t_chirp
    m_idx = np.arange(n_a)

    for sc in scene.scatterers:
        if not 0.0 < sc.range_m < cfg.max_range_m:
            raise ScattererOutOfUnambiguousRange(
                f"range {sc.range_m:.2f} m outside (0, {cfg.max_range_m:.2f})"
            )
        if abs(sc.radial_velocity_mps) + sc.micro_doppler_amplitude_mps >= cfg.max_velocity_mps:
            raise ScattererOutOfUnambiguousRange(
                f"velocity {sc.radial_velocity_mps:+.2f} m/s (+{sc.micro_doppler_amplitude_mps:.2f} "
                f"micro-Doppler) outside +-{cfg.max_velocity_mps:.2f}"
            )

        amp = 10.0 ** (sc.rcs_dbsm / 20.0) / sc.range_m**2 * math.cos(sc.azimuth_rad)
        beat_cyc_per_sample = 2.0 * cfg.bandwidth_hz * sc.range_m / (C_MPS * n_s)
        fast = np.exp(1j * 2.0 * math.pi * beat_cyc_per_sample * s_idx)

        radial = sc.radial_velocity_mps * t_slow
        if sc.micro_doppler_amplitude_mps > 0.0:
            f_md = sc.micro_doppler_freq_hz
            phase0 = rng.uniform(0.0, 2.0 * math.pi)
            # displacement = integral of A*sin(2*pi*f*t + phase0)
            radial = radial + sc.micro_doppler_amplitude_mps / (2.0 * math.pi * f_md) * (
                np.cos(phase0) - np.cos(2.0 * math.pi * f_md * t_slow + phase0)
            )
        carrier_phase = -4.0 * math.pi * sc.range_m / lam
        slow = np.exp(1j * (4.0 * math.pi / lam * radial + carrier_phase))

        ant = np.exp(1j * 2.0 * math.pi * cfg.antenna_spacing_wavelengths * math.sin(sc.azimuth_rad) * m_idx)
        iq += amp * fast[:, None, None] * slow[None, :, None] * ant[None, None, :]

    if add_noise:
        sigma = math.sqrt(10.0 ** (cfg.noise_floor_db / 10.0) / 2.0)
        iq += sigma * (rng.standard_normal(iq.shape) + 1j * rng.standard_normal(iq.shape))

    return RawFrame(iq=iq.astype(np.complex64), truth=[scene])


def _track_rng(seed, track_index):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(track_index,)))


def _simulate_track(track_id, category, cfg, spec, rng):
    state = _synth_state(category, rng)
    v_approach = rng.uniform(2.0, 5.0)
    state.vel_xy = np.array([-v_approach, state.vel_xy[1]])
    frames = []
    for f in range(spec.frames_per_track):
        scene = _snapshot(state, f * spec.frame_period_s, jitter_rng=rng)
        frames.append(render_frame(scene, cfg, rng))
    tag = f"approach_{Category(category).name.lower()}_{v_approach:.1f}mps"
    return TrackRecording(track_id=track_id, category=Category(category), frames=frames, scenario_tag=tag)


def generate_dataset(spec, cfg, seed=0):
    """Generate labeled tracks per spec.tracks; each track is an approach
    (range decreasing over frames). Deterministic in (spec, cfg, seed):
    every track gets its own generator spawned from the seed."""
    for cat, count in spec.tracks.items():
        if count < 1:
            raise ValueError(f"track count for {Category(cat).name} must be >= 1")
    order = []
    for cat in sorted(spec.tracks, key=int):
        order.extend([Category(cat)] * spec.tracks[cat])
    tracks = []
    for track_id, cat in enumerate(order):
        tracks.append(_simulate_track(track_id, cat, cfg, spec, _track_rng(seed, track_id)))
    return tracks


def split_total_tracks(total):
    """Distribute a total track count over categories proportionally to the
    default imbalance (largest remainder)."""
    ratios = {
        Category.CAR: 573,
        Category.PEDESTRIAN: 223,
        Category.TWO_WHEELER: 178,
        Category.OVERRIDABLE: 689,
    }
    denom = sum(ratios.values())
    raw = {c: total * r / denom for c, r in ratios.items()}
    counts = {c: int(raw[c]) for c in ratios}
    rem = total - sum(counts.values())
    for c in sorted(ratios, key=lambda c: raw[c] - counts[c], reverse=True)[:rem]:
        counts[c] += 1
    return counts


# ---------------------------------------------------------------------------
# On-disk format: one directory per track with meta.json plus one .iq file
# per frame (32-byte header, then interleaved f32 real/imag, C order).
# ---------------------------------------------------------------------------


def save_frame_iq(path, iq):
    n_s, n_c, n_a = iq.shape
    header = _RAW_HEADER.pack(RAW_MAGIC, 1, n_s, n_c, n_a, RAW_DTYPE_C64, 0)
    payload = np.ascontiguousarray(iq.astype(np.complex64)).view(np.float32).astype("<f4").tobytes()
    Path(path).write_bytes(header + payload)


def load_frame_iq(path):
    blob = Path(path).read_bytes()
    magic, version, n_s, n_c, n_a, dtype_code, _ = _RAW_HEADER.unpack(blob[: _RAW_HEADER.size])
    if magic != RAW_MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    if dtype_code != RAW_DTYPE_C64:
        raise ValueError(f"{path}: unsupported dtype code {dtype_code}")
    flat = np.frombuffer(blob[_RAW_HEADER.size :], dtype="<f4")
    if flat.size != 2 * n_s * n_c * n_a:
        raise ValueError(f"{path}: truncated payload")
    return flat.view(np.complex64).reshape(n_s, n_c, n_a).copy()


def _scene_to_dict(obj):
    return {
        "category": obj.category.name.lower(),
        "centroid_xy_m": [obj.centroid_xy_m[0], obj.centroid_xy_m[1]],
        "lateral_velocity_mps": obj.lateral_velocity_mps,
        "scatterers": [asdict(s) for s in obj.scatterers],
    }


def _scene_from_dict(d):
    return SceneObject(
        category=Category[d["category"].upper()],
        scatterers=[Scatterer(**s) for s in d["scatterers"]],
        centroid_xy_m=tuple(d["centroid_xy_m"]),
        lateral_velocity_mps=d["lateral_velocity_mps"],
    )


def write_dataset(tracks, cfg, out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for tr in tracks:
        tdir = out / f"track_{tr.track_id:05d}"
        tdir.mkdir(exist_ok=True)
        meta = {
            "track_id": tr.track_id,
            "category": tr.category.name.lower(),
            "scenario_tag": tr.scenario_tag,
            "n_frames": len(tr.frames),
            "config": asdict(cfg),
            "truth": [[_scene_to_dict(o) for o in fr.truth] for fr in tr.frames],
        }
        (tdir / "meta.json").write_text(json.dumps(meta, sort_keys=True, indent=1))
        for i, fr in enumerate(tr.frames):
            save_frame_iq(tdir / f"frame_{i:04d}.iq", fr.iq)


def read_dataset(in_dir):
    """Load a written dataset. Returns (tracks, cfg)."""
    root = Path(in_dir)
    tdirs = sorted(d for d in root.iterdir() if d.is_dir() and d.name.startswith("track_"))
    if not tdirs:
        raise FileNotFoundError(f"no track directories under {root}")
    tracks = []
    cfg = None
    for tdir in tdirs:
        try:
            meta = json.loads((tdir / "meta.json").read_text())
            if cfg is None:
                cfg = RadarConfig(**meta["config"])
            frames = []
            for i in range(meta["n_frames"]):
                iq = load_frame_iq(tdir / f"frame_{i:04d}.iq")
                truth = [_scene_from_dict(d) for d in meta["truth"][i]]
                frames.append(RawFrame(iq=iq, truth=truth))
        except (KeyError, ValueError, OSError) as e:
            raise ValueError(f"corrupt track data in {tdir}: {e}") from e
        tracks.append(
            TrackRecording(
                track_id=meta["track_id"],
                category=Category[meta["category"].upper()],
                frames=frames,
                scenario_tag=meta["scenario_tag"],
            )
        )
    return tracks, cfg
