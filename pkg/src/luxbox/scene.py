"""Shoebox room model, parametric design spaces, feature encoding, and analysis grids.

Room-local coordinates used throughout the package: the glazed wall lies in the
plane y = 0, x runs along that wall (0 .. width), y runs into the room
(0 .. depth), z is up.  ``orientation`` is the compass direction of the glazed
wall's outward normal and only matters once sun geometry enters the picture
(see :mod:`luxbox.daylight`); all view-quality geometry is orientation-free.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

ROOM_HEIGHT = 3.5
GLAZING_TRANSMITTANCE = 0.85

FEATURE_NAMES = (
    "orientation_n",
    "orientation_e",
    "orientation_s",
    "orientation_w",
    "room_dimensions",
    "reflectance",
    "shading",
    "sill_height",
    "window_height",
    "divisions",
)
N_FEATURES = len(FEATURE_NAMES)
# indices 4..9 are numeric features subject to min-max scaling
NUMERIC_FEATURES = FEATURE_NAMES[4:]


class DesignSpaceError(ValueError):
    """Raised for malformed design spaces (empty variable lists, bad files)."""


class ClampWarning(UserWarning):
    """Emitted when an encoded value falls outside the normalization bounds."""


class Orientation(Enum):
    N = "N"
    E = "E"
    S = "S"
    W = "W"

    @property
    def index(self) -> int:
        return ORIENTATION_ORDER.index(self)


ORIENTATION_ORDER = (Orientation.N, Orientation.E, Orientation.S, Orientation.W)


class ShadingState(Enum):
    NONE = "none"
    LOUVRE15 = "louvre15"


class WindowDivisions(Enum):
    ONE_FULL_WIDTH = "one_full_width"
    THREE_EQUAL = "three_equal"


@dataclass(frozen=True)
class RoomConfig:
    """One shoebox design alternative.

    ``width`` is the glazed-wall axis (x), ``depth`` the perpendicular axis (y).
    Height and glazing transmittance are fixed parameters of the study space.
    """

    width: float
    depth: float
    orientation: Orientation
    reflectance: float
    shading: ShadingState
    sill_height: float
    window_height: float
    divisions: WindowDivisions
    height: float = ROOM_HEIGHT
    glazing_transmittance: float = GLAZING_TRANSMITTANCE

    def __post_init__(self) -> None:
        if self.width <= 0 or self.depth <= 0:
            raise ValueError(f"room dimensions must be positive, got {self.width}x{self.depth}")
        if not 0.0 < self.reflectance < 1.0:
            raise ValueError(f"reflectance must lie in (0, 1), got {self.reflectance}")
        # head may touch the ceiling plane: the generator's extreme sill/height
        # combination lands exactly on it
        if self.sill_height + self.window_height > self.height:
            raise ValueError(
                f"window head {self.sill_height + self.window_height} exceeds "
                f"ceiling height {self.height}"
            )

    @property
    def floor_area(self) -> float:
        return self.width * self.depth

    @property
    def head_height(self) -> float:
        """Top edge of the glazing above the floor."""
        return self.sill_height + self.window_height

    def to_dict(self) -> dict:
        return {
            "orientation": self.orientation.value,
            "width": self.width,
            "depth": self.depth,
            "reflectance": self.reflectance,
            "shading": self.shading.value,
            "sill_height": self.sill_height,
            "window_height": self.window_height,
            "divisions": self.divisions.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RoomConfig":
        return cls(
            width=float(d["width"]),
            depth=float(d["depth"]),
            orientation=Orientation(d["orientation"]),
            reflectance=float(d["reflectance"]),
            shading=ShadingState(d["shading"]),
            sill_height=float(d["sill_height"]),
            window_height=float(d["window_height"]),
            divisions=WindowDivisions(d["divisions"]),
        )


@dataclass(frozen=True)
class DesignSpace:
    """Per-variable value lists whose Cartesian product defines the alternatives.

    The room dimension pair (width, depth) varies jointly as a single variable,
    matching how the generator treats "space dimensions" as one alternative axis.
    """

    orientations: tuple[Orientation, ...]
    dimensions: tuple[tuple[float, float], ...]
    reflectances: tuple[float, ...]
    shadings: tuple[ShadingState, ...]
    sill_heights: tuple[float, ...]
    window_heights: tuple[float, ...]
    divisions: tuple[WindowDivisions, ...]

    def __post_init__(self) -> None:
        for name, values in self.variable_lists().items():
            if len(values) == 0:
                raise DesignSpaceError(f"variable list '{name}' is empty")

    def variable_lists(self) -> dict:
        return {
            "orientations": self.orientations,
            "dimensions": self.dimensions,
            "reflectances": self.reflectances,
            "shadings": self.shadings,
            "sill_heights": self.sill_heights,
            "window_heights": self.window_heights,
            "divisions": self.divisions,
        }

    @property
    def size(self) -> int:
        n = 1
        for values in self.variable_lists().values():
            n *= len(values)
        return n

    def to_dict(self) -> dict:
        return {
            "orientations": [o.value for o in self.orientations],
            "dimensions": [list(d) for d in self.dimensions],
            "reflectances": list(self.reflectances),
            "shadings": [s.value for s in self.shadings],
            "sill_heights": list(self.sill_heights),
            "window_heights": list(self.window_heights),
            "divisions": [d.value for d in self.divisions],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DesignSpace":
        try:
            return cls(
                orientations=tuple(Orientation(o) for o in d["orientations"]),
                dimensions=tuple((float(w), float(dep)) for w, dep in d["dimensions"]),
                reflectances=tuple(float(r) for r in d["reflectances"]),
                shadings=tuple(ShadingState(s) for s in d["shadings"]),
                sill_heights=tuple(float(s) for s in d["sill_heights"]),
                window_heights=tuple(float(h) for h in d["window_heights"]),
                divisions=tuple(WindowDivisions(v) for v in d["divisions"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DesignSpaceError):
                raise
            raise DesignSpaceError(f"malformed design space: {exc}") from exc

    @classmethod
    def from_file(cls, path: str | Path) -> "DesignSpace":
        """Load a declarative JSON design space (one list per variable)."""
        try:
            payload = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise DesignSpaceError(f"cannot read design space from {path}: {exc}") from exc
        return cls.from_dict(payload)


# Training design space: 4 orientations x 3 dimension pairs x 3 reflectances
# x 2 shadings x 4 sills x 5 window heights x 2 division states = 2880.
TRAINING_SPACE = DesignSpace(
    orientations=ORIENTATION_ORDER,
    dimensions=((3.0, 4.0), (6.0, 7.0), (8.0, 10.0)),
    reflectances=(0.2, 0.4, 0.7),
    shadings=(ShadingState.NONE, ShadingState.LOUVRE15),
    sill_heights=(0.5, 0.7, 0.9, 1.1),
    window_heights=(1.2, 1.5, 1.8, 2.1, 2.4),
    divisions=(WindowDivisions.ONE_FULL_WIDTH, WindowDivisions.THREE_EQUAL),
)

# Held-out validation space: every value interior to the training ranges; 64 configs.
VALIDATION_SPACE = DesignSpace(
    orientations=(Orientation.S, Orientation.E),
    dimensions=((7.0, 8.0), (5.0, 6.0)),
    reflectances=(0.3, 0.6),
    shadings=(ShadingState.NONE, ShadingState.LOUVRE15),
    sill_heights=(0.8, 1.0),
    window_heights=(1.6, 2.0),
    divisions=(WindowDivisions.ONE_FULL_WIDTH,),
)

PRESETS = {"table1": TRAINING_SPACE, "table4": VALIDATION_SPACE}


def resolve_space(preset_or_path: str | Path) -> DesignSpace:
    """Resolve a preset name or a JSON file path to a DesignSpace."""
    key = str(preset_or_path)
    if key in PRESETS:
        return PRESETS[key]
    return DesignSpace.from_file(preset_or_path)


def enumerate_design_space(space: DesignSpace) -> list[RoomConfig]:
    """Full Cartesian product of the variable lists, row-major in declared order.

    The last declared variable (divisions) varies fastest; re-enumeration of
    the same space always yields the identical order.
    """
    configs = []
    for orient, dims, refl, shade, sill, win_h, div in itertools.product(
        space.orientations,
        space.dimensions,
        space.reflectances,
        space.shadings,
        space.sill_heights,
        space.window_heights,
        space.divisions,
    ):
        configs.append(
            RoomConfig(
                width=dims[0],
                depth=dims[1],
                orientation=orient,
                reflectance=refl,
                shading=shade,
                sill_height=sill,
                window_height=win_h,
                divisions=div,
            )
        )
    return configs


@dataclass(frozen=True)
class WindowRect:
    """Axis-aligned glazing rectangle in glazed-wall coordinates.

    ``left`` is measured along the wall from x = 0; ``sill`` is the bottom
    edge above the floor.  The rectangle lives in the plane y = 0.
    """

    left: float
    sill: float
    width: float
    height: float

    @property
    def right(self) -> float:
        return self.left + self.width

    @property
    def top(self) -> float:
        return self.sill + self.height

    @property
    def area(self) -> float:
        return self.width * self.height

    def corners(self) -> np.ndarray:
        """World-space (room-local) corner positions, counter-clockwise from bottom-left."""
        return np.array(
            [
                [self.left, 0.0, self.sill],
                [self.right, 0.0, self.sill],
                [self.right, 0.0, self.top],
                [self.left, 0.0, self.top],
            ]
        )


def window_rects(config: RoomConfig) -> list[WindowRect]:
    """Glazing rectangles on the window wall.

    ONE_FULL_WIDTH: a single rectangle spanning the full wall width.
    THREE_EQUAL: the wall is divided into five equal segments
    window-gap-window-gap-window, so each window (and each gap) is one fifth
    of the wall width and the glazed area is 0.6x the full-width case.
    """
    if config.divisions is WindowDivisions.ONE_FULL_WIDTH:
        return [
            WindowRect(0.0, config.sill_height, config.width, config.window_height)
        ]
    seg = config.width / 5.0
    return [
        WindowRect(2 * i * seg, config.sill_height, seg, config.window_height)
        for i in range(3)
    ]


def glazed_extent(config: RoomConfig) -> tuple[float, float]:
    """Leftmost and rightmost glazing x over all windows."""
    rects = window_rects(config)
    return min(r.left for r in rects), max(r.right for r in rects)


def glazed_area(config: RoomConfig) -> float:
    return sum(r.area for r in window_rects(config))


@dataclass(frozen=True)
class AnalysisGrid:
    """Regular workplane sensor grid, inset from all walls.

    Points are ordered row-major over (y, x): the row nearest the window wall
    first, x ascending within a row.  ``cell_area`` is the nominal area per
    sensor (spacing squared).
    """

    xs: np.ndarray
    ys: np.ndarray
    z: float
    spacing: float
    wall_offset: float

    @property
    def nx(self) -> int:
        return len(self.xs)

    @property
    def ny(self) -> int:
        return len(self.ys)

    @property
    def n_points(self) -> int:
        return self.nx * self.ny

    @property
    def cell_area(self) -> float:
        return self.spacing * self.spacing

    def points(self) -> np.ndarray:
        """(n_points, 3) array of sensor positions in room-local coordinates."""
        gx, gy = np.meshgrid(self.xs, self.ys)  # rows indexed by y
        pts = np.column_stack([gx.ravel(), gy.ravel(), np.full(gx.size, self.z)])
        return pts


DEFAULT_GRID_SPACING = 0.5
DEFAULT_WORKPLANE = 0.76
DEFAULT_WALL_OFFSET = 0.25


def _axis_coords(length: float, spacing: float, offset: float) -> np.ndarray:
    span = length - 2.0 * offset
    if span < 0:
        raise ValueError(f"wall offset {offset} leaves no interior for length {length}")
    # +1e-9 guards against float droop on exact multiples
    n = int(np.floor(span / spacing + 1e-9)) + 1
    return offset + spacing * np.arange(n)


def build_grid(
    config: RoomConfig,
    spacing: float = DEFAULT_GRID_SPACING,
    workplane: float = DEFAULT_WORKPLANE,
    offset: float = DEFAULT_WALL_OFFSET,
) -> AnalysisGrid:
    """Regular analysis grid at workplane height, inset by ``offset`` from each wall."""
    if spacing <= 0:
        raise ValueError(f"grid spacing must be positive, got {spacing}")
    if offset >= min(config.width, config.depth) / 2.0:
        raise ValueError(
            f"wall offset {offset} leaves an empty grid in a "
            f"{config.width}x{config.depth} room"
        )
    xs = _axis_coords(config.width, spacing, offset)
    ys = _axis_coords(config.depth, spacing, offset)
    return AnalysisGrid(xs=xs, ys=ys, z=workplane, spacing=spacing, wall_offset=offset)


@dataclass(frozen=True)
class NormalizationBounds:
    """Min-max bounds for the six numeric feature slots (indices 4..9).

    Bounds are derived once from the training design space and persisted with
    the model so validation/UI encodings stay consistent.  Flag features
    (shading, divisions) always use (0, 1).
    """

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self) -> None:
        if len(self.lo) != len(NUMERIC_FEATURES) or len(self.hi) != len(NUMERIC_FEATURES):
            raise ValueError("bounds must cover the six numeric features")

    @classmethod
    def from_space(cls, space: DesignSpace) -> "NormalizationBounds":
        areas = [w * d for w, d in space.dimensions]
        lo = np.array([min(areas), min(space.reflectances), 0.0, min(space.sill_heights), min(space.window_heights), 0.0])
        hi = np.array([max(areas), max(space.reflectances), 1.0, max(space.sill_heights), max(space.window_heights), 1.0])
        return cls(lo=lo, hi=hi)

    def to_dict(self) -> dict:
        return {
            name: [float(l), float(h)]
            for name, l, h in zip(NUMERIC_FEATURES, self.lo, self.hi)
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NormalizationBounds":
        lo = np.array([d[name][0] for name in NUMERIC_FEATURES], dtype=float)
        hi = np.array([d[name][1] for name in NUMERIC_FEATURES], dtype=float)
        return cls(lo=lo, hi=hi)


def _raw_numeric_features(config: RoomConfig) -> np.ndarray:
    return np.array(
        [
            config.floor_area,
            config.reflectance,
            1.0 if config.shading is ShadingState.LOUVRE15 else 0.0,
            config.sill_height,
            config.window_height,
            1.0 if config.divisions is WindowDivisions.THREE_EQUAL else 0.0,
        ]
    )


def encode(config: RoomConfig, bounds: NormalizationBounds) -> np.ndarray:
    """Encode a config as the 10-entry network input vector.

    Layout: orientation one-hot (N, E, S, W) followed by six min-max-scaled
    numeric features.  The (width, depth) pair enters as a single joint
    room-dimensions feature (normalized floor area); the pair list in the
    generator makes this injective.  Values outside the bounds are clamped to
    [0, 1] with a ClampWarning.
    """
    one_hot = np.zeros(4)
    one_hot[config.orientation.index] = 1.0

    raw = _raw_numeric_features(config)
    span = bounds.hi - bounds.lo
    # a constant variable (span 0) encodes to 0.0
    scaled = np.where(span > 0, (raw - bounds.lo) / np.where(span > 0, span, 1.0), 0.0)
    if np.any(scaled < 0.0) or np.any(scaled > 1.0):
        bad = [
            f"{name}={raw[i]:g} outside [{bounds.lo[i]:g}, {bounds.hi[i]:g}]"
            for i, name in enumerate(NUMERIC_FEATURES)
            if scaled[i] < 0.0 or scaled[i] > 1.0
        ]
        warnings.warn(f"clamped out-of-bounds features: {'; '.join(bad)}", ClampWarning)
        scaled = np.clip(scaled, 0.0, 1.0)
    return np.concatenate([one_hot, scaled])


def encode_many(configs: list[RoomConfig], bounds: NormalizationBounds) -> np.ndarray:
    """(n, 10) feature matrix for a list of configs."""
    return np.array([encode(c, bounds) for c in configs])
