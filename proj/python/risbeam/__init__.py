"""One-bit reflective-surface beam synthesis toolkit (C++ core)."""

from ._core import (  # noqa: F401
    ArrayGeometry,
    BandReport,
    CellState,
    FeedSpec,
    FreqSpec,
    HornSpec,
    PatternGrid,
    SteeringTarget,
    UnitCellModel,
    __version__,
    bitmap_from_text,
    bitmap_to_text,
    compute_metrics,
    encode_command,
    far_field_distance,
    frame_from_hex,
    frame_to_hex,
    ideal_phase_map,
    illuminate,
    link_s21,
    pack_frame,
    parse_command,
    plane_wave_illumination,
    quantize_map,
    scattered_pattern,
    unpack_frame,
    wavelength,
    wavenumber,
)

__all__ = [
    "ArrayGeometry",
    "BandReport",
    "CellState",
    "FeedSpec",
    "FreqSpec",
    "HornSpec",
    "PatternGrid",
    "SteeringTarget",
    "UnitCellModel",
    "__version__",
    "bitmap_from_text",
    "bitmap_to_text",
    "compute_metrics",
    "encode_command",
    "far_field_distance",
    "frame_from_hex",
    "frame_to_hex",
    "ideal_phase_map",
    "illuminate",
    "link_s21",
    "pack_frame",
    "parse_command",
    "plane_wave_illumination",
    "quantize_map",
    "scattered_pattern",
    "unpack_frame",
    "wavelength",
    "wavenumber",
]
