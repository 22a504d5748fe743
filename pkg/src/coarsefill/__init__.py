"""Exact chain calculus, Weyl sectors, growth and filling oracles for coarse embedding problems."""

__version__ = "0.1.0"

from .chains import (  # noqa: E402
    Chain,
    ChainError,
    boundary,
    decompose_parallelogram,
    parallelepiped,
    parallelogram,
    parallelogram_face_sum,
    same_current,
)
from .filling import CubicalChain, cubical_boundary, cubical_slice, fill_one_cycle_plane, fill_zero_cycle  # noqa: E402
from .spaces import HalfPlaneNet, HalfSpaceNet, Lattice, Product, RegularTree, epsilon_volume  # noqa: E402
from .weyl import dominance_project, root_system, sector_coordinates, sector_generators  # noqa: E402
from .asymptotics import beta_sequence, harmonic_alpha_check, phi_family_report  # noqa: E402

__all__ = [
    "Chain", "ChainError", "boundary", "decompose_parallelogram", "parallelepiped", "parallelogram",
    "parallelogram_face_sum", "same_current",
    "CubicalChain", "cubical_boundary", "cubical_slice", "fill_one_cycle_plane", "fill_zero_cycle",
    "HalfPlaneNet", "HalfSpaceNet", "Lattice", "Product", "RegularTree", "epsilon_volume",
    "dominance_project", "root_system", "sector_coordinates", "sector_generators",
    "beta_sequence", "harmonic_alpha_check", "phi_family_report",
]
