"""Covering codes from saturating sets in projective spaces."""

__version__ = "0.1.0"

from .gf import FieldTables, field_create, field_of_order, subfield_embedding
from .pg import PgSpace, pg_space, theta
from .codes import ParityCheck, covering_radius, saturation_level
from .construct import ConstructionConfig, construction_a, greedy_baseline
from .lift import LiftSpec, lift_qm, verify_family

__all__ = [
    "FieldTables", "field_create", "field_of_order", "subfield_embedding",
    "PgSpace", "pg_space", "theta",
    "ParityCheck", "covering_radius", "saturation_level",
    "ConstructionConfig", "construction_a", "greedy_baseline",
    "LiftSpec", "lift_qm", "verify_family",
]
