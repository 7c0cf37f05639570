"""Finite group actions on products of curves: search, orbit counting and
invariants for surfaces with p_g = q = 2 or 1."""

from __future__ import annotations

from .catalog import Catalog, default_catalog, load_catalog, resolve_group
from .classify import (
    ClassificationRow,
    admissible_signatures,
    classify_gh,
    classify_isotrivial_pgq2,
    classify_mixed_pgq2,
    classify_pgq1,
    classify_pgq2,
    classify_unmixed_agt,
)
from .genvec import GeneratingVector, SignatureType
from .groups import FiniteGroup

__all__ = [
    "Catalog",
    "ClassificationRow",
    "FiniteGroup",
    "GeneratingVector",
    "SignatureType",
    "admissible_signatures",
    "classify_gh",
    "classify_isotrivial_pgq2",
    "classify_mixed_pgq2",
    "classify_pgq1",
    "classify_pgq2",
    "classify_unmixed_agt",
    "default_catalog",
    "load_catalog",
    "resolve_group",
]
