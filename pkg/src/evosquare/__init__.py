"""Classification of evolution algebras whose square is one-dimensional."""

from .fields import FieldSpec
from .evo import (EvolutionAlgebra, Flavor, InvariantBundle, IsoVerdict, canonical_form, check_morphism,
                  from_presentation, invariants, is_isomorphic, validate)
from .atlas import brute_force_iso, enumerate_classes, verify_paper

__all__ = [
    "FieldSpec", "EvolutionAlgebra", "Flavor", "InvariantBundle", "IsoVerdict", "canonical_form",
    "check_morphism", "from_presentation", "invariants", "is_isomorphic", "validate",
    "brute_force_iso", "enumerate_classes", "verify_paper",
]
