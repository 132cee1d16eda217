"""Denotational semantics in the model of sets and partial functions."""
from .affine import AffineObject, affine, affine_closed, discard
from .carriers import Carrier, fold_iso, interpret, reify, sem_elems, unfold_iso
from .terms import (
    BOTTOM, CONTINUE_COST, EXIT_COST, UNITS, Denotation, denote_configuration,
    denote_store, denote_term, denote_value,
)

__all__ = [
    "AffineObject", "affine", "affine_closed", "discard",
    "Carrier", "fold_iso", "interpret", "reify", "sem_elems", "unfold_iso",
    "BOTTOM", "CONTINUE_COST", "EXIT_COST", "UNITS", "Denotation",
    "denote_configuration", "denote_store", "denote_term", "denote_value",
]
