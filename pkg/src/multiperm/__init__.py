"""Multipermutations: relational composition, the monoid M_n, down-shop-monoids
and the she side of the Galois connection with finite structures."""
from .errors import CapExceeded, DimensionError, InvariantViolation, NotBlurred
from .relcore import (BoolVec, Multipermutation, Permutation, Relation, complement,
                      full, identity, inverse, is_sub, join, parse, then, union)
from .monoid import MonoidTable, closure, is_generating_set, is_prime, monoid_table, prime_elements
from .blurred import Partition, blur, is_blurred, recognize_blur
from .green import classify, green_D, green_H, green_L, green_R
from .regular import has_inverse_in_Mn, kim_roush_inverses, schein_regular
from .dsm import Dsm, dsm_closure, enumerate_lattice, is_bps, is_dsm
from .galois import FiniteStructure, she_set

__version__ = "0.1.0"
