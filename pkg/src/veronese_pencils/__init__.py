"""Classification of pencils of conics over small finite fields.

Pencils of conics in PG(2,q) are modelled as lines of PG(5,q) spanned by
symmetric 3x3 matrices, acted on by PGL(3,q) via M -> D M D^T.  There are
exactly 15 classes for every prime power q; this package classifies any
pencil by congruence invariants alone and verifies the class counts,
stabiliser orders and counting lemmas by exhaustive brute force at small q.

Modules:
    gf         exact GF(p^e) arithmetic, q <= 128
    symspace   symmetric matrices, the Veronese surface, point classes
    pencil     lines of PG(5,q) and their congruence invariants
    classify   the 15 classes, canonical forms, stabiliser orders
    orbits     brute-force group machinery: censuses, stabilisers, lemmas
    cli        the veronese-pencils command-line tool
"""

from .gf import GF, field_of_order, make_field
from .pencil import Pencil, make_pencil
from .classify import ClassLabel, all_labels, canonical_rep, classify, parse_label

__all__ = [
    "GF", "field_of_order", "make_field", "Pencil", "make_pencil",
    "ClassLabel", "all_labels", "canonical_rep", "classify", "parse_label",
]
__version__ = "1.0.0"
