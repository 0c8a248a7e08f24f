"""Tame pro-p Galois groups over Q: cohomology dimensions, linking data, mildness and K(pi,1) certificates."""

from .certify import Certificate, certify, verify
from .fields import FieldDescriptor, Place, PrimeSet
from .linking import LinkingData, linking_data, lk
from .search import SearchDomain, augment_to_mild

__all__ = [
    "Certificate",
    "FieldDescriptor",
    "LinkingData",
    "Place",
    "PrimeSet",
    "SearchDomain",
    "augment_to_mild",
    "certify",
    "linking_data",
    "lk",
    "verify",
]

__version__ = "0.1.0"
