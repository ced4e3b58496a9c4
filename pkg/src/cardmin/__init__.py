"""Exhaustive verification of 2n-card protocols for symmetric Boolean functions."""

from .deck import CLUB, HEART, CardSymbol, Commitment, E3Encoding, E3Kind, decode_e3, e3, encode_bit
from .engine import ExecutionLeaf, ProtocolBuild, count_shuffles, execute_all, sample_run
from .protocols import build_add_commitments, build_add_integers, build_e3_from_commitment, build_mod3
from .symfun import NpnClass, SymmetricFunction, enumerate_classes
from .verifier import full_report

__version__ = "0.1.0"
