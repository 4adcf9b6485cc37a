from .euler import euler_hdh, rz
from .htword import (
    HTWord,
    decode_word,
    emit_word,
    encode_word,
    op_norm_2x2,
    state_word_error,
    word_error,
)
from .ring import ExactMatrix, ZOmega
from .search import WordDatabase, approx_state, approx_su2, get_database

__all__ = [
    "euler_hdh",
    "rz",
    "HTWord",
    "decode_word",
    "emit_word",
    "encode_word",
    "op_norm_2x2",
    "state_word_error",
    "word_error",
    "ExactMatrix",
    "ZOmega",
    "WordDatabase",
    "approx_state",
    "approx_su2",
    "get_database",
]
