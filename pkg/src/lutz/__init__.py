"""Lossless DNA sequence compression: triplet look-up table pre-coding plus LZ77/Huffman."""

from .codec import decode, encode
from .errors import LutzError
from .precoder import NormalizationOptions, UnknownPolicy, normalize

__all__ = ["encode", "decode", "normalize", "NormalizationOptions", "UnknownPolicy", "LutzError"]
__version__ = "0.1.0"
