"""Compressed-sensing image steganography.

Payload bits are DES-encrypted, then hidden two bits at a time in the integer
compressed-sensing measurements of block-DCT image coefficients.  A stego
image can be built from the measurements with ADMM-LASSO recovery.
"""

from .descipher import DesKey, decrypt_payload, encrypt_payload
from .errors import (
    CapacityError,
    ConfigurationError,
    CSISError,
    FormatError,
    FramingError,
    NumericError,
)
from .lasso import AdmmSettings, LassoProblem, admm_lasso
from .pipeline import (
    StegoContainer,
    construct_stego_image,
    embed_file,
    evaluate,
    extract_file,
    extract_from_image,
)
from .pixelio import Image, load_pnm, save_pnm
from .sensing import StegoKey, derive_matrices

__version__ = "0.1.0"

__all__ = [
    "AdmmSettings",
    "CSISError",
    "CapacityError",
    "ConfigurationError",
    "DesKey",
    "FormatError",
    "FramingError",
    "Image",
    "LassoProblem",
    "NumericError",
    "StegoContainer",
    "StegoKey",
    "admm_lasso",
    "construct_stego_image",
    "decrypt_payload",
    "derive_matrices",
    "embed_file",
    "encrypt_payload",
    "evaluate",
    "extract_file",
    "extract_from_image",
    "load_pnm",
    "save_pnm",
]
