"""Output formatting: column labels, fixed float rendering and checksums."""

from __future__ import annotations

import hashlib
from pathlib import Path

# ── Constants ───────────────────────────────────────────────────────
FLOAT_FORMAT = "%.17g"
CSV_DELIMITER = ","
LINE_TERMINATOR = "\n"


def format_gamma(gamma: float) -> str:
    """Shortest round-trip text of a gamma value, as used in column labels.

    Integral floats keep their ``.0`` so that ``1`` and ``1.0`` label alike.
    """
    if not isinstance(gamma, (int, float)):
        raise TypeError(f"Expected a real number, got {type(gamma).__name__}")
    return repr(float(gamma))


def gamma_column(prefix: str, gamma: float) -> str:
    """``<prefix>_gamma=<value>``, e.g. ``V_gamma=0.251``."""
    return f"{prefix}_gamma={format_gamma(gamma)}"


def sha256_file(path: Path) -> str:
    """Hex SHA-256 digest of a file's bytes."""
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for block in iter(lambda: handle.read(1 << 16), b""):
            digest.update(block)
    return digest.hexdigest()
