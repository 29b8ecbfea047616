"""Text formats for spectra and distributions.

Eigenvalue files hold one value per line with no header. Distribution files
start with the header ``value,mass``. Both use 17 significant digits so values
round-trip exactly.
"""
from __future__ import annotations

import os

import numpy as np

from .spectrum import SpectralDistribution

__all__ = [
    "DISTRIBUTION_HEADER",
    "FormatError",
    "format_distribution_csv",
    "format_spectrum_csv",
    "parse_distribution_text",
    "read_distribution_file",
    "write_text",
]

DISTRIBUTION_HEADER = "value,mass"


class FormatError(ValueError):
    pass


def _fmt(x: float) -> str:
    return format(float(x) + 0.0, ".17g")


def format_spectrum_csv(values) -> str:
    return "".join(_fmt(v) + "\n" for v in np.asarray(values, dtype=float))


def format_distribution_csv(d: SpectralDistribution) -> str:
    rows = (f"{_fmt(x)},{_fmt(w)}\n" for x, w in zip(d.support, d.masses))
    return DISTRIBUTION_HEADER + "\n" + "".join(rows)


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def parse_distribution_text(text: str):
    """Parse either format; returns ``(kind, distribution)``.

    ``kind`` is ``"distribution"`` or ``"eigenvalues"``. Eigenvalue lists
    become equally weighted point masses.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty spectrum file")
    try:
        if lines[0].replace(" ", "") == DISTRIBUTION_HEADER:
            rows = [ln.split(",") for ln in lines[1:]]
            if any(len(r) != 2 for r in rows):
                raise FormatError("distribution rows must have two fields")
            arr = np.array(rows, dtype=float).reshape(-1, 2)
            d = SpectralDistribution.from_points(arr[:, 0], arr[:, 1])
            return "distribution", d
        if "," in lines[0]:
            raise FormatError(f"unrecognized header {lines[0]!r}")
        values = np.array(lines, dtype=float)
        return "eigenvalues", SpectralDistribution.from_points(values)
    except ValueError as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"could not parse spectrum file: {exc}") from None


def read_distribution_file(path: str | os.PathLike):
    with open(path, encoding="utf-8") as fh:
        return parse_distribution_text(fh.read())
