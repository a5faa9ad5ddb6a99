"""Seed file ingestion and the example pairs shipped with the package."""

import logging
from importlib import resources
from typing import Dict, List, Optional, Tuple

from pydantic import ValidationError

from .errors import DimensionMismatch, SeedFileError
from .schemas import SeedFile
from .seedcore import CompatiblePair, check_compatible

logger = logging.getLogger(__name__)

BUNDLED_SEEDS = ("rank1_frozen", "a2", "a2_principal", "a3_principal")


def _located(error: ValidationError) -> SeedFileError:
    first = error.errors()[0]
    loc = first.get("loc", ())
    field = str(loc[0]) if loc else "<root>"
    indices = [x + 1 for x in loc[1:] if isinstance(x, int)]
    row = indices[0] if indices else None
    col = indices[1] if len(indices) > 1 else None
    return SeedFileError(f"invalid seed file field '{field}': {first.get('msg', 'invalid value')}", row=row, col=col)


def parse_seed_file(text: str) -> SeedFile:
    try:
        return SeedFile.model_validate_json(text)
    except ValidationError as e:
        raise _located(e) from e


def to_pair(seed_file: SeedFile) -> CompatiblePair:
    """Check the declared sizes, then validate compatibility."""
    m, n_ex = seed_file.m, seed_file.n_ex
    if len(seed_file.lambda_) != m:
        raise DimensionMismatch(f"lambda has {len(seed_file.lambda_)} rows, expected m={m}")
    for i, row in enumerate(seed_file.lambda_):
        if len(row) != m:
            raise DimensionMismatch(f"lambda row has {len(row)} entries, expected {m}", row=i + 1)
    if n_ex > m:
        raise DimensionMismatch(f"n_ex={n_ex} exceeds m={m}")
    if len(seed_file.b_tilde) != m:
        raise DimensionMismatch(f"b_tilde has {len(seed_file.b_tilde)} rows, expected m={m}")
    for i, row in enumerate(seed_file.b_tilde):
        if len(row) != n_ex:
            raise DimensionMismatch(f"b_tilde row has {len(row)} entries, expected n_ex={n_ex}", row=i + 1)
    if seed_file.names is not None and len(seed_file.names) != m:
        raise DimensionMismatch(f"names lists {len(seed_file.names)} variables, expected m={m}")
    if seed_file.grading is not None and len(seed_file.grading) != m:
        raise DimensionMismatch(f"grading has {len(seed_file.grading)} entries, expected m={m}")
    return check_compatible(seed_file.lambda_, seed_file.b_tilde)


def load_seed_file(path: str) -> Tuple[SeedFile, CompatiblePair]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise SeedFileError(f"cannot read seed file {path}: {e.strerror}") from e
    except UnicodeDecodeError as e:
        raise SeedFileError(f"seed file {path} is not valid UTF-8 (byte offset {e.start})") from e
    seed_file = parse_seed_file(text)
    pair = to_pair(seed_file)
    logger.debug("loaded seed file %s (m=%d, n_ex=%d)", path, pair.m, pair.n_ex)
    return seed_file, pair


def load_bundled(name: str) -> Tuple[SeedFile, CompatiblePair]:
    if name not in BUNDLED_SEEDS:
        raise SeedFileError(f"unknown bundled seed {name!r}; choose from {', '.join(BUNDLED_SEEDS)}")
    text = resources.files("qclaw").joinpath("seeds", f"{name}.json").read_text(encoding="utf-8")
    seed_file = parse_seed_file(text)
    return seed_file, to_pair(seed_file)


def bundled_pairs(names: Optional[List[str]] = None) -> Dict[str, CompatiblePair]:
    return {name: load_bundled(name)[1] for name in (names or BUNDLED_SEEDS)}
