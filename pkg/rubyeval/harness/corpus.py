import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

logger = logging.getLogger(__name__)


class CorpusValidationError(ValueError):
    def __init__(self, message: str, errors: Optional[list] = None):
        super().__init__(message)
        self.errors = errors or []


class CorpusIOError(OSError):
    pass


class CorpusPair(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str = Field(min_length=1)
    source: Optional[str] = None
    reference: str
    candidate: str
    semantic_raw: Optional[int] = Field(None, ge=0, le=4)

    @field_validator("reference")
    @classmethod
    def reference_not_blank(cls, v: str) -> str:
        if not v.strip():
            raise ValueError("reference must be non-empty")
        return v

    @property
    def semantic(self) -> Optional[float]:
        """Human score mapped from the 0-4 scale onto [0, 1]."""
        return None if self.semantic_raw is None else self.semantic_raw / 4


@dataclass(frozen=True)
class CorpusLineError:
    line: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}"


@dataclass
class CorpusFile:
    pairs: list[CorpusPair] = field(default_factory=list)
    errors: list[CorpusLineError] = field(default_factory=list)


def _describe(e: ValidationError) -> str:
    return "; ".join(f"{'.'.join(str(p) for p in err['loc']) or 'record'}: {err['msg']}" for err in e.errors())


def load_corpus(path) -> CorpusFile:
    """
    Reads a JSON-lines corpus.

    Malformed lines are collected with their line numbers and the remaining
    lines still load. Duplicate ids and a corpus with no valid pair raise
    CorpusValidationError.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise CorpusIOError(f"cannot read corpus {path}: {e}") from e
    except UnicodeDecodeError as e:
        raise CorpusValidationError(f"corpus {path} is not valid UTF-8: {e}") from e
    return parse_corpus(text, origin=str(path))


def parse_corpus(text: str, origin: str = "<corpus>") -> CorpusFile:
    result = CorpusFile()
    seen: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            pair = CorpusPair.model_validate(json.loads(line))
        except json.JSONDecodeError as e:
            result.errors.append(CorpusLineError(lineno, f"invalid JSON: {e.msg}"))
            continue
        except ValidationError as e:
            result.errors.append(CorpusLineError(lineno, _describe(e)))
            continue
        if pair.id in seen:
            raise CorpusValidationError(
                f"duplicate id {pair.id!r} on lines {seen[pair.id]} and {lineno}",
                result.errors + [CorpusLineError(lineno, f"duplicate id {pair.id!r}")],
            )
        seen[pair.id] = lineno
        result.pairs.append(pair)

    for err in result.errors:
        logger.warning(f"Rejected corpus {err}")
    if not result.pairs:
        raise CorpusValidationError(f"corpus {origin} has no valid pairs", result.errors)
    logger.info(f"Loaded {len(result.pairs)} pairs from {origin} ({len(result.errors)} rejected)")
    return result


def write_corpus(path, pairs: Iterable[CorpusPair]):
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="\n") as f:
            for pair in pairs:
                f.write(json.dumps(pair.model_dump(exclude_none=True), ensure_ascii=False) + "\n")
    except OSError as e:
        raise CorpusIOError(f"cannot write corpus {path}: {e}") from e
