import csv
import json
import logging
from pathlib import Path
from typing import Optional, Sequence

from rubyeval.core.metrics import RubyLevel, ScoreRecord
from rubyeval.harness.corpus import CorpusIOError, CorpusValidationError
from rubyeval.harness.scoring import CorpusSummary

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("id", "bleu", "sts", "trs", "grs", "ruby", "ruby_level", "semantic")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_records_csv(path, records: Sequence[ScoreRecord]):
    path = Path(path)
    try:
        with path.open("w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for r in records:
                writer.writerow([_cell(v) for v in (r.pair_id, r.bleu, r.sts, r.trs, r.grs, r.ruby,
                                                    r.ruby_level.value, r.semantic)])
    except OSError as e:
        raise CorpusIOError(f"cannot write report {path}: {e}") from e
    logger.info(f"Wrote {len(records)} records to {path}")


def _optional(text: str) -> Optional[float]:
    return float(text) if text != "" else None


def read_records_csv(path) -> list[ScoreRecord]:
    path = Path(path)
    try:
        with path.open(encoding="utf-8", newline="") as f:
            rows = list(csv.DictReader(f))
    except OSError as e:
        raise CorpusIOError(f"cannot read report {path}: {e}") from e
    except UnicodeDecodeError as e:
        raise CorpusValidationError(f"report {path} is not valid UTF-8: {e}") from e

    records = []
    for lineno, row in enumerate(rows, start=2):
        try:
            records.append(ScoreRecord(
                pair_id=row["id"],
                bleu=float(row["bleu"]),
                sts=float(row["sts"]),
                trs=_optional(row["trs"]),
                grs=_optional(row["grs"]),
                ruby=float(row["ruby"]),
                ruby_level=RubyLevel(row["ruby_level"]),
                semantic=_optional(row["semantic"]),
            ))
        except (KeyError, TypeError, ValueError) as e:
            raise CorpusValidationError(f"{path} line {lineno}: malformed record ({e})") from e
    return records


def write_summary_json(path, summary: CorpusSummary):
    path = Path(path)
    try:
        path.write_text(json.dumps(summary.model_dump(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    except OSError as e:
        raise CorpusIOError(f"cannot write summary {path}: {e}") from e
