"""
Report files.

accuracy.{tsv,txt}   one row per system: accuracy (%), correct, total
agreement.{tsv,txt}  one row per system pair: both / one / zero, percent and count
kway.{tsv,txt}       one row per group of 3+ systems: all / none correct, oracle bound

Percentages are rounded half-up to 1 decimal, 2 decimals for groups of five
or more systems. Text layouts are Jinja2 templates under lexvote/templates.
"""
import csv
import logging
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from lexvote.exceptions import ValidationError
from lexvote.models import AgreementTable, ScoreReport
from lexvote.utils.scoring import round_percent

logger = logging.getLogger(__name__)

TEMPLATE_DIR = Path(__file__).resolve().parent.parent / "templates"
REPORT_FORMATS = ("tsv", "txt")
WIDE_GROUP = 5

ACCURACY_HEADER = ("system", "accuracy", "correct", "total")
AGREEMENT_HEADER = (
    "system_a", "system_b", "n", "both", "both_pct", "one", "one_pct", "zero", "zero_pct",
)
KWAY_HEADER = (
    "systems", "n", "all_correct", "all_pct", "none_correct", "none_pct", "bound_pct", "buckets",
)

env = Environment(
    loader=FileSystemLoader(TEMPLATE_DIR),
    undefined=StrictUndefined,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)


def _places(table: AgreementTable) -> int:
    return 2 if table.k >= WIDE_GROUP else 1


# ---------------------------------------------------------------------------
# Rows
# ---------------------------------------------------------------------------

def accuracy_rows(scores: Iterable[ScoreReport]) -> list[dict]:
    """Highest accuracy first, ties by system name."""
    ordered = sorted(scores, key=lambda s: (-s.accuracy, s.system_name))
    return [
        {
            "system": s.system_name,
            "accuracy": str(round_percent(s.correct, s.total)),
            "correct": s.correct,
            "total": s.total,
        }
        for s in ordered
    ]


def agreement_rows(tables: Iterable[AgreementTable]) -> list[dict]:
    rows = []
    for t in tables:
        places = _places(t)
        rows.append({
            "system_a": t.systems[0],
            "system_b": t.systems[1],
            "n": t.n,
            "both": t.both,
            "both_pct": str(round_percent(t.both, t.n, places)),
            "one": t.one,
            "one_pct": str(round_percent(t.one, t.n, places)),
            "zero": t.zero,
            "zero_pct": str(round_percent(t.zero, t.n, places)),
        })
    return rows


def kway_rows(tables: Iterable[AgreementTable]) -> list[dict]:
    rows = []
    for t in tables:
        places = _places(t)
        rows.append({
            "systems": "+".join(t.systems),
            "n": t.n,
            "all_correct": t.all_correct,
            "all_pct": str(round_percent(t.all_correct, t.n, places)),
            "none_correct": t.none_correct,
            "none_pct": str(round_percent(t.none_correct, t.n, places)),
            "bound_pct": str(round_percent(t.n - t.none_correct, t.n, places)),
            "buckets": ",".join(str(c) for c in t.counts),
        })
    return rows


# ---------------------------------------------------------------------------
# Writers
# ---------------------------------------------------------------------------

def write_tsv(path: Path, header: Sequence[str], rows: Iterable[Mapping]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, delimiter="\t", lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([row[column] for column in header])
    return path


def render_text(template_name: str, rows: list[dict], name_columns: Sequence[str] = ()) -> str:
    width = max([len("system")] + [len(str(r[c])) for r in rows for c in name_columns])
    return env.get_template(template_name).render(rows=rows, width=width)


def _format_count(row: dict, columns: Sequence[str]) -> dict:
    return {**row, **{c: f"{row[c]:,}" for c in columns}}


def emit_reports(
    scores: Iterable[ScoreReport],
    tables: Iterable[AgreementTable],
    out_dir: str | Path,
    formats: Sequence[str] = REPORT_FORMATS,
) -> list[Path]:
    """
    Write the accuracy, pairwise and k-way reports. Two-system tables go to
    the agreement report, larger groups to the k-way report. Files are
    written even when there is nothing to report (header only).
    """
    unknown = [f for f in formats if f not in REPORT_FORMATS]
    if unknown:
        raise ValidationError(f"unknown report formats {unknown}; choose from {REPORT_FORMATS}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    tables = list(tables)
    accuracy = accuracy_rows(scores)
    pairwise = agreement_rows(t for t in tables if t.k == 2)
    kway = kway_rows(t for t in tables if t.k > 2)

    written = []
    if "tsv" in formats:
        written.append(write_tsv(out_dir / "accuracy.tsv", ACCURACY_HEADER, accuracy))
        written.append(write_tsv(out_dir / "agreement.tsv", AGREEMENT_HEADER, pairwise))
        written.append(write_tsv(out_dir / "kway.tsv", KWAY_HEADER, kway))
    if "txt" in formats:
        texts = {
            "accuracy.txt": render_text(
                "accuracy.txt.j2", [_format_count(r, ("correct", "total")) for r in accuracy], ("system",)
            ),
            "agreement.txt": render_text(
                "agreement.txt.j2",
                [_format_count(r, ("both", "one", "zero")) for r in pairwise],
                ("system_a", "system_b"),
            ),
            "kway.txt": render_text(
                "kway.txt.j2", [_format_count(r, ("n", "all_correct", "none_correct")) for r in kway]
            ),
        }
        for name, text in texts.items():
            path = out_dir / name
            path.write_text(text, encoding="utf-8", newline="\n")
            written.append(path)

    logger.info("Wrote %d report files to %s", len(written), out_dir)
    return written


def write_accuracy_by_word(
    per_word: Mapping[str, Mapping[str, ScoreReport]],
    systems: Sequence[str],
    path: str | Path,
) -> Path:
    """word x system accuracy grid (percent); '-' where a system has no score for a word."""
    header = ("word", *systems)
    rows = []
    for word in sorted(per_word):
        row = {"word": word}
        for system in systems:
            report = per_word[word].get(system)
            row[system] = str(round_percent(report.correct, report.total)) if report else "-"
        rows.append(row)
    return write_tsv(Path(path), header, rows)
