"""
Golden reference tables of the leading B-layer expansions.

File format: one record per line, tab-separated

    series  word  pi_exponent  numerator  denominator

with '#' comments and blank lines ignored. Words use 'B' between letters.
"""
import logging
import os
from collections.abc import Iterable
from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
from typing import NamedTuple

from b_expansion import BPoly
from b_expansion import expand_named
from coefficients import Coefficient
from errors import GoldenParseError
from errors import WordError
from pk_algebra import format_word
from pk_algebra import parse_word
from series_builders import SeriesId

GOLDEN_SERIES = (
    SeriesId.Ktilde,
    SeriesId.X,
    SeriesId.Ptilde,
    SeriesId.Y,
    SeriesId.PtildeRes,
    SeriesId.KtildeRes_closed,
    SeriesId.Ttilde,
    SeriesId.P,
)

GOLDEN_ORDER = 3


class GoldenEntry(NamedTuple):
    word: str
    pi_exponent: int
    numerator: int
    denominator: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)


@dataclass
class GoldenTable:
    series: SeriesId
    order: int = GOLDEN_ORDER
    entries: list[GoldenEntry] = field(default_factory=list)

    def keys(self) -> set[tuple[str, int]]:
        return {(e.word, e.pi_exponent) for e in self.entries}


def resolve_golden_path(path: str) -> str:
    """Relative paths that do not exist are looked up next to this module."""
    if os.path.isabs(path) or os.path.exists(path):
        return path
    bundled = os.path.join(os.path.dirname(os.path.abspath(__file__)), path)
    return bundled if os.path.exists(bundled) else path


def _parse_int(path: str, line_number: int, name: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise GoldenParseError(
            path,
            line_number,
            name,
            f"expected an integer, got {text!r}",
        ) from None


def parse_golden_text(text: str, path: str = "<golden>") -> list[GoldenTable]:
    tables: dict[SeriesId, GoldenTable] = {}
    for line_number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split("\t")
        if len(fields) != 5:
            raise GoldenParseError(
                path,
                line_number,
                "record",
                f"expected 5 tab-separated fields, got {len(fields)}",
            )
        name, word_text, exp_text, num_text, den_text = (f.strip() for f in fields)
        try:
            series = SeriesId(name)
        except ValueError:
            raise GoldenParseError(
                path,
                line_number,
                "series",
                f"unknown series {name!r}",
            ) from None
        try:
            letters = parse_word(word_text, "B", "pks")
        except WordError as e:
            raise GoldenParseError(path, line_number, "word", str(e)) from None
        pi_exponent = _parse_int(path, line_number, "pi_exponent", exp_text)
        if pi_exponent < 0 or pi_exponent % 2:
            raise GoldenParseError(
                path,
                line_number,
                "pi_exponent",
                f"must be even and non-negative, got {pi_exponent}",
            )
        numerator = _parse_int(path, line_number, "numerator", num_text)
        denominator = _parse_int(path, line_number, "denominator", den_text)
        if denominator <= 0:
            raise GoldenParseError(
                path,
                line_number,
                "denominator",
                f"must be positive, got {denominator}",
            )
        if numerator == 0:
            raise GoldenParseError(path, line_number, "numerator", "zero coefficient")
        table = tables.setdefault(series, GoldenTable(series))
        table.order = max(table.order, len(letters) - 1)
        if (word_text, pi_exponent) in table.keys():
            raise GoldenParseError(
                path,
                line_number,
                "word",
                f"duplicate entry {series.value} {word_text} pi^{pi_exponent}",
            )
        table.entries.append(
            GoldenEntry(word_text, pi_exponent, numerator, denominator),
        )
    return list(tables.values())


def load_golden(path: str) -> list[GoldenTable]:
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise GoldenParseError(path, 0, "file", str(e)) from None
    tables = parse_golden_text(text, path)
    entries = sum(len(t.entries) for t in tables)
    logging.info(f"Loaded golden file {path}: {len(tables)} tables, {entries} entries")
    return tables


def table_to_bpoly(table: GoldenTable) -> BPoly:
    pairs = [
        (
            parse_word(e.word, "B", "pks"),
            Coefficient({e.pi_exponent: e.value}),
        )
        for e in table.entries
    ]
    return BPoly.from_pairs(pairs, table.order)


def bpoly_to_entries(poly: BPoly) -> list[GoldenEntry]:
    entries = []
    for word, coeff in poly.items():
        for exponent, value in coeff.items():
            entries.append(
                GoldenEntry(
                    format_word(word, "B"),
                    exponent,
                    value.numerator,
                    value.denominator,
                ),
            )
    entries.sort(key=lambda e: (len(e.word), e.pi_exponent))
    return entries


def tables_from_series(
    series: Iterable[SeriesId] = GOLDEN_SERIES,
    order: int = GOLDEN_ORDER,
) -> list[GoldenTable]:
    """Golden tables computed by the engine."""
    return [
        GoldenTable(s, order, bpoly_to_entries(expand_named(s, order)))
        for s in series
    ]


def dump_golden(tables: Iterable[GoldenTable]) -> str:
    lines = ["# series\tword\tpi_exponent\tnumerator\tdenominator"]
    for table in tables:
        lines.append(f"# {table.series.value} to order B^{table.order}")
        for e in table.entries:
            lines.append(
                f"{table.series.value}\t{e.word}\t{e.pi_exponent}"
                f"\t{e.numerator}\t{e.denominator}",
            )
    return "\n".join(lines) + "\n"


def load_default_golden(path: str) -> list[GoldenTable]:
    return load_golden(resolve_golden_path(path))
