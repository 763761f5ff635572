"""Long-format indicator panels: parsing, series extraction, binning, complete cases."""
import csv
import io
import json
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateRange,
    DuplicateKey,
    EmptyInput,
    InsufficientData,
    MalformedRow,
    NoCompleteRows,
    NonFiniteInput,
    UnknownCountry,
    UnknownIndicator,
)

_CODE = re.compile(r"[A-Z]{3}\Z")


@dataclass(frozen=True)
class PanelSchema:
    """Column names of the long CSV layout."""

    country_col: str = "country"
    year_col: str = "year"
    indicator_col: str = "indicator"
    value_col: str = "value"


@dataclass(frozen=True)
class IndicatorPanel:
    """Country x year x indicator observations.

    ``values`` maps ``(country, year, indicator)`` to a float, or to ``None``
    for a cell that was present in the input with an empty value. Keys that
    never appeared are also treated as missing by every accessor.
    """

    countries: tuple
    years: range
    indicators: tuple
    values: dict = field(repr=False)

    def __post_init__(self):
        for code in self.countries:
            if not _CODE.match(code):
                raise MalformedRow(f"country code {code!r} is not 3 uppercase letters")
        if self.years.step != 1:
            raise ValueError("years must be a contiguous range")
        cset, iset = set(self.countries), set(self.indicators)
        for c, y, i in self.values:
            if c not in cset or i not in iset or y not in self.years:
                raise ValueError(f"key {(c, y, i)} lies outside the panel axes")

    def get(self, country, year, indicator):
        return self.values.get((country, year, indicator))

    @property
    def n_missing(self):
        """Cells of the full grid with no value."""
        total = len(self.countries) * len(self.years) * len(self.indicators)
        present = sum(v is not None for v in self.values.values())
        return total - present

    def to_json_dict(self):
        return {
            "countries": list(self.countries),
            "years": [self.years.start, self.years.stop - 1],
            "indicators": list(self.indicators),
            "values": [[c, y, i, v] for (c, y, i), v in sorted(self.values.items())],
        }

    @classmethod
    def from_json_dict(cls, doc):
        first, last = doc["years"]
        values = {}
        for c, y, i, v in doc["values"]:
            key = (c, int(y), i)
            if key in values:
                raise DuplicateKey(f"duplicate key {key}")
            values[key] = None if v is None else float(v)
        return cls(tuple(doc["countries"]), range(first, last + 1), tuple(doc["indicators"]), values)


def _parse_value(text, lineno):
    text = text.strip()
    if text == "":
        return None
    try:
        value = float(text)
    except ValueError:
        raise MalformedRow(f"line {lineno}: value {text!r} is not a number") from None
    if not math.isfinite(value):
        raise MalformedRow(f"line {lineno}: non-finite value {text!r}")
    return value


def parse_panel(csv_text, schema=None):
    """Parse long CSV text into an :class:`IndicatorPanel`.

    Only an empty value field counts as missing; sentinel numbers are kept
    as numbers. Axes are inferred from the rows, with the year axis spanning
    ``min(year)..max(year)``.

    Raises
    ------
    EmptyInput
        No header, or a header but no data rows.
    MalformedRow
        Wrong column count, unparseable year/value, or a bad country code.
    DuplicateKey
        The same ``(country, year, indicator)`` appears twice.
    """
    schema = schema or PanelSchema()
    if csv_text.startswith("\ufeff"):
        csv_text = csv_text[1:]
    reader = csv.reader(io.StringIO(csv_text, newline=""))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise EmptyInput("input has no header row") from None
    wanted = (schema.country_col, schema.year_col, schema.indicator_col, schema.value_col)
    try:
        idx = [header.index(name) for name in wanted]
    except ValueError:
        raise MalformedRow(f"header {header} lacks one of {list(wanted)}") from None

    values = {}
    countries, years, indicators = set(), set(), {}
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != len(header):
            raise MalformedRow(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        country, year_text, indicator, value_text = (row[j] for j in idx)
        country, indicator = country.strip(), indicator.strip()
        if not _CODE.match(country):
            raise MalformedRow(f"line {lineno}: country code {country!r} is not 3 uppercase letters")
        try:
            year = int(year_text.strip())
        except ValueError:
            raise MalformedRow(f"line {lineno}: year {year_text!r} is not an integer") from None
        if not indicator:
            raise MalformedRow(f"line {lineno}: empty indicator name")
        key = (country, year, indicator)
        if key in values:
            raise DuplicateKey(f"line {lineno}: duplicate key {key}")
        values[key] = _parse_value(value_text, lineno)
        countries.add(country)
        years.add(year)
        indicators.setdefault(indicator, None)

    if not values:
        raise EmptyInput("input has a header but no data rows")
    return IndicatorPanel(
        countries=tuple(sorted(countries)),
        years=range(min(years), max(years) + 1),
        indicators=tuple(sorted(indicators)),
        values=values,
    )


def to_csv(panel, schema=None):
    """Canonical long CSV: rows sorted by key, ``repr`` floats, ``\\n`` endings."""
    schema = schema or PanelSchema()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([schema.country_col, schema.year_col, schema.indicator_col, schema.value_col])
    for (c, y, i), v in sorted(panel.values.items()):
        writer.writerow([c, y, i, "" if v is None else repr(v)])
    return buf.getvalue()


def to_json(panel):
    return json.dumps(panel.to_json_dict(), sort_keys=True, separators=(",", ":"))


def from_json(text):
    return IndicatorPanel.from_json_dict(json.loads(text))


def _check_country(panel, country):
    if country not in panel.countries:
        raise UnknownCountry(f"unknown country {country!r}")


def _check_indicator(panel, indicator):
    if indicator not in panel.indicators:
        raise UnknownIndicator(f"unknown indicator {indicator!r}")


def extract_series(panel, country, indicator, year_range=None):
    """Values for one country/indicator, ascending by year, ``None`` where missing."""
    _check_country(panel, country)
    _check_indicator(panel, indicator)
    years = panel.years if year_range is None else year_range
    return [panel.get(country, y, indicator) for y in years]


@dataclass(frozen=True)
class Histogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    n: int

    def to_json_dict(self):
        return {"bin_edges": self.bin_edges.tolist(), "counts": self.counts.tolist(), "n": self.n}


def sturges_bins(n):
    return math.ceil(math.log2(n)) + 1


def bin_series(values, bins=None):
    """Equal-width histogram over ``[min, max]``; the maximum falls in the last bin.

    ``bins`` defaults to Sturges' rule, ``ceil(log2 n) + 1``.
    """
    x = np.asarray([v for v in values], dtype=float)
    if not np.all(np.isfinite(x)):
        raise NonFiniteInput("bin_series requires finite values")
    if x.size < 2:
        raise InsufficientData(f"need at least 2 values, got {x.size}")
    lo, hi = float(x.min()), float(x.max())
    if lo == hi:
        raise DegenerateRange(f"all {x.size} values equal {lo}")
    if bins is None:
        bins = sturges_bins(x.size)
    if int(bins) != bins or bins < 1:
        raise ValueError(f"bins must be a positive integer, got {bins}")
    counts, edges = np.histogram(x, bins=int(bins), range=(lo, hi))
    return Histogram(bin_edges=edges, counts=counts.astype(np.int64), n=int(x.size))


@dataclass(frozen=True)
class CaseTable:
    """Complete-case rows: ``data[:, j]`` holds column ``names[j]``."""

    keys: tuple
    names: tuple
    data: np.ndarray

    @property
    def n(self):
        return self.data.shape[0]

    def column(self, name):
        try:
            return self.data[:, self.names.index(name)]
        except ValueError:
            raise UnknownIndicator(f"unknown column {name!r}") from None

    def columns(self, names):
        return np.column_stack([self.column(n) for n in names]) if names else np.empty((self.n, 0))

    @property
    def countries(self):
        return [c for c, _ in self.keys]


def complete_cases(panel, indicators, response=None, countries=None):
    """Listwise deletion over the named columns.

    Candidate rows are every ``(country, year)`` of the panel grid (restricted
    to ``countries`` when given), ordered by country code then year. Returns
    the table and the number of candidate rows dropped.
    """
    names = list(indicators) + ([response] if response is not None else [])
    for name in names:
        _check_indicator(panel, name)
    if countries is None:
        countries = panel.countries
    else:
        for c in countries:
            _check_country(panel, c)
        countries = sorted(set(countries))

    keys, rows, dropped = [], [], 0
    for c in countries:
        for y in panel.years:
            row = [panel.get(c, y, name) for name in names]
            if any(v is None for v in row):
                dropped += 1
                continue
            keys.append((c, y))
            rows.append(row)
    if not rows:
        raise NoCompleteRows(f"no rows have all of {names}")
    data = np.array(rows, dtype=float).reshape(len(rows), len(names))
    return CaseTable(tuple(keys), tuple(names), data), dropped
