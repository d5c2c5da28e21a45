"""
Text, JSON and LaTeX renderings of polynomials and reports, the parsers that
read the text and JSON forms back, and terminal colouring via pygments.
"""
import json
import re
from collections.abc import Iterable
from fractions import Fraction
from typing import Any

from pygments import highlight as pygments_highlight
from pygments.formatters import TerminalFormatter
from pygments.lexer import RegexLexer
from pygments.token import Generic
from pygments.token import Name
from pygments.token import Number
from pygments.token import Operator
from pygments.token import Punctuation
from pygments.token import Text
from pygments.token import Whitespace

from b_expansion import BPoly
from coefficients import Coefficient
from coefficients import c_n
from coefficients import c_r_rho
from coefficients import e_n
from coefficients import f_lr
from errors import EngineError
from errors import WordError
from pk_algebra import LETTER_RANK
from pk_algebra import PkPoly
from pk_algebra import WordPoly
from pk_algebra import format_word
from pk_algebra import parse_word

LAYERS: dict[str, type[WordPoly]] = {"pk": PkPoly, "b": BPoly}


def layer_of(poly: WordPoly) -> str:
    return "b" if isinstance(poly, BPoly) else "pk"


def canonical_terms(poly: WordPoly) -> list[tuple[str, int, Fraction]]:
    """(word, pi_exponent, value) by B-degree, pi-exponent, then p < k < s."""
    terms = [
        (word, exponent, value)
        for word, coeff in poly.items()
        for exponent, value in coeff.items()
    ]
    terms.sort(key=lambda t: (len(t[0]), t[1], [LETTER_RANK[c] for c in t[0]]))
    return terms


def _magnitude(value: Fraction) -> str:
    value = abs(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _text_term(word: str, exponent: int, value: Fraction, separator: str) -> str:
    parts = []
    if abs(value) != 1:
        parts.append(_magnitude(value))
    if exponent:
        parts.append(f"pi^{exponent}")
    parts.append(format_word(word, separator))
    return " ".join(parts)


def render_text(poly: WordPoly) -> str:
    """'k - kBs - sBk'; the zero polynomial renders as '0'."""
    pieces = []
    for word, exponent, value in canonical_terms(poly):
        body = _text_term(word, exponent, value, poly.separator)
        if not pieces:
            pieces.append(f"-{body}" if value < 0 else body)
        else:
            pieces.append(f"{'-' if value < 0 else '+'} {body}")
    return " ".join(pieces) if pieces else "0"


def render_coefficient(coeff: Coefficient) -> str:
    pieces = []
    for exponent, value in coeff.items():
        body = _magnitude(value) if abs(value) != 1 or not exponent else ""
        if exponent:
            body = f"{body} pi^{exponent}".strip()
        if not pieces:
            pieces.append(f"-{body}" if value < 0 else body)
        else:
            pieces.append(f"{'-' if value < 0 else '+'} {body}")
    return " ".join(pieces) if pieces else "0"


def _latex_word(word: str, separator: str) -> str:
    joiner = r"\mathcal{B}" if separator == "B" else "b"
    return joiner.join(word)


def render_latex(poly: WordPoly) -> str:
    pieces = []
    for word, exponent, value in canonical_terms(poly):
        parts = []
        magnitude = abs(value)
        if magnitude.denominator != 1:
            parts.append(rf"\frac{{{magnitude.numerator}}}{{{magnitude.denominator}}}")
        elif magnitude != 1:
            parts.append(str(magnitude.numerator))
        if exponent:
            parts.append(rf"\pi^{{{exponent}}}")
        parts.append(_latex_word(word, poly.separator))
        body = " ".join(parts)
        if not pieces:
            pieces.append(f"-{body}" if value < 0 else body)
        else:
            pieces.append(f"{'-' if value < 0 else '+'} {body}")
    return " ".join(pieces) if pieces else "0"


def poly_to_dict(poly: WordPoly, series: str | None = None) -> dict[str, Any]:
    return {
        "series": series,
        "layer": layer_of(poly),
        "order": poly.order,
        "terms": [
            {
                "word": format_word(word, poly.separator),
                "pi_exponent": exponent,
                "num": value.numerator,
                "den": value.denominator,
            }
            for word, exponent, value in canonical_terms(poly)
        ],
    }


def render_json(poly: WordPoly, series: str | None = None) -> str:
    return json.dumps(poly_to_dict(poly, series), indent=2)


def render_poly(poly: WordPoly, output_format: str, series: str | None = None) -> str:
    if output_format == "json":
        return render_json(poly, series)
    if output_format == "latex":
        return render_latex(poly)
    return render_text(poly)


def _layer_class(layer: str) -> type[WordPoly]:
    try:
        return LAYERS[layer]
    except KeyError:
        raise EngineError(f"unknown layer {layer!r}; expected pk or b") from None


def parse_json_poly(text: str) -> WordPoly:
    """Inverse of render_json."""
    try:
        data = json.loads(text)
        cls = _layer_class(data["layer"])
        pairs = [
            (
                parse_word(term["word"], cls.separator, cls.alphabet),
                Coefficient({term["pi_exponent"]: Fraction(term["num"], term["den"])}),
            )
            for term in data["terms"]
        ]
        return cls.from_pairs(pairs, data["order"])
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, EngineError):
            raise
        raise EngineError(f"malformed polynomial JSON: {e}") from None


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<pi>pi\^\d+)|(?P<word>[pks](?:[bB][pks])*)"
    r"|(?P<op>[-+()\[\]]))",
)

_CLOSING = {"(": ")", "[": "]"}


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            raise EngineError(f"cannot parse polynomial text at {text[pos:pos + 12]!r}")
        kind = match.lastgroup
        tokens.append((kind, match.group(kind)))
        pos = match.end()
    return tokens


class _TextParser:
    def __init__(self, tokens: list[tuple[str, str]], cls: type[WordPoly]):
        self.tokens = tokens
        self.pos = 0
        self.cls = cls

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> tuple[str, str]:
        token = self.peek()
        if token is None:
            raise EngineError("unexpected end of polynomial text")
        self.pos += 1
        return token

    def expression(self, closing: str | None) -> list[tuple[str, Coefficient]]:
        pairs: list[tuple[str, Coefficient]] = []
        sign = 1
        expect_term = True
        while True:
            token = self.peek()
            if token is None or token == ("op", closing):
                if expect_term:
                    raise EngineError("polynomial text ends with an operator")
                return pairs
            if token[0] == "op" and token[1] in "+-":
                self.take()
                if token[1] == "-":
                    sign = -sign
                continue
            if not expect_term:
                raise EngineError(f"expected '+' or '-' before {token[1]!r}")
            pairs.extend((w, c * sign) for w, c in self.term())
            sign = 1
            expect_term = False
            token = self.peek()
            if token is not None and token[0] == "op" and token[1] in "+-":
                expect_term = True

    def term(self) -> list[tuple[str, Coefficient]]:
        factor = Coefficient.rational(1)
        kind, value = self.take()
        if kind == "num":
            factor = factor * Fraction(value)
            kind, value = self.take()
        if kind == "pi":
            factor = factor * Coefficient.rational(1, int(value[3:]))
            kind, value = self.take()
        if kind == "word":
            try:
                word = parse_word(value, self.cls.separator, self.cls.alphabet)
            except WordError as e:
                raise EngineError(str(e)) from None
            return [(word, factor)]
        if kind == "op" and value in _CLOSING:
            inner = self.expression(_CLOSING[value])
            self.take()
            return [(w, c * factor) for w, c in inner]
        raise EngineError(f"unexpected {value!r} in polynomial text")


def parse_text_poly(text: str, layer: str = "b", order: int | None = None) -> WordPoly:
    """
    Inverse of render_text. Also accepts grouped forms such as
    '1/2 pi^2 (kBkBk - pBpBp)' and '1/2 [p - k + ...]'.
    """
    cls = _layer_class(layer)
    if text.strip() == "0":
        return cls({}, order or 0)
    parser = _TextParser(_tokenize(text), cls)
    pairs = parser.expression(None)
    if order is None:
        order = max((len(w) - 1 for w, _ in pairs), default=0)
    return cls.from_pairs(pairs, order)


class SeriesLexer(RegexLexer):
    """Lexer for rendered polynomials and verification reports."""

    name = "seacalc"
    aliases = ["seacalc"]

    tokens = {
        "root": [
            (r"\s+", Whitespace),
            (r"\bPASS\b|\bok\b", Generic.Inserted),
            (r"\bFAIL\b", Generic.Error),
            (r"pi\^\d+", Name.Constant),
            (r"\d+(/\d+)?", Number),
            (r"\b[pks](?:[bB][pks])*\b", Name.Variable),
            (r"[-+]", Operator),
            (r"[()\[\]:,]", Punctuation),
            (r".", Text),
        ],
    }


def highlight(text: str, enabled: bool = True) -> str:
    if not enabled:
        return text
    return pygments_highlight(text, SeriesLexer(), TerminalFormatter())


def render_report_text(report: Any, include_timing: bool = True) -> str:
    header = f"[{report.status.upper()}] {report.suite_name} (order {report.order}"
    header += f", {report.runtime_ms} ms)" if include_timing else ")"
    lines = [header]
    for witness in report.witnesses:
        mark = "ok  " if witness.passed else "FAIL"
        expectation = "" if witness.expect_zero else " (expected nonzero)"
        if witness.context:
            expectation = " (context)"
        residual = witness.residual_text()
        line = f"  {mark} {witness.label}{expectation}"
        if residual is not None and (not witness.passed or not witness.expect_zero):
            line += f": {residual}"
        if witness.detail and not witness.passed:
            line += f" [{witness.detail}]"
        lines.append(line)
    return "\n".join(lines)


def render_reports(
    reports: Iterable[Any],
    output_format: str,
    include_timing: bool = True,
) -> str:
    reports = list(reports)
    if output_format == "json":
        return json.dumps(
            [r.to_dict(include_timing=include_timing) for r in reports],
            indent=2,
        )
    return "\n".join(render_report_text(r, include_timing) for r in reports)


def coefficient_tables(rmax: int) -> dict[str, Any]:
    """c_n, e_n, f_(l,r) and c(r, rho) up to rmax, as exact strings."""
    return {
        "c_n": {str(n): str(c_n(n)) for n in range(1, rmax + 1)},
        "e_n": {str(n): str(e_n(n)) for n in range(rmax + 1)},
        "f_lr": {
            f"{l},{r}": str(f_lr(l, r)) for r in range(rmax + 1) for l in range(r + 1)
        },
        "c_r_rho": {
            f"{r},{rho}": render_coefficient(c_r_rho(r, rho))
            for r in range(rmax + 1)
            for rho in range(r + 1)
        },
    }


def render_coefficient_tables(rmax: int, output_format: str = "text") -> str:
    tables = coefficient_tables(rmax)
    if output_format == "json":
        return json.dumps(tables, indent=2)
    lines = []
    for name, values in tables.items():
        lines.append(f"{name}:")
        width = max((len(k) for k in values), default=0)
        lines.extend(f"  {key.ljust(width)}  {value}" for key, value in values.items())
    return "\n".join(lines)
