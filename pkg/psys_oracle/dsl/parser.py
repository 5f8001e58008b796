"""
Parser for the line-oriented .psys format.

Each line is tokenized on its own (comments stripped), then dispatched on its
leading section keyword. Rule lines follow `@rules` until the next section.
Every error carries the SourceSpan of the offending token.
"""

from __future__ import annotations

import re
from collections import Counter, namedtuple
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from loguru import logger

from psys_oracle.domain.model import (
    Charge,
    DivideRule,
    EvolveRule,
    InnerMembrane,
    RuleBase,
    SendInRule,
    SendOutRule,
    SystemSpec,
    validate_system,
)
from psys_oracle.domain.multiset import Multiset
from psys_oracle.exceptions import (
    DuplicateLabel,
    DuplicateSymbol,
    InvalidSystemError,
    NegativeMultiplicity,
    PsysSyntaxError,
)
from psys_oracle.span import SourceSpan

Token = namedtuple("Token", ["type", "value", "line", "column"])

TOKEN_SPEC = [
    ("SECTION", r"@[A-Za-z]+"),
    ("ARROW", r"->"),
    ("EMPTY_OPEN", r"\[\]_"),
    ("CLOSE", r"\]_"),
    ("OPEN", r"\["),
    ("CARET", r"\^"),
    ("COLON", r":"),
    ("STAR", r"\*"),
    ("PLUS", r"\+"),
    ("MINUS", r"-"),
    ("DOT", r"\."),
    ("WORD", r"[A-Za-z0-9_']+"),
    ("SPACE", r"[ \t\r]+"),
    ("MISMATCH", r"."),
]
TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in TOKEN_SPEC))

CHARGES = {"0": Charge.NEUTRAL, "+": Charge.POSITIVE, "-": Charge.NEGATIVE}
HEADER = "@psys 1"


def tokenize(text: str, line_no: int) -> List[Token]:
    tokens = []
    for match in TOKEN_RE.finditer(text):
        kind = match.lastgroup
        value = match.group()
        column = match.start() + 1
        if kind == "SPACE":
            continue
        if kind == "MISMATCH":
            raise PsysSyntaxError(SourceSpan(line=line_no, column=column), f"a token, found {value!r}")
        tokens.append(Token(kind, value, line_no, column))
    return tokens


class _LineCursor:
    """Sequential reader over the tokens of one line."""

    def __init__(self, tokens: List[Token], line_no: int, line_len: int):
        self.tokens = tokens
        self.pos = 0
        self.line_no = line_no
        self.line_len = line_len

    def span(self) -> SourceSpan:
        if self.pos < len(self.tokens):
            tok = self.tokens[self.pos]
            return SourceSpan(line=tok.line, column=tok.column)
        return SourceSpan(line=self.line_no, column=self.line_len + 1)

    def peek(self, offset: int = 0) -> Optional[Token]:
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def take(self, kind: str, expected: str) -> Token:
        tok = self.peek()
        if tok is None or tok.type != kind:
            raise PsysSyntaxError(self.span(), expected)
        self.pos += 1
        return tok

    def word(self, expected: str) -> str:
        return self.take("WORD", expected).value

    def charge(self) -> Charge:
        tok = self.peek()
        if tok is not None and (tok.type in ("PLUS", "MINUS") or (tok.type == "WORD" and tok.value == "0")):
            self.pos += 1
            return CHARGES[tok.value]
        raise PsysSyntaxError(self.span(), "a charge (0, + or -)")

    def integer(self) -> int:
        sign = 1
        if self.peek() is not None and self.peek().type == "MINUS":
            self.pos += 1
            sign = -1
        tok = self.take("WORD", "an integer")
        if not tok.value.isdigit():
            raise PsysSyntaxError(SourceSpan(line=tok.line, column=tok.column), "an integer")
        return sign * int(tok.value)

    def end(self) -> None:
        if not self.at_end():
            raise PsysSyntaxError(self.span(), "end of line")

    def multiset(self, stop: Tuple[str, ...] = ()) -> Multiset:
        """mset := "." | (symbol ("*" INT)?)+ ; reading stops at a token type in `stop`."""
        tok = self.peek()
        if tok is None or tok.type in stop:
            raise PsysSyntaxError(self.span(), "a multiset ('.' for empty)")
        if tok.type == "DOT":
            self.pos += 1
            return Multiset()
        counts: Counter = Counter()
        while not self.at_end() and self.peek().type not in stop:
            symbol = self.word("an object symbol")
            count = 1
            if self.peek() is not None and self.peek().type == "STAR":
                self.pos += 1
                span = self.span()
                count = self.integer()
                if count < 0:
                    raise NegativeMultiplicity(span, "a non-negative multiplicity")
            counts[symbol] += count
        return Multiset(counts)


def parse_multiset(text: str) -> Multiset:
    """Parse a multiset literal such as `a*3 b` or `.`; zero multiplicities vanish."""
    tokens = tokenize(text, 1)
    cursor = _LineCursor(tokens, 1, len(text))
    result = cursor.multiset()
    cursor.end()
    return result


def _membrane_tail(cursor: _LineCursor, kind: str) -> Tuple[str, Charge, SourceSpan]:
    """Read `]_label^charge` (or `[]_label^charge` when kind is EMPTY_OPEN)."""
    cursor.take(kind, "']_'" if kind == "CLOSE" else "'[]_'")
    span = cursor.span()
    label = cursor.word("a membrane label")
    cursor.take("CARET", "'^'")
    return label, cursor.charge(), span


def _same_label(first: str, other: str, span: SourceSpan) -> None:
    if other != first:
        raise PsysSyntaxError(span, f"label {first!r} on both sides of the rule")


def parse_rule(cursor: _LineCursor) -> RuleBase:
    """Parse one rule line into its Evolve/SendIn/SendOut/Divide form."""
    tok = cursor.peek()
    if tok is not None and tok.type == "WORD":
        obj = cursor.word("an object symbol")
        label, charge, _ = _membrane_tail(cursor, "EMPTY_OPEN")
        cursor.take("ARROW", "'->'")
        cursor.take("OPEN", "'['")
        result = cursor.word("an object symbol")
        other, new_charge, span = _membrane_tail(cursor, "CLOSE")
        _same_label(label, other, span)
        cursor.end()
        return SendInRule(label=label, charge=charge, obj=obj, new_charge=new_charge, result=result)

    cursor.take("OPEN", "'[' or an object symbol")
    obj = cursor.word("an object symbol")
    if cursor.peek() is not None and cursor.peek().type == "ARROW":
        cursor.pos += 1
        rhs = cursor.multiset(stop=("CLOSE",))
        label, charge, _ = _membrane_tail(cursor, "CLOSE")
        cursor.end()
        return EvolveRule(label=label, charge=charge, obj=obj, rhs=rhs)

    label, charge, _ = _membrane_tail(cursor, "CLOSE")
    cursor.take("ARROW", "'->'")
    nxt = cursor.peek()
    if nxt is not None and nxt.type == "EMPTY_OPEN":
        other, new_charge, span = _membrane_tail(cursor, "EMPTY_OPEN")
        _same_label(label, other, span)
        result = cursor.word("an object symbol")
        cursor.end()
        return SendOutRule(label=label, charge=charge, obj=obj, new_charge=new_charge, result=result)

    cursor.take("OPEN", "'[' or '[]_'")
    first = cursor.word("an object symbol")
    other, first_charge, span = _membrane_tail(cursor, "CLOSE")
    _same_label(label, other, span)
    cursor.take("OPEN", "'['")
    second = cursor.word("an object symbol")
    other, second_charge, span = _membrane_tail(cursor, "CLOSE")
    _same_label(label, other, span)
    cursor.end()
    return DivideRule(
        label=label,
        charge=charge,
        obj=obj,
        first_charge=first_charge,
        first=first,
        second_charge=second_charge,
        second=second,
    )


class _SystemBuilder:
    """Accumulates sections and remembers where each element was first seen."""

    def __init__(self):
        self.objects: List[str] = []
        self.labels: List[str] = []
        self.skin: Optional[str] = None
        self.init: Optional[Multiset] = None
        self.init_label: Optional[Tuple[str, SourceSpan]] = None
        self.inner: List[InnerMembrane] = []
        self.input_label: Optional[str] = None
        self.bound: Optional[int] = None
        self.rules: List[RuleBase] = []
        self.rule_spans: List[SourceSpan] = []
        self.name_spans: Dict[str, List[SourceSpan]] = {}
        self.first_span: Optional[SourceSpan] = None

    def note_words(self, tokens: List[Token]) -> None:
        for tok in tokens:
            if tok.type == "WORD":
                self.name_spans.setdefault(tok.value, []).append(
                    SourceSpan(line=tok.line, column=tok.column)
                )

    def locate(self, error: InvalidSystemError) -> SourceSpan:
        """Best source position for a validation error."""
        if error.ordinal is not None and error.ordinal < len(self.rule_spans):
            return self.rule_spans[error.ordinal]
        spans = self.name_spans.get(error.element)
        if spans:
            duplicate = isinstance(error, (DuplicateLabel, DuplicateSymbol))
            return spans[1] if duplicate and len(spans) > 1 else spans[0]
        return self.first_span or SourceSpan(line=1, column=1)

    def section(self, keyword: str, cursor: _LineCursor, span: SourceSpan) -> None:
        if keyword == "@objects":
            if cursor.at_end():
                raise PsysSyntaxError(cursor.span(), "at least one object symbol")
            while not cursor.at_end():
                self.objects.append(cursor.word("an object symbol"))
        elif keyword == "@labels":
            if cursor.at_end():
                raise PsysSyntaxError(cursor.span(), "at least one label")
            while not cursor.at_end():
                self.labels.append(cursor.word("a label"))
        elif keyword == "@skin":
            if self.skin is not None:
                raise PsysSyntaxError(span, "a single @skin section")
            self.skin = cursor.word("the skin label")
            cursor.end()
        elif keyword in ("@inner", "@init"):
            label_span = cursor.span()
            label = cursor.word("a membrane label")
            parent = None
            if keyword == "@inner" and cursor.peek() is not None and cursor.peek().value == "in":
                cursor.pos += 1
                parent = cursor.word("a parent label")
            cursor.take("COLON", "':'")
            contents = cursor.multiset()
            cursor.end()
            if keyword == "@inner":
                self.inner.append(InnerMembrane(label=label, contents=contents, parent=parent))
            else:
                if self.init is not None:
                    raise PsysSyntaxError(span, "a single @init section")
                self.init = contents
                self.init_label = (label, label_span)
        elif keyword == "@input":
            if self.input_label is not None:
                raise PsysSyntaxError(span, "a single @input section")
            self.input_label = cursor.word("the input membrane label")
            cursor.end()
        elif keyword == "@bound":
            if self.bound is not None:
                raise PsysSyntaxError(span, "a single @bound section")
            self.bound = cursor.integer()
            cursor.end()
        else:
            raise PsysSyntaxError(span, "a section keyword (@objects, @labels, @skin, @inner, @init, @input, @bound, @rules)")

    def build(self, end_span: SourceSpan) -> SystemSpec:
        if self.skin is None:
            raise PsysSyntaxError(end_span, "an @skin section")
        if self.bound is None:
            raise PsysSyntaxError(end_span, "a @bound section")
        if self.init_label is not None and self.init_label[0] != self.skin:
            raise PsysSyntaxError(self.init_label[1], f"the skin label {self.skin!r} after @init")
        return SystemSpec(
            alphabet=tuple(self.objects),
            labels=tuple(self.labels),
            skin=self.skin,
            skin_init=self.init or Multiset(),
            inner_init=tuple(self.inner),
            rules=tuple(self.rules),
            bound=self.bound,
            input_label=self.input_label,
        )


def parse_system(text: str) -> SystemSpec:
    """Parse .psys text and return the validated SystemSpec."""
    builder = _SystemBuilder()
    header_seen = False
    in_rules = False
    last_line = 1
    for line_no, raw in enumerate(text.splitlines(), start=1):
        last_line = line_no
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if not header_seen:
            column = len(line) - len(line.lstrip()) + 1
            if line.strip().split() != HEADER.split():
                raise PsysSyntaxError(SourceSpan(line=line_no, column=column), f"'{HEADER}' header")
            header_seen = True
            builder.first_span = SourceSpan(line=line_no, column=column)
            continue
        tokens = tokenize(line, line_no)
        cursor = _LineCursor(tokens, line_no, len(line))
        first = tokens[0]
        if first.type == "SECTION":
            cursor.pos = 1
            in_rules = first.value == "@rules"
            if in_rules:
                cursor.end()
                continue
            builder.note_words(tokens[1:])
            builder.section(first.value, cursor, SourceSpan(line=line_no, column=first.column))
        elif in_rules:
            builder.rule_spans.append(cursor.span())
            builder.rules.append(parse_rule(cursor))
        else:
            raise PsysSyntaxError(cursor.span(), "a section keyword")
    if not header_seen:
        raise PsysSyntaxError(SourceSpan(line=1, column=1), f"'{HEADER}' header")

    spec = builder.build(SourceSpan(line=last_line, column=1))
    try:
        validated = validate_system(spec)
    except InvalidSystemError as e:
        e.with_span(builder.locate(e))
        logger.debug(f"Validation failed: {e}")
        raise
    logger.debug(f"Parsed system: {validated.summary()}")
    return validated


def load_system(path: str | Path) -> SystemSpec:
    """Read and parse a .psys file. Bytes that are not UTF-8 are a syntax error at their position."""
    data = Path(path).read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        line_start = data.rfind(b"\n", 0, e.start) + 1
        span = SourceSpan(line=data.count(b"\n", 0, e.start) + 1, column=e.start - line_start + 1)
        raise PsysSyntaxError(span, "UTF-8 text")
    return parse_system(text)
