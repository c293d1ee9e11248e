"""Tokenized ingestion of RDF and tabular edge data.

Turns N-Triples or 3-column delimited files into integer-encoded edge rows
plus a :class:`Vocabulary` that maps every entity and predicate lexical key
to a dense token.  Entities and predicates share one token space, and token
numbering follows first occurrence in the input, so identical input bytes
always produce identical vocabularies and edge lists.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

RESOURCE = "resource"
LITERAL = "literal"

#: Sentinel used inside fixed-length walk buffers; never a vocabulary token.
PAD = -1


class ParseError(ValueError):
    """A malformed statement line or table row, with its 1-based position."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.reason = message


@dataclass(frozen=True)
class Triple:
    """One raw statement before tokenization.

    ``object_kind`` is ``"literal"`` when the object is a literal, in which
    case ``object`` holds the bare lexical form (datatype and language tags
    already stripped into the lexical key).
    """

    subject: str
    predicate: str
    object: str
    object_kind: str = RESOURCE

    def __post_init__(self):
        if not self.subject or not self.predicate:
            raise ValueError("subject and predicate must be non-empty")
        if self.object_kind not in (RESOURCE, LITERAL):
            raise ValueError(f"unknown object_kind: {self.object_kind!r}")

    @property
    def is_literal(self) -> bool:
        return self.object_kind == LITERAL


_STRING_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


def _unescape(raw: str, line: int) -> str:
    if "\\" not in raw:
        return raw
    out = []
    i = 0
    n = len(raw)
    while i < n:
        c = raw[i]
        if c != "\\":
            out.append(c)
            i += 1
            continue
        if i + 1 >= n:
            raise ParseError("dangling escape at end of string", line)
        e = raw[i + 1]
        if e in _STRING_ESCAPES:
            out.append(_STRING_ESCAPES[e])
            i += 2
        elif e in ("u", "U"):
            width = 4 if e == "u" else 8
            hexdigits = raw[i + 2 : i + 2 + width]
            if len(hexdigits) != width:
                raise ParseError(f"truncated \\{e} escape", line)
            try:
                out.append(chr(int(hexdigits, 16)))
            except ValueError:
                raise ParseError(f"bad \\{e} escape: {hexdigits!r}", line) from None
            i += 2 + width
        else:
            raise ParseError(f"unknown escape \\{e}", line)
    return "".join(out)


def _skip_ws(text: str, i: int) -> int:
    n = len(text)
    while i < n and text[i] in " \t":
        i += 1
    return i


def _scan_term(text: str, i: int, line: int):
    """Scan one term starting at ``i``; returns (value, kind, next_index).

    kind is one of ``"iri"``, ``"blank"``, ``"literal"``.  IRIs come back
    without angle brackets, blank nodes keep their ``_:label`` key, literals
    are unescaped lexical forms with any datatype/language tag consumed.
    """
    n = len(text)
    if i >= n:
        raise ParseError("unexpected end of statement", line)
    c = text[i]
    if c == "<":
        end = text.find(">", i + 1)
        if end < 0:
            raise ParseError("unterminated IRI", line)
        return _unescape(text[i + 1 : end], line), "iri", end + 1
    if c == "_" and text.startswith("_:", i):
        j = i + 2
        while j < n and not text[j].isspace():
            j += 1
        if j == i + 2:
            raise ParseError("empty blank node label", line)
        return text[i:j], "blank", j
    if c == '"':
        j = i + 1
        while j < n:
            if text[j] == "\\":
                j += 2
                continue
            if text[j] == '"':
                break
            j += 1
        if j >= n:
            raise ParseError("unterminated literal", line)
        lexical = _unescape(text[i + 1 : j], line)
        j += 1
        # Consume (and drop) a datatype or language tag.
        if text.startswith("^^", j):
            j += 2
            if j >= n or text[j] != "<":
                raise ParseError("expected datatype IRI after ^^", line)
            end = text.find(">", j + 1)
            if end < 0:
                raise ParseError("unterminated datatype IRI", line)
            j = end + 1
        elif j < n and text[j] == "@":
            j += 1
            start = j
            while j < n and (text[j].isalnum() or text[j] == "-"):
                j += 1
            if j == start:
                raise ParseError("empty language tag", line)
        return lexical, "literal", j
    raise ParseError(f"unexpected character {c!r}", line)


def _parse_statement(text: str, line: int) -> Triple:
    i = _skip_ws(text, 0)
    subject, skind, i = _scan_term(text, i, line)
    if skind == "literal":
        raise ParseError("literal not allowed as subject", line)
    i = _skip_ws(text, i)
    predicate, pkind, i = _scan_term(text, i, line)
    if pkind != "iri":
        raise ParseError("predicate must be an IRI", line)
    i = _skip_ws(text, i)
    obj, okind, i = _scan_term(text, i, line)
    i = _skip_ws(text, i)
    if i >= len(text) or text[i] != ".":
        raise ParseError("expected terminating '.'", line)
    i = _skip_ws(text, i + 1)
    if i < len(text) and not text.startswith("#", i):
        raise ParseError("trailing content after '.'", line)
    kind = LITERAL if okind == "literal" else RESOURCE
    return Triple(subject, predicate, obj, kind)


def parse_ntriples(source, strict: bool = False, error_sink: list | None = None):
    """Stream :class:`Triple` objects from line-oriented N-Triples input.

    ``source`` may be a path, a text file object, or a binary file object
    (decoded as UTF-8).  Comment lines (``#``) and blank lines are skipped.
    A malformed line raises :class:`ParseError` when ``strict`` is true;
    otherwise it is skipped, and recorded in ``error_sink`` when one is
    given, so the caller chooses skip-or-abort.
    """
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source, "r", encoding="utf-8") as fh:
            yield from parse_ntriples(fh, strict=strict, error_sink=error_sink)
        return
    if isinstance(source, io.RawIOBase) or (
        hasattr(source, "read") and isinstance(getattr(source, "mode", ""), str) and "b" in getattr(source, "mode", "")
    ):
        source = io.TextIOWrapper(source, encoding="utf-8")
    elif hasattr(source, "read") and not hasattr(source, "encoding"):
        # Binary stream without a mode attribute (e.g. BytesIO).
        probe = source.read(0)
        if isinstance(probe, bytes):
            source = io.TextIOWrapper(source, encoding="utf-8")

    for lineno, raw in enumerate(source, start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            yield _parse_statement(raw.rstrip("\n").rstrip("\r"), lineno)
        except ParseError as err:
            if strict:
                raise
            if error_sink is not None:
                error_sink.append(err)


_DELIMITERS = {"csv": ",", "tsv": "\t"}


def parse_edge_table(path, format: str = "csv", has_header: bool = False):
    """Stream Triples from a 3-column subject/predicate/object table.

    ``format`` is one of ``csv``, ``tsv``, ``txt`` (whitespace-separated).
    Every row becomes a resource-object triple.  A row without exactly three
    columns raises :class:`ParseError` carrying its row number.
    """
    if format not in ("csv", "tsv", "txt"):
        raise ValueError(f"unknown edge table format: {format!r}")
    with open(path, "r", encoding="utf-8", newline="") as fh:
        if format == "txt":
            rows = ((lineno, line.split()) for lineno, line in enumerate(fh, start=1))
            rows = ((lineno, cols) for lineno, cols in rows if cols)
        else:
            reader = csv.reader(fh, delimiter=_DELIMITERS[format])
            rows = ((reader.line_num, cols) for cols in reader if cols)
        for rowno, cols in rows:
            if has_header and rowno == 1:
                continue
            if len(cols) != 3:
                raise ParseError(f"expected 3 columns, got {len(cols)}", rowno)
            yield Triple(cols[0], cols[1], cols[2], RESOURCE)


class Vocabulary:
    """Bijection between lexical keys and contiguous integer tokens.

    Tokens start at 0 and are assigned in first-occurrence order.  Entities
    and predicates share the one token space; a predicate IRI that also
    appears as an entity gets a single token and is counted in both roles.
    ``frequency`` is filled after walk extraction with per-token occurrence
    counts over the walk corpus.
    """

    def __init__(self):
        self.token_of: dict[str, int] = {}
        self.lexical_of: list[str] = []
        self._entity_tokens: set[int] = set()
        self._predicate_tokens: set[int] = set()
        self.frequency: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.lexical_of)

    def __contains__(self, lexical: str) -> bool:
        return lexical in self.token_of

    @property
    def entity_count(self) -> int:
        return len(self._entity_tokens)

    @property
    def predicate_count(self) -> int:
        return len(self._predicate_tokens)

    def entity_tokens(self) -> np.ndarray:
        """Sorted array of tokens that occur as subject or object."""
        return np.array(sorted(self._entity_tokens), dtype=np.int64)

    def intern(self, lexical: str) -> int:
        token = self.token_of.get(lexical)
        if token is None:
            token = len(self.lexical_of)
            self.token_of[lexical] = token
            self.lexical_of.append(lexical)
        return token

    def _intern_entity(self, lexical: str) -> int:
        token = self.intern(lexical)
        self._entity_tokens.add(token)
        return token

    def _intern_predicate(self, lexical: str) -> int:
        token = self.intern(lexical)
        self._predicate_tokens.add(token)
        return token

    def lexical(self, token: int) -> str:
        return self.lexical_of[token]

    def save_tsv(self, path):
        """Write token, lexical, roles, frequency as a TSV file.

        Tabs, newlines, and backslashes inside lexical keys are escaped so
        the file round-trips exactly.
        """
        freq = self.frequency
        with open(path, "w", encoding="utf-8") as fh:
            for token, lexical in enumerate(self.lexical_of):
                roles = ""
                if token in self._entity_tokens:
                    roles += "e"
                if token in self._predicate_tokens:
                    roles += "p"
                count = int(freq[token]) if freq is not None else 0
                fh.write(f"{token}\t{_escape_field(lexical)}\t{roles}\t{count}\n")

    @classmethod
    def load_tsv(cls, path) -> "Vocabulary":
        vocab = cls()
        freqs = []
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh):
                parts = line.rstrip("\n").split("\t")
                if len(parts) != 4:
                    raise ParseError("expected 4 tab-separated fields", lineno + 1)
                token, lexical, roles, count = parts
                if int(token) != len(vocab.lexical_of):
                    raise ParseError("tokens must be contiguous from 0", lineno + 1)
                tok = vocab.intern(_unescape_field(lexical))
                if "e" in roles:
                    vocab._entity_tokens.add(tok)
                if "p" in roles:
                    vocab._predicate_tokens.add(tok)
                freqs.append(int(count))
        if any(freqs):
            vocab.frequency = np.asarray(freqs, dtype=np.int64)
        return vocab


def _escape_field(value: str) -> str:
    return value.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n").replace("\r", "\\r")


def _unescape_field(value: str) -> str:
    if "\\" not in value:
        return value
    out = []
    i = 0
    while i < len(value):
        c = value[i]
        if c == "\\" and i + 1 < len(value):
            nxt = value[i + 1]
            out.append({"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}.get(nxt, nxt))
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def build_vocabulary(triples, include_literals: bool = False):
    """Tokenize a triple stream into (Vocabulary, edge rows).

    Edge rows come back as an ``(E, 3)`` int64 array of
    ``(src_token, pred_token, dst_token)``.  Subjects and predicates are
    always tokenized; literal objects are tokenized (as nodes) only when
    ``include_literals`` is set, otherwise their triples are dropped from
    the edge list.
    """
    vocab = Vocabulary()
    src, pred, dst = [], [], []
    seen_any = False
    for triple in triples:
        seen_any = True
        s = vocab._intern_entity(triple.subject)
        p = vocab._intern_predicate(triple.predicate)
        if triple.is_literal and not include_literals:
            continue
        o = vocab._intern_entity(triple.object)
        src.append(s)
        pred.append(p)
        dst.append(o)
    if not seen_any:
        raise ValueError("empty graph")
    edges = np.empty((len(src), 3), dtype=np.int64)
    edges[:, 0] = src
    edges[:, 1] = pred
    edges[:, 2] = dst
    return vocab, edges
