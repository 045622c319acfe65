"""Reading and writing word embedding files.

Two plain-text formats are supported: GloVe text (one "token c1 ... cD" row
per line, no header) and word2vec/fastText text (same rows after a leading
"N D" count/dim header). Tokens keep file order, which for the published
GloVe/fastText releases is frequency order, so truncating to the first
``max_words`` rows gives the most frequent words.
"""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import BinaryIO, Iterable, TextIO, Union

import numpy as np

from .errors import EmbeddingFormatError

log = logging.getLogger(__name__)

GLOVE_TEXT = "glove_text"
W2V_TEXT = "w2v_text"

DEFAULT_MAX_WORDS = 50_000


@dataclass(eq=False)
class EmbeddingSpace:
    """A vocabulary in file (frequency) order plus its coordinate matrix.

    ``vectors`` is an N x D float64 array; row i belongs to ``words[i]``.
    The matrix is marked read-only so a space can be shared freely.
    """

    words: list[str]
    vectors: np.ndarray
    index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        self.vectors = np.ascontiguousarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2:
            raise ValueError("vectors must be a 2-d array")
        if len(self.words) != self.vectors.shape[0]:
            raise ValueError(
                "word count %d does not match %d matrix rows"
                % (len(self.words), self.vectors.shape[0])
            )
        if len(self.words) == 0:
            raise ValueError("an embedding space needs at least one word")
        self.index = {}
        for i, w in enumerate(self.words):
            if w in self.index:
                raise ValueError("duplicate token %r" % w)
            self.index[w] = i
        if not np.isfinite(self.vectors).all():
            raise ValueError("vectors contain non-finite values")
        self.vectors.setflags(write=False)

    @property
    def n_words(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return self.n_words


def detect_format(first_line: str) -> str:
    """Classify an embedding file by its first line.

    A line made of exactly two positive integers is the word2vec/fastText
    count/dim header; anything else is a GloVe data row.
    """
    parts = first_line.strip().split()
    if not parts:
        raise EmbeddingFormatError("cannot detect format of an empty line")
    if len(parts) == 2:
        try:
            n, d = int(parts[0]), int(parts[1])
        except ValueError:
            return GLOVE_TEXT
        if n > 0 and d > 0:
            return W2V_TEXT
    return GLOVE_TEXT


def _as_text_stream(source: Union[str, Path, bytes, TextIO, BinaryIO]) -> TextIO:
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8", newline="")
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8"))
    if isinstance(source, io.TextIOBase):
        return source
    # binary file-like
    return io.TextIOWrapper(source, encoding="utf-8", newline="")


def parse_embeddings(
    source: Union[str, Path, bytes, TextIO, BinaryIO],
    fmt: str | None = None,
    max_words: int = DEFAULT_MAX_WORDS,
) -> EmbeddingSpace:
    """Parse a GloVe/word2vec text stream into an EmbeddingSpace.

    Keeps the first ``max_words`` unique tokens in file order. A repeated
    token keeps its first vector and does not consume a slot. The dimension
    comes from the w2v header when present, otherwise from the first data
    row; every later row must match it.
    """
    if max_words < 1:
        raise ValueError("max_words must be positive")
    stream = _as_text_stream(source)

    words: list[str] = []
    seen: dict[str, int] = {}
    rows: list[np.ndarray] = []
    dim: int | None = None
    lineno = 0
    first_data_line = True

    for raw in stream:
        lineno += 1
        line = raw.rstrip()
        if not line:
            continue
        if first_data_line:
            first_data_line = False
            line_fmt = detect_format(line)
            if fmt is None:
                fmt = line_fmt
            if fmt == W2V_TEXT:
                if line_fmt != W2V_TEXT:
                    raise EmbeddingFormatError(
                        "line 1: expected a 'N D' header, got %r" % line[:80]
                    )
                dim = int(line.split()[1])
                continue
        parts = line.split(" ")
        token = parts[0]
        coords = parts[1:]
        if dim is None:
            dim = len(coords)
            if dim == 0:
                raise EmbeddingFormatError("line %d: no coordinates found" % lineno)
        if len(coords) != dim:
            raise EmbeddingFormatError(
                "line %d: expected %d coordinates, found %d"
                % (lineno, dim, len(coords))
            )
        if token in seen:
            log.warning(
                "line %d: duplicate token %r, keeping first occurrence",
                lineno,
                token,
            )
            continue
        try:
            vec = np.array(coords, dtype=np.float64)
        except ValueError as exc:
            raise EmbeddingFormatError(
                "line %d: non-numeric coordinate (%s)" % (lineno, exc)
            ) from None
        if not np.isfinite(vec).all():
            raise EmbeddingFormatError(
                "line %d: non-finite coordinate for token %r" % (lineno, token)
            )
        seen[token] = len(words)
        words.append(token)
        rows.append(vec)
        if len(words) >= max_words:
            break

    if not rows:
        raise EmbeddingFormatError("no data rows found in input")
    return EmbeddingSpace(words=words, vectors=np.vstack(rows))


def load_embeddings(
    path: Union[str, Path],
    fmt: str | None = None,
    max_words: int = DEFAULT_MAX_WORDS,
) -> EmbeddingSpace:
    """Open ``path`` and parse it. '-' reads stdin."""
    if str(path) == "-":
        import sys

        return parse_embeddings(sys.stdin.buffer, fmt=fmt, max_words=max_words)
    with open(path, "rb") as fh:
        return parse_embeddings(fh, fmt=fmt, max_words=max_words)


def format_glove_text(space: EmbeddingSpace) -> str:
    """Render a space back to GloVe text. Coordinates use the shortest
    representation that round-trips float64 exactly."""
    lines = []
    for word, row in zip(space.words, space.vectors):
        lines.append(word + " " + " ".join(repr(float(v)) for v in row) + "\n")
    return "".join(lines)


def write_glove_text(space: EmbeddingSpace, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_glove_text(space))


def normalized(space: EmbeddingSpace) -> EmbeddingSpace:
    """Copy of the space with rows scaled to unit length.

    Zero rows are left untouched; they carry no direction to preserve.
    """
    norms = np.linalg.norm(space.vectors, axis=1, keepdims=True)
    safe = np.where(norms == 0.0, 1.0, norms)
    return EmbeddingSpace(words=list(space.words), vectors=space.vectors / safe)
