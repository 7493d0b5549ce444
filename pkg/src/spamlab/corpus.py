"""Email ingestion (EML, mbox, CSV) and deterministic stratified splitting."""

from __future__ import annotations

import csv
import email
import email.policy
import hashlib
import io
import logging
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from html.parser import HTMLParser
from pathlib import Path
from typing import BinaryIO, Callable, Iterable

from .errors import (
    BadHeader,
    BadLabel,
    BadRow,
    DegenerateSplit,
    EmptyData,
    EmptyMailbox,
    MalformedMessage,
    UnbalancedQuote,
    UnsupportedContent,
)
from .rng import SplitMix64

log = logging.getLogger(__name__)


class Label(str, Enum):
    SPAM = "spam"
    HAM = "ham"

    @classmethod
    def parse(cls, value: str) -> "Label":
        return cls(value.strip().lower())

    def __str__(self):
        return self.value


# Fixed class ordering used for tie-breaks everywhere in the pipeline.
CLASS_ORDER = (Label.HAM, Label.SPAM)


@dataclass(frozen=True)
class RawEmail:
    id: str
    subject: str
    body: str
    source: str = ""


@dataclass(frozen=True)
class LabeledExample:
    text: str
    label: Label
    id: str = ""


@dataclass(frozen=True)
class Corpus:
    examples: tuple[LabeledExample, ...]
    class_counts: dict = field(default_factory=dict)
    tag: str = ""

    @classmethod
    def from_examples(cls, examples: Iterable[LabeledExample], tag: str = "") -> "Corpus":
        examples = tuple(examples)
        counts = Counter(ex.label for ex in examples)
        return cls(examples, dict(counts), tag)

    def __len__(self):
        return len(self.examples)

    def __iter__(self):
        return iter(self.examples)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.75
    seed: int = 0
    stratified: bool = True

    def __post_init__(self):
        if not 0 < self.train_fraction < 1:
            raise ValueError(f"train_fraction must lie in (0, 1), got {self.train_fraction}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class CorpusSplit:
    train: Corpus
    test: Corpus


# -- EML ------------------------------------------------------------------

_SEPARATOR = re.compile(rb"\r?\n\r?\n")


class _TextExtractor(HTMLParser):
    _SKIP = {"script", "style", "head"}

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.parts: list[str] = []
        self._skip = 0

    def handle_starttag(self, tag, attrs):
        if tag in self._SKIP:
            self._skip += 1
        elif tag in ("br", "p", "div", "tr", "li"):
            self.parts.append("\n")

    def handle_endtag(self, tag):
        if tag in self._SKIP and self._skip:
            self._skip -= 1

    def handle_data(self, data):
        if not self._skip:
            self.parts.append(data)


def html_to_text(html: str) -> str:
    parser = _TextExtractor()
    parser.feed(html)
    parser.close()
    return "".join(parser.parts)


def _decode_part(part) -> str:
    payload = part.get_payload(decode=True)
    if payload is None:
        payload = b""
    charset = part.get_content_charset() or "utf-8"
    try:
        text = payload.decode(charset, errors="replace")
    except LookupError:
        text = payload.decode("utf-8", errors="replace")
    return text.replace("\r\n", "\n")


def parse_eml(raw: bytes, id: str = "", source: str = "") -> RawEmail:
    """Parse one RFC-822 style message into subject and plain-text body.

    Multipart messages yield their first ``text/plain`` part that is not an
    attachment; HTML-only messages fall back to tag-stripped text. Transfer
    encodings are undone and the charset decoded with replacement characters.
    """
    if not _SEPARATOR.search(raw):
        raise MalformedMessage(f"{source or 'message'}: no blank line between headers and body")
    msg = email.message_from_bytes(raw, policy=email.policy.default)

    plain = html = None
    for part in msg.walk():
        if part.is_multipart() or part.is_attachment():
            continue
        ctype = part.get_content_type()
        if ctype == "text/plain" and plain is None:
            plain = part
            break
        if ctype == "text/html" and html is None:
            html = part
    if plain is not None:
        body = _decode_part(plain)
    elif html is not None:
        body = html_to_text(_decode_part(html))
    else:
        raise UnsupportedContent(f"{source or 'message'}: no text part ({msg.get_content_type()})")

    subject = msg.get("subject", "")
    subject = str(subject) if subject is not None else ""
    if not id:
        id = source or hashlib.sha256(raw).hexdigest()[:16]
    return RawEmail(id=id, subject=subject, body=body, source=source)


def compose_eml(subject: str, body: str, encoding: str = "8bit", charset: str = "utf-8") -> bytes:
    """Build a single-part text/plain message. Inverse of ``parse_eml``."""
    import base64
    import quopri
    from email.header import Header

    raw_body = body.replace("\n", "\r\n").encode(charset)
    if encoding == "base64":
        encoded = base64.encodebytes(raw_body)
    elif encoding == "quoted-printable":
        encoded = quopri.encodestring(raw_body)
    elif encoding in ("7bit", "8bit"):
        encoded = raw_body
    else:
        raise ValueError(f"unsupported transfer encoding {encoding!r}")
    try:
        subject.encode("ascii")
        subj_header = subject
    except UnicodeEncodeError:
        subj_header = Header(subject, "utf-8").encode()
    head = (
        f"Subject: {subj_header}\r\n"
        "MIME-Version: 1.0\r\n"
        f"Content-Type: text/plain; charset={charset}\r\n"
        f"Content-Transfer-Encoding: {encoding}\r\n\r\n"
    )
    return head.encode("ascii") + encoded


# -- mbox -----------------------------------------------------------------

_FROM_LINE = re.compile(rb"^From ", re.M)
_ESCAPED_FROM = re.compile(rb"^>(>*From )", re.M)


def parse_mbox(
    stream: BinaryIO,
    source: str = "mbox",
    on_skip: Callable[[int, Exception], None] | None = None,
) -> list[RawEmail]:
    """Split a "From "-delimited mailbox and parse each message.

    Messages that fail to parse are passed to ``on_skip(index, error)``
    (logged as warnings by default) and left out of the result.
    """
    data = stream.read()
    starts = [m.start() for m in _FROM_LINE.finditer(data)]
    if not starts:
        raise EmptyMailbox(f"{source}: no messages found")

    emails = []
    for index, start in enumerate(starts):
        end = starts[index + 1] if index + 1 < len(starts) else len(data)
        chunk = data[start:end]
        # drop the envelope line, undo mboxrd quoting
        nl = chunk.find(b"\n")
        chunk = b"" if nl < 0 else chunk[nl + 1:]
        chunk = _ESCAPED_FROM.sub(rb"\1", chunk)
        try:
            emails.append(parse_eml(chunk, id=f"{source}#{index}", source=f"{source}#{index}"))
        except (MalformedMessage, UnsupportedContent) as exc:
            if on_skip is not None:
                on_skip(index, exc)
            else:
                log.warning("skipping message %d of %s: %s", index, source, exc)
    return emails


def load_eml_dir(root: str | Path) -> "Corpus":
    """Load ``root/spam/*`` and ``root/ham/*`` message files."""
    root = Path(root)
    examples = []
    found = False
    for label in (Label.SPAM, Label.HAM):
        sub = root / label.value
        if not sub.is_dir():
            continue
        found = True
        for path in sorted(p for p in sub.rglob("*") if p.is_file()):
            rel = path.relative_to(root).as_posix()
            msg = parse_eml(path.read_bytes(), id=rel, source=str(path))
            examples.append(to_example(msg, label))
    if not found:
        raise EmptyData(f"{root}: expected 'spam' and/or 'ham' subdirectories")
    return Corpus.from_examples(examples)


def load_mbox_dir(root: str | Path) -> "Corpus":
    """Load ``root/spam.mbox`` and ``root/ham.mbox``."""
    root = Path(root)
    examples = []
    for label in (Label.SPAM, Label.HAM):
        path = root / f"{label.value}.mbox"
        if not path.exists():
            continue
        with open(path, "rb") as fh:
            for msg in parse_mbox(fh, source=path.name):
                examples.append(to_example(msg, label))
    if not examples:
        raise EmptyData(f"{root}: no spam.mbox or ham.mbox with messages")
    return Corpus.from_examples(examples)


# -- CSV ------------------------------------------------------------------

def load_csv(path: str | Path) -> Corpus:
    """Read a ``label,text`` CSV. Row numbers in errors count the header as row 1."""
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        return read_csv(fh, name=str(path))


def read_csv(fh, name: str = "<csv>") -> Corpus:
    reader = csv.reader(fh, strict=True)
    row = 1
    try:
        header = next(reader, None)
    except csv.Error as exc:
        raise UnbalancedQuote(f"{name}: {exc}", row=row) from None
    if header is None or [h.strip().lower() for h in header] != ["label", "text"]:
        raise BadHeader(f"{name}: expected header 'label,text', got {header!r}", row=1)

    examples = []
    while True:
        row += 1
        try:
            record = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            raise UnbalancedQuote(f"{name}: {exc}", row=row) from None
        if len(record) != 2:
            raise BadRow(f"{name}: expected 2 fields, got {len(record)}", row=row)
        try:
            label = Label.parse(record[0])
        except ValueError:
            raise BadLabel(f"{name}: label {record[0]!r} is not spam or ham", row=row) from None
        examples.append(LabeledExample(record[1], label, id=str(row - 2)))
    return Corpus.from_examples(examples)


def write_csv(corpus: Corpus, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["label", "text"])
    for ex in corpus:
        writer.writerow([ex.label.value, ex.text])


def dump_csv(corpus: Corpus) -> bytes:
    buf = io.StringIO()
    write_csv(corpus, buf)
    return buf.getvalue().encode("utf-8")


# -- examples and splits --------------------------------------------------

def to_example(email_: RawEmail, label: Label, include_subject: bool = True) -> LabeledExample:
    text = email_.subject + "\n" + email_.body if include_subject else email_.body
    return LabeledExample(text, Label(label), id=email_.id)


def _exact_fraction(x) -> Fraction:
    if isinstance(x, float):
        # 0.29 * 100 must floor to 29, not 28
        return Fraction(repr(x))
    return Fraction(x)


def _train_quotas(class_sizes: dict, fraction: Fraction, order: list) -> dict:
    """Per-class floor, topped up by largest remainder to floor(fraction * N)."""
    quotas = {c: math.floor(fraction * n) for c, n in class_sizes.items()}
    target = math.floor(fraction * sum(class_sizes.values()))
    leftover = target - sum(quotas.values())
    if leftover > 0:
        rank = sorted(order, key=lambda c: (-(fraction * class_sizes[c] - quotas[c]), order.index(c)))
        for c in rank[:leftover]:
            quotas[c] += 1
    return quotas


def stratified_split(corpus: Corpus, spec: SplitSpec) -> CorpusSplit:
    """Seeded, deterministic train/test split.

    Each class contributes ``floor(train_fraction * class_count)`` examples
    to train; if those floors fall short of ``floor(train_fraction * N)``
    the classes with the largest fractional remainders get one more
    (so 750/750 at 0.75 gives 1125/375). Both sides keep corpus order.
    """
    if len(corpus) == 0:
        raise EmptyData("cannot split an empty corpus")
    fraction = _exact_fraction(spec.train_fraction)
    rng = SplitMix64(spec.seed)

    if spec.stratified:
        labels = sorted({ex.label for ex in corpus}, key=lambda l: l.value)
        groups = {l: [i for i, ex in enumerate(corpus.examples) if ex.label == l] for l in labels}
        small = [l.value for l, g in groups.items() if len(g) < 2]
        if small:
            raise DegenerateSplit(f"stratified split needs >= 2 examples per class: {small}")
    else:
        labels = ["*"]
        groups = {"*": list(range(len(corpus)))}

    quotas = _train_quotas({l: len(g) for l, g in groups.items()}, fraction, labels)
    train_idx = []
    for l in labels:
        members = list(groups[l])
        rng.shuffle(members)
        train_idx.extend(members[: quotas[l]])

    chosen = set(train_idx)
    if not chosen or len(chosen) == len(corpus):
        raise DegenerateSplit(
            f"train_fraction {spec.train_fraction} leaves "
            f"{'train' if not chosen else 'test'} empty for {len(corpus)} examples"
        )
    train = [ex for i, ex in enumerate(corpus.examples) if i in chosen]
    test = [ex for i, ex in enumerate(corpus.examples) if i not in chosen]
    return CorpusSplit(Corpus.from_examples(train, "train"), Corpus.from_examples(test, "test"))
