import base64
import io
import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from spamlab.corpus import (
    Corpus,
    LabeledExample,
    Label,
    RawEmail,
    SplitSpec,
    compose_eml,
    load_csv,
    parse_eml,
    parse_mbox,
    read_csv,
    stratified_split,
    to_example,
    write_csv,
)
from spamlab.errors import (
    BadHeader,
    BadLabel,
    DegenerateSplit,
    EmptyData,
    EmptyMailbox,
    MalformedMessage,
    UnbalancedQuote,
    UnsupportedContent,
)


class TestParseEml:
    def test_minimal(self):
        e = parse_eml(b"Subject: hi\r\n\r\nhello")
        assert (e.subject, e.body) == ("hi", "hello")

    def test_base64_body(self):
        assert base64.b64decode("aGVsbG8=") == b"hello"
        raw = b"Subject: x\r\nContent-Transfer-Encoding: base64\r\n\r\naGVsbG8="
        assert parse_eml(raw).body == "hello"

    def test_missing_subject_is_empty(self):
        assert parse_eml(b"From: a@b\n\nbody").subject == ""

    def test_no_separator(self):
        with pytest.raises(MalformedMessage):
            parse_eml(b"Subject: hi\r\nFrom: a@b\r\n")

    @pytest.mark.parametrize("name,subject,body", [
        ("base64.eml", "Quarterly report", "Hi team,\nthe report is attached.\nThanks\n"),
        ("qp.eml", "Café special €5",
         "Win a free café voucher €5 today! This line is long enough to be soft-wrapped by the encoder.\n"),
        ("multipart.eml", "Meeting notes", "Notes from the meeting: naïve plan approved."),
        ("html_only.eml", "Limited offer", "\nClick here now\n"),
        ("bad_charset.eml", "odd bytes", "caf� ok\n"),
    ])
    def test_golden_fixtures(self, data_dir, name, subject, body):
        e = parse_eml((data_dir / "eml" / name).read_bytes())
        assert (e.subject, e.body) == (subject, body)

    def test_image_only(self, data_dir):
        with pytest.raises(UnsupportedContent):
            parse_eml((data_dir / "eml" / "image_only.eml").read_bytes())

    @pytest.mark.parametrize("encoding", ["7bit", "8bit", "base64", "quoted-printable"])
    def test_compose_roundtrip(self, encoding):
        subject, body = "Free entry", "line one\nline = two\n"
        e = parse_eml(compose_eml(subject, body, encoding))
        assert (e.subject, e.body) == (subject, body)

    @settings(max_examples=150, deadline=None)
    @given(
        subject=st.text(st.characters(blacklist_categories=("Cs", "Cc", "Zl", "Zp")), max_size=40)
        .map(lambda s: " ".join(s.split())),
        body=st.text(st.characters(blacklist_categories=("Cs",), blacklist_characters="\r"), max_size=200),
        encoding=st.sampled_from(["base64", "quoted-printable"]),
    )
    def test_roundtrip_property(self, subject, body, encoding):
        e = parse_eml(compose_eml(subject, body, encoding))
        assert (e.subject, e.body) == (subject, body)


def _mbox(*messages: bytes) -> io.BytesIO:
    out = b""
    for m in messages:
        out += b"From sender@example.com Mon Jan  1 00:00:00 2024\n" + m + b"\n"
    return io.BytesIO(out)


class TestParseMbox:
    def test_two_messages(self):
        box = _mbox(b"Subject: a\n\nfirst\n", b"Subject: b\n\nsecond\n")
        emails = parse_mbox(box)
        assert [e.subject for e in emails] == ["a", "b"]
        assert len({e.id for e in emails}) == 2

    def test_empty(self):
        with pytest.raises(EmptyMailbox):
            parse_mbox(io.BytesIO(b""))

    def test_malformed_message_is_skipped_and_reported(self):
        box = _mbox(b"Subject: a\n\none\n", b"Subject: broken", b"Subject: c\n\nthree\n")
        skipped = []
        emails = parse_mbox(box, on_skip=lambda i, exc: skipped.append((i, type(exc))))
        assert [e.subject for e in emails] == ["a", "c"]
        assert skipped == [(1, MalformedMessage)]

    def test_escaped_from_lines(self):
        box = _mbox(b"Subject: a\n\n>From the start\n")
        assert parse_mbox(box)[0].body.startswith("From the start")


class TestCsv:
    def test_two_rows(self, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text('label,text\nspam,"win now"\nHAM,"see you, tomorrow"\n', encoding="utf-8")
        c = load_csv(p)
        assert c.class_counts == {Label.SPAM: 1, Label.HAM: 1}
        assert [ex.text for ex in c] == ["win now", "see you, tomorrow"]

    def test_bad_label_row(self):
        with pytest.raises(BadLabel) as err:
            read_csv(io.StringIO("label,text\nspam,a\njunk,b\n"))
        assert err.value.row == 3

    def test_bad_header(self):
        with pytest.raises(BadHeader):
            read_csv(io.StringIO("kind,body\nspam,a\n"))

    def test_unbalanced_quote(self):
        with pytest.raises(UnbalancedQuote) as err:
            read_csv(io.StringIO('label,text\nspam,"ok"\nham,"never closed\n'))
        assert err.value.row == 3

    def test_balanced_1500(self):
        buf = io.StringIO()
        ex = [LabeledExample(f"t{i}", Label.SPAM if i < 750 else Label.HAM) for i in range(1500)]
        write_csv(Corpus.from_examples(ex), buf)
        c = read_csv(io.StringIO(buf.getvalue()))
        assert c.class_counts == {Label.SPAM: 750, Label.HAM: 750}

    def test_roundtrip_multiline(self):
        ex = [LabeledExample('a "quoted"\nline, two', Label.HAM)]
        buf = io.StringIO()
        write_csv(Corpus.from_examples(ex), buf)
        assert read_csv(io.StringIO(buf.getvalue())).examples[0].text == ex[0].text


class TestToExample:
    def test_concatenation(self):
        assert to_example(RawEmail("1", "a", "b"), Label.SPAM).text == "a\nb"
        assert to_example(RawEmail("1", "", "b"), Label.SPAM).text == "\nb"
        assert to_example(RawEmail("1", "ü", "日本"), Label.HAM).text == "ü\n日本"

    def test_body_only(self):
        assert to_example(RawEmail("1", "a", "b"), Label.SPAM, include_subject=False).text == "b"


def _corpus(n_spam, n_ham):
    ex = [LabeledExample(f"s{i}", Label.SPAM, id=f"s{i}") for i in range(n_spam)]
    ex += [LabeledExample(f"h{i}", Label.HAM, id=f"h{i}") for i in range(n_ham)]
    return Corpus.from_examples(ex)


class TestSplit:
    def test_1500_to_1125_375(self):
        s = stratified_split(_corpus(750, 750), SplitSpec(0.75, 0))
        assert (len(s.train), len(s.test)) == (1125, 375)
        # one class gets the extra example from the largest-remainder top-up
        assert sorted(s.train.class_counts.values()) == [562, 563]

    def test_8_examples_half(self):
        s = stratified_split(_corpus(4, 4), SplitSpec(0.5, 3))
        assert s.train.class_counts == {Label.SPAM: 2, Label.HAM: 2}
        assert s.test.class_counts == {Label.SPAM: 2, Label.HAM: 2}

    def test_degenerate_empty_train(self):
        with pytest.raises(DegenerateSplit):
            stratified_split(_corpus(2, 2), SplitSpec(0.1, 0))

    def test_degenerate_singleton_class(self):
        with pytest.raises(DegenerateSplit):
            stratified_split(_corpus(1, 5), SplitSpec(0.5, 0))

    def test_empty(self):
        with pytest.raises(EmptyData):
            stratified_split(_corpus(0, 0), SplitSpec(0.5, 0))

    def test_fraction_bounds(self):
        for bad in (0.0, 1.0, 1.5):
            with pytest.raises(ValueError):
                SplitSpec(bad)

    def test_decimal_fraction_floors_exactly(self):
        # 0.29 * 100 is 28.999... in binary floating point
        s = stratified_split(_corpus(100, 100), SplitSpec(0.29, 1))
        assert s.train.class_counts == {Label.SPAM: 29, Label.HAM: 29}

    def test_unstratified(self):
        s = stratified_split(_corpus(10, 2), SplitSpec(0.5, 9, stratified=False))
        assert len(s.train) == 6

    @settings(max_examples=100, deadline=None)
    @given(
        n_spam=st.integers(2, 60),
        n_ham=st.integers(2, 60),
        fraction=st.floats(0.05, 0.95),
        seed=st.integers(0, 2**64 - 1),
    )
    def test_properties(self, n_spam, n_ham, fraction, seed):
        corpus = _corpus(n_spam, n_ham)
        spec = SplitSpec(fraction, seed)
        try:
            s = stratified_split(corpus, spec)
        except DegenerateSplit:
            return
        train_ids = [ex.id for ex in s.train]
        test_ids = [ex.id for ex in s.test]
        # partition
        assert not set(train_ids) & set(test_ids)
        assert Counter(train_ids + test_ids) == Counter(ex.id for ex in corpus)
        # determinism
        again = stratified_split(corpus, spec)
        assert [ex.id for ex in again.train] == train_ids
        # stratification: exact floor per class, plus at most one top-up
        for label, n in corpus.class_counts.items():
            base = math.floor(Fraction(fraction) * n)
            assert base <= s.train.class_counts.get(label, 0) <= base + 1
