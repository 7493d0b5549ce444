"""Synthetic spam/ham corpus generator.

Emails are bags of filler words, stop words, numbers and punctuation with
class cue words mixed in. ``signal`` in [0, 1] sets how often a content
word is a cue of the email's own class rather than of the other class.
"""

from __future__ import annotations

from .corpus import Corpus, LabeledExample, Label
from .rng import SplitMix64

SPAM_CUES = (
    "free winner winners prize prizes cash offer offers offered click clicking limited urgent "
    "guaranteed discount discounts credit loan loans bonus claim claimed unsubscribe pharmacy "
    "casino lottery million millions dollars deal deals cheap exclusive congratulations selected "
    "reward rewards earn earning income refund viagra subscription winning jackpot"
).split()

HAM_CUES = (
    "meeting meetings project projects schedule scheduled report reports team agenda lunch "
    "attached draft deadline budget notes thanks tomorrow office client clients presentation "
    "review reviewed minutes colleague colleagues quarterly invoice conference slides feedback "
    "discussed planning proposal weekend family dinner"
).split()

FILLER = (
    "time day today week morning evening email message please note information account service "
    "people year home work world place number part case point group company system program "
    "question government night room mother area money story fact month lot right study book eye "
    "job word business issue side kind head house friend hour game line end member law car city "
    "name president team minute idea kid body back parent face others level office door health "
    "person art war history party result change reason research girl guy moment air teacher force "
    "education"
).split()

STOP = "the a an and of to in for on with is are was this that you your we our it be at by from".split()

SUBJECT_PUNCT = ["", "", "!", "!!!", "?", ":"]


def _pick(rng: SplitMix64, seq):
    return seq[rng.below(len(seq))]


def _word(rng: SplitMix64, own, other, signal: float) -> str:
    r = rng.random()
    if r < 0.15:
        return _pick(rng, STOP)
    if r < 0.20:
        return str(rng.below(10000))
    if r < 0.55:
        return _pick(rng, FILLER)
    # cue word: own class with probability signal
    return _pick(rng, own) if rng.random() < signal else _pick(rng, other)


def _sentence(rng, own, other, signal, n_words) -> str:
    words = [_word(rng, own, other, signal) for _ in range(n_words)]
    words[0] = words[0].capitalize()
    end = "!" if own is SPAM_CUES and rng.random() < 0.4 else "."
    return " ".join(words) + end


def generate_email(rng: SplitMix64, label: Label, signal: float) -> str:
    own, other = (SPAM_CUES, HAM_CUES) if label is Label.SPAM else (HAM_CUES, SPAM_CUES)
    n_subject = 2 + rng.below(5)
    subject = " ".join(_word(rng, own, other, signal) for _ in range(n_subject))
    subject += _pick(rng, SUBJECT_PUNCT)
    body = " ".join(_sentence(rng, own, other, signal, 4 + rng.below(10)) for _ in range(2 + rng.below(5)))
    return subject + "\n" + body


def generate(n: int = 600, signal: float = 1.0, seed: int = 2024) -> Corpus:
    """A balanced corpus of ``n`` emails, alternating spam and ham.

    Example ids are their row positions, matching ``load_csv`` on the
    written file.
    """
    if n < 2 or n % 2:
        raise ValueError("n must be an even number >= 2")
    if not 0.0 <= signal <= 1.0:
        raise ValueError("signal must lie in [0, 1]")
    rng = SplitMix64(seed)
    examples = []
    for i in range(n):
        label = Label.SPAM if i % 2 == 0 else Label.HAM
        examples.append(LabeledExample(generate_email(rng, label, signal), label, id=str(i)))
    return Corpus.from_examples(examples)
