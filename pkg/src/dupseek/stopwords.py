"""Stop-word handling.

The default list covers English function words: articles, pronouns,
prepositions, conjunctions, auxiliaries, and the fragments that common
contractions leave behind after tokenization ("doesn't" tokenizes to
"doesn" and "t").  Domain words are never stop-listed; terms such as
"well", "use", or "content" must survive filtering because bug reports
lean on them.

A custom list can be loaded from a plain text file: one word per line,
blank lines skipped, "#" starts a comment line.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError, StoreIOError

_DEFAULT_WORDS = """
a about above after again against ain all am an and any anyone anything
are aren as at
be because been before being below between both but by
can cannot could couldn
d did didn do does doesn doing don down during
each either etc every everyone everything
few for from further
had hadn has hasn have haven having he her here hers herself him himself
his how however
i if in into is isn it its itself
just
ll
m ma me mightn more most mustn my myself
needn neither no nor not nothing now
o of off on once only onto or other our ours ourselves out over own
rather re
s same shan she should shouldn so some someone something such
t than that the their theirs them themselves then there these they this
those through thus to too
under until unto up upon us
ve very via
was wasn we were weren what when where whether which while who whom why
will with within without won would wouldn
y yet you your yours yourself yourselves
""".split()


@dataclass(frozen=True)
class StopWordList:
    """An immutable set of words to drop from token streams."""

    words: frozenset[str]

    def __post_init__(self):
        for word in self.words:
            if not word or word != word.lower():
                raise ParameterError(f"stop words must be lowercase and non-empty: {word!r}")

    def __contains__(self, token: str) -> bool:
        return token in self.words

    def __len__(self) -> int:
        return len(self.words)


DEFAULT_STOP_WORDS = StopWordList(frozenset(_DEFAULT_WORDS))


def load_stop_words(path) -> StopWordList:
    """Read a stop-word file: one word per line, # for comments."""
    try:
        with open(path, encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise StoreIOError(path, exc) from exc
    words = set()
    for line in lines:
        word = line.strip()
        if not word or word.startswith("#"):
            continue
        words.add(word.lower())
    return StopWordList(frozenset(words))
