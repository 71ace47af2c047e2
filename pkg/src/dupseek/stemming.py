"""Suffix-stripping stemmer for index terms.

This is the inflectional portion of the classic Porter rule set: plural
endings, -ed and -ing endings with the usual restoration fixups, and the
terminal-y adjustment.  Derivational suffixes are deliberately left alone,
so stems stay close to dictionary forms:

    images -> image    drawing -> draw    functions -> function
    displayed -> display    utilizing -> utilize    applies -> appli

The input contract is a single lowercase alphabetic token; the output is
again lowercase alphabetic.  Words of one or two letters pass through
unchanged.
"""

from __future__ import annotations

_VOWELS = frozenset("aeiou")


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        # y is a consonant at the start of a word, a vowel after a consonant
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Count vowel-to-consonant transitions, Porter's m()."""
    m = 0
    previous = None
    for i in range(len(stem)):
        consonant = _is_consonant(stem, i)
        if previous is False and consonant:
            m += 1
        previous = consonant
    return m


def _has_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(word: str) -> bool:
    """True if the word ends consonant-vowel-consonant, final not w/x/y.

    Two-letter words count when they end vowel-consonant, so that short
    stems like "us" earn their final e back ("using" -> "use").
    """
    n = len(word)
    if n == 2:
        return (
            not _is_consonant(word, 0)
            and _is_consonant(word, 1)
            and word[1] not in "wxy"
        )
    if n < 3:
        return False
    return (
        _is_consonant(word, n - 3)
        and not _is_consonant(word, n - 2)
        and _is_consonant(word, n - 1)
        and word[n - 1] not in "wxy"
    )


def _strip_plural(word: str) -> str:
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies"):
        # keep the e of short words: ties -> tie, but applies -> appli
        return word[:-1] if len(word) == 4 else word[:-2]
    if word.endswith("ss"):
        return word
    if word.endswith("s"):
        return word[:-1]
    return word


def _strip_participle(word: str) -> str:
    if word.endswith("ied"):
        return word[:-1] if len(word) == 4 else word[:-2]
    if word.endswith("eed"):
        return word[:-1] if _measure(word[:-3]) > 0 else word
    if word.endswith("ed") and _has_vowel(word[:-2]):
        word = word[:-2]
    elif word.endswith("ing") and _has_vowel(word[:-3]):
        word = word[:-3]
    else:
        return word
    # the ending is gone; repair the stem it exposed
    if word.endswith(("at", "bl", "iz")):
        return word + "e"
    if _ends_double_consonant(word) and word[-1] not in "lsz":
        return word[:-1]
    if _measure(word) == 1 and _ends_cvc(word):
        return word + "e"
    return word


def _adjust_terminal_y(word: str) -> str:
    if (
        len(word) > 2
        and word.endswith("y")
        and _is_consonant(word, len(word) - 2)
    ):
        return word[:-1] + "i"
    return word


def stem(word: str) -> str:
    """Reduce an inflected lowercase token to its stem."""
    if len(word) <= 2:
        return word
    word = _strip_plural(word)
    word = _strip_participle(word)
    word = _adjust_terminal_y(word)
    return word
