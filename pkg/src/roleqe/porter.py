"""Porter suffix-stripping stemmer.

Classic five-step Porter (1980) stemmer, including the customary
refinements of the reference implementation (bli/ble and logi/log in
step 2).  Operates on lowercase ASCII words; callers are expected to
stem a word exactly once, as the algorithm is not idempotent.
"""

from __future__ import annotations

_VOWELS = "aeiou"


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _m(stem: str) -> int:
    """Number of vowel-consonant sequences (the m of [C](VC)^m[V])."""
    runs = []
    for i in range(len(stem)):
        c = "c" if _is_consonant(stem, i) else "v"
        if not runs or runs[-1] != c:
            runs.append(c)
    joined = "".join(runs)
    if joined.startswith("c"):
        joined = joined[1:]
    return joined.count("vc")


def _has_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(word: str) -> bool:
    if len(word) < 3:
        return False
    if (
        _is_consonant(word, len(word) - 3)
        and not _is_consonant(word, len(word) - 2)
        and _is_consonant(word, len(word) - 1)
    ):
        return word[-1] not in "wxy"
    return False


def _step1a(w: str) -> str:
    if w.endswith("sses"):
        return w[:-2]
    if w.endswith("ies"):
        return w[:-2]
    if w.endswith("ss"):
        return w
    if w.endswith("s"):
        return w[:-1]
    return w


def _step1b(w: str) -> str:
    if w.endswith("eed"):
        if _m(w[:-3]) > 0:
            return w[:-1]
        return w
    flag = False
    if w.endswith("ed") and _has_vowel(w[:-2]):
        w = w[:-2]
        flag = True
    elif w.endswith("ing") and _has_vowel(w[:-3]):
        w = w[:-3]
        flag = True
    if flag:
        if w.endswith(("at", "bl", "iz")):
            return w + "e"
        if _ends_double_consonant(w) and w[-1] not in "lsz":
            return w[:-1]
        if _m(w) == 1 and _ends_cvc(w):
            return w + "e"
    return w


def _step1c(w: str) -> str:
    if w.endswith("y") and _has_vowel(w[:-1]):
        return w[:-1] + "i"
    return w


_STEP2_RULES = (
    ("ational", "ate"),
    ("tional", "tion"),
    ("enci", "ence"),
    ("anci", "ance"),
    ("izer", "ize"),
    ("bli", "ble"),
    ("alli", "al"),
    ("entli", "ent"),
    ("eli", "e"),
    ("ousli", "ous"),
    ("ization", "ize"),
    ("ation", "ate"),
    ("ator", "ate"),
    ("alism", "al"),
    ("iveness", "ive"),
    ("fulness", "ful"),
    ("ousness", "ous"),
    ("aliti", "al"),
    ("iviti", "ive"),
    ("biliti", "ble"),
    ("logi", "log"),
)

_STEP3_RULES = (
    ("icate", "ic"),
    ("ative", ""),
    ("alize", "al"),
    ("iciti", "ic"),
    ("ical", "ic"),
    ("ful", ""),
    ("ness", ""),
)

_STEP4_SUFFIXES = (
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
    "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
)


# matching longest suffix first reproduces the reference dispatch on the
# penultimate letter: suffixes sharing a word's tail never tie in length
_STEP2_ORDERED = tuple(sorted(_STEP2_RULES, key=lambda r: -len(r[0])))
_STEP3_ORDERED = tuple(sorted(_STEP3_RULES, key=lambda r: -len(r[0])))
_STEP4_ORDERED = tuple(sorted(_STEP4_SUFFIXES, key=len, reverse=True))


def _apply_rules(w: str, rules, min_m: int) -> str:
    for suffix, repl in rules:
        if w.endswith(suffix):
            stem = w[: len(w) - len(suffix)]
            if _m(stem) > min_m:
                return stem + repl
            return w
    return w


def _step4(w: str) -> str:
    for suffix in _STEP4_ORDERED:
        if w.endswith(suffix):
            stem = w[: len(w) - len(suffix)]
            if suffix == "ion" and not stem.endswith(("s", "t")):
                continue
            if _m(stem) > 1:
                return stem
            return w
    return w


def _step5a(w: str) -> str:
    if w.endswith("e"):
        m = _m(w[:-1])
        if m > 1 or (m == 1 and not _ends_cvc(w[:-1])):
            return w[:-1]
    return w


def _step5b(w: str) -> str:
    if w.endswith("ll") and _m(w[:-1]) > 1:
        return w[:-1]
    return w


def porter_stem(term: str) -> str:
    """Stem a single token to its Porter root form.

    Tokens of length <= 2, and tokens containing anything but lowercase
    ASCII letters, are returned unchanged (phrase units joined with
    underscores fall through here untouched).
    """
    if len(term) <= 2 or not term.isascii() or not term.isalpha():
        return term
    w = term.lower()
    w = _step1a(w)
    w = _step1b(w)
    w = _step1c(w)
    w = _apply_rules(w, _STEP2_ORDERED, 0)
    w = _apply_rules(w, _STEP3_ORDERED, 0)
    w = _step4(w)
    w = _step5a(w)
    w = _step5b(w)
    return w
