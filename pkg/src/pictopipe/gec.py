"""Grammar repair: a deterministic rule cascade plus an optional external
correction service speaking a one-field JSON contract.

The cascade runs structural rules before lexical ones and repeats until the
sentence stops changing, so its output is always a fixed point.
"""
from __future__ import annotations

import difflib
import json
import re
import string
import urllib.error
import urllib.request
from dataclasses import dataclass
from typing import IO, Optional

RULES = "rules"
EXTERNAL = "external"

_CHUNK_RE = re.compile(r"\S+")
_EDGE_PUNCT = frozenset(string.punctuation)

_COPULAS = frozenset({"is", "are", "am", "was", "were"})
_DO_FORMS = frozenset({"do", "does", "did"})
_MODALS = frozenset({"can", "could", "will", "would", "should", "may", "might", "must"})
_SUBJECT_PRONOUNS = frozenset({"i", "you", "he", "she", "it", "we", "they"})
_ARTICLES = frozenset({"a", "an", "the"})
_INDEFINITE = frozenset({"a", "an"})
_PLAY_FORMS = frozenset({"play", "plays", "played", "playing"})

_MAX_SWEEPS = 16
_LETTERS = "abcdefghijklmnopqrstuvwxyz"


class GecServiceError(RuntimeError):
    """External correction service unreachable or replied with garbage."""


@dataclass(frozen=True)
class GecEdit:
    start: int
    end: int
    original: str
    replacement: str
    category: str


@dataclass
class GecResult:
    corrected: str
    edits: list[GecEdit]
    backend: str
    fallback: bool = False


@dataclass(frozen=True)
class GecRuleSet:
    irregular_past: dict[str, str]
    spelling_dictionary: frozenset[str]
    infinitive_verbs: frozenset[str]
    bare_noun_list: frozenset[str]
    base_verbs: frozenset[str]

    def __post_init__(self):
        if not self.irregular_past or not self.spelling_dictionary:
            raise ValueError("irregular_past and spelling_dictionary must be non-empty")


def apply_edits(source: str, edits: list[GecEdit]) -> str:
    """Replay span edits left-to-right; spans must be increasing."""
    out: list[str] = []
    pos = 0
    for e in edits:
        if e.start < pos:
            raise ValueError(f"overlapping edit at {e.start}")
        out.append(source[pos : e.start])
        out.append(e.replacement)
        pos = e.end
    out.append(source[pos:])
    return "".join(out)


@dataclass(eq=False)
class _Cell:
    src_start: int
    src_end: int
    src_text: str
    text: str
    category: Optional[str] = None


def _split_edges(word: str) -> tuple[str, str, str]:
    left = 0
    while left < len(word) and word[left] in _EDGE_PUNCT:
        left += 1
    right = len(word)
    while right > left and word[right - 1] in _EDGE_PUNCT:
        right -= 1
    return word[:left], word[left:right], word[right:]


def _core(text: str) -> str:
    return _split_edges(text)[1].lower()


def _match_case(model: str, repl: str) -> str:
    if model.isupper() and len(model) > 1:
        return repl.upper()
    if model[:1].isupper():
        return repl[:1].upper() + repl[1:]
    return repl


def _visible(cells: list[_Cell]) -> list[_Cell]:
    return [c for c in cells if c.text]


def _rule_aux_duplication(cells: list[_Cell]) -> bool:
    # "Is X is Y?" -> "Is X Y?"; only fires on question-shaped sentences.
    vis = _visible(cells)
    if len(vis) < 3 or not vis[-1].text.endswith("?"):
        return False
    first = _core(vis[0].text)
    if first not in _COPULAS:
        return False
    for cell in vis[2:]:
        if _core(cell.text) == first:
            cell.text = ""
            cell.category = "aux_duplication"
            return True
    return False


def _rule_modal_fronting(cells: list[_Cell]) -> bool:
    # "Do I can V ..." -> "Can I V ..."
    vis = _visible(cells)
    if len(vis) < 3:
        return False
    c0, c1, c2 = vis[0], vis[1], vis[2]
    if (
        _core(c0.text) in _DO_FORMS
        and _core(c1.text) in _SUBJECT_PRONOUNS
        and _core(c2.text) in _MODALS
    ):
        pre, core, suf = _split_edges(c0.text)
        c0.text = pre + _match_case(core, _core(c2.text)) + suf
        c0.category = "modal_fronting"
        c2.text = ""
        c2.category = "modal_fronting"
        return True
    return False


def _rule_infinitive(cells: list[_Cell], rules: GecRuleSet) -> bool:
    vis = _visible(cells)
    for a, b in zip(vis, vis[1:]):
        if _core(a.text) in rules.infinitive_verbs and _core(b.text) in rules.base_verbs:
            anchor = b.src_start
            pos = next(i for i, c in enumerate(cells) if c is b)
            cells.insert(pos, _Cell(anchor, anchor, "", "to", "infinitive"))
            return True
    return False


def _rule_article(cells: list[_Cell], rules: GecRuleSet) -> bool:
    vis = _visible(cells)
    for a, b, c in zip(vis, vis[1:], vis[2:]):
        if (
            _core(a.text) in _PLAY_FORMS
            and _core(b.text) in _ARTICLES
            and _core(c.text) in rules.bare_noun_list
        ):
            b.text = ""
            b.category = "article"
            return True
    return False


def _distance1_neighbors(word: str, dictionary: frozenset[str]) -> set[str]:
    found: set[str] = set()
    for i in range(len(word)):
        cand = word[:i] + word[i + 1 :]  # deletion
        if cand in dictionary:
            found.add(cand)
        for ch in _LETTERS:  # substitution
            cand = word[:i] + ch + word[i + 1 :]
            if cand != word and cand in dictionary:
                found.add(cand)
    for i in range(len(word) + 1):  # insertion
        for ch in _LETTERS:
            cand = word[:i] + ch + word[i:]
            if cand in dictionary:
                found.add(cand)
    return found


def _rule_spelling(cells: list[_Cell], rules: GecRuleSet) -> bool:
    vis = _visible(cells)
    changed = False
    for cell in vis:
        pre, core, suf = _split_edges(cell.text)
        low = core.lower()
        if len(low) < 3 or not low.isalpha():
            continue
        if low in rules.spelling_dictionary or low in rules.irregular_past:
            continue
        if core.isupper() and len(core) > 1:
            continue  # acronyms stay untouched
        if core[:1].isupper() and cell is not vis[0]:
            continue  # mid-sentence capitalized word: likely a name
        neighbors = _distance1_neighbors(low, rules.spelling_dictionary)
        if len(neighbors) == 1:
            cell.text = pre + _match_case(core, neighbors.pop()) + suf
            cell.category = "spelling"
            changed = True
    return changed


def _is_bad_plural(word: str, dictionary: frozenset[str]) -> bool:
    if len(word) < 3 or not word.endswith("s") or word.endswith("ss"):
        return False
    if len(word[:-1]) >= 2 and word[:-1] in dictionary:
        return True
    return word.endswith("es") and len(word[:-2]) >= 2 and word[:-2] in dictionary


def _rule_plural(cells: list[_Cell], rules: GecRuleSet) -> bool:
    vis = _visible(cells)
    for a, b in zip(vis, vis[1:]):
        if _core(a.text) in _INDEFINITE and _is_bad_plural(_core(b.text), rules.spelling_dictionary):
            a.text = ""
            a.category = "plural"
            return True
    return False


def _rule_irregular(cells: list[_Cell], rules: GecRuleSet) -> bool:
    changed = False
    for cell in _visible(cells):
        pre, core, suf = _split_edges(cell.text)
        low = core.lower()
        if low in rules.irregular_past:
            cell.text = pre + _match_case(core, rules.irregular_past[low]) + suf
            cell.category = "irregular_past"
            changed = True
    return changed


def _emit_edits(cells: list[_Cell], source: str) -> list[GecEdit]:
    edits: list[GecEdit] = []
    for idx, cell in enumerate(cells):
        if cell.category is None:
            continue
        if not cell.src_text:  # insertion anchored at the following word
            edits.append(GecEdit(cell.src_start, cell.src_start, "", cell.text + " ", cell.category))
        elif not cell.text:  # deletion takes one adjacent gap with it
            nxt = next((c for c in cells[idx + 1 :] if c.src_text), None)
            if nxt is not None:
                end = nxt.src_start
                edits.append(
                    GecEdit(cell.src_start, end, source[cell.src_start : end], "", cell.category)
                )
            else:
                prev = next((c for c in reversed(cells[:idx]) if c.src_text), None)
                start = prev.src_end if prev is not None else 0
                edits.append(
                    GecEdit(start, cell.src_end, source[start : cell.src_end], "", cell.category)
                )
        else:
            edits.append(
                GecEdit(cell.src_start, cell.src_end, cell.src_text, cell.text, cell.category)
            )
    edits.sort(key=lambda e: (e.start, e.end))
    return edits


def correct_rules(sentence: str, rules: GecRuleSet) -> GecResult:
    """Apply the repair cascade (fronting, infinitive, article, spelling,
    plural, direct substitutions) and report the edits in source coordinates.

    Words present in the substitution map are exempt from spelling repair so
    their dedicated correction always wins. Sentences that trigger nothing
    pass through verbatim.
    """
    cells = [
        _Cell(m.start(), m.end(), m.group(), m.group()) for m in _CHUNK_RE.finditer(sentence)
    ]
    for _ in range(_MAX_SWEEPS):
        changed = False
        changed |= _rule_aux_duplication(cells)
        changed |= _rule_modal_fronting(cells)
        changed |= _rule_infinitive(cells, rules)
        changed |= _rule_article(cells, rules)
        changed |= _rule_spelling(cells, rules)
        changed |= _rule_plural(cells, rules)
        changed |= _rule_irregular(cells, rules)
        if not changed:
            break
    edits = _emit_edits(cells, sentence)
    if not edits:
        return GecResult(sentence, [], RULES)
    return GecResult(apply_edits(sentence, edits), edits, RULES)


def _words_with_spans(text: str) -> list[tuple[str, int, int]]:
    return [(m.group(), m.start(), m.end()) for m in _CHUNK_RE.finditer(text)]


def diff_edits(source: str, corrected: str) -> list[GecEdit]:
    """Reconstruct span edits from a word-level diff of two sentences."""
    if source == corrected:
        return []
    src = _words_with_spans(source)
    out = _words_with_spans(corrected)
    sm = difflib.SequenceMatcher(
        a=[w for w, _, _ in src], b=[w for w, _, _ in out], autojunk=False
    )
    edits: list[GecEdit] = []
    for tag, i1, i2, j1, j2 in sm.get_opcodes():
        if tag == "equal":
            continue
        if tag == "insert":
            text = corrected[out[j1][1] : out[j2 - 1][2]]
            if i1 < len(src):
                edits.append(GecEdit(src[i1][1], src[i1][1], "", text + " ", "external"))
            else:
                edits.append(GecEdit(len(source), len(source), "", " " + text, "external"))
        elif tag == "delete":
            start = src[i1][1]
            if i2 < len(src):
                end = src[i2][1]
            else:
                end = src[i2 - 1][2]
                start = src[i1 - 1][2] if i1 > 0 else 0
            edits.append(GecEdit(start, end, source[start:end], "", "external"))
        else:  # replace
            start, end = src[i1][1], src[i2 - 1][2]
            text = corrected[out[j1][1] : out[j2 - 1][2]]
            edits.append(GecEdit(start, end, source[start:end], text, "external"))
    if apply_edits(source, edits) != corrected:
        # whitespace was rewritten inside equal blocks: fall back to one edit
        pre = 0
        while pre < min(len(source), len(corrected)) and source[pre] == corrected[pre]:
            pre += 1
        suf = 0
        while (
            suf < min(len(source), len(corrected)) - pre
            and source[len(source) - 1 - suf] == corrected[len(corrected) - 1 - suf]
        ):
            suf += 1
        edits = [
            GecEdit(
                pre,
                len(source) - suf,
                source[pre : len(source) - suf],
                corrected[pre : len(corrected) - suf],
                "external",
            )
        ]
    return edits


def correct_external(sentence: str, endpoint: str, timeout: float = 5.0) -> GecResult:
    """POST {"text": ...} to the service and expect {"corrected": ...}."""
    payload = json.dumps({"text": sentence}).encode("utf-8")
    req = urllib.request.Request(
        endpoint,
        data=payload,
        headers={"Content-Type": "application/json"},
        method="POST",
    )
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            body = resp.read().decode("utf-8")
    except (OSError, urllib.error.URLError) as exc:
        raise GecServiceError(f"correction service failed: {exc}") from exc
    try:
        obj = json.loads(body)
    except json.JSONDecodeError as exc:
        raise GecServiceError(f"correction service returned invalid JSON: {exc.msg}") from exc
    corrected = obj.get("corrected") if isinstance(obj, dict) else None
    if not isinstance(corrected, str):
        raise GecServiceError("correction service response lacks a 'corrected' string")
    return GecResult(corrected, diff_edits(sentence, corrected), EXTERNAL)


def correct(
    sentence: str,
    rules: GecRuleSet,
    backend: str = RULES,
    endpoint: Optional[str] = None,
    timeout: float = 5.0,
) -> GecResult:
    """Dispatch to the external service when configured, falling back to the
    rule cascade on any service failure. Never raises for backend trouble."""
    if backend == EXTERNAL and endpoint:
        try:
            return correct_external(sentence, endpoint, timeout)
        except GecServiceError:
            result = correct_rules(sentence, rules)
            result.fallback = True
            return result
    return correct_rules(sentence, rules)


def _read_pairs(source: IO[str], what: str) -> dict[str, str]:
    mapping: dict[str, str] = {}
    for lineno, raw in enumerate(source, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ValueError(f"{what} line {lineno}: expected 2 columns")
        mapping[cols[0].strip().lower()] = cols[1].strip().lower()
    return mapping


def _read_words(source: IO[str]) -> frozenset[str]:
    return frozenset(
        line.strip().lower() for line in source if line.strip() and not line.startswith("#")
    )


def load_ruleset(
    spelling_words: IO[str],
    irregular_past: IO[str],
    infinitive_verbs: IO[str],
    bare_nouns: IO[str],
    base_verbs: IO[str],
) -> GecRuleSet:
    return GecRuleSet(
        irregular_past=_read_pairs(irregular_past, "irregular past map"),
        spelling_dictionary=_read_words(spelling_words),
        infinitive_verbs=_read_words(infinitive_verbs),
        bare_noun_list=_read_words(bare_nouns),
        base_verbs=_read_words(base_verbs),
    )
