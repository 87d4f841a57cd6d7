"""How the lexicon index resolves overlapping phrases: longest match wins.

Run:  python demos/02_lexicon_longest_match.py
"""
import io

from pictopipe import load_lexicon, lookup, map_text, tag_all, tokenize
from pictopipe.resources import bundled_tag_resources

rows = """\
ice cream\timg/ice_cream.svg
ice\timg/ice.svg
cream\timg/cream.svg
eat\timg/eat.svg
i\timg/i.svg
want\timg/want.svg
"""
lex = load_lexicon(io.StringIO(rows), format="tsv")
print(f"loaded {len(lex)} entries, longest phrase = {lex.max_ngram} words")
print("index bucket for 'ice':", [" ".join(e.phrase) for e in lex.index["ice"]])
print()

tokens = ["i", "want", "ice", "cream"]
for start in range(len(tokens)):
    hit = lookup(lex, tokens, start)
    if hit:
        entry, length = hit
        print(f"lookup at {start} ({tokens[start]!r:8}) -> {' '.join(entry.phrase)!r} (length {length})")
    else:
        print(f"lookup at {start} ({tokens[start]!r:8}) -> no match")
print()

res = bundled_tag_resources()
seq = map_text(tag_all(tokenize("I want ice cream"), res), lex)
print("scan of 'I want ice cream':")
for seg in seq.segments:
    words = " ".join(t.surface for t in seq.source[seg.start : seg.end])
    print(f"  {seg.kind:10} {words!r:14} entry={seg.entry_id}")
