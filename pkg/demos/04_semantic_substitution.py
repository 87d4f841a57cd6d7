"""Out-of-vocabulary handling: synonym graph first, then embedding
neighbors, then function-word suppression.

Run:  python demos/04_semantic_substitution.py
"""
from pictopipe import cosine_similarity, find_substitute, map_text, resolve_unknowns, tag_all, tokenize
from pictopipe.resources import (
    bundled_embeddings,
    bundled_lexicon,
    bundled_synonyms,
    bundled_tag_resources,
)

lex = bundled_lexicon()
emb = bundled_embeddings()
syn = bundled_synonyms()
res = bundled_tag_resources()
vocab = lex.unigram_vocab()

print("cosine neighborhoods (demo embeddings):")
for a, b in [("pup", "dog"), ("pup", "pizza"), ("juice", "drink"), ("gloomy", "sad")]:
    sim = cosine_similarity(emb.get(a), emb.get(b))
    print(f"  cos({a}, {b}) = {sim:+.3f}")
print()

print("find_substitute against the pictogram vocabulary:")
for word in ["pup", "kitten", "buddy", "gloomy", "juice", "zebra"]:
    got = find_substitute(word, vocab, emb, syn, tau=0.4)
    if got:
        print(f"  {word!r:9} -> {got[0]!r} (similarity {got[1]:.3f})")
    else:
        print(f"  {word!r:9} -> no substitute above threshold")
print()

sentence = "the pup and my buddy eat a pizzza"
seq = resolve_unknowns(map_text(tag_all(tokenize(sentence), res), lex), lex, emb, syn)
print(f"resolving {sentence!r}:")
for seg in seq.segments:
    words = " ".join(t.surface for t in seq.source[seg.start : seg.end])
    extra = ""
    if seg.kind == "substituted":
        extra = f" ({seg.original} -> {seg.substitute}, sim {seg.similarity:.3f})"
    elif seg.kind == "dropped":
        extra = f" ({seg.reason})"
    print(f"  {seg.kind:11} {words!r}{extra}")
