"""The repair cascade on the classic error classes, with edit traces.

Run:  python demos/03_grammar_repair.py
"""
from pictopipe import correct_rules
from pictopipe.resources import bundled_ruleset

rules = bundled_ruleset()

sentences = [
    "Is the dog is tired?",
    "Do I can eat a pizza?",
    "I love play the baseball",
    "I love danceing with a friends",
    "He taked my toy!",
    "I lovedd BTS",
    "She goed to school and eated a pizzza",
    "I love BTS",  # nothing to fix: passes through verbatim
]

for s in sentences:
    result = correct_rules(s, rules)
    print(f"{s!r}")
    print(f"  -> {result.corrected!r}")
    for e in result.edits:
        print(f"     [{e.category:16}] span {e.start}-{e.end}: {e.original!r} -> {e.replacement!r}")
    if not result.edits:
        print("     (no rule fired)")
    print()
