"""End-to-end walkthrough: noisy text in, pictogram sequence out.

Run:  python demos/01_pipeline_walkthrough.py
"""
from pictopipe import Engine

engine = Engine()
session = engine.new_session()

utterances = [
    "I lovedd BTS",            # spelling-style error, fixed by direct substitution
    "Is the dog is tired?",    # duplicated auxiliary
    "He taked my toy!",        # irregular past error; "toy" enters the session
    "it is big",               # "it" resolves to the remembered "toy"
]

for text in utterances:
    result = engine.process(text, session)
    print(f"input:     {text}")
    print(f"corrected: {result.corrected}")
    if result.edits:
        for e in result.edits:
            shown = f"{e.original!r} -> {e.replacement!r}" if e.replacement else f"deleted {e.original!r}"
            print(f"  edit [{e.category}] {shown}")
    row = []
    for seg in result.sequence.segments:
        words = " ".join(t.surface for t in result.sequence.source[seg.start : seg.end])
        if seg.kind == "matched":
            row.append(f"[{words}]")
        elif seg.kind == "substituted":
            row.append(f"[{seg.original}->{seg.substitute}]")
        elif seg.kind == "dropped":
            row.append(f"({words})")
        else:
            row.append(f"?{words}?")
    print("segments:  " + " ".join(row))
    print("images:    " + " ".join(result.images))
    print()
