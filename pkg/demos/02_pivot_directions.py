"""Non-English-centric translation: swap the pivot, keep everything else.

A multi-aligned benchmark pairs any language with any other, so the pivot
is pure configuration. This script enumerates any-to-pivot / pivot-to-any
directions for the bundled 4-language fixture under three different
pivots.
"""

from pathlib import Path

from polyeval.langid.iso_table import load_default_table
from polyeval.langid.tags import LanguageTag
from polyeval.orchestrator.run import ensure_aligned
from polyeval.registry import enumerate_directions, load_registry

fixtures = Path(__file__).parent.parent / "fixtures"
registry = load_registry(fixtures / "benchmarks")
toytrans = next(d for d in registry if d.id == "toytrans")
ensure_aligned(toytrans, load_default_table(), seed=42)

print("aligned language dictionary:")
for label, tag in toytrans.lang_dict.items():
    print(f"  {label:8} -> {tag}")
print()

for pivot_code in ("eng_Latn", "fra_Latn", "zho_Hans"):
    pivot = LanguageTag.parse(pivot_code)
    print(f"pivot = {pivot}")
    for mode in ("AnyToPivot", "PivotToAny", "Both"):
        directions = enumerate_directions(toytrans, pivot, mode)
        rendered = ", ".join(str(d) for d in directions)
        print(f"  {mode:10} ({len(directions)}): {rendered}")
    print()

print("With N aligned languages every pivot yields N-1 / N-1 / 2(N-1)")
print("directions; changing the pivot re-pairs the same files, nothing")
print("else in the configuration moves.")
