"""Per-language prompts: selection strategies and machine propagation.

The library holds one template per (task, language tag). The ``multi``
strategy follows the test language and falls back to English; ``single``
pins one prompt language for every subset. Propagation machine-translates
a template into new languages while guarding placeholder integrity with
opaque sentinels.
"""

from pathlib import Path

from polyeval.langid.tags import LanguageTag
from polyeval.promptlib import (
    IdentityTranslator,
    PromptLibrary,
    PromptStrategy,
    SentinelDroppingTranslator,
    propagate_template,
    render_prompt,
    select_template,
)

fixtures = Path(__file__).parent.parent / "fixtures"
library = PromptLibrary.load(fixtures / "prompts")
print("translation templates on file:", ", ".join(library.tags_for("Translation")))
print()

# ---- strategy-driven selection --------------------------------------------
fin = LanguageTag("fin", "Latn")
zho = LanguageTag("zho", "Hans")

for strategy, test_tag in [
    (PromptStrategy("multi"), fin),
    (PromptStrategy("multi"), zho),
    (PromptStrategy("single", fin), zho),
]:
    template, used_fallback = select_template(library, strategy, "Translation", test_tag)
    mode = strategy.mode if strategy.mode == "multi" else f"single({strategy.single_language})"
    note = "  [fell back to English]" if used_fallback else ""
    print(f"{mode:18} test={test_tag}: uses {template.tag}{note}")

print()
template, _ = select_template(library, PromptStrategy("multi"), "Translation", fin)
prompt = render_prompt(
    template,
    {"src_text": "La rivière traverse la vieille ville.", "src_lang": "French", "tgt_lang": "Finnish"},
    fewshot=[{"src_text": "Bonjour.", "tgt_text": "Hyvää päivää."}],
)
print("rendered 1-shot Finnish prompt:")
print("  " + prompt.replace("\n", "\n  "))
print()

# ---- propagation with placeholder integrity --------------------------------
targets = [LanguageTag("vie", "Latn"), LanguageTag("kor", "Hang")]
accepted, failures = propagate_template(template, targets, IdentityTranslator())
print(f"identity propagation: {len(accepted)} accepted, {len(failures)} failed")
for tag, out in accepted.items():
    print(f"  {tag}: placeholders {sorted(out.placeholders)} intact, provenance={out.provenance}")

broken = SentinelDroppingTranslator(corrupt_targets=["vie_Latn"])
accepted, failures = propagate_template(template, targets, broken)
print(f"lossy translator:     {len(accepted)} accepted, failures: "
      + "; ".join(f"{t}: {reason.split(':')[0]}" for t, reason in failures.items()))
print()
print("A propagated template is accepted only if its placeholder multiset")
print("matches the source exactly, so a translator that eats or duplicates")
print("a slot can never corrupt the library.")
