"""Synonym-swap adversarial attacks and defenses for dialogue entailment classifiers."""
