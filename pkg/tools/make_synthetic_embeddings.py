"""Regenerate src/qdisco/data/embeddings_50d.txt.

50 words, 50 dimensions, deterministic. Words are grouped into semantic
clusters (persons, cooking verbs, coding verbs, dishes, software artifacts,
domain adjectives, fillers); each group sits on its own unit center, with food
and technology groups pulled toward a shared domain direction so that
cross-group same-domain similarity stays above cross-domain similarity.
"""
import numpy as np

GROUPS = {
    "person": ["man", "woman", "guy", "lady", "chef", "person"],
    "food_verb": ["cooks", "prepares", "bakes", "brews", "simmers", "roasts"],
    "tech_verb": ["debugs", "codes", "installs", "compiles", "deploys"],
    "neutral_verb": ["makes", "creates"],
    "food_obj": ["soup", "supper", "dinner", "stew", "broth", "feast", "meal", "breakfast"],
    "tech_obj": ["application", "program", "software", "interface", "compiler", "website", "database", "algorithm"],
    "food_adj": ["flavorful", "tasty", "delicious", "savory"],
    "tech_adj": ["useful", "helpful", "efficient", "interactive"],
    "filler": ["kitchen", "oven", "recipe", "keyboard", "screen", "server", "laptop"],
}

DOMAIN = {
    "person": None,
    "food_verb": "food",
    "food_obj": "food",
    "food_adj": "food",
    "tech_verb": "tech",
    "tech_obj": "tech",
    "tech_adj": "tech",
    "neutral_verb": None,
    "filler": None,
}

DIM = 50
NOISE_NORM = 0.25  # |noise| relative to the unit group center
DOMAIN_PULL = 0.8


def unit(v):
    return v / np.linalg.norm(v)


def main():
    rng = np.random.default_rng(20240501)
    domain_axes = {name: unit(rng.normal(size=DIM)) for name in ("food", "tech")}
    lines = []
    for group, words in GROUPS.items():
        center = unit(rng.normal(size=DIM))
        domain = DOMAIN[group]
        if domain is not None:
            center = unit(center + DOMAIN_PULL * domain_axes[domain])
        for word in words:
            vec = unit(center + NOISE_NORM * unit(rng.normal(size=DIM)))
            lines.append(word + " " + " ".join(f"{x:.6f}" for x in vec))
    print("\n".join(lines))


if __name__ == "__main__":
    main()
