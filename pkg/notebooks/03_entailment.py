# %% [markdown]
# # Graded entailment between word vectors
#
# Score hyponym/hypernym pairs from a toy count-based vector store.
#
# A specific word carries more information than a general one, so the
# general word sits lower: ``animal <= dog`` scores high, ``dog <= animal`` low.

# %%
from infoorder.entailment import (
    MEASURE_NAMES,
    find_intransitive_triple,
    parse_vectors,
    score_pairs,
)
from infoorder import OrderSpec

store = parse_vectors(
    """dog 6 3 1 0
hound 5 3 1 1
animal 3 3 2 2
cat 1 6 2 1
"""
)
pairs = [("dog", "animal"), ("animal", "dog"), ("hound", "dog"), ("cat", "animal"), ("dog", "wolf")]

# %%
for measure in MEASURE_NAMES:
    scored, missing = score_pairs(store, pairs, measure)
    row = "  ".join("NA" if s is None else f"{s:.3f}" for _, _, s in scored)
    print(f"{measure:7s} {row}")

# %% [markdown]
# ## Smoothing breaks transitivity
#
# Relaxing ``x <= y`` to ``x <= a x + (1 - a) y`` keeps every comparable
# pair but loses transitivity for the maximal restricted order.

# %%
x, y, z = find_intransitive_triple(OrderSpec("max"), 0.5, 3, 0)
print(x.round(4), y.round(4), z.round(4), sep="\n")
