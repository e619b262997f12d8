"""How BALD and Entropy read a stack of Monte-Carlo predictions.

Three unlabelled items, two classes, four stochastic forward passes each:

* item 0: every pass says 50/50 (the model is sure the item is ambiguous)
* item 1: passes flip between confident "class 0" and confident "class 1"
* item 2: every pass is confident in class 0

Entropy cannot tell items 0 and 1 apart. BALD only rewards item 1, where
the samples disagree, because more data could settle that disagreement.
"""
import numpy as np

from alearn import bald_score, entropy_score, rank_top_k

samples = np.array([
    [[0.5, 0.5, 0.5, 0.5], [0.5, 0.5, 0.5, 0.5]],
    [[0.99, 0.01, 0.99, 0.01], [0.01, 0.99, 0.01, 0.99]],
    [[0.98, 0.97, 0.99, 0.98], [0.02, 0.03, 0.01, 0.02]],
])  # [items, classes, samples]

ent = entropy_score(samples)
bald = bald_score(samples)
for i in range(len(samples)):
    print(f"item {i}: entropy {ent[i]:.3f} nats, BALD {bald[i]:.3f} nats")

print("top-1 by entropy:", rank_top_k(ent, 1), "(a tie, broken towards the lower index)")
print("top-1 by BALD:   ", rank_top_k(bald, 1))
