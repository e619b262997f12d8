"""MC-Dropout on a two-blob problem.

Train a small dropout network, then keep dropout switched on at prediction
time. Points deep inside a blob get the same answer on every pass. Points
between the blobs get answers that wobble, and BALD picks them out.
"""
import numpy as np

from alearn import MlpSpec, TrainConfig, bald_score, generate_blobs, init_weights, predict_mc, train

data = generate_blobs(60, 2, 2, 0.5, seed=3)
spec = MlpSpec(input_dim=2, hidden_dims=(32,), n_classes=2, dropout_rate=0.5)
weights = train(init_weights(spec, seed=0), data.features, data.labels, TrainConfig(epochs=60))

samples = predict_mc(weights, data.features, 30, seed=1)
mean_p0 = samples[:, 0, :].mean(axis=1)
bald = bald_score(samples)

order = np.argsort(bald)
print("lowest BALD (confident):")
for i in order[:3]:
    print(f"  x={data.features[i].round(2)}  p(class 0)={mean_p0[i]:.2f}  BALD={bald[i]:.4f}")
print("highest BALD (between the blobs):")
for i in order[-3:]:
    print(f"  x={data.features[i].round(2)}  p(class 0)={mean_p0[i]:.2f}  BALD={bald[i]:.4f}")
