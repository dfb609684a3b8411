# %% [markdown]
# A decoder that errs with probability epsilon on every syndrome moves the
# output by at most 2 sqrt(epsilon) in trace norm.  Uniform bit-flip noise
# does not depend on the syndrome, so it cancels exactly; the seeded random
# model is the interesting one.

# %%
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from hdqi.hamiltonians import random_commuting
from hdqi.oracle import trace_norm_distance
from hdqi.poly import Polynomial
from hdqi.simulator import NoiseModel, run_pipeline

rng = np.random.default_rng(5)
h = random_commuting(3, 4, rng)
p = Polynomial((0.4, -0.7, 0.5, 0.3))
clean = run_pipeline(h, p).rho
print(h.labels(), np.round(h.coeffs, 3))

# %%
eps = np.array([0.0025, 0.01, 0.04, 0.09, 0.16, 0.25])
trials = 20
measured = np.zeros((len(eps), trials))
for i, e in enumerate(eps):
    for t in range(trials):
        noisy = run_pipeline(h, p, noise=NoiseModel(e, "random", seed=t)).rho
        measured[i, t] = trace_norm_distance(noisy, clean)
uniform = trace_norm_distance(run_pipeline(h, p, noise=NoiseModel(0.16)).rho, clean)
print("uniform bit flips at 0.16:", f"{uniform:.1e}")
print("worst measured / bound:", np.round(measured.max(axis=1) / (2 * np.sqrt(eps)), 3))

# %%
fig, ax = plt.subplots(figsize=(5, 3.5))
ax.plot(eps, 2 * np.sqrt(eps), "k-", label="2 sqrt(eps)")
ax.plot(np.repeat(eps, trials), measured.ravel(), ".", alpha=0.4, label="trials")
ax.set_xlabel("decoder error probability")
ax.set_ylabel("trace-norm distance")
ax.legend()
fig.tight_layout()
fig.savefig("noisy_decoder.png", dpi=120)
