"""
How many sampled directions are enough
======================================

Each phase constrains the adversary SINR only at B random bearings.
The number of samples needed so that, with confidence 1 - beta2, at most
a beta1 fraction of the arc is left uncovered grows like m^2 / beta1.
"""
# %%
from secbeam.synthesis import sample_bound

for m in (1, 2, 6, 10):
    row = [sample_bound(b1, 0.01, m) for b1 in (0.5, 0.1, 0.05, 0.01)]
    print(f"m={m:2d}", " ".join(f"{b:>8d}" for b in row))

# %%
# The confidence level barely matters; it enters through a logarithm.
for b2 in (0.1, 0.01, 1e-4, 1e-8):
    print(f"beta2={b2:g}: B = {sample_bound(0.01, b2, 10)}")

# %%
# Read backwards: the default B = 1000 with six agents only certifies a
# large uncovered fraction.
m, B, b2 = 6, 1000, 0.01
import math
print("beta1 implied by B=1000:", (2 * math.log(1 / b2) + 16 * m * m) / B)
