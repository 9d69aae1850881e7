"""
Block entropy of the symbol partition
=====================================

H(P^[0,n)) / n for a fair coin and for the golden-mean shift with its Parry
measure. The coin is flat at ln 2; the golden-mean curve decreases towards
ln(golden ratio) at rate about 1/n.
"""
# %%
import math

from combindep.entropy import cpa_from_partition, dynamical_entropy_curve
from combindep.measures import Bernoulli
from combindep.symbolic import SubshiftSpec, symbol_partition
from combindep.systems import golden_mean_system

coin = dynamical_entropy_curve(symbol_partition(SubshiftSpec.full_shift(2)), Bernoulli((0.5, 0.5)), range(1, 9))
print("coin:", [round(v, 6) for v in coin])

# %%
spec, parry = golden_mean_system()
ns = [1, 2, 4, 8, 14, 16]
curve = dynamical_entropy_curve(symbol_partition(spec), parry, ns)
target = math.log((1 + math.sqrt(5)) / 2)
for n, v in zip(ns, curve):
    print(f"n={n:2d}  H/n={v:.6f}  gap={v - target:.6f}  n*gap={n * (v - target):.4f}")
print("Markov entropy rate:", parry.entropy_rate(), "ln phi:", target)

# %%
# n * gap is constant (one-step Markov), so a gap of 5e-3 needs n >= 22
# a low-entropy coin admits a small-rank approximation of its shifts
r = cpa_from_partition(symbol_partition(SubshiftSpec.full_shift(2)), Bernoulli((0.99, 0.01)), 4, 0.3)
print(r.to_dict())
