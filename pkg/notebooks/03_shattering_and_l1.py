"""
Shattering counts and l1 constants
==================================

A pattern set larger than the Karpovsky-Milman threshold must shatter a
t-set. On the analytic side, an independent family of two-valued functions
spans a copy of l1 with constant half the gap between its values.
"""
# %%
import itertools

import numpy as np

from combindep.l1 import FunctionFamily, l1_constant
from combindep.shattering import PatternSet, cover_number, km_threshold, largest_shattered_subset
from combindep.verify import sauer

print("threshold n=3 k=2 t=2:", km_threshold(3, 2, 2))
S = PatternSet.of([(1, 1, 1), (1, 2, 2), (2, 1, 2), (2, 2, 1), (1, 1, 2)], 2)
print("largest shattered:", largest_shattered_subset(S), "cover number:", cover_number(S))

# %%
rep = sauer(3, 2)
print({k: rep[k] for k in ("instances", "failures")})

# %%
for n in range(1, 5):
    G = np.array(list(itertools.product((-1.0, 1.0), repeat=n)))
    fam = FunctionFamily(np.full(len(G), 1 / len(G)), G, tuple(range(n)))
    print(n, l1_constant(fam).c_star)

G = np.array(list(itertools.product((0.0, 1.0), repeat=3)))
print("0/1 indicators:", l1_constant(FunctionFamily(np.full(8, 1 / 8), G, (0, 1, 2))).c_star)
