"""
The sparse pair (p, q)
======================

Both sequences are built block by block; the block starts grow fast enough
that ones become rare, while every pair of p-words eventually shows up side
by side.
"""
# %%
from combindep.tame import build_tame_example, check_schedule, pair_coverage

ex = build_tame_example(10 ** 5)
print("p(0), q(0):", ex.p[0], ex.q[0])
print("schedule violations:", check_schedule(ex))
print("ones density on [0, 1e4):", ex.ones_density(10 ** 4))

# %%
for b in ex.schedule[:8]:
    print(b.n, b.branch, b.a, b.a_prime, b.h, b.pair)

# %%
for L in (2000, 20000, 100000):
    print(L, pair_coverage(build_tame_example(L), 4))
