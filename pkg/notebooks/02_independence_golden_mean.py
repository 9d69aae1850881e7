"""
Independence sets in the golden-mean shift
==========================================

Which times s let the cylinders [0] and [1] be visited in every combination?
Two adjacent times cannot both see a 1, so the best sets are spaced.
"""
# %%
from combindep.independence import ExactAtoms, is_independence_set, max_independence_subset, phi_density
from combindep.symbolic import SetTuple, cyl
from combindep.systems import golden_mean_system

spec, parry = golden_mean_system()
A = SetTuple.of(cyl("0"), cyl("1"))

print(bool(is_independence_set(spec, A, [0, 2, 4])))
res = is_independence_set(spec, A, [0, 1])
print(bool(res), "first missing assignment:", res.sigma)

# %%
for n in (4, 8, 12):
    r = max_independence_subset(spec, A, range(n))
    print(n, r.J, "density", r.size / n)

# %%
# removing sets of measure up to delta shrinks what remains independent
for delta in (0.0, 0.1, 0.3):
    rep = phi_density(spec, A, range(6), delta, parry, ExactAtoms(1))
    print(f"delta={delta}: phi_hat={rep.phi_hat} density={rep.density:.3f} exact={rep.exact}")
