# %% [markdown]
# # From |CCZ> over GF(r^2) to |CCZ> over GF(r)
#
# Split each register with the normal basis, measure the three x0 halves,
# apply three Z-type and three CZ-type corrections, then multiply one
# register by gamma.

# %%
import numpy as np

from agccz.state_reduction import (
    build_ccz_state,
    gate_counts,
    multiplier_is_clifford,
    plan_reduction,
    reduction_circuit,
    reduction_constants,
    simulate_reduction,
    trace_identity_check,
)

for r in (2, 4, 8):
    print(f"r={r}: trace identity over all of GF({r * r})^3:", trace_identity_check(r).ok)
print("r=32, 10^5 samples:", trace_identity_check(32, exhaustive=False, samples=10**5, seed=0).ok)
print("M_beta is Clifford for r=8:", multiplier_is_clifford(8))

# %% [markdown]
# ## The circuit for one measurement record

# %%
for g in reduction_circuit(8, (1, 5, 2)):
    print(g.to_json())
print(gate_counts(reduction_circuit(8, (1, 5, 2))))

# %% [markdown]
# ## Dense simulation over every outcome

# %%
for r in (4, 8):
    rep = simulate_reduction(r, "all")
    probs = {round(o.probability * r**3, 12) for o in rep.outcomes}
    print(f"r={r}: {len(rep.outcomes)} outcomes, r^3 * probability in {probs}, min fidelity {rep.min_fidelity:.12f}")

# %% [markdown]
# ## r = 2 has no cubic phase left
#
# Every normalized basis of GF(4) has theta^3 = 1, so gamma = 0: the three
# remaining qubits end up in |+++> and M_gamma is not invertible.

# %%
rep = simulate_reduction(2, "all", strict=False)
print("gamma =", rep.gamma, "violations:", rep.violations[:1])
print("overlap of |+++> with |CCZ>_2:", float(np.sum(build_ccz_state(2).amplitudes) / 8**0.5))
print("constants for r=8:", reduction_constants(8))

# %% [markdown]
# ## Gate budgets for every target field GF(2^n)

# %%
for n in (1, 2, 3, 4, 5, 6, 12):
    p = plan_reduction(n)
    print(n, p.steps[0].chain, p.totals)
