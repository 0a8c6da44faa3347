# %% [markdown]
# # Binary extension fields
#
# Elements of GF(2^m) are integers whose bits are polynomial coordinates.
# Arithmetic is vectorized through exp/log tables, so whole arrays can be
# multiplied at once.

# %%
import numpy as np

from agccz.finite_fields import compose, decompose, find_normal_basis, gf, subfield

F = gf(6)  # GF(64)
print(F, "modulus", hex(F.spec.modulus), "generator", F.generator)

a = np.array([3, 17, 42, 63])
b = np.array([5, 5, 9, 1])
print("a*b   ", F.mul(a, b))
print("a/b   ", F.div(a, b))
print("a^63  ", F.power(a, 63))  # every nonzero element has order dividing 63

# %% [markdown]
# ## Subfields and traces
#
# GF(8) sits inside GF(64) as the fixed points of x -> x^8.

# %%
S = subfield(6, 3)
print("GF(8) inside GF(64):", S.elements())
x = 42
print("relative trace to GF(8):", int(F.relative_trace(x, 3)), "absolute trace:", int(F.absolute_trace(x)))

# %% [markdown]
# ## A normalized normal basis
#
# theta + theta^r = 1 lets every x in GF(r^2) be written x0*theta + x1*theta^r
# with x0, x1 in GF(r). eta = theta^(r+1) and gamma = 1 + eta drive the
# state-reduction circuit later on.

# %%
for r in (2, 4, 8, 16):
    nb = find_normal_basis(r)
    print(f"r={r:2d} theta={nb.theta.value:3d} eta={nb.eta.value:3d} gamma={nb.gamma.value:3d}")

nb = find_normal_basis(8)
x0, x1 = decompose(np.arange(64), nb)
assert np.array_equal(compose(x0, x1, nb), np.arange(64))
print("decomposition of 0..7:", list(zip(x0[:8].tolist(), x1[:8].tolist())))
