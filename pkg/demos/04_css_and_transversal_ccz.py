# %% [markdown]
# # A CSS code with transversal CCZ
#
# Putting the generator matrix in the form [[I, H1], [0, H0]] and
# puncturing the first K coordinates gives CSS(X, rowspace H0; Z, dual of
# rowspace(H0, H1)). Triorthogonality makes transversal CCZ act as logical CCZ.

# %%
import time

import numpy as np

from agccz.classical_codes import construct_base_code
from agccz.css_builder import (
    build_css,
    encode_logical,
    exhaustive_css_distance,
    heuristic_distance_sides,
    reed_muller_1,
    transversal_ccz_phase_check,
)

c = construct_base_code(8)
q = build_css(c, 14, c.deg_g, 0)
print(f"[[{q.n_phys},{q.k_log},{q.d_lower}]]_64  D_X >= {q.d_x_lower}, D_Z >= {q.d_z_lower}")
print("X stabilizers", q.x_stabilizers.shape, "Z stabilizers", q.z_stabilizers.shape)

# %% [markdown]
# ## Phases
#
# For encoded words a, b, c the physical sum of a_i b_i c_i equals the
# logical one, whatever stabilizer offsets are added.

# %%
print(transversal_ccz_phase_check(q.form, 1000, seed=1))
F = q.field
u = np.zeros(14, dtype=np.int64)
u[3] = 7
w = encode_logical(q.form, u, np.random.default_rng(0).integers(0, 64, 5))
print("physical sum for (7 e_3)^3:", int(F.sum(F.mul(F.mul(w, w), w))), "logical:", int(F.power(7, 3)))

# %% [markdown]
# ## Distance upper bounds by information-set sampling

# %%
t0 = time.perf_counter()
dx, dz = heuristic_distance_sides(q, 20000, seed=3)
print(f"lightest X logical found {dx}, Z logical {dz} ({time.perf_counter() - t0:.1f}s)")

# %% [markdown]
# On a binary toy code the heuristic can be compared with brute force.
# RM(1,4) with one logical qubit is the [[15,1,3]] code.

# %%
toy = build_css(reed_muller_1(4), 1)
print("exhaustive:", exhaustive_css_distance(toy), "heuristic:", heuristic_distance_sides(toy, 2000, 0))
