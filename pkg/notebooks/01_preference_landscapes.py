# %% [markdown]
# # Preference landscapes of two-player games
#
# Every point of the preference space is a matrix whose row `i` says how
# much player `i` cares about each player's objective payoff. For two players
# a point is a pair of angles `(alpha, beta)`. Here we sweep the grid, look at
# the expected-payoff landscape of the Prisoner's Dilemma and summarise it
# with centers of mass and their D/H/R indices.

# %%
import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from prefspace import catalog
from prefspace.com import gcom, outcome_com
from prefspace.heatmap import grid_raster
from prefspace.solve import expected_payoffs
from prefspace.space import grid

pd = catalog.prisoners_dilemma()
samples = grid(90)
E, has_eq = expected_payoffs(pd, samples.points)
print(samples.points.shape, "positions; all have an equilibrium:", has_eq.all())

# %% [markdown]
# Player a's payoff over the grid. Rows of the raster run over beta (top is
# large beta), columns over alpha.

# %%
alpha, beta = samples.angles.T
fig, axes = plt.subplots(1, 2, figsize=(9, 4))
for i, ax in enumerate(axes):
    img = grid_raster(alpha, beta, E[:, i])
    ax.imshow(img, extent=(0, 2 * np.pi, 0, 2 * np.pi), cmap="viridis")
    ax.set_title(f"expected payoff of player {'ab'[i]}")
    ax.set_xlabel("alpha")
    ax.set_ylabel("beta")
fig.tight_layout()
fig.savefig("pd_landscapes.png", dpi=80)

# %% [markdown]
# The global center of mass collects each player's self-row of their own
# payoff CoM. In the Prisoner's Dilemma both players lean toward mutual
# spite (R⁻), with no hierarchy.

# %%
G = gcom(pd, samples)
print(np.round(G.entries, 4))
print(G.indices().as_dict())

# %% [markdown]
# Both players have a dominant strategy for every position, so the outcome
# is fixed by two half-plane tests and the continuum answer is R⁻ = 0.8.
# Finite grids land within about 0.02 of it, on either side.

# %%
for res in (45, 90, 180, 360):
    print(res, round(gcom(pd, grid(res)).indices().R_minus, 4))

# %% [markdown]
# Outcome centers of mass: where in the space is each outcome realised?

# %%
for label, o in (("UL", (0, 0)), ("UR", (0, 1)), ("DL", (1, 0)), ("DR", (1, 1))):
    rep = outcome_com(pd, o, samples).indices()
    print(label, {k: round(v, 3) for k, v in rep.as_dict().items() if k in ("D", "H", "R_plus", "R_minus")})

# %% [markdown]
# Matching Pennies and Rock-Paper-Scissors have different strategy sets but
# land on the same global center of mass.

# %%
for game in (catalog.matching_pennies(), catalog.rock_paper_scissors()):
    print(np.round(gcom(game, samples).indices().vector(), 4))
