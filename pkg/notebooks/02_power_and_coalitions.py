# %% [markdown]
# # Bargaining power, coalitions and voting
#
# `rho[i, j]` measures how far player i can swing player j's payoff by
# switching between pure favour and pure harm, relative to j's full range.

# %%
import numpy as np

from prefspace import catalog
from prefspace.bargaining import rho_integral, rho_matrix, self_harm_scan
from prefspace.cooperative import coalition_game, core_check, reciprocity_check, shapley_value
from prefspace.games import VotingGame
from prefspace.voting import banzhaf_estimate, banzhaf_index, shapley_shubik_estimate, shapley_shubik_index

game = catalog.self_harm_game()
print(rho_matrix(game).entries)
print("players hurting themselves by caring only about themselves:", self_harm_scan(game).players)

# %% [markdown]
# The local value looks at one position. Averaging over the other player's
# stance gives a broader picture.

# %%
est = rho_integral(game, 0, 1, n_samples=20000, seed=0)
print(f"{est.value:.4f} ± {est.stderr:.4f}")

# %% [markdown]
# Coalitions: a coalition is a position where its members care only about
# the coalition's total. Its value is the total they then realise.

# %%
three = catalog.three_player_game()
cf = coalition_game(three)
for c, v in cf.values.items():
    print(c, round(v, 3))
phi = shapley_value(cf)
print("Shapley value", np.round(phi, 3), "in core:", core_check(cf, phi))
print("reciprocal outcomes for the cycle (b, c):", reciprocity_check(three, [1, 2]))

# %% [markdown]
# Weighted voting: the expected pivotality of a voter under uniformly random
# profiles is the Banzhaf index; with a uniformly random number of yes votes
# it becomes the Shapley-Shubik index.

# %%
vg = VotingGame((4, 2, 1, 1), 5)
print("Banzhaf", banzhaf_index(vg), banzhaf_estimate(vg, 100_000).values)
print("Shapley-Shubik", shapley_shubik_index(vg), shapley_shubik_estimate(vg, 100_000).values)
