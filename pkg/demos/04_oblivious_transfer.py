# %% [markdown]
# # 1-out-of-2 oblivious transfer from boxes
# Alice sends two bits. Bob should learn the one he chose and nothing about
# the other, while Alice learns nothing about his choice. 2n boxes are paired
# up; Alice opens one box per pair to check Bob played honestly.

# %%
import random

from nlcrypt import OTParams, create_session, run_ot

params = OTParams(n=36)
rng = random.Random(5)
run = run_ot(params, s0=0, s1=1, c=1, session=create_session(5, params.boxes), rng=rng)
print(run.outcome, "Bob got", run.bob_output, "with", len(run.matches), "matching rounds")

# %% [markdown]
# Bob fails only when fewer than n/3 surviving rounds match, which is an exact
# binomial tail.

# %%
from nlcrypt import Scenario, oracles, run_scenario

honest = run_scenario(Scenario("OTHonest", {"n": 36}, 5_000, seed=6))
print("failure", honest.estimate, "exact", float(oracles.ot_honest_failure(36)), "bound", honest.bound.value)

# %% [markdown]
# Swapping the ideal commitments for the box-based commitment changes nothing
# for honest players.

# %%
nlbc = run_scenario(Scenario("OTHonest", {"n": 9, "backend": "nlbc"}, 300, seed=7))
print("aborts:", nlbc.extra["aborts"], "wrong outputs:", nlbc.extra["wrong_outputs"])
