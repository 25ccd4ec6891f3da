# %% [markdown]
# # Exploiting the missing synchronisation
# Nothing forces a party to use a box right away. The simplest consequence:
# a one-box erasure channel stops being an erasure channel if the receiver
# waits for the sender's announcement.

# %%
from nlcrypt import Scenario, run_scenario

for kind in ("ErasureDemo", "WWDemo"):
    for receiver in ("sync", "delay"):
        s = run_scenario(Scenario(kind, {"receiver": receiver}, 1_000, seed=1))
        print(kind, receiver, s.estimate)

# %% [markdown]
# In the transfer protocol Bob can delay one box in some pairs. Half the time
# Alice checks the other box; otherwise his fabricated opening survives with
# probability 1/2. Each cheated pair therefore escapes 3/4 of the time, and
# every delayed box that survives is a guaranteed match.

# %%
attack = run_scenario(Scenario("OTBobAttack", {"n": 36, "k": 6}, 20_000, seed=2))
print("escape rate", round(attack.extra["escape_rate"], 4))
print("learns both", attack.estimate, "exact", round(attack.extra["exact_both_secrets"], 4), "bound", round(attack.bound.value, 4))
