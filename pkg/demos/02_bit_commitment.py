# %% [markdown]
# # Committing to a bit with boxes
# Alice encodes her bit as a string whose odd-aligned "11" pairs plus the last
# bit have the right parity, feeds it into 2n+1 boxes and announces only the
# parity of her outputs.

# %%
import random

from nlcrypt import BCParams, Honest, HonestBob, create_session, decode, encode, run_protocol

rng = random.Random(0)
x = encode(1, n=3, rng=rng)
print("commit string", x, "decodes to", decode(x))

params = BCParams(n=2, k=3)
result = run_protocol(params, Honest(1), HonestBob(), create_session(0, params.boxes), rng)
print(result.verdict.value, "revealed", result.revealed_c)
for block in result.blocks:
    print(" A =", block.A, " y =", block.y, " b =", block.b)

# %% [markdown]
# ## How much does Bob learn before the reveal?
# Bob knows x . y for his own y. The exact oracle gives the best y and the
# accuracy a single block gives him.

# %%
from nlcrypt import oracles

for n in range(1, 5):
    y = oracles.best_guess_y(n)
    print(n, "".join(map(str, y)), oracles.single_block_accuracy(n, y))

# %% [markdown]
# A full sweep over every y for n up to 5 shows the bias never exceeds
# 2^-(n+1), and some y always reaches it.

# %%
for n in range(6):
    table = oracles.bias_table(n)
    print(n, table.max_deviation, table.bound, len(table.tight_witnesses()), "tight y values")
