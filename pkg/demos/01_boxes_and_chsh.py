# %% [markdown]
# # Non-local boxes
# A box takes one bit from each side and hands back one bit to each side.
# Whoever moves first gets a fair coin; the other side's bit is then fixed so
# that the two outputs differ exactly when both inputs are 1.

# %%
from nlcrypt import ALICE, BOB, create_session
from nlcrypt.harness import chsh_check, no_signaling_audit

session = create_session(seed=1, count=4)
for box, (x, y) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
    a = session.enter_input(box, ALICE, x)
    b = session.enter_input(box, BOB, y)
    print(f"x={x} y={y}  a={a} b={b}  a^b={a ^ b}")

# %% [markdown]
# Alice's output exists before Bob has touched the box. Bob can wait as long
# as he likes; nothing forces him to use it at the same time.

# %%
session = create_session(seed=2, count=1)
print("Alice's output:", session.enter_input(0, ALICE, 1))
print("box state:", session.box(0))

# %% [markdown]
# Scored on the CHSH game the boxes win every round, for a total of 4.

# %%
report = chsh_check(1_000_000, seed=3)
print("CHSH value:", report.value)

# %% [markdown]
# Each side's output is a fair coin whatever the other side does.

# %%
audit = no_signaling_audit(100_000, seed=4)
for cell in audit.cells[:5]:
    print(cell)
print("max deviation from 1/2:", round(audit.max_deviation, 4), "passed:", audit.passed)
