"""The strong verifier: a coin register makes every branch halt with probability 1.

Run with ``python3 demos/05_strong_protocol.py``.
"""

# %% Each iteration the coin is weighted; it rejects with probability 64**-(|w|+1).
from fractions import Fraction as F

from affine_verifiers import LanguageOracle, ProtocolParams, build_strong, honest_strategy
from affine_verifiers.analysis import amplify_majority, evaluate_strategy, monte_carlo
from affine_verifiers.protocols import stall_strategy

params = ProtocolParams(strong=True)
print("per-iteration stop probability at |w| = 1:", params.rejection_probability(1))

# %% A prover who never exits is now rejected with certainty; the infinite family of
# stalling branches is summed in closed form.
empty = LanguageOracle.finite([], name="empty")
out = evaluate_strategy(build_strong(empty, params), "0", stall_strategy())
print("stall on a non-member: reject =", out.reject.lo, ", expected steps =", out.expected_steps,
      "<= bound", 3 * 1 * 64 ** 2)

# %% The honest prover pays a small survival tax.
L = LanguageOracle.finite(["1"], name="one")
m = build_strong(L, params)
acc = evaluate_strategy(m, "1", honest_strategy(L, "1", params)).accept.lo
print("honest acceptance on '1':", acc, "=", F(4095, 4096) ** 2)

# %% Exact results agree with sampling.
mc = monte_carlo(m, "1", honest_strategy(L, "1", params), 20_000, seed=1)
print("Monte Carlo:", float(mc.accept_freq), "vs exact", float(acc))

# %% Repeating and taking a majority vote drives the error down.
for reps in (1, 3, 11, 31):
    print(f"majority of {reps:>2} runs at 2/3: {float(amplify_majority(F(2, 3), reps)):.4f}")
