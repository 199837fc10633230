"""Packing a whole language into one rational number and reading it back digit by digit.

Run with ``python3 demos/02_encoding_a_language.py``.
"""

# %% Strings are numbered in shortlex order: by length, then lexicographically.
from affine_verifiers import LanguageOracle, alpha_value, shortlex_index, shortlex_string
from affine_verifiers.encoding import floor_after, run_beta

print([shortlex_string(i) for i in range(1, 8)])
print("position of '11':", shortlex_index("11"), " position of '12' over {0,1,2}:", shortlex_index("12", 3))

# %% The language's membership bits become base-d digits of alpha.
L = LanguageOracle.finite(["0", "11"], name="zero_oneone")
d = 6
alpha = alpha_value(L, d).exact
print("membership bits:", [L.digit(i) for i in range(1, 8)])
print("alpha =", alpha, "~", float(alpha))

# %% A prover who guesses the bits correctly keeps beta in [0, 1/(d-1)].
honest = run_beta(L, [L.digit(i) for i in range(1, 8)], d)
print("after 7 correct guesses beta =", honest.current)

# %% One wrong guess and beta runs away geometrically; the floor below is what the
# adversary search uses to prune.
cheat = run_beta(L, [0, 0, 0, 0, 0, 0, 0], d)     # wrong at position 2
print("first wrong at", cheat.first_wrong_index, "-> |beta| =", abs(cheat.current),
      ">= floor", floor_after(cheat.index - cheat.first_wrong_index - 1, d))
