"""Certifying that no prover strategy beats 1/k, by branch and bound over guesses.

Run with ``python3 demos/04_adversary_search.py``.
"""

# %% The search returns an exact optimum plus the strategy that attains it.
from affine_verifiers import LanguageOracle, ProtocolParams, build_weak
from affine_verifiers.analysis import brute_force_acceptance, max_acceptance
from affine_verifiers.report import fmt_witness

L = LanguageOracle.finite(["0", "11"], name="zero_oneone")
machine = build_weak(L)
for w in ["", "1", "00", "010"]:
    b = max_acceptance(machine, L, w)
    print(f"{w or 'eps':>4}: max acceptance {b.max_accept.hi} (~{float(b.max_accept.hi):.4f}) "
          f"via {fmt_witness(b.witness)}; explored {b.explored}, pruned {b.pruned}")

# %% Up to a horizon, the pruned search agrees with simulating every strategy.
brute = brute_force_acceptance(machine, "1", 8)
for H in (2, 4, 8):
    assert max_acceptance(machine, L, "1", horizon=H).max_accept.lo == brute[H][0]
print("pruned search == brute force for horizons 2, 4, 8 on '1'")

# %% A larger k shrinks the cheating margin: the bound becomes 1/5.
params = ProtocolParams(k=5)
b = max_acceptance(build_weak(L, params), L, "1", params)
print("k = 5, word '1': max acceptance", float(b.max_accept.hi), "<= 0.2")

# %% A language without a support bound is handled with intervals.
tail1 = LanguageOracle(2, lambda w: w.endswith("1"), name="ends_in_one")
b = max_acceptance(None, tail1, "10", depth=12)
print("unbounded language, word '10':", b.max_accept)
