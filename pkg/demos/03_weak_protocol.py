"""The weak verifier: one affine register, one pass, an honest prover and a cheating one.

Run with ``python3 demos/03_weak_protocol.py``.
"""

# %% Build the verifier for L = {"1"} and follow the honest run on "1".
from affine_verifiers import LanguageOracle, ProtocolStrategy, build_weak, honest_strategy
from affine_verifiers.analysis import evaluate_strategy, trace
from affine_verifiers.report import fmt_rational

L = LanguageOracle.finite(["1"], name="one")
machine = build_weak(L)
entries, final = trace(machine, "1", honest_strategy(L, "1"))
for e in entries:
    regs = ", ".join(fmt_rational(x) for x in e.registers[0])
    print(f"{e.step:>2}  {e.state:<6} reads {e.symbol}  applies {e.option[0]:<6} register ({regs})")
print("halted in", final.state, "after", final.steps, "steps")

# %% A prover claiming "0" is in L must cheat somewhere; the best cheat on the empty
# language exits one guess late, and acceptance drops to 2/7.
empty = LanguageOracle.finite([], name="empty")
out = evaluate_strategy(build_weak(empty), "0", ProtocolStrategy((0, 1), exit_at=2))
print("cheating acceptance on '0':", out.accept.lo)

# %% Never exiting is allowed in the weak model: the run just does not halt.
out = evaluate_strategy(build_weak(empty), "0", ProtocolStrategy())
print("stalling prover: non-halting mass", out.nonhalt.lo, "expected steps", out.expected_steps)
