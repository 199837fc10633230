"""Affine registers: states that sum to one, operators whose columns sum to one.

Run with ``python3 demos/01_affine_registers.py``.
"""

# %% An affine state may have negative entries; only the total is constrained.
from fractions import Fraction as F

from affine_verifiers import apply, basis, validate_operator, validate_state, weight
from affine_verifiers.errors import ColumnSumNotOne, SumNotOne

v = validate_state([1, -1, 1])
print("state", v, "with l1 norm", v.norm)

try:
    validate_state([1, 1, 0])
except SumNotOne as exc:
    print("rejected:", exc)

# %% Operators: every column sums to 1 (signed), so affinity is preserved.
double = validate_operator([[1, 0, 0], [1, 2, 0], [-1, -1, 1]])
print("counter step K -> 2K + 1 maps (1, 3, -3) to", apply(double, validate_state([1, 3, -3])))

try:
    validate_operator([[2, 0], [0, 1]])
except ColumnSumNotOne as exc:
    print("rejected:", exc)

# %% Weighting reads the register: outcome j has probability |v_j| / |v|.
for outcome in weight(validate_state([1, 0, 0, F(1, 4), F(-1, 4)])):
    print(f"  observe e{outcome.index} with probability {outcome.probability}")

# %% A weighting is the only non-linear step; after it the register is a basis state.
print("post-weighting state for outcome 1:", weight(v)[0].post_state, "=", basis(3, 1))
