"""Controlled phase gates beat teleportation, and the cheap side can differ."""
import numpy as np

from nlgc import BipartiteUnitary, compile_unitary

w = np.exp(2j * np.pi / 3)

# qutrit-qutrit controlled phase: rank 3, all terms commute
gate = np.diag([1, 1, 1, 1, w, w ** 2, 1, w ** 2, w]).astype(complex)
exp = compile_unitary(BipartiteUnitary(gate, 3, 3))
print("qutrit controlled phase")
print("  group", exp.group.name, "order", exp.group.order,
      " classification:", exp.classification)
print(f"  cost {exp.cost_ebits:.4f} ebits vs baseline {exp.baseline_ebits:.4f}")
print(f"  saves {exp.savings_ebits:.4f} ebits per use")
print()

# qutrit control, qubit target: the control needs three phases, but the
# qubit diagonal algebra is only two dimensional, so compiling on B wins
# even though the control sits on A
asym = np.diag([1, 1, 1, w, 1, w ** 2]).astype(complex)
both = compile_unitary(BipartiteUnitary(asym, 3, 2))
forced_a = compile_unitary(BipartiteUnitary(asym, 3, 2), side="A")
print("qutrit control, qubit target (diagonal)")
print("  free side choice -> side", both.side, "group order",
      both.group.order, f"cost {both.cost_ebits:.4f}")
print("  forced side A    -> group order", forced_a.group.order,
      f"cost {forced_a.cost_ebits:.4f}")
print("  letting the compiler pick the side saves",
      f"{forced_a.cost_ebits - both.cost_ebits:.4f} ebits")
