"""Compile CNOT into a two-element group protocol and run every branch."""
import numpy as np

from nlgc import BipartiteUnitary, compile_unitary, random_states, simulate_protocol

np.set_printoptions(precision=3, suppress=True, linewidth=120)

cnot = np.array([[1, 0, 0, 0],
                 [0, 1, 0, 0],
                 [0, 0, 0, 1],
                 [0, 0, 1, 0]], dtype=complex)

exp = compile_unitary(BipartiteUnitary(cnot, 2, 2))

print("group:        ", exp.group.name, "(order", str(exp.group.order) + ")")
print("route:        ", exp.route)
print("classification:", exp.classification)
print("cost:         ", exp.cost_ebits, "ebits")
print("baseline:     ", exp.baseline_ebits, "ebits (teleport both ways)")
print("savings:      ", exp.savings_ebits, "ebits")
print("residual:     ", f"{exp.residual:.2e}")
print()

for f in range(exp.group.order):
    print(f"term {f}:  V U({f}) =")
    print(exp.v @ exp.u_rep.matrices[f])
    print(f"         W({f}) =")
    print(exp.w_ops[f])
    print()

psi = random_states(4, 1, seed=0)[0]
trace = simulate_protocol(exp, psi)
print("entanglement consumed:", trace.ebits, "ebits,",
      trace.cbits, "classical bits exchanged")
print("branch   probability   fidelity")
for (h, g), p, fid in zip(trace.branch_outcomes,
                          trace.branch_probabilities,
                          trace.branch_fidelities):
    print(f"  h={h} g={g}    {p:.6f}     {fid:.12f}")
print("deterministic:", trace.deterministic)
