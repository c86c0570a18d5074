"""Walk the builtin group catalog and round trip a synthesized gate."""
from nlgc import compile_unitary
from nlgc.expansion import synthesize_group_gate
from nlgc.groups import builtin_catalog, symmetric
from nlgc.representations import irreps_of

catalog = builtin_catalog(16)
print(f"{len(catalog)} groups up to order 16")
print(f"{'name':<12} {'order':>5}  {'abelian':<8} irrep dims")
for g in sorted(catalog, key=lambda g: (g.order, g.name)):
    irreps = irreps_of(g)
    dims = sorted(r.dim for r in irreps)
    assert sum(d * d for d in dims) == g.order
    print(f"{g.name:<12} {g.order:>5}  {str(g.is_abelian):<8} {dims}")

print()
print("synthesis round trip on S3:")
g = symmetric(3)
gate = synthesize_group_gate(g, seed=42)
print("  gate dims", gate.dim_a, "x", gate.dim_b)
exp = compile_unitary(gate)
print("  recompiled to", exp.group.name, "order", exp.group.order,
      "residual", f"{exp.residual:.2e}")
assert exp.group.order <= g.order
