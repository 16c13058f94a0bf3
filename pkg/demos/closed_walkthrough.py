"""Genus 2, single twist: Floer dimensions, the even limit, and the matching Čech data."""
from nodalmirror.cech import build_complex, cohomology
from nodalmirror.curves import build_mirror
from nodalmirror.floer import Scenario, graded_dims, product_table
from nodalmirror.verify import CheckSpec, check_closed_string

s = Scenario(2)
print("stage  dim HF^0  dim HF^1")
for d in range(7):
    a, b = graded_dims(s, d)
    print(f"{d:5d}  {a:8d}  {b:8d}")

print("\nsome products up to stage 4:")
for left, right, value in product_table(s, 4)[8:40:4]:
    print(f"  {left} * {right} = {value}")

cfg = build_mirror(2, "nodal", ell=1)[0]
for sheaf in ("O", "Tbal"):
    h = cohomology(build_complex(cfg, sheaf, 10))
    print(f"\n{cfg.label}, sheaf {sheaf}: dim F_w h0 for w<=6 {h.filtered_dims(6)}, h1 = {h.h1_dim}")

print()
print(check_closed_string(CheckSpec(2, "closed")).to_text())
