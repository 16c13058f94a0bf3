"""Two places where the explicit module models disagree with the computed limits."""
from nodalmirror.verify import CheckSpec, check_closed_string


def show(report, names):
    for c in report.checks:
        if any(c.name.endswith(n) for n in names):
            print(f"  {c.name}: {'ok' if c.passed else 'FAIL'}")
            for key in ("dims_a", "dims_b", "dims_target"):
                if getattr(c, key) is not None:
                    print(f"    {key} = {getattr(c, key)}")
            for w in c.witnesses[:3]:
                print(f"    witness {w}")


# 1. punctured surface: the balanced-tuple model is not stable under T_j
for k in (1, 2):
    rep = check_closed_string(CheckSpec(2, "punctured", punctures=k), legs=("odd",))
    print(f"punctured, k={k}")
    show(rep, ("odd:A:action", "odd:B:action", "odd:filtered_dims"))

# 2. two twist circles: both sides agree from weight 1, the model's weight-0 base does not
rep = check_closed_string(CheckSpec(3, "multi", circles=2), legs=("odd",))
print("two circles, genus 3")
show(rep, ("odd:filtered_dims", "odd:A:action", "odd:B:action"))
