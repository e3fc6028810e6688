"""
Replaying the identity chain
============================

``full_audit`` evaluates each displayed identity of the stochastic-matrix
argument on a concrete matrix and records a verdict per step.  ``audit_what_if``
runs the same chain on a supplied rational circulant with a declared h, which
is the only way to see the modular steps at h > 1.
"""

from fractions import Fraction

from circhad import audit_what_if, circ, full_audit

report = full_audit((-1, 1, 1, 1))
for step in report.steps:
    print(f"{step.step_id:<15} {step.verdict}")
print(report.conclusion)
print()

# h = 3 with S = J/3: 4h(2h+1)^2 S S^* = 196 J is integral but not 0 mod 3
what_if = audit_what_if(circ(Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)), 3)
for step in what_if.steps:
    extra = f"  {step.witness}" if step.witness else ""
    print(f"{step.step_id:<15} {step.verdict}{extra}")

# strict vs extended reduction when S S^* has denominators coprime to h
S = circ(Fraction(1, 5), Fraction(4, 5))
for mode in ("strict", "extended"):
    r = audit_what_if(S, 3, mode=mode)
    print(mode, r.step("C3-integrality").verdict, r.step("C3-congruence").verdict)

print(report.to_json(indent=2))
