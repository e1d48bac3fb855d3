#!/usr/bin/env python3
"""Walk through the deformed ladder algebras behind the simulator.

Builds the finite para-fermion representation and the truncated para-boson
representation, prints the coupling amplitudes, and checks the defining
commutation relations numerically, including the boundary term with the
double-factorial coefficient that appears when the boson ladder is cut off.
"""
import numpy as np

from parasim import (
    ParaSpec,
    beta_constant,
    build_fock_ops,
    displaced_vacuum_exact,
    ladder_amplitude,
    verify_truncation_identity,
)

print("=" * 64)
print("Para-fermion ladder, order p = 4 (five levels)")
print("=" * 64)
spec = ParaSpec("pf", 4)
amps = [ladder_amplitude(spec, n) for n in range(1, spec.dim)]
print("couplings into levels 1..4:", np.round(amps, 6))

ops = build_fock_ops(spec)
comm = ops.a @ ops.adag - ops.adag @ ops.a
print("[a, a+] diagonal:", np.round(np.diag(comm).real, 12))
print("target 2(p/2 - n)(-1)^n:",
      [2 * (2 - n) * (-1) ** n for n in range(spec.dim)])
report = verify_truncation_identity(spec)
print(f"commutator identity residual: {report.residual_norm:.2e}"
      f"  -> {'ok' if report.passes else 'BROKEN'}")

print()
print("=" * 64)
print("Truncated para-boson ladder: boundary coefficient beta")
print("=" * 64)
print(f"{'np':>4} {'p':>3} {'beta':>12} {'residual':>12}")
for np_cut in (1, 2, 3, 4):
    for p in (1, 2, 4):
        rep = verify_truncation_identity(ParaSpec("pb", p, np=np_cut))
        print(f"{np_cut:>4} {p:>3} {rep.beta:>12.6f} {rep.residual_norm:>12.2e}")
print("beta(np=2, p=2) =", beta_constant(2, 2), " (exactly 1)")
print("beta shrinks with the cutoff:",
      [round(beta_constant(n, 2), 6) for n in (2, 4, 8, 16)])

print()
print("=" * 64)
print("Dense displaced vacuum: the reference for every circuit result")
print("=" * 64)
spec = ParaSpec("pf", 2)
for alpha in (0.0, np.pi / 4, np.pi / 2):
    psi = displaced_vacuum_exact(spec, alpha)
    mean = float(np.abs(psi) ** 2 @ np.arange(spec.dim))
    print(f"alpha = {alpha:6.4f}:  <N> = {mean:.6f}   "
          f"(closed form 1 - cos(2 alpha) = {1 - np.cos(2 * alpha):.6f})")
