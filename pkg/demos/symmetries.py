"""Check scaling generators exactly: determining relations, the linearised
condition at random points, and the finite group action on whole orbits."""
from fractions import Fraction

from radex import CoefficientQuad, InitialState, simulate
from radex.engine import scale_action, scale_trajectory
from radex.symmetry import X1_CORRECTED, X1_PAPER, X2, lsc_residual, parse_generator, verify_generator

quad = CoefficientQuad.periodic([2, Fraction(-1, 3)], [1], [Fraction(5, 4), 7], [Fraction(-3, 2)])
init = InitialState(Fraction(2, 3), Fraction(-5, 4), 7, Fraction(1, 9))

for gen in (X2, X1_CORRECTED, X1_PAPER, parse_generator("custom:c0=2,c1=-1")):
    report = verify_generator(gen, quad, init, samples=50, seed=7)
    r1, r2 = report.determining[0][1:]
    print(f"{gen.name:18s} passed={report.passed}  determining residuals at n=0: ({r1}, {r2})")

# one point by hand: x d/dx + y d/dy leaves a residual, -x d/dx + y d/dy does not
point = (Fraction(3, 2), Fraction(-2, 5), Fraction(7, 3), 4)
for gen in (X1_PAPER, X1_CORRECTED):
    r1, r2 = lsc_residual(gen, quad, 0, point)
    print(f"{gen.name} residual at {tuple(map(str, point))}: ({r1}, {r2})")

# the group acting on an orbit: scaling the start scales every entry
r = Fraction(-5, 7)
moved = simulate(quad, scale_action(init, r, X2), 10)
assert moved.xs == scale_trajectory(simulate(quad, init, 10), r, X2).xs
print("X2 with r = -5/7 maps orbits to orbits")
