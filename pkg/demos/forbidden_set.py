"""Initial data that run into a zero denominator, found before iterating."""
from fractions import Fraction

from radex import CoefficientQuad, InitialState, simulate
from radex.closed_form import forbidden_scan

unit = CoefficientQuad.constant(1, 1, 1, 1)

# j*b*x_0*y_-1 = -1 with j = 3 kills the third step
init = InitialState(1, 1, Fraction(-1, 3), 1)
print(forbidden_scan(unit, init, 10).describe())
print(simulate(unit, init, 10).singular.describe())

# a = c = -1: only b*x_0*y_-1 = 1 or d*x_-1*y_0 = 1 can stop the orbit
neg = CoefficientQuad.constant(-1, 2, -1, 3)
print(forbidden_scan(neg, InitialState(Fraction(1, 3), 1, 1, 1), 50).describe())
print(forbidden_scan(neg, InitialState(2, 5, 7, 11), 50))

# sweep y_-1 over a grid and count how many starts fail within 40 steps
bad = []
for num in range(-12, 13):
    for den in range(1, 13):
        if num == 0:
            continue
        init = InitialState(1, 1, Fraction(num, den), 1)
        report = forbidden_scan(unit, init, 40)
        if report is not None:
            bad.append((Fraction(num, den), report.step))
print(f"{len(set(bad))} forbidden values of y_-1 on the grid:")
for y_prev, step in sorted(set(bad), reverse=True):
    print(f"   y_-1 = {y_prev}: stops at step {step}")
