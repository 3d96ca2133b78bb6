"""Evaluate x_m, y_m from initial data alone, for every family that applies."""
from fractions import Fraction

from radex import CoefficientQuad, InitialState, simulate
from radex.closed_form import applicable_families, auto_family, session

init = InitialState(Fraction(2, 3), Fraction(-5, 4), 7, Fraction(1, 9))

for coeffs in [(1, 2, 1, 3), (-1, 2, -1, 3), (2, 3, 5, 7), (1, 4, 3, -2)]:
    quad = CoefficientQuad.constant(*coeffs)
    traj = simulate(quad, init, 12)
    names = applicable_families(quad)
    print(coeffs, "families:", ", ".join(names), "| most specialised:", auto_family(quad))
    for name in names:
        sess = session(name, quad, init)
        ok = all(sess.at(m) == (traj.x(m), traj.y(m)) for m in range(-1, traj.last_index + 1))
        print(f"   {name:9s} agrees with iteration up to m={traj.last_index}: {ok}")

# x_12 for the unit family, written out
quad = CoefficientQuad.constant(1, 2, 1, 3)
print("x_12 =", session("unit", quad, init).at(12)[0])

# non-constant coefficients only have the general family
quad = CoefficientQuad.periodic([2, Fraction(1, 3), -1], [1, 5], [4], [Fraction(-1, 2), 3])
x9, y9 = session("general", quad, init).at(9)
print(applicable_families(quad), "x_9 =", x9, " y_9 =", y9)
