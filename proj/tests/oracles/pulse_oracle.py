#!/usr/bin/env python3
"""Arbitrary-precision reference values for the complex drive formulas.

Evaluates f, Omega_x, Omega_y, Omega_z for complex-circle trajectories
straight from the closed forms at 50 digits, independently of the C++
implementation. The printed values are frozen into test_pulses.cpp.
"""

from mpmath import mp, mpc, mpf, sin, cos, pi, re, im

mp.dps = 50


def angles(theta0, phi0, T, beta, gamma, t):
    s = sin(pi * t / T) ** 2
    ds = pi / T * sin(2 * pi * t / T)
    theta = theta0 + mpc(0, 1) * beta * s
    phi = phi0 + 2 * pi * t / T + mpc(0, 1) * gamma * s
    dtheta = mpc(0, 1) * beta * ds
    dphi = 2 * pi / T + mpc(0, 1) * gamma * ds
    return theta, phi, dtheta, dphi


def pulses(theta, phi, dtheta, dphi):
    sin2h = sin(theta / 2) ** 2
    f = 2 * re(dphi * sin2h) - dphi
    ox = f * sin(theta) * cos(phi) - dtheta * sin(phi)
    oy = f * sin(theta) * sin(phi) + dtheta * cos(phi)
    oz = f * cos(theta) + dphi
    return f, ox, oy, oz


def main():
    cases = [
        (pi / 2, mpf(0), mpf(1), mpf("0.1"), mpf(0)),
        (pi / 2, mpf(0), mpf(1), mpf("0.1"), mpf("0.07")),
    ]
    for theta0, phi0, T, beta, gamma in cases:
        for t in [mpf("0.2"), mpf("0.37"), mpf("0.5")]:
            f, ox, oy, oz = pulses(*angles(theta0, phi0, T, beta, gamma, t))
            print(f"beta={beta} gamma={gamma} t={t}")
            for name, v in [("f", f), ("ox", ox), ("oy", oy), ("oz", oz)]:
                print(f"  {name} = {mp.nstr(re(v), 20)}  {mp.nstr(im(v), 20)}")


if __name__ == "__main__":
    main()
