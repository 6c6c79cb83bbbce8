"""Smoke checks of the python bindings: every exposed entry point runs and
returns sane values. Heavy numerical validation lives in the C++ suite."""

import math
import sys

import rdpc


def approx(a, b, tol=1e-9):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    assert rdpc.__version__ == "0.1.0"

    # Gaussian curves.
    approx(rdpc.solve_rho(1.0, 0.0), math.sqrt(0.5), 1e-12)
    approx(rdpc.gauss_rate(1.0, 0.0), 0.5, 1e-9)
    approx(rdpc.gauss_rate(1.0, math.inf), 0.5 * math.log2(4.0 / 3.0), 1e-9)
    approx(rdpc.gauss_rate_rc_zero(2.0), 0.0, 1e-15)
    approx(rdpc.gauss_rate_rc_zero(0.5), rdpc.gauss_rate_classical(0.25), 1e-12)

    # Distribution / channel plumbing.
    p = rdpc.Distribution([0.5, 0.5])
    q = rdpc.Distribution([0.9, 0.1])
    approx(rdpc.tv_distance(p, q), 0.4, 1e-12)
    assert len(p) == 2
    approx(p.entropy_bits(), 1.0, 1e-12)
    u = rdpc.Distribution.uniform(4)
    approx(u.entropy_bits(), 2.0, 1e-12)

    triple = rdpc.TripleJoint(
        p,
        rdpc.Channel([[0.7, 0.3], [0.3, 0.7]]),
        rdpc.Channel([[0.8, 0.2], [0.2, 0.8]]),
    )
    approx(triple.info_yu(), 1.0 + 0.2 * math.log2(0.2) + 0.8 * math.log2(0.8), 1e-9)

    # Region search.
    ham = rdpc.DistortionMeasure.hamming(2)
    result = rdpc.min_rate(0.2, math.inf, p, ham, 2)
    assert result["feasible"]
    h2 = lambda x: -x * math.log2(x) - (1 - x) * math.log2(1 - x)
    approx(result["min_rate"], 1.0 - h2(0.2), 5e-4)
    witness = result["witness"]
    assert witness["achieved"]["realism_gap"] <= 1e-9
    assert len(witness["forward"]) == 2

    approx(rdpc.classical_rd(p, ham, 0.2), 1.0 - h2(0.2), 1e-6)
    oracle = rdpc.brute_force_oracle(0.2, math.inf, p, ham, 2, 0.02)
    assert oracle >= 1.0 - h2(0.2) - 1e-9

    # Decoder upgrade.
    upgraded = rdpc.upgrade_decoder(
        rdpc.Distribution([0.5, 0.5]),
        rdpc.Channel([[1.0, 0.0], [0.4, 0.6]]),
        rdpc.Distribution([0.5, 0.5]),
    )
    approx(upgraded["tv_before"], 0.2, 1e-12)
    approx(upgraded["mismatch_probability"], 0.2, 1e-12)
    approx(upgraded["upgraded"][0][0], 5.0 / 7.0, 1e-12)

    # Simulator determinism.
    run1 = rdpc.simulate_run(triple, 0.8, 0.4, blocklength=5, seed=7, mc_samples=500)
    run2 = rdpc.simulate_run(triple, 0.8, 0.4, blocklength=5, seed=7, mc_samples=500)
    assert run1 == run2
    assert run1["tv_exact"]
    assert 0.0 <= run1["tv_gap"] <= 1.0

    trace = rdpc.simulate_sweep(triple, 0.8, 0.4, [2, 3], replicates=2, mc_samples=200)
    assert [row["n"] for row in trace] == [2, 3]

    print("python smoke: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
