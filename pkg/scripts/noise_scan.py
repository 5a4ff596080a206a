"""Two-WF bound and certified dimension against isotropic white noise, noiseless statistics."""
import argparse

import numpy as np

from pixent.state import BasisPair, apply_isotropic_noise, outcome_probabilities, phi_plus
from pixent.witness import certify_dimension, eof_bound, fidelity_exact_all_mubs, fidelity_lower_bound_two_wf


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=int, default=19)
    ap.add_argument("--steps", type=int, default=11)
    ap.add_argument("--pmax", type=float, default=0.2)
    args = ap.parse_args()
    d = args.d
    wf0, wf1, std = (BasisPair.matched(x) for x in ("wf:0", "wf:1", "std"))
    print(f"{'p':>6} {'F':>8} {'bound':>8} {'d_ent':>6} {'EoF':>6}")
    for p in np.linspace(0, args.pmax, args.steps):
        s = apply_isotropic_noise(phi_plus(d), p)
        p0 = outcome_probabilities(s, wf0.a, wf0.b)
        p1 = outcome_probabilities(s, wf1.a, wf1.b)
        bound = fidelity_lower_bound_two_wf(p0, p1, 0, 1, d).value
        if d <= 31:
            pairs = [BasisPair.matched(f"wf:{k}") for k in range(d)]
            allk = [outcome_probabilities(s, b.a, b.b) for b in pairs]
            exact = fidelity_exact_all_mubs(outcome_probabilities(s, std.a, std.b), allk, d).value
        else:
            exact = s.fidelity_phi_plus()
        e = eof_bound(p0, p1, d).value
        print(f"{p:6.3f} {exact:8.4f} {bound:8.4f} {certify_dimension(bound, d):6d} {e:6.3f}")


if __name__ == "__main__":
    main()
