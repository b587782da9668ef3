"""Which exchange parameter K makes a tau-invariant section single-valued?

Run:  python3 demos/04_singlevaluedness.py
"""
import json

import numpy as np

from rp2spin import quotient as quo
from rp2spin.sections import paired_points

rng = np.random.default_rng(7)
pts = paired_points(rng, 100)
raw = rng.standard_normal((200, 4)) + 1j * rng.standard_normal((200, 4))

for K_tilde in (0, 1):
    spec = quo.Z2ActionSpec(K_tilde)
    section = quo.invariant_part(spec, quo.SpinSection.from_values(pts, raw))
    audit = quo.parity_audit(section)
    print(f"K_tilde={K_tilde}: parity audit says {audit.verdict}")
    for K in (0, 1):
        rep = quo.singlevaluedness_audit(K, K_tilde, section)
        print(f"   K={K}: {rep.verdict:12s} "
              f"(|Psi(r)-Psi(-r)| {rep.singlevalued_residual:.1e}, "
              f"|Psi(r)+Psi(-r)| {rep.antivalued_residual:.1e})")

print("\nfull report:")
print(json.dumps(quo.singlevaluedness_audit(1, 1, section).to_dict(), indent=1)[:600], "...")
