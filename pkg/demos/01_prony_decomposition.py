"""
Prony decomposition of a noiseless signal
=========================================

Two damped cosines are sampled, fitted with an order-4 AR model and
recovered as poles plus residues.
"""

import numpy as np

from prony_adapt import AdjustmentPolicy, ComponentSpec, gen_damped_sinusoids, prony_decompose, reconstruct
from prony_adapt.metrics import precision_measure

specs = [ComponentSpec(1.0, -0.05, 0.08, 0.3), ComponentSpec(0.6, -0.02, 0.21, -1.1)]
clean, _ = gen_damped_sinusoids(specs, 64)

# each real cosine contributes a conjugate pole pair, hence p = 4
c = prony_decompose(clean, 4, "ls", AdjustmentPolicy.none())

order = np.argsort(c.freq)
print("freq   ", np.round(c.freq[order], 6))
print("alpha  ", np.round(c.alpha[order], 6))
# a real cosine of amplitude A splits into two poles of amplitude A/2
print("amp    ", np.round(c.amp[order], 6))

g = clean.samples
grecons = reconstruct(c, 64)
print("relative error", np.linalg.norm(grecons - g) / np.linalg.norm(g))
print("PM", precision_measure(g, grecons).pm, "of a possible", g.shape[0])

# the model extrapolates past the fitted window
longer, _ = gen_damped_sinusoids(specs, 128)
print("extrapolation error", np.max(np.abs(reconstruct(c, 128) - longer.samples)))
