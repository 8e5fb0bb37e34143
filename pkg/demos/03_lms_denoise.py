"""
LMS noise cancellation
======================

The primary input is a sine plus Gaussian noise, the reference input is the
noise alone, and the error signal is the recovered sine.
"""

import numpy as np

from prony_adapt import ComponentSpec, LmsConfig, denoise_experiment, gen_damped_sinusoids
from prony_adapt.signals import gaussian_noise

n = 2000
clean, _ = gen_damped_sinusoids([ComponentSpec(1.0, 0.0, 0.05)], n)
noise = gaussian_noise(n, 0.5, seed=1)

for mu in (0.001, 0.005, 0.01):
    recovered, pm = denoise_experiment(clean, noise, LmsConfig(taps=32, mu=mu))
    sq = (recovered - clean.samples) ** 2
    print(f"mu={mu:<6} PM={pm:9.3f}  MSE first quarter {sq[: n // 4].mean():.2e}  last quarter {sq[-n // 4:].mean():.2e}")

# the PM varies with the noise draw, unlike a deterministic fit
pms = [denoise_experiment(clean, gaussian_noise(n, 0.5, s), LmsConfig())[1] for s in range(10)]
print("PM over 10 noise seeds: mean %.3f std %.3f" % (np.mean(pms), np.std(pms, ddof=1)))
