"""Compare with a conventional power-splitting receiver (rho = 0.5).

A power-splitting receiver sends a fraction rho of the received RF power to
the decoder and the rest to the rectenna. It gains log2(1 + rho h E / sigma^2)
per use but gives up half the harvestable power.
"""

import numpy as np

from thermswipt.baseline import PsConfig, ps_energy, ps_rate
from thermswipt.energy import DEFAULT_EH, average_harvested_closed

print(f"{'E mW':>7} {'PS rate':>8} {'PS EH':>8} {'best proposed EH':>17}")
for e in np.geomspace(0.1, 10, 7):
    cfg = PsConfig(rho=0.5, mean_power=e)
    rate = ps_rate(cfg, 50_000, seed=5)
    energy = ps_energy(cfg, DEFAULT_EH, 50_000, seed=5)
    best = max(average_harvested_closed(d, e, DEFAULT_EH).value for d in ("exponential", "uniform"))
    print(f"{e:7.3f} {rate.mean:8.4f} {energy.value:8.4f} {best:17.4f}")
