"""Heat a resistor with random power bursts and watch the thermometer.

The transmitter dissipates power S_i in slot i, the fading gain h_i scales
what reaches the receiver, and the receiver's temperature carries memory of
earlier slots through the factor (1 - beta). Stacking N slots gives a lower
triangular N x N channel A whose inverse is bidiagonal.
"""

import numpy as np

from thermswipt import streams
from thermswipt.channel import (
    ThermalParams,
    build_channel,
    sample_input_power,
    sample_rayleigh_gains,
    simulate_trace,
)

np.set_printoptions(precision=4, suppress=True)

params = ThermalParams()  # alpha = 0.1, beta = 1 - e^-0.3, T_e = 300 K
rng = streams.stream(seed=7)
n = 5

real = sample_rayleigh_gains(n, rng)
ch = build_channel(params, real)
print("fading gains h:", real.gains)
print("\nchannel A (lower triangular, geometric memory):")
print(ch.matrix_a)
print("\nclosed-form inverse B (only the diagonal and subdiagonal are non-zero):")
print(ch.matrix_b)
print("\nmax |A B - I| =", np.max(np.abs(ch.matrix_a @ ch.matrix_b - np.eye(n))))
print("row norms ||b_i||^2:", ch.row_norm_sq)

# A noiseless trace, then the same inputs with unit-variance thermometer noise.
s = sample_input_power("exponential", 20.0, rng, size=n)
clean = simulate_trace(params, real, s)
noisy = simulate_trace(params, real, s, noise=rng.standard_normal(n))
print("\nslot  S_i      P_i      T_i(clean)  T_i(noisy)")
for i in range(n):
    print(f"{i + 1:>4}  {s[i]:7.3f}  {clean.powers[i]:7.3f}  {clean.temps[i + 1]:10.4f}  {noisy.temps[i + 1]:10.4f}")

# Channel inversion undoes the memory exactly when there is no noise.
recovered = ch.matrix_b @ (clean.temps[1:] - params.t_env)
print("\nB (T - T_e) recovers S:", np.allclose(recovered, s))
