"""Temperature-modulated SWIPT: virtual MIMO thermal channel, rates, bound, harvested energy."""

from .baseline import PsConfig, ps_energy, ps_rate
from .bound import (
    BoundParams,
    ergodic_capacity_bound,
    minimized_params,
    r_bar,
    suboptimal_params,
)
from .channel import (
    ChannelRealization,
    SingularChannelError,
    TemperatureChannel,
    TemperatureTrace,
    ThermalParams,
    build_channel,
    log_det_ratio,
    s_diagonal,
    sample_input_power,
    sample_rayleigh_gains,
    simulate_trace,
)
from .energy import (
    EhEstimate,
    EhParams,
    average_harvested_closed,
    average_harvested_mc,
    average_harvested_quadrature,
    harvest,
    received_power_pdf,
)
from .rates import ErgodicEstimate, RateConfig, ergodic_rate, rate_ci_explicit, rate_ci_generic

__version__ = "0.1.0"
