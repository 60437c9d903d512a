"""Radio energy of a smartphone talking to edge, cloud and far-cloud servers."""

from drxsim.config import RunConfig, load_config, load_profile
from drxsim.engine import (
    ComparisonTable,
    EnergyReport,
    Scenario,
    compare,
    simulate,
    simulate_trace,
    sweep,
)
from drxsim.errors import (
    ConfigError,
    DrxSimError,
    EmptySeriesError,
    InsufficientDataError,
    InvalidComparisonError,
    InvalidInputError,
    ParseError,
    WorkloadOverlapError,
)
from drxsim.hygiene import (
    SampleSeries,
    SlotStat,
    discard_warmup,
    discharge_to_power,
    discharge_uptime,
    normalize_uptime,
    parse_sample_series,
    slot_min_mean,
)
from drxsim.radio import (
    DutyCycle,
    FsmTimers,
    PowerProfile,
    RadioState,
    StateInterval,
    build_state_timeline,
    energy_of_interval,
    fsm_advance,
    on_packet,
    timeline_energy,
)
from drxsim.workload import (
    Download,
    EventTrace,
    PacketEvent,
    PathModel,
    RequestResponse,
    generate_trace,
    parse_packet_trace,
    transfer_timeline,
)

__version__ = "0.1.0"
