"""Regular asynchronous binary systems: signals, semantics, decomposition."""

from .boolfn import (
    BoolTable,
    DependencyMatrix,
    GeneratorFn,
    Partition,
    dependency_matrix,
    finest_partition,
    is_separated,
    parallel_fn,
    partial_derivative,
    permute_fn,
    project_fn,
    split_fn,
)
from .errors import (
    AsyncDecError,
    CoordinateError,
    HorizonExceeded,
    HorizonMismatch,
    InvalidSystem,
    NotSeparatedError,
    ProgressivenessError,
    SizeLimitError,
    WidthMismatch,
)
from .semantics import (
    Trajectory,
    apply_masked,
    delay_bounds,
    enumerate_states,
    exhaustive_family,
    run,
    single_fire_family,
)
from .signals import (
    BitVec,
    ProgressiveFunction,
    Signal,
    SignalSet,
    Tick,
    canonicalize,
    initial_value,
    interleave_rho,
    is_prefix_progressive,
    permute_signal,
    product_rho,
    product_set,
    product_signal,
    project_signal,
    round_robin,
    unit_step,
    value_at,
)
from .systems import (
    DecompositionResult,
    ProductConditionResult,
    RegularSystem,
    SystemOutput,
    check_product_condition,
    decompose_system,
    initial_state_function,
    parallel_system,
    project_phi0,
    project_pi,
    realize,
)

__version__ = "0.1.0"
