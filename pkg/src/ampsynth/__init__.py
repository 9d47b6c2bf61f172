"""State-vector simulation of generalized amplitude amplification and
superposition synthesis from an arbitrary bounded amplitude table."""

__version__ = "0.1.0"

from .amplify import (
    AmplificationPlan,
    SourceSpec,
    SubspaceAnalysis,
    TargetSpec,
    apply_q,
    overlap_u,
    plan,
    run,
    subspace_analysis,
)
from .errors import (
    AdaptiveFailureError,
    AmpsynthError,
    ArgumentError,
    DegenerateOverlapError,
    EmptySampleError,
    ResourceError,
    SpecError,
)
from .gates import (
    WH,
    CondRot,
    M,
    PhaseFlip,
    Reflect,
    UnitaryProgram,
    apply_cond_rot,
    apply_m,
    apply_phase_flip,
    apply_program,
    apply_program_inverse,
    apply_reflection,
    apply_wh,
)
from .sampler import SampleReport, compare, condition_on_ancilla, measure_shots
from .statevec import (
    StateVector,
    basis_state,
    inner_product,
    probability_mass,
    split_ancilla,
)
from .synth import (
    AmplitudeSpec,
    RuntimeSchedule,
    SynthesisResult,
    adaptive_synthesize,
    build_program,
    indicator_spec,
    spec_from_probabilities,
    synthesize,
)
