"""Desk-scale laboratory for Stein's divisor functions on (C*)^2 and the
extra-zero criterion: certified evaluation, monodromy, Chern pairings,
exact factor-of-automorphy calculus, lattice form pairings and entire-curve
intersection counts.
"""

__version__ = "0.1.0"

from .branchlog import (  # noqa: E402
    BranchedPoint,
    LoopPath,
    WindingResult,
    continue_branch,
    principal_branch,
    winding_number,
)
from .steinfn import (  # noqa: E402
    EvalResult,
    ShiftParam,
    TruncationBudget,
    eval_fminus,
    eval_fplus,
    eval_fplus_shift,
    sheet_point,
    zero_count_annulus,
)
from .monodromy import (  # noqa: E402
    FunctionHandle,
    PairingResult,
    TorusCycle,
    chern_pairing,
    fminus,
    fplus,
    fplus_shift,
    torus_intersection_count,
    w_loop_factor,
    z_loop_factor,
)
from .bundlecalc import (  # noqa: E402
    DivisorSpec,
    ExponentMatrix,
    SupportCycleDecl,
    Verdict,
    restrict_and_decide,
    sum_spec,
    symbolic_pairing,
)
from .latticeforms import (  # noqa: E402
    GaussianLatticeVector,
    HermitianFormSpec,
    SublatticeDecl,
    cycle_survives,
    pair_form,
    takayama_verdict,
)
from .curvelab import (  # noqa: E402
    CountResult,
    LaurentPoly,
    compose_curve,
    count_intersections,
    nondegenerate,
    phi_injectivity,
)
