"""Exact stationary structure of the inhomogeneous multispecies t-PushTASEP.

Three independent routes to the stationary distribution of the ring dynamics
-- an exact linear-algebra oracle, a multiline-diagram enumeration, and a
seeded Monte Carlo simulator -- plus closed-form observables (densities and
currents) and the Hecke-operator machinery used to certify the polynomial
families involved.  Everything outside the simulator is exact rational or
symbolic arithmetic.
"""

__version__ = "0.1.0"

from .ratfunc import IntPoly, PoleError, RatFunc, Rational, t_analogue, t_factorial
from .xpoly import (
    InexactDivisionError,
    XPoly,
    elementary,
    elementary_eval,
    elementary_product,
    exact_divide,
    is_symmetric_in,
    schur_two_column,
    swap_variables,
)
from .chain import (
    Content,
    OrderMap,
    StateSpaceLimitError,
    StationaryVector,
    SystemParams,
    TransitionTable,
    bell_outcomes,
    enumerate_states,
    generator,
    project_config,
    stationary_oracle,
)
from .diagrams import (
    DiagramWeight,
    MultilineDiagram,
    asep_family,
    asep_polynomial_q1,
    diagram_weight,
    enumerate_diagrams,
    refine_content,
    sample_diagram,
    stationary_from_diagrams,
)
from .hecke import (
    KZReport,
    apply_T,
    apply_T_inverse,
    apply_omega_q1,
    shape_permute_q1,
    verify_kz_family,
)
from .observables import (
    CurrentSpec,
    current_oracle,
    current_single_species,
    density,
    elementary_identity_check,
    single_species_stationary,
    symmetry_check,
)
from .montecarlo import PRESET_SCENARIOS, SimReport, SimState, run, run_preset, step

__all__ = [name for name in dir() if not name.startswith("_")]
