"""Strategic games seen from the space of interdependent preferences."""

__version__ = "0.1.0"

from .bargaining import (
    RhoEstimate,
    RhoMatrix,
    UndefinedPowerError,
    payoff_range,
    rho_integral,
    rho_local,
    rho_matrix,
    self_harm_scan,
)
from .com import (
    CoMMatrix,
    ZeroMassError,
    center_of_mass,
    gcom,
    gcom_from_coms,
    outcome_com,
    payoff_com,
    payoff_coms,
    strategy_com,
)
from .cooperative import CharacteristicFunction, coalition_game, core_check, reciprocity_check, shapley_value
from .games import (
    ContinuousGame,
    CournotGame,
    FiniteGame,
    GameError,
    VotingGame,
    cournot_profits,
    make_finite_game,
    subjective_game,
    voting_payoffs,
)
from .indices import IndexReport, indices
from .io import load_game, save_game
from .reproduce import reproduce_paper
from .solve import (
    NoEquilibriumError,
    best_response_dynamics,
    expected_payoff,
    expected_payoffs,
    mu,
    nash_support_enumeration,
    pure_nash,
)
from .space import (
    SampleSet,
    cardinal_points,
    coalition_position,
    extreme_point,
    from_angles,
    grid,
    monte_carlo,
    normalize_rows,
    permutation_point,
    replace_row,
    sample,
    to_angles,
)
from .voting import banzhaf_estimate, banzhaf_index, pivotality, shapley_shubik_estimate, shapley_shubik_index
