"""
Density Analysis Module.
Qualitative checks (density > 0, density < 1) on the SCC structure and
the exact asymptotic density of deterministic or unambiguous parity
automata, read as an absorbing Markov chain with uniform letter choice.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

import sympy

from alphabet import Lasso, lassos_of_length
from automaton import AutomatonMode, ParityAutomaton
from automaton_analysis import (
    Scc, count_accepting_runs, is_unambiguous, reachable_states, scc_decompose,
)
from errors import AmbiguityError, InconsistencyError, SingularSystemError, UnsupportedModeError
from lasso_lab import guard_enumeration, total_lassos

logger = logging.getLogger(__name__)

UNKNOWN_NONDETERMINISTIC = "unknown (nondeterministic)"


@dataclass(frozen=True)
class TerminalSccReach:
    """A reachable terminal SCC with the probability of being absorbed in it."""

    scc: Scc
    probability: Optional[Fraction]

    @property
    def role(self) -> str:
        return "accepting" if self.scc.is_accepting else "rejecting"


@dataclass(frozen=True)
class DensityReport:
    asymptotic_density: Optional[Fraction]      # None when not computable (nondeterministic)
    positive: bool
    below_one: Union[bool, str]
    terminal_sccs: tuple[TerminalSccReach, ...] = field(default_factory=tuple)

    @property
    def per_scc(self) -> dict[frozenset[int], Fraction]:
        """Reach probability of every terminal accepting SCC, keyed by its states."""
        return {
            entry.scc.states: entry.probability
            for entry in self.terminal_sccs
            if entry.scc.is_accepting and entry.probability is not None
        }


# ─── Qualitative Checks ──────────────────────────────────────────────────────

def _reachable_terminal_sccs(aut: ParityAutomaton) -> list[Scc]:
    reached = reachable_states(aut)
    return [scc for scc in scc_decompose(aut) if scc.is_terminal and scc.states <= reached]


def density_positive(aut: ParityAutomaton) -> bool:
    """True iff a terminal accepting SCC is reachable from an initial state."""
    return any(scc.is_accepting for scc in _reachable_terminal_sccs(aut))


def density_below_one(aut: ParityAutomaton) -> bool:
    """
    True iff a terminal non-accepting SCC is reachable (deterministic only).

    Raises:
        UnsupportedModeError: For unambiguous or nondeterministic automata.
    """
    aut.require_deterministic("density_below_one")
    return any(not scc.is_accepting for scc in _reachable_terminal_sccs(aut))


def qualitative_report(aut: ParityAutomaton) -> DensityReport:
    """Positivity for any mode; below-one only when the automaton is deterministic."""
    below_one = density_below_one(aut) if aut.is_deterministic else UNKNOWN_NONDETERMINISTIC
    terminal = tuple(TerminalSccReach(scc, None) for scc in _reachable_terminal_sccs(aut))
    return DensityReport(None, density_positive(aut), below_one, terminal)


# ─── Exact Asymptotic Density ────────────────────────────────────────────────

def asymptotic_density(aut: ParityAutomaton) -> DensityReport:
    """
    Solve (I − Q)·X = B exactly over the rationals, where Q holds the
    uniform transition weights among transient states and column k of B
    the one-step weight into the k-th reachable terminal SCC.

    Returns:
        DensityReport with the density, per-SCC reach probabilities and flags.

    Raises:
        UnsupportedModeError: For nondeterministic automata.
        AmbiguityError: If an automaton declared unambiguous is not.
        SingularSystemError: If the system has no unique solution.
        InconsistencyError: If a solved probability leaves [0, 1].
    """
    if aut.mode is AutomatonMode.NONDETERMINISTIC:
        raise UnsupportedModeError(
            "asymptotic_density requires a deterministic or unambiguous automaton."
        )
    if not aut.is_deterministic and not is_unambiguous(aut):
        raise AmbiguityError(
            "Automaton declared unambiguous shows ambiguity: some word has two accepting runs."
        )

    terminals = _reachable_terminal_sccs(aut)
    absorbed = {state: k for k, scc in enumerate(terminals) for state in scc.states}
    transient = sorted(reachable_states(aut) - absorbed.keys())
    row_of = {state: i for i, state in enumerate(transient)}
    weight = sympy.Rational(1, aut.alphabet.size)

    solved: dict[int, list[Fraction]] = {}
    if transient and terminals:
        matrix = sympy.eye(len(transient))
        rhs = sympy.zeros(len(transient), len(terminals))
        for state in transient:
            i = row_of[state]
            for letter in aut.alphabet.letters():
                for target in aut.successors(state, letter):
                    if target in row_of:
                        matrix[i, row_of[target]] -= weight
                    else:
                        rhs[i, absorbed[target]] += weight
        try:
            solution, params = matrix.gauss_jordan_solve(rhs)
        except ValueError as e:
            raise SingularSystemError(
                f"Absorption system has no solution: ambiguity or ill-conditioned "
                f"structure suspected ({e})."
            ) from e
        if params.shape[0]:
            raise SingularSystemError(
                "Absorption system is singular: ambiguity or ill-conditioned structure suspected."
            )
        for state in transient:
            i = row_of[state]
            solved[state] = [_to_fraction(solution[i, k]) for k in range(len(terminals))]

    def value(state: int, k: int) -> Fraction:
        if state in absorbed:
            return Fraction(int(absorbed[state] == k))
        return solved[state][k] if state in solved else Fraction(0)

    # Columns of rejecting SCCs count runs, not words, unless the automaton is deterministic.
    accepting = [k for k, scc in enumerate(terminals) if scc.is_accepting]
    checked = range(len(terminals)) if aut.is_deterministic else accepting
    for state, values in solved.items():
        shares = [values[k] for k in checked]
        if any(not 0 <= v <= 1 for v in shares) or sum(shares) > 1:
            raise InconsistencyError(
                f"Solved absorption probabilities of state {state} leave [0, 1]: "
                f"ambiguity suspected."
            )

    reach = [sum((value(q, k) for q in aut.initial_states), Fraction(0)) for k in range(len(terminals))]
    density = sum((reach[k] for k in accepting), Fraction(0))
    if not 0 <= density <= 1:
        raise InconsistencyError(f"Asymptotic density {density} is not a probability.")

    below_one = density_below_one(aut) if aut.is_deterministic else UNKNOWN_NONDETERMINISTIC
    report = DensityReport(
        asymptotic_density=density,
        positive=density_positive(aut),
        below_one=below_one,
        terminal_sccs=tuple(
            TerminalSccReach(scc, p if aut.is_deterministic or scc.is_accepting else None)
            for scc, p in zip(terminals, reach)
        ),
    )
    if report.positive != (density > 0):
        raise InconsistencyError(
            f"Positivity check disagrees with the solved density {density}."
        )
    logger.info(
        f"Solved absorption system over {len(transient)} transient states: "
        f"density {density} ({len(terminals)} terminal SCCs)."
    )
    return report


def _to_fraction(value: sympy.Expr) -> Fraction:
    rational = sympy.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


# ─── Unambiguity ─────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class UnambiguityCheck:
    ok: bool
    witness: Optional[Lasso] = None


def verify_unambiguity_at_scale(
    aut: ParityAutomaton,
    n_max: int,
    cap: Optional[int] = None,
) -> UnambiguityCheck:
    """
    Check that no lasso of length 1..n_max has two accepting runs.

    Raises:
        ResourceCapExceeded: If n_max·|Σ|^n_max exceeds the cap.
    """
    size = aut.alphabet.size
    guard_enumeration(total_lassos(size, n_max), cap)
    for n in range(1, n_max + 1):
        for lasso in lassos_of_length(size, n):
            if count_accepting_runs(aut, lasso, limit=2) > 1:
                logger.info(f"Ambiguity witness: {lasso.format(aut.alphabet)}")
                return UnambiguityCheck(False, lasso)
    return UnambiguityCheck(True)
