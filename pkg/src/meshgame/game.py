"""The finite smoothing game.

Every element is a player whose strategies are the powers 0..k of the
regularizing transformation applied to its own vertices in isolation. A
strategy profile assigns one power per element; the realized geometry
averages, per vertex, the positions proposed by all elements containing it.
Each player's payoff is the quality of its own element in that realized
geometry, so payoffs couple only through shared vertices.

Solvers: exhaustive enumeration over the (k+1)^n profile grid, and a
deterministic round-robin best-response dynamic for meshes too large to
enumerate. Both report equilibria that satisfy :func:`verify_nash`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .mesh import Mesh, QUALITY_METRICS, _resolve_metric, as_coords3
from .transform import TransformParams, transform_element

#: A payoff gain must exceed this to count as a strictly improving deviation.
#: Keeps floating-point ties from producing spurious non-equilibria.
IMPROVEMENT_TOL = 1e-12

#: Refuse exhaustive enumeration beyond this many profiles by default.
DEFAULT_ENUMERATION_BUDGET = 10_000_000

_CHUNK = 16384

TIE_BREAK_POLICIES = ("lexicographic",)


class EnumerationBudgetError(RuntimeError):
    """Profile space too large to enumerate; use best_response_nash instead."""

    def __init__(self, total: int, budget: int):
        self.total = total
        self.budget = budget
        super().__init__(
            f"profile space holds {total} outcomes, over the enumeration budget "
            f"of {budget}; raise the budget or use best_response_nash"
        )


@dataclass(frozen=True)
class GameConfig:
    """Rules of one smoothing game.

    k: maximum transform power; strategies are {0, .., k} including the
        identity.
    transform: parameters of the regularizing transformation.
    metric: quality measure used as the payoff ('min_max_edge' or
        'mean_ratio').
    fix_boundary: boundary vertices keep their original positions.
    tie_break: ordering policy for reporting among equally good profiles.
    """

    k: int
    transform: TransformParams = field(default_factory=TransformParams)
    metric: str = "min_max_edge"
    fix_boundary: bool = False
    tie_break: str = "lexicographic"

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k}")
        _resolve_metric(self.metric)
        if self.tie_break not in TIE_BREAK_POLICIES:
            raise ValueError(
                f"unknown tie_break {self.tie_break!r} (known: {TIE_BREAK_POLICIES})"
            )


@dataclass(frozen=True)
class ProfileOutcome:
    """Realized geometry and payoffs of one strategy profile."""

    coords: np.ndarray
    utilities: np.ndarray
    mean_quality: float
    min_quality: float


@dataclass(frozen=True)
class Deviation:
    """A unilateral strategy change that strictly improves its player."""

    element: int
    power: int
    gain: float


@dataclass(frozen=True)
class VerifyResult:
    is_equilibrium: bool
    deviations: tuple[Deviation, ...]


@dataclass(frozen=True)
class NashResult:
    profile: tuple[int, ...]
    outcome: ProfileOutcome
    is_equilibrium: bool
    method: str
    iterations: int


def validate_profile(mesh: Mesh, profile: Sequence[int], k: int) -> np.ndarray:
    powers = np.asarray(profile, dtype=np.int64)
    if powers.shape != (mesh.n_elements,):
        raise ValueError(
            f"profile length {powers.shape} does not match element count {mesh.n_elements}"
        )
    if powers.min() < 0 or powers.max() > k:
        raise ValueError(f"profile powers must lie in 0..{k}, got {tuple(powers)}")
    return powers


class ProfileEvaluator:
    """Caches per-element transform proposals so profiles evaluate cheaply.

    The proposals T^j(e) depend only on the element and its power, never on
    the rest of the profile, so they are computed once up front. Evaluating a
    batch of profiles then reduces to gathering proposals and averaging per
    vertex, with identical arithmetic for single profiles and batches.
    """

    def __init__(self, mesh: Mesh, config: GameConfig, coords=None):
        base = mesh.coords if coords is None else as_coords3(coords)
        if base.shape != mesh.coords.shape:
            raise ValueError(
                f"coords shape {base.shape} does not match mesh {mesh.coords.shape}"
            )
        self.mesh = mesh
        self.config = config
        self.base = base
        self._kernel = QUALITY_METRICS[config.metric]

        n, k = mesh.n_elements, config.k
        proposals = np.empty((n, k + 1, 3, 3))
        for e in range(n):
            tri = base[mesh.elements[e]]
            proposals[e, 0] = tri
            for j in range(1, k + 1):
                tri = transform_element(tri, config.transform)
                proposals[e, j] = tri
        self.proposals = proposals

        movable = np.ones(mesh.n_vertices, dtype=bool)
        if config.fix_boundary:
            movable &= ~mesh.boundary
        self.movable = movable

        incidence = []
        for v in range(mesh.n_vertices):
            pairs = []
            for e in mesh.vertex_to_elements[v]:
                slot = int(np.nonzero(mesh.elements[e] == v)[0][0])
                pairs.append((e, slot))
            incidence.append(tuple(pairs))
        self.incidence = tuple(incidence)

    def positions(self, powers: np.ndarray) -> np.ndarray:
        """Vertex positions for a (P, n) batch of profiles, shape (P, V, 3).

        Each movable vertex is the arithmetic mean of the proposals from its
        incident elements, summed in element-index order. When all proposals
        coincide bitwise the shared value is taken verbatim, so identity
        profiles reproduce the input coordinates exactly.
        """
        P = powers.shape[0]
        out = np.empty((P, self.mesh.n_vertices, 3))
        for v in range(self.mesh.n_vertices):
            if not self.movable[v]:
                out[:, v] = self.base[v]
                continue
            pairs = self.incidence[v]
            e0, s0 = pairs[0]
            first = self.proposals[e0, powers[:, e0], s0]
            if len(pairs) == 1:
                out[:, v] = first
                continue
            acc = first.copy()
            all_equal = np.ones(P, dtype=bool)
            for e, s in pairs[1:]:
                prop = self.proposals[e, powers[:, e], s]
                acc += prop
                all_equal &= (prop == first).all(axis=1)
            acc /= len(pairs)
            acc[all_equal] = first[all_equal]
            out[:, v] = acc
        return out

    def utilities(self, powers: np.ndarray) -> np.ndarray:
        """Per-element payoffs for a (P, n) batch of profiles, shape (P, n)."""
        pos = self.positions(powers)
        return self._kernel(pos[:, self.mesh.elements])

    def outcome(self, profile: Sequence[int]) -> ProfileOutcome:
        powers = np.asarray(profile, dtype=np.int64)[None, :]
        coords = self.positions(powers)[0]
        utilities = self._kernel(coords[self.mesh.elements])
        return ProfileOutcome(
            coords=coords,
            utilities=utilities,
            mean_quality=float(utilities.mean()),
            min_quality=float(utilities.min()),
        )


def evaluate_profile(
    mesh: Mesh, profile: Sequence[int], config: GameConfig, coords=None
) -> ProfileOutcome:
    """Realize one strategy profile and score every element.

    Each element proposes the coordinates of its transform power applied in
    isolation; every vertex then moves to the arithmetic mean of the
    proposals from the elements containing it.
    """
    powers = validate_profile(mesh, profile, config.k)
    return ProfileEvaluator(mesh, config, coords).outcome(powers)


def verify_nash(
    mesh: Mesh, profile: Sequence[int], config: GameConfig, coords=None
) -> VerifyResult:
    """Check the equilibrium condition by trying every unilateral deviation.

    Returns all deviations whose payoff gain exceeds IMPROVEMENT_TOL, ordered
    by element index then power.
    """
    powers = validate_profile(mesh, profile, config.k)
    evaluator = ProfileEvaluator(mesh, config, coords)
    n, k = mesh.n_elements, config.k

    rows = [powers]
    pairs: list[tuple[int, int]] = []
    for i in range(n):
        for p in range(k + 1):
            if p == powers[i]:
                continue
            changed = powers.copy()
            changed[i] = p
            rows.append(changed)
            pairs.append((i, p))
    utilities = evaluator.utilities(np.stack(rows))
    base = utilities[0]
    deviations = []
    for (i, p), row in zip(pairs, utilities[1:]):
        gain = row[i] - base[i]
        if gain > IMPROVEMENT_TOL:
            deviations.append(Deviation(element=i, power=p, gain=float(gain)))
    return VerifyResult(is_equilibrium=not deviations, deviations=tuple(deviations))


def _check_budget(n: int, k: int, budget: int) -> int:
    total = (k + 1) ** n
    if total > budget:
        raise EnumerationBudgetError(total, budget)
    return total


def _profile_block(flat_indices: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    return np.stack(np.unravel_index(flat_indices, shape), axis=1)


def exhaustive_nash(
    mesh: Mesh,
    config: GameConfig,
    coords=None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> list[NashResult]:
    """All pure Nash equilibria, by full enumeration of the profile grid.

    Profiles are enumerated lexicographically and the returned equilibria
    keep that order, so the first entry is the tie-break representative.
    Returns an empty list when no pure equilibrium exists.
    """
    n, k = mesh.n_elements, config.k
    total = _check_budget(n, k, budget)
    evaluator = ProfileEvaluator(mesh, config, coords)
    shape = (k + 1,) * n

    utilities = np.empty((total, n))
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total))
        utilities[idx] = evaluator.utilities(_profile_block(idx, shape))

    # A profile is an equilibrium iff each player already sits within
    # IMPROVEMENT_TOL of the best payoff on its own deviation fiber. This is
    # verify_nash's condition applied to the whole grid at once.
    is_eq = np.ones(total, dtype=bool)
    for i in range(n):
        grid = utilities[:, i].reshape(shape)
        fiber_best = grid.max(axis=i, keepdims=True)
        is_eq &= np.ravel(grid >= fiber_best - IMPROVEMENT_TOL)

    results = []
    for flat in np.nonzero(is_eq)[0]:
        profile = tuple(int(x) for x in np.unravel_index(int(flat), shape))
        results.append(
            NashResult(
                profile=profile,
                outcome=evaluator.outcome(profile),
                is_equilibrium=True,
                method="exhaustive",
                iterations=total,
            )
        )
    return results


def best_profile(
    mesh: Mesh,
    config: GameConfig,
    coords=None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
) -> tuple[tuple[int, ...], ProfileOutcome]:
    """The profile maximizing mean element quality, by full enumeration.

    Ties break to the lexicographically smallest profile. This is the global
    optimization benchmark that equilibria are compared against; it need not
    be an equilibrium itself.
    """
    n, k = mesh.n_elements, config.k
    total = _check_budget(n, k, budget)
    evaluator = ProfileEvaluator(mesh, config, coords)
    shape = (k + 1,) * n

    best_flat = -1
    best_mean = -np.inf
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total))
        means = evaluator.utilities(_profile_block(idx, shape)).mean(axis=1)
        j = int(np.argmax(means))
        if means[j] > best_mean:
            best_mean = float(means[j])
            best_flat = int(idx[j])
    profile = tuple(int(x) for x in np.unravel_index(best_flat, shape))
    return profile, evaluator.outcome(profile)


def uniform_profile_outcome(mesh: Mesh, config: GameConfig, coords=None) -> ProfileOutcome:
    """Outcome of the all-k profile: every element transforms the same number
    of times, the conventional smoothing baseline."""
    profile = (config.k,) * mesh.n_elements
    return ProfileEvaluator(mesh, config, coords).outcome(profile)


def best_response_nash(
    mesh: Mesh,
    config: GameConfig,
    start: Sequence[int] | None = None,
    max_rounds: int = 100,
    coords=None,
) -> NashResult:
    """Round-robin best-response dynamics from a starting profile.

    Players move in element-index order; each switches to the smallest power
    within IMPROVEMENT_TOL of its best payoff given the others' current
    strategies. Stops after the first full round without a change (verified
    as an equilibrium) or after max_rounds, reported via is_equilibrium.
    """
    if max_rounds < 1:
        raise ValueError(f"max_rounds must be >= 1, got {max_rounds}")
    n, k = mesh.n_elements, config.k
    if start is None:
        powers = np.zeros(n, dtype=np.int64)
    else:
        powers = validate_profile(mesh, start, k).copy()
    evaluator = ProfileEvaluator(mesh, config, coords)

    rounds = 0
    converged = False
    for _ in range(max_rounds):
        rounds += 1
        changed = False
        for i in range(n):
            candidates = np.repeat(powers[None, :], k + 1, axis=0)
            candidates[:, i] = np.arange(k + 1)
            payoffs = evaluator.utilities(candidates)[:, i]
            best = int(np.nonzero(payoffs >= payoffs.max() - IMPROVEMENT_TOL)[0][0])
            if best != powers[i]:
                powers[i] = best
                changed = True
        if not changed:
            converged = True
            break

    profile = tuple(int(x) for x in powers)
    is_equilibrium = False
    if converged:
        is_equilibrium = verify_nash(mesh, profile, config, coords).is_equilibrium
    return NashResult(
        profile=profile,
        outcome=evaluator.outcome(profile),
        is_equilibrium=is_equilibrium,
        method="best_response",
        iterations=rounds,
    )
