"""Slow states driven by fast clock variables through interchange points.

The machine has N slow states, each carrying one periodic clock (a "fast"
variable) that advances one tick per time step regardless of anything else.
A special point on a pair of slow states (alpha, beta) names one phase value
on each of the two attached clocks; whenever both clocks sit at their named
values right after a tick, the two slow states are interchanged.  The slow
state therefore only ever hops between classical basis configurations, and
the full map on (slow state, all clock phases) is a bijection: the machine
is exactly reversible and has a finite recursion time.

A step is swap-after-tick: all phases advance first, then every special
point whose trigger matches the new phases fires.  The builder statically
rejects tables in which two firing points could touch the same slow state in
the same step, so the firing set is always a product of disjoint
transpositions.

Clock periods are meant to be large compared with the inverse couplings of
interest; that is a soft convention, so the builder only warns (never
errors) for periods below 10.
"""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import InitVar, dataclass
from typing import IO, NamedTuple

import numpy as np

from . import ontodyn

ENUMERATION_CAP = 10 ** 6


class ModelValidationError(ValueError):
    """The model description is malformed."""


class ConflictingSwapError(ModelValidationError):
    """Two swaps touching the same slow state can fire in the same step."""


class ConfigError(ValueError):
    """A classical configuration references unknown states or phases."""


class FastPeriodWarning(UserWarning):
    """A clock period is small enough that the fast/slow separation is dubious."""


@dataclass(frozen=True)
class SpecialPoint:
    """Interchange trigger for one pair of slow states.

    ``trigger[i]`` is the phase value on the clock attached to ``pair[i]``.
    Stored with ``pair`` sorted ascending (the trigger is permuted along), so
    equal points compare equal regardless of the order they were written in.
    """

    pair: tuple[int, int]
    trigger: tuple[int, int]

    def __post_init__(self):
        a, b = (int(self.pair[0]), int(self.pair[1]))
        p, q = (int(self.trigger[0]), int(self.trigger[1]))
        if a == b:
            raise ModelValidationError(f"special point pairs a state with itself: {a}")
        if a > b:
            a, b, p, q = b, a, q, p
        object.__setattr__(self, "pair", (a, b))
        object.__setattr__(self, "trigger", (p, q))


class ClassicalConfig(NamedTuple):
    """Ontic state of the whole machine at one instant."""

    slow: int
    phases: tuple[int, ...]


@dataclass(frozen=True)
class OntologicalModel:
    """N slow states, one clock per slow state, and a special-point table."""

    slow_count: int
    periods: tuple[int, ...]
    special_points: tuple[SpecialPoint, ...] = ()
    site_labels: tuple[str, ...] | None = None
    validate: InitVar[bool] = True

    def __post_init__(self, validate: bool):
        object.__setattr__(self, "periods", tuple(int(p) for p in self.periods))
        object.__setattr__(self, "special_points", tuple(self.special_points))
        if validate:
            _validate_model(self, warn_small_periods=True)

    @property
    def phase_space_size(self) -> int:
        out = 1
        for p in self.periods:
            out *= p
        return out

    @property
    def ontic_space_size(self) -> int:
        return self.slow_count * self.phase_space_size


def _validate_model(model: OntologicalModel, warn_small_periods: bool = False) -> None:
    n = model.slow_count
    if n < 1:
        raise ModelValidationError("slow_count must be >= 1")
    if len(model.periods) != n:
        raise ModelValidationError(
            f"need one clock period per slow state, got {len(model.periods)} for {n} states")
    if any(p < 1 for p in model.periods):
        raise ModelValidationError("clock periods must be positive")
    if model.site_labels is not None and len(model.site_labels) != n:
        raise ModelValidationError("site_labels length must equal slow_count")
    small = [p for p in model.periods if p < 10]
    if small and warn_small_periods:
        warnings.warn(
            f"clock periods {small} are below 10; the fast/slow separation is marginal",
            FastPeriodWarning, stacklevel=3)

    seen: set[tuple] = set()
    for sp in model.special_points:
        a, b = sp.pair
        if not (0 <= a < n and 0 <= b < n):
            raise ModelValidationError(f"special point references unknown slow state: {sp.pair}")
        if not (0 <= sp.trigger[0] < model.periods[a] and 0 <= sp.trigger[1] < model.periods[b]):
            raise ModelValidationError(
                f"trigger {sp.trigger} outside clock periods for pair {sp.pair}")
        key = (sp.pair, sp.trigger)
        if key in seen:
            raise ConflictingSwapError(f"duplicate special point {key}")
        seen.add(key)

    # Static conflict scan: two points sharing exactly one slow state fire in
    # the same step iff their trigger values on the shared clock coincide.
    # (Points on the same pair can never fire together; their triggers differ
    # on at least one shared clock.)
    points = model.special_points
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            shared = set(points[i].pair) & set(points[j].pair)
            if len(shared) != 1:
                continue
            s = shared.pop()
            vi = points[i].trigger[points[i].pair.index(s)]
            vj = points[j].trigger[points[j].pair.index(s)]
            if vi == vj:
                raise ConflictingSwapError(
                    f"points {points[i]} and {points[j]} can both fire on state {s} "
                    f"(shared clock value {vi})")


# ---------------------------------------------------------------------------
# flat indexing of the product space (slow-major, then clocks by id ascending)

def phase_strides(periods: tuple[int, ...]) -> np.ndarray:
    strides = np.ones(len(periods), dtype=np.int64)
    for i in range(len(periods) - 2, -1, -1):
        strides[i] = strides[i + 1] * periods[i + 1]
    return strides


def flat_config(model: OntologicalModel, slow: int, phases) -> int:
    """Mixed-radix flat index of (slow, phases); slow is the most significant digit."""
    strides = phase_strides(model.periods)
    return int(slow) * model.phase_space_size + int(np.dot(np.asarray(phases, np.int64), strides))


def unflatten_config(model: OntologicalModel, flat: int) -> ClassicalConfig:
    p = model.phase_space_size
    slow, rem = divmod(int(flat), p)
    phases = []
    for stride in phase_strides(model.periods):
        d, rem = divmod(rem, int(stride))
        phases.append(int(d))
    return ClassicalConfig(slow=slow, phases=tuple(phases))


def _all_phase_rows(model: OntologicalModel) -> np.ndarray:
    """(P, n_clocks) array of every phase combination, in flat-index order."""
    p = model.phase_space_size
    rows = np.empty((p, len(model.periods)), dtype=np.int64)
    rem = np.arange(p, dtype=np.int64)
    for i, stride in enumerate(phase_strides(model.periods)):
        rows[:, i], rem = np.divmod(rem, stride)
    return rows


# ---------------------------------------------------------------------------
# stepping

def _check_config(model: OntologicalModel, config: ClassicalConfig) -> None:
    if not 0 <= config.slow < model.slow_count:
        raise ConfigError(f"unknown slow state {config.slow}")
    if len(config.phases) != len(model.periods):
        raise ConfigError("wrong number of clock phases")
    for i, (phase, period) in enumerate(zip(config.phases, model.periods)):
        if not 0 <= phase < period:
            raise ConfigError(f"phase {phase} outside clock {i} period {period}")


def _advance_and_swap(model: OntologicalModel, slow: np.ndarray, phases: np.ndarray) -> None:
    """Vectorized step over a batch: tick every clock, then fire special points.

    ``slow`` is (S,), ``phases`` is (S, n_clocks); both are updated in place.
    Firing pairs are disjoint for a valid model, so the swaps are applied
    against the pre-swap occupancy; a double hit on one sample means the
    table is inconsistent and raises.
    """
    phases += 1
    np.remainder(phases, np.asarray(model.periods, dtype=np.int64), out=phases)
    if not model.special_points:
        return
    masks = []
    touched = np.zeros(slow.shape, dtype=np.int8)
    for sp in model.special_points:
        a, b = sp.pair
        fired = (phases[:, a] == sp.trigger[0]) & (phases[:, b] == sp.trigger[1])
        masks.append(fired)
        touched += (fired & ((slow == a) | (slow == b))).astype(np.int8)
    if touched.max() > 1:
        raise ConflictingSwapError("two interchanges touched the same slow state in one step")
    new_slow = slow.copy()
    for sp, fired in zip(model.special_points, masks):
        a, b = sp.pair
        new_slow[fired & (slow == a)] = b
        new_slow[fired & (slow == b)] = a
    slow[:] = new_slow


def step(model: OntologicalModel, config: ClassicalConfig) -> ClassicalConfig:
    """One time step: advance all phases by +1, then apply any firing swap."""
    _check_config(model, config)
    slow = np.array([config.slow], dtype=np.int64)
    phases = np.array([config.phases], dtype=np.int64)
    _advance_and_swap(model, slow, phases)
    return ClassicalConfig(slow=int(slow[0]), phases=tuple(int(v) for v in phases[0]))


def step_tables(model: OntologicalModel) -> tuple[np.ndarray, np.ndarray]:
    """The full step map in tabulated form.

    Returns ``(rotated_flat, slow_image)`` where ``rotated_flat[p]`` is the
    phase flat index after the tick and ``slow_image[p, s]`` the slow state an
    occupant of ``s`` ends in when the ticked phases have flat index built
    from combination ``p``.  Flat image of config (s, p) is
    ``slow_image[p, s] * P + rotated_flat[p]``.
    """
    if model.ontic_space_size > ENUMERATION_CAP:
        raise ontodyn.SizeCapError(
            f"ontic space {model.ontic_space_size} exceeds enumeration cap {ENUMERATION_CAP}")
    _validate_model(model)
    p_total = model.phase_space_size
    rows = _all_phase_rows(model)
    rotated = (rows + 1) % np.asarray(model.periods, dtype=np.int64)
    rotated_flat = rotated @ phase_strides(model.periods)

    n = model.slow_count
    slow_image = np.tile(np.arange(n, dtype=np.int64), (p_total, 1))
    touched = np.zeros((p_total, n), dtype=np.int8)
    for sp in model.special_points:
        a, b = sp.pair
        fired = (rotated[:, a] == sp.trigger[0]) & (rotated[:, b] == sp.trigger[1])
        touched[fired, a] += 1
        touched[fired, b] += 1
        slow_image[fired, a] = b
        slow_image[fired, b] = a
    if touched.max(initial=0) > 1:
        raise ConflictingSwapError("special-point table fires two swaps on one slow state")
    return rotated_flat, slow_image


def step_map(model: OntologicalModel) -> ontodyn.PermutationLaw:
    """The step as a permutation of the flat ontic space."""
    rotated_flat, slow_image = step_tables(model)
    image = slow_image.T * model.phase_space_size + rotated_flat[None, :]
    return ontodyn.PermutationLaw(image.reshape(-1))


def check_bijectivity(model: OntologicalModel) -> ontodyn.CycleDecomposition:
    """Enumerate the step map and decompose it, proving reversibility.

    Raises if the table is inconsistent or the enumerated map fails to be a
    bijection.
    """
    return ontodyn.decompose(step_map(model))


# ---------------------------------------------------------------------------
# ensembles

def phase_rng(seed: int) -> np.random.Generator:
    """Counter-based generator (Philox) so runs are reproducible across platforms."""
    return np.random.Generator(np.random.Philox(seed))


def random_phases(model: OntologicalModel, count: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform independent phases, one 64-bit draw per clock reduced mod its period."""
    draws = rng.integers(0, 2 ** 64, size=(count, len(model.periods)), dtype=np.uint64)
    return (draws % np.asarray(model.periods, dtype=np.uint64)).astype(np.int64)


def run_ensemble(model: OntologicalModel, initial_slow: int, horizon: int,
                 sample_count: int, seed: int) -> np.ndarray:
    """Slow-state occupation frequencies of a random-phase ensemble.

    Each sample starts in ``initial_slow`` with uniform random clock phases
    and evolves classically.  Returns an array of shape (horizon+1, N); row t
    is the empirical distribution over slow states after t steps.  Identical
    seeds give bit-identical tables.  Samples are independent, so a
    partitioned run may derive per-worker Philox streams from
    (seed, worker index) and must then reproduce the serial result for a
    fixed partition policy.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be >= 1")
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    if not 0 <= initial_slow < model.slow_count:
        raise ConfigError(f"unknown slow state {initial_slow}")
    rng = phase_rng(seed)
    phases = random_phases(model, sample_count, rng)
    slow = np.full(sample_count, initial_slow, dtype=np.int64)
    freq = np.empty((horizon + 1, model.slow_count))
    freq[0] = np.bincount(slow, minlength=model.slow_count) / sample_count
    for t in range(1, horizon + 1):
        _advance_and_swap(model, slow, phases)
        freq[t] = np.bincount(slow, minlength=model.slow_count) / sample_count
    return freq


@dataclass(frozen=True, eq=False)
class ExactOccupation:
    """Occupation counts over all initial phase combinations.

    ``counts[t, s] / total`` is the exact fraction of initial phase
    assignments that occupy slow state s after t steps; counts are integers,
    so the fractions are exact rationals with common denominator ``total``.
    """

    counts: np.ndarray
    total: int

    @property
    def fractions(self) -> np.ndarray:
        return self.counts / self.total


def enumerate_exact(model: OntologicalModel, initial_slow: int, horizon: int) -> ExactOccupation:
    """Brute-force oracle for :func:`run_ensemble`: iterate every initial phase."""
    if model.phase_space_size > ENUMERATION_CAP:
        raise ontodyn.SizeCapError(
            f"phase space {model.phase_space_size} exceeds enumeration cap {ENUMERATION_CAP}")
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    if not 0 <= initial_slow < model.slow_count:
        raise ConfigError(f"unknown slow state {initial_slow}")
    phases = _all_phase_rows(model)
    total = phases.shape[0]
    slow = np.full(total, initial_slow, dtype=np.int64)
    counts = np.zeros((horizon + 1, model.slow_count), dtype=np.int64)
    counts[0] = np.bincount(slow, minlength=model.slow_count)
    for t in range(1, horizon + 1):
        _advance_and_swap(model, slow, phases)
        counts[t] = np.bincount(slow, minlength=model.slow_count)
    return ExactOccupation(counts=counts, total=total)


# ---------------------------------------------------------------------------
# serialization

def model_from_json(text: str) -> OntologicalModel:
    """Parse ``{"slow_count": N, "periods": [...], "special_points": [...]}``."""
    doc = json.loads(text)
    try:
        n = int(doc["slow_count"])
        periods = tuple(int(p) for p in doc["periods"])
        raw_points = doc.get("special_points", [])
        points = tuple(
            SpecialPoint(pair=tuple(entry["pair"]), trigger=tuple(entry["trigger"]))
            for entry in raw_points)
        labels = doc.get("site_labels")
    except (KeyError, TypeError) as exc:
        raise ValueError(f"model document missing field: {exc}") from exc
    return OntologicalModel(
        slow_count=n, periods=periods, special_points=points,
        site_labels=tuple(labels) if labels is not None else None)


def load_model(path) -> OntologicalModel:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_json(fh.read())


def model_to_json(model: OntologicalModel) -> str:
    doc = {
        "slow_count": model.slow_count,
        "periods": list(model.periods),
        "special_points": [
            {"pair": list(sp.pair), "trigger": list(sp.trigger)}
            for sp in model.special_points],
    }
    if model.site_labels is not None:
        doc["site_labels"] = list(model.site_labels)
    return json.dumps(doc, indent=2)


def write_ensemble_csv(frequencies: np.ndarray, stream: IO[str]) -> None:
    """Rows ``t, state_0_freq, ..., state_{N-1}_freq``."""
    writer = csv.writer(stream)
    n = frequencies.shape[1]
    writer.writerow(["t"] + [f"state_{s}_freq" for s in range(n)])
    for t, row in enumerate(frequencies):
        writer.writerow([t] + [repr(float(v)) for v in row])
