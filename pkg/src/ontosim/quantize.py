"""Hilbert-space representation of a slow/fast machine.

The product basis is |slow> (x) |phase_0> (x) ... (x) |phase_{n-1}>, flattened
slow-major (see :func:`ontosim.fastslow.flat_config`).  On it live:

* the free clock Hamiltonian, a sum of one Hermitian circulant per clock whose
  eigenvalues are ``2*pi*n_i/T_i``, so the total free spectrum is the direct
  sum ``2*pi*sum_i n_i/T_i`` with one zero level per slow state;
* the interchange Hamiltonian, one term ``(pi/2) * sigma_y`` on the slow pair
  of each special point, tensored with projectors onto the trigger phases.
  The pi/2 weight makes one step of its evolution an exact classical swap
  (up to an immaterial sign), so the whole one-step evolution operator is a
  signed permutation: basis states never superpose.

Projecting the interchange Hamiltonian onto the clocks' uniform ground states
leaves an N x N slow-space matrix whose pair (alpha, beta) element has
magnitude ``(pi/2) * N_s / (N_alpha * N_beta)``, an exact rational multiple
of pi/2 tracked here in integer arithmetic alongside the float projection.
:func:`compile_target` inverts this: given a target matrix of such couplings
it picks clock periods and special-point placements by best rational
approximation.
"""

from __future__ import annotations

import csv
import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import IO, Mapping

import numpy as np
import scipy.sparse as sparse

from . import fastslow, ontodyn
from .ontodyn import SizeCapError

FULL_HAMILTONIAN_CAP = 2 ** 14
INTERCHANGE_CAP = 2 ** 22
INTERCHANGE_WEIGHT = math.pi / 2

PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])


class NonHermitianError(ValueError):
    """Evolution was requested under a non-Hermitian matrix."""


class NotRepresentableError(ValueError):
    """Target matrix is outside the class reachable by sigma_y interchanges."""


class UnreachableToleranceError(ValueError):
    """No special-point table within the period cap meets the tolerance."""


class ProjectionMismatchError(RuntimeError):
    """Float ground projection disagrees with the exact rational table."""


# ---------------------------------------------------------------------------
# indexing

@dataclass(frozen=True)
class HilbertIndex:
    """Position of a product basis state, both structured and flattened."""

    slow: int
    phases: tuple[int, ...]
    flat: int


def hilbert_index(model: fastslow.OntologicalModel, slow: int, phases) -> HilbertIndex:
    phases = tuple(int(v) for v in phases)
    return HilbertIndex(slow=slow, phases=phases,
                        flat=fastslow.flat_config(model, slow, phases))


def hilbert_index_from_flat(model: fastslow.OntologicalModel, flat: int) -> HilbertIndex:
    cfg = fastslow.unflatten_config(model, flat)
    return HilbertIndex(slow=cfg.slow, phases=cfg.phases, flat=int(flat))


def _matching_phase_flats(model: fastslow.OntologicalModel, fixed: Mapping[int, int]) -> np.ndarray:
    """Flat phase indices of every combination matching the fixed clock values."""
    strides = fastslow.phase_strides(model.periods)
    flats = np.array([sum(int(fixed[i]) * int(strides[i]) for i in fixed)], dtype=np.int64)
    for i, period in enumerate(model.periods):
        if i in fixed:
            continue
        flats = (flats[:, None] + np.arange(period, dtype=np.int64) * strides[i]).reshape(-1)
    return flats


# ---------------------------------------------------------------------------
# Hamiltonians

@dataclass(frozen=True)
class InterchangeTerm:
    pair: tuple[int, int]
    trigger: tuple[int, int]
    weight: float


@dataclass(frozen=True, eq=False)
class InterchangeHamiltonian:
    """Sparse interchange Hamiltonian plus one record per special point."""

    matrix: sparse.csr_matrix
    terms: tuple[InterchangeTerm, ...]


def clock_hamiltonian(period: int) -> np.ndarray:
    """Dense Hermitian generator of a single clock; exp(-1j*H) is its tick."""
    spec = ontodyn.cycle_spectrum(period)
    v = spec.eigenvectors
    h = (v * spec.energies) @ v.conj().T
    return (h + h.conj().T) / 2


def build_interchange(model: fastslow.OntologicalModel) -> InterchangeHamiltonian:
    """Interchange Hamiltonian on the full product space.

    Element convention: for a pair (alpha, beta) with alpha < beta the block
    is (pi/2) * sigma_y in the ordered basis (alpha, beta), i.e. the
    (alpha, beta) entry is -1j*pi/2 on every phase combination matching the
    trigger.
    """
    dim = model.ontic_space_size
    if dim > INTERCHANGE_CAP:
        raise SizeCapError(f"ontic space {dim} exceeds interchange cap {INTERCHANGE_CAP}")
    p_total = model.phase_space_size
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    vals: list[np.ndarray] = []
    for point in model.special_points:
        a, b = point.pair
        flats = _matching_phase_flats(model, {a: point.trigger[0], b: point.trigger[1]})
        rows.extend([a * p_total + flats, b * p_total + flats])
        cols.extend([b * p_total + flats, a * p_total + flats])
        vals.extend([
            np.full(flats.size, -1j * INTERCHANGE_WEIGHT),
            np.full(flats.size, 1j * INTERCHANGE_WEIGHT),
        ])
    if rows:
        matrix = sparse.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(dim, dim))
    else:
        matrix = sparse.csr_matrix((dim, dim), dtype=complex)
    terms = tuple(
        InterchangeTerm(pair=pt.pair, trigger=pt.trigger, weight=INTERCHANGE_WEIGHT)
        for pt in model.special_points)
    return InterchangeHamiltonian(matrix=matrix, terms=terms)


def build_full_hamiltonian(model: fastslow.OntologicalModel):
    """(free clock Hamiltonian, interchange Hamiltonian) on the product space."""
    dim = model.ontic_space_size
    if dim > FULL_HAMILTONIAN_CAP:
        raise SizeCapError(f"ontic space {dim} exceeds dense cap {FULL_HAMILTONIAN_CAP}")
    h_fast = sparse.csr_matrix((dim, dim), dtype=complex)
    for i in range(len(model.periods)):
        term = sparse.identity(model.slow_count, format="csr", dtype=complex)
        for j, period in enumerate(model.periods):
            factor = (sparse.csr_matrix(clock_hamiltonian(period)) if j == i
                      else sparse.identity(period, format="csr", dtype=complex))
            term = sparse.kron(term, factor, format="csr")
        h_fast = h_fast + term
    return h_fast, build_interchange(model)


def free_energy_levels(model: fastslow.OntologicalModel) -> np.ndarray:
    """All eigenvalues 2*pi*sum_i n_i/T_i of the free Hamiltonian, sorted.

    Computed from the direct-sum formula, with the slow-state multiplicity
    included; no matrix is built.
    """
    levels = np.zeros(1)
    for period in model.periods:
        levels = (levels[:, None] + 2.0 * np.pi * np.arange(period) / period).reshape(-1)
    return np.sort(np.tile(levels, model.slow_count))


def classical_interchange_check() -> np.ndarray:
    """exp(-(pi/2)*1j*sigma_y) by actual matrix exponential.

    Must come out as [[0, -1], [1, 0]]: a pure interchange with a sign, no
    superposition generated.
    """
    return evolution_operator(INTERCHANGE_WEIGHT * PAULI_Y, 1.0)


def evolution_operator(hamiltonian: np.ndarray, t: float) -> np.ndarray:
    """exp(-1j*H*t) through the Hermitian eigendecomposition."""
    h = _require_hermitian(hamiltonian)
    evals, evecs = np.linalg.eigh(h)
    return (evecs * np.exp(-1j * evals * t)) @ evecs.conj().T


def schrodinger_evolve(hamiltonian: np.ndarray, state: np.ndarray, t: float) -> np.ndarray:
    """Evolve a state vector for time t under a Hermitian matrix.

    Spectral decomposition keeps the norm exact up to rounding and is linear
    in the state by construction.
    """
    h = _require_hermitian(hamiltonian)
    psi = np.asarray(state, dtype=complex)
    evals, evecs = np.linalg.eigh(h)
    return evecs @ (np.exp(-1j * evals * t) * (evecs.conj().T @ psi))


def _require_hermitian(hamiltonian) -> np.ndarray:
    h = np.asarray(
        hamiltonian.toarray() if sparse.issparse(hamiltonian) else hamiltonian,
        dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("Hamiltonian must be a square matrix")
    scale = max(1.0, float(np.abs(h).max(initial=0.0)))
    if float(np.abs(h - h.conj().T).max(initial=0.0)) > 1e-12 * scale:
        raise NonHermitianError("matrix is not Hermitian")
    return h


# ---------------------------------------------------------------------------
# ground projection

@dataclass(frozen=True)
class PairCoupling:
    """Exact coupling bookkeeping for one slow pair: N_s points over N_a*N_b cells."""

    pair: tuple[int, int]
    points: int
    denominator: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.points, self.denominator)


@dataclass(frozen=True, eq=False)
class EffectiveHamiltonian:
    """Slow-space Hamiltonian left after the clocks are frozen in their ground states.

    ``matrix[a, b] = -1j * (pi/2) * points/denominator`` for each coupled pair
    a < b (sigma_y structure: zero diagonal, purely imaginary, antisymmetric).
    ``couplings`` carries the same content in exact integer form.
    """

    matrix: np.ndarray
    couplings: tuple[PairCoupling, ...]

    def coupling(self, pair: tuple[int, int]) -> Fraction:
        key = tuple(sorted(pair))
        for pc in self.couplings:
            if pc.pair == key:
                return pc.fraction
        return Fraction(0, 1)


def ground_state_vector(model: fastslow.OntologicalModel, slow: int) -> np.ndarray:
    """|slow> tensored with every clock in its uniform ground state."""
    if not 0 <= slow < model.slow_count:
        raise fastslow.ConfigError(f"unknown slow state {slow}")
    p_total = model.phase_space_size
    psi = np.zeros(model.ontic_space_size, dtype=complex)
    psi[slow * p_total:(slow + 1) * p_total] = 1.0 / math.sqrt(p_total)
    return psi


def ground_delta_expectation(period: int, trigger: int = 0) -> Fraction:
    """Expectation of the phase projector delta_{phi, trigger} in the uniform
    ground state of one clock, summed in exact rational arithmetic."""
    if not 0 <= trigger < period:
        raise ValueError("trigger outside the clock period")
    total = Fraction(0)
    weight = Fraction(1, period)  # |amplitude|^2 of each of the period points
    for phase in range(period):
        if phase == trigger:
            total += weight
    return total


def _pair_counts(model: fastslow.OntologicalModel) -> tuple[PairCoupling, ...]:
    counts = Counter(pt.pair for pt in model.special_points)
    return tuple(
        PairCoupling(pair=pair, points=counts[pair],
                     denominator=model.periods[pair[0]] * model.periods[pair[1]])
        for pair in sorted(counts))


def ground_project(model: fastslow.OntologicalModel,
                   interchange: InterchangeHamiltonian | None = None) -> EffectiveHamiltonian:
    """Project the interchange Hamiltonian onto the clocks' ground subspace.

    Within :data:`INTERCHANGE_CAP` the projection is carried out explicitly
    (uniform ground bra/ket applied to the assembled sparse matrix) and
    cross-checked against the exact rational table at 1e-12.  Above the cap
    only the special-point clocks act nontrivially per term, every other
    clock contributes an exact factor 1, so the matrix is evaluated from the
    rational table directly.
    """
    n = model.slow_count
    couplings = _pair_counts(model)
    expected = np.zeros((n, n), dtype=complex)
    for pc in couplings:
        a, b = pc.pair
        expected[a, b] = -1j * INTERCHANGE_WEIGHT * pc.points / pc.denominator
        expected[b, a] = expected[a, b].conjugate()

    if interchange is None and model.ontic_space_size <= INTERCHANGE_CAP:
        interchange = build_interchange(model)
    if interchange is not None:
        p_total = model.phase_space_size
        coo = interchange.matrix.tocoo()
        projected = np.zeros((n, n), dtype=complex)
        np.add.at(projected, (coo.row // p_total, coo.col // p_total), coo.data)
        projected /= p_total
        if float(np.abs(projected - expected).max(initial=0.0)) > 1e-12:
            raise ProjectionMismatchError(
                "explicit ground projection disagrees with the rational table")
        return EffectiveHamiltonian(matrix=projected, couplings=couplings)
    return EffectiveHamiltonian(matrix=expected, couplings=couplings)


def effective_to_json(eff: EffectiveHamiltonian) -> str:
    doc = {
        "couplings": [
            {"pair": list(pc.pair), "num": pc.points, "den": pc.denominator}
            for pc in eff.couplings],
        "matrix": {
            "real": eff.matrix.real.tolist(),
            "imag": eff.matrix.imag.tolist(),
        },
    }
    return json.dumps(doc, indent=2)


# ---------------------------------------------------------------------------
# one-step evolution as a signed permutation

def koopman_step_operator(model: fastslow.OntologicalModel) -> tuple[np.ndarray, np.ndarray]:
    """The one-step unitary exp(-1j*H_int) exp(-1j*H_fast) in exact form.

    Both factors map basis states to single basis states (the tick is a plain
    permutation; a firing interchange is (pi/2)-rotation by sigma_y, a swap
    where the amplitude moving to the smaller slow index picks up -1).
    Returns ``(perm, sign)``: basis state f maps to sign[f] * |perm[f]>.
    """
    rotated_flat, slow_image = fastslow.step_tables(model)
    p_total = model.phase_space_size
    occupant = np.arange(model.slow_count, dtype=np.int64)[:, None]
    new_slow = slow_image.T
    perm = (new_slow * p_total + rotated_flat[None, :]).reshape(-1)
    sign = np.where(new_slow < occupant, -1, 1).astype(np.int8).reshape(-1)
    return perm, sign


def apply_koopman_step(perm: np.ndarray, sign: np.ndarray, psi: np.ndarray) -> np.ndarray:
    out = np.empty_like(psi)
    out[perm] = sign * psi
    return out


# ---------------------------------------------------------------------------
# classical / full-quantum / effective comparison

@dataclass(frozen=True, eq=False)
class DynamicsComparison:
    """Slow-state occupation curves from three descriptions of one machine.

    ``classical`` is the exhaustive classical ensemble, ``quantum`` the full
    unitary evolution of the uniform-clock product state read diagonally in
    the ontic basis, ``effective`` the prediction of the projected slow-space
    Hamiltonian.  ``classical`` and ``quantum`` agree to rounding (the step
    operator is a signed permutation); ``effective`` is an approximation
    whose error is reported, not asserted.
    """

    initial_slow: int
    times: np.ndarray
    classical: np.ndarray
    quantum: np.ndarray
    effective: np.ndarray
    ensemble: np.ndarray | None
    max_classical_quantum: float
    max_classical_effective: float

    def transition(self, curve: np.ndarray) -> np.ndarray:
        """Probability of having left the initial slow state, per time step."""
        return 1.0 - curve[:, self.initial_slow]


def compare_dynamics(model: fastslow.OntologicalModel, initial_slow: int, horizon: int,
                     sample_count: int = 0, seed: int = 0) -> DynamicsComparison:
    n = model.slow_count
    p_total = model.phase_space_size
    classical = fastslow.enumerate_exact(model, initial_slow, horizon).fractions

    perm, sign = koopman_step_operator(model)
    psi = ground_state_vector(model, initial_slow)
    quantum = np.empty((horizon + 1, n))
    quantum[0] = (np.abs(psi) ** 2).reshape(n, p_total).sum(axis=1)
    for t in range(1, horizon + 1):
        psi = apply_koopman_step(perm, sign, psi)
        quantum[t] = (np.abs(psi) ** 2).reshape(n, p_total).sum(axis=1)

    eff = ground_project(model)
    evals, evecs = np.linalg.eigh(eff.matrix)
    amp0 = evecs.conj().T[:, initial_slow]
    effective = np.empty((horizon + 1, n))
    for t in range(horizon + 1):
        effective[t] = np.abs(evecs @ (np.exp(-1j * evals * t) * amp0)) ** 2

    ensemble = (fastslow.run_ensemble(model, initial_slow, horizon, sample_count, seed)
                if sample_count > 0 else None)
    return DynamicsComparison(
        initial_slow=initial_slow,
        times=np.arange(horizon + 1),
        classical=classical,
        quantum=quantum,
        effective=effective,
        ensemble=ensemble,
        max_classical_quantum=float(np.abs(classical - quantum).max()),
        max_classical_effective=float(np.abs(classical - effective).max()),
    )


def write_comparison_csv(comparison: DynamicsComparison, stream: IO[str]) -> None:
    """Rows ``t, classical, full_quantum, effective`` (probability of having
    left the initial slow state)."""
    writer = csv.writer(stream)
    writer.writerow(["t", "classical", "full_quantum", "effective"])
    curves = [comparison.transition(c) for c in
              (comparison.classical, comparison.quantum, comparison.effective)]
    for t in comparison.times:
        writer.writerow([int(t)] + [repr(float(c[t])) for c in curves])


# ---------------------------------------------------------------------------
# target Hamiltonians and the compiler

def validate_target(target) -> np.ndarray:
    """Check membership in the representable class: zero diagonal, purely
    imaginary antisymmetric off-diagonal (i.e. real multiples of sigma_y)."""
    t = np.asarray(target, dtype=complex)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] < 1:
        raise NotRepresentableError("target must be a square matrix")
    if np.any(t.diagonal() != 0):
        raise NotRepresentableError("target has nonzero diagonal elements")
    if np.any(t.real != 0):
        raise NotRepresentableError("target has nonzero real parts")
    if not np.array_equal(t, t.conj().T):
        raise NotRepresentableError("target is not Hermitian")
    return t


def target_from_json(text: str) -> np.ndarray:
    """Parse ``{"size": N, "couplings": [{"pair": [a, b], "imag": v}, ...]}``."""
    doc = json.loads(text)
    try:
        n = int(doc["size"])
        entries = list(doc.get("couplings", []))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"target document missing field: {exc}") from exc
    t = np.zeros((n, n), dtype=complex)
    for entry in entries:
        a, b = (int(entry["pair"][0]), int(entry["pair"][1]))
        v = float(entry["imag"])
        if not (0 <= a < n and 0 <= b < n):
            raise ValueError(f"coupling references unknown state: {entry}")
        if a == b:
            t[a, a] += 1j * v
        else:
            t[a, b] += 1j * v
            t[b, a] += -1j * v
    return t


def load_target(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return target_from_json(fh.read())


def target_to_json(target: np.ndarray) -> str:
    t = np.asarray(target, dtype=complex)
    entries = [
        {"pair": [a, b], "imag": float(t[a, b].imag)}
        for a in range(t.shape[0]) for b in range(a + 1, t.shape[0])
        if t[a, b] != 0]
    return json.dumps({"size": t.shape[0], "couplings": entries}, indent=2)


def _rational_candidates(x: float, max_den: int) -> set[tuple[int, int]]:
    """Convergents and intermediate fractions of x with denominator <= max_den."""
    out: set[tuple[int, int]] = {(0, 1)}
    h2, k2 = 0, 1
    h1, k1 = 1, 0
    y = x
    for _ in range(64):
        a = math.floor(y)
        for m in range(1, a + 1):
            km = m * k1 + k2
            if km > max_den:
                break
            out.add((m * h1 + h2, km))
        h, k = a * h1 + h2, a * k1 + k2
        if k > max_den:
            break
        out.add((h, k))
        h2, k2, h1, k1 = h1, k1, h, k
        frac = y - a
        if frac < 1e-12:
            break
        y = 1.0 / frac
    return out


def _factor_pair(q: int, cap: int) -> tuple[int, int] | None:
    """Split q = d*e with both factors <= cap; prefer coprime, then balanced."""
    best = None
    for d in range(1, math.isqrt(q) + 1):
        if q % d:
            continue
        e = q // d
        if e > cap:
            continue
        key = (math.gcd(d, e) != 1, e)
        if best is None or key < best[0]:
            best = (key, (d, e))
    return best[1] if best else None


def _approximate_coupling(x: float, tol_x: float, max_period: int):
    """Best (points, (period_a, period_b)) with |points/(Pa*Pb) - x| <= tol_x."""
    max_den = max_period * max_period
    candidates = _rational_candidates(x, max_den)
    fallback = round(x * max_den)
    if 0 <= fallback <= max_den:
        g = math.gcd(fallback, max_den) or 1
        candidates.add((fallback // g, max_den // g))
    ordered = sorted(candidates, key=lambda pq: (abs(x - pq[0] / pq[1]), pq[1], pq[0]))
    for p, q in ordered:
        if abs(x - p / q) > tol_x:
            break
        if p == 0:
            return 0, (1, 1)
        if p > q:
            continue
        factors = _factor_pair(q, max_period)
        if factors is not None:
            return p, factors
    raise UnreachableToleranceError(
        f"no rational coupling within {tol_x} of {x} with periods <= {max_period}")


def _spread_points(period_a: int, period_b: int, count: int) -> list[tuple[int, int]]:
    """count distinct trigger cells, evenly spaced along the joint cycle when
    possible, otherwise evenly over the full torus grid."""
    joint = math.lcm(period_a, period_b)
    if count <= joint:
        ts = [(j * joint) // count for j in range(count)]
        return [(t % period_a, t % period_b) for t in ts]
    cells = period_a * period_b
    idx = [(j * cells) // count for j in range(count)]
    return [(i // period_b, i % period_b) for i in idx]


def compile_target(target, tolerance: float, max_period: int) -> fastslow.OntologicalModel:
    """Build a machine whose effective Hamiltonian approximates the target.

    Per-pair magnitudes |H_ab| are matched by (pi/2) * points/(Pa*Pb) using
    continued-fraction approximants of 2|H_ab|/pi subject to the period cap.
    When slow states are shared between coupled pairs the clock periods are
    tied together, so every coupled state gets the cap period and the point
    counts are rounded against that common denominator.  Trigger cells are
    spread evenly and never collide on a shared clock, so the result always
    passes the builder's conflict scan.
    """
    t = validate_target(target)
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    if max_period < 1:
        raise ValueError("max_period must be >= 1")
    n = t.shape[0]
    tol_x = tolerance / INTERCHANGE_WEIGHT
    magnitudes = {
        (a, b): abs(float(t[a, b].imag))
        for a in range(n) for b in range(a + 1, n) if t[a, b] != 0}

    periods = [1] * n
    points: list[fastslow.SpecialPoint] = []
    degree = Counter(s for pair in magnitudes for s in pair)

    if not magnitudes:
        pass
    elif max(degree.values()) <= 1:
        for (a, b), mag in sorted(magnitudes.items()):
            count, (pa, pb) = _approximate_coupling(mag / INTERCHANGE_WEIGHT, tol_x, max_period)
            if count == 0:
                continue
            periods[a], periods[b] = pa, pb
            points.extend(
                fastslow.SpecialPoint(pair=(a, b), trigger=trig)
                for trig in _spread_points(pa, pb, count))
    else:
        q = max_period
        counts: dict[tuple[int, int], int] = {}
        for pair, mag in sorted(magnitudes.items()):
            x = mag / INTERCHANGE_WEIGHT
            c = round(x * q * q)
            if c > q * q or abs(x - c / (q * q)) > tol_x:
                raise UnreachableToleranceError(
                    f"coupling {mag} for pair {pair} not reachable with shared period {q}")
            if c:
                counts[pair] = c
        # Disjoint trigger-value blocks per state keep firing sets conflict free.
        offsets = [0] * n
        for pair in sorted(counts):
            a, b = pair
            side = math.isqrt(counts[pair] - 1) + 1
            if offsets[a] + side > q or offsets[b] + side > q:
                raise UnreachableToleranceError(
                    f"trigger budget of shared clocks exhausted at pair {pair}")
            base_a, base_b = offsets[a], offsets[b]
            offsets[a] += side
            offsets[b] += side
            cells = side * side
            for j in range(counts[pair]):
                idx = (j * cells) // counts[pair]
                points.append(fastslow.SpecialPoint(
                    pair=pair, trigger=(base_a + idx // side, base_b + idx % side)))
        for s, deg in degree.items():
            if deg:
                periods[s] = q

    model = fastslow.OntologicalModel(
        slow_count=n, periods=tuple(periods), special_points=tuple(points))
    for pc in _pair_counts(model):
        achieved = INTERCHANGE_WEIGHT * pc.points / pc.denominator
        if abs(achieved - magnitudes.get(pc.pair, 0.0)) > tolerance:
            raise UnreachableToleranceError(
                f"achieved coupling {achieved} misses target for pair {pc.pair}")
    for pair, mag in magnitudes.items():
        if pair not in {pc.pair for pc in _pair_counts(model)} and mag > tolerance:
            raise UnreachableToleranceError(
                f"coupling {mag} for pair {pair} rounded away above tolerance")
    return model
