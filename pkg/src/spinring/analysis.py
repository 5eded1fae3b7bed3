"""Parameter sweeps over alpha: level-curve tracking, crossing location,
entanglement onset/offset detection, censuses, and the nearest-neighbor
linear concurrence fit.

A sweep diagonalizes the ring on an ascending alpha grid, records the
concurrence of every (level, separation) cell, and threads levels into
curves by projector overlap between neighboring grid points.  Curves are
threaded only across "backbone" points, the grid points whose distinct-level
count equals the generic count; collapse points (alpha = 0, the
Haldane-Shastry point, the nearest-neighbor limit) are kept as data points
but skipped by the threading.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .model import INFINITY, RingSpec, Variant
from .spectra import (CLUSTER_TOLERANCE_DEFAULT, DecompositionCache,
                      SpectralDecomposition, diagonalize, match_levels,
                      match_single_level, uniform_state)
from .entanglement import (STRUCTURE_TOLERANCE_DEFAULT, ConcurrenceRecord,
                           concurrence_structured, pair_concurrence)

CONCURRENCE_THRESHOLD_DEFAULT = 1e-10
RESOLUTION_DEFAULT = 1e-3

# a boundary whose first in-range concurrence already exceeds this is a jump,
# not a smooth zero crossing; it coincides with a level crossing
JUMP_SCALE_DEFAULT = 1e-2

DEFAULT_GRID_MIN = 0.05
DEFAULT_GRID_MAX = 12.0
DEFAULT_GRID_POINTS = 400
DEFAULT_GRID_EXTRAS = (0.0, 2.0, INFINITY)


class SweepError(RuntimeError):
    """Numerical failure during a sweep, carrying the offending alpha."""

    def __init__(self, alpha: float, original: Exception):
        super().__init__(f"sweep failed at alpha={alpha!r}: {original}")
        self.alpha = alpha
        self.original = original


class InsufficientDataError(ValueError):
    """Too few data points for a requested fit."""


def default_alpha_grid(n_points: int = DEFAULT_GRID_POINTS,
                       lo: float = DEFAULT_GRID_MIN,
                       hi: float = DEFAULT_GRID_MAX,
                       extras: tuple = DEFAULT_GRID_EXTRAS) -> tuple:
    """Log-spaced grid on [lo, hi] merged with the explicit extra points."""
    points = set(np.logspace(math.log10(lo), math.log10(hi), n_points).tolist())
    points.update(float(a) for a in extras)
    return tuple(sorted(points))


@dataclass(frozen=True)
class SweepPoint:
    """One grid point: level table plus concurrence records for every
    (level, separation) cell, separation running over 1..N//2."""

    alpha: float
    count: int
    energies: np.ndarray
    multiplicities: np.ndarray
    records: tuple

    def record(self, level_index: int, separation: int) -> ConcurrenceRecord:
        n_seps = len(self.records) // self.count
        return self.records[level_index * n_seps + (separation - 1)]


@dataclass(frozen=True)
class LevelCurve:
    """One level family threaded across the backbone grid points.

    ``level_indices`` holds the matched level index at each grid point and -1
    where the curve is not tracked (non-backbone points).  Energies and
    concurrences are NaN there.  ``concurrence`` has one row per separation
    1..N//2.
    """

    curve_index: int
    n_sites: int
    variant: Variant
    cluster_tolerance: float
    multiplicity: int
    alpha_grid: np.ndarray
    level_indices: np.ndarray
    energies: np.ndarray
    concurrence: np.ndarray

    @property
    def valid(self) -> np.ndarray:
        return self.level_indices >= 0

    def concurrence_at(self, separation: int) -> np.ndarray:
        return self.concurrence[separation - 1]

    def distances(self, threshold: float = CONCURRENCE_THRESHOLD_DEFAULT) -> tuple:
        rows = self.concurrence[:, self.valid]
        return tuple(s + 1 for s in range(rows.shape[0]) if np.nanmax(rows[s], initial=0.0) > threshold)


@dataclass(frozen=True)
class SweepResult:
    n_sites: int
    variant: Variant
    alpha_grid: np.ndarray
    points: tuple
    pairings: tuple          # between consecutive grid points
    backbone: np.ndarray     # indices of threaded points
    generic_count: int
    curves: tuple
    cluster_tolerance: float
    structure_tolerance: float
    concurrence_threshold: float
    warnings: tuple = field(default=())

    @property
    def n_points(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class CrossingEvent:
    """A located alpha event: a level crossing, or a concurrence onset/offset
    along a curve.  ``alpha`` is the bracket midpoint."""

    alpha: float
    bracket: tuple
    kind: str                    # "crossing" | "onset" | "offset"
    curve_indices: tuple
    separation: int | None = None
    crossing_coincident: bool = False

    @property
    def width(self) -> float:
        return self.bracket[1] - self.bracket[0]


def count_distinct_levels(n_sites: int, alpha: float,
                          tolerance: float = CLUSTER_TOLERANCE_DEFAULT,
                          variant: Variant = Variant.STANDARD) -> int:
    """Number of distinct levels after clustering."""
    dec = diagonalize(RingSpec(n_sites, alpha, variant), cluster_tolerance=tolerance)
    return len(dec.levels)


def _point_records(dec: SpectralDecomposition, alpha: float,
                   structure_tolerance: float) -> tuple:
    n_seps = max(dec.spec.n_sites // 2, 1)
    records = []
    for li, level in enumerate(dec.levels):
        state = uniform_state(level, dec)
        for sep in range(1, n_seps + 1):
            pair = pair_concurrence(state, 1, 1 + sep, structure_tolerance)
            records.append(ConcurrenceRecord(
                alpha=alpha, level_index=li, level_energy=level.energy,
                multiplicity=level.multiplicity, separation=sep,
                concurrence=concurrence_structured(pair),
                a=pair.a, b=pair.b, c=pair.c,
                structure_residual=pair.structure_residual))
    return tuple(records)


def _validate_grid(alpha_grid) -> np.ndarray:
    grid = np.asarray([float(a) for a in alpha_grid], dtype=float)
    if grid.size == 0:
        raise ValueError("alpha grid is empty")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("alpha grid must be strictly ascending")
    if grid[0] < 0:
        raise ValueError("alpha grid must be nonnegative")
    return grid


def sweep(n_sites: int, alpha_grid, variant: Variant = Variant.STANDARD, *,
          cluster_tolerance: float = CLUSTER_TOLERANCE_DEFAULT,
          structure_tolerance: float = STRUCTURE_TOLERANCE_DEFAULT,
          concurrence_threshold: float = CONCURRENCE_THRESHOLD_DEFAULT,
          cache: DecompositionCache | None = None) -> SweepResult:
    """Diagonalize on the grid, record all concurrences, thread level curves."""
    grid = _validate_grid(alpha_grid)
    notes = []

    points = []
    pairings = []
    decs = []
    for alpha in grid:
        spec = RingSpec(n_sites, float(alpha), variant)
        try:
            if cache is not None:
                dec = cache.get(spec, cluster_tolerance)
            else:
                dec = diagonalize(spec, cluster_tolerance=cluster_tolerance)
            records = _point_records(dec, float(alpha), structure_tolerance)
        except Exception as exc:
            raise SweepError(float(alpha), exc) from exc
        points.append(SweepPoint(
            alpha=float(alpha), count=len(dec.levels),
            energies=dec.energies, multiplicities=dec.multiplicities,
            records=records))
        decs.append(dec)
    for i in range(len(decs) - 1):
        pairings.append(match_levels(decs[i], decs[i + 1]))

    counts = np.array([p.count for p in points])
    generic = int(counts.max())
    backbone = np.nonzero(counts == generic)[0]

    # thread curves across consecutive backbone points; a non-backbone point
    # in between (a collapse point) is skipped by matching directly across it
    n_pts = len(points)
    curve_idx = np.full((generic, n_pts), -1, dtype=int)
    curve_idx[:, backbone[0]] = np.arange(generic)
    prev = int(backbone[0])
    for b in backbone[1:]:
        b = int(b)
        pairing = pairings[prev] if b == prev + 1 else match_levels(decs[prev], decs[b])
        mapping = pairing.as_map()
        if not pairing.is_bijection:
            notes.append(f"partial level pairing between alpha={points[prev].alpha!r} "
                         f"and alpha={points[b].alpha!r}")
        for c in range(generic):
            la = curve_idx[c, prev]
            curve_idx[c, b] = mapping.get(la, -1)
        prev = b

    n_seps = max(n_sites // 2, 1)
    curves = []
    for c in range(generic):
        energies = np.full(n_pts, np.nan)
        conc = np.full((n_seps, n_pts), np.nan)
        mults = []
        for i in backbone:
            li = curve_idx[c, i]
            if li < 0:
                continue
            energies[i] = points[i].energies[li]
            mults.append(int(points[i].multiplicities[li]))
            for sep in range(1, n_seps + 1):
                conc[sep - 1, i] = points[i].record(li, sep).concurrence
        if mults and any(m != mults[0] for m in mults):
            notes.append(f"curve {c}: multiplicity changes along the grid {sorted(set(mults))}")
        for arr in (energies, conc):
            arr.setflags(write=False)
        idx_row = curve_idx[c].copy()
        idx_row.setflags(write=False)
        curves.append(LevelCurve(
            curve_index=c, n_sites=n_sites, variant=variant,
            cluster_tolerance=cluster_tolerance,
            multiplicity=mults[0] if mults else 0,
            alpha_grid=grid, level_indices=idx_row,
            energies=energies, concurrence=conc))

    grid.setflags(write=False)
    backbone.setflags(write=False)
    return SweepResult(
        n_sites=n_sites, variant=variant, alpha_grid=grid,
        points=tuple(points), pairings=tuple(pairings), backbone=backbone,
        generic_count=generic, curves=tuple(curves),
        cluster_tolerance=cluster_tolerance,
        structure_tolerance=structure_tolerance,
        concurrence_threshold=concurrence_threshold,
        warnings=tuple(notes))


# ---------------------------------------------------------------------------
# Crossing location.  The scan flags grid intervals where the energy order of
# matched levels swaps (or where the count dips at a grid point); bisection
# then follows the two participating levels by projector overlap from the
# left endpoint, with the cluster tolerance shrinking with the bracket so
# near-degenerate levels stay resolved.


def _shrunk_tolerance(base: float, width: float, width0: float) -> float:
    if width0 <= 0:
        return base
    return max(1e-12, min(base, base * width / width0))


def _bisect_order_swap(n_sites: int, variant: Variant, tolerance: float,
                       ref_dec: SpectralDecomposition, level_a: int, level_b: int,
                       lo: float, hi: float, resolution: float) -> tuple:
    """Shrink [lo, hi] around the alpha where levels a and b of ``ref_dec``
    (taken at lo) exchange energy order.  Returns the final bracket."""
    f_lo = ref_dec.levels[level_a].energy - ref_dec.levels[level_b].energy
    width0 = hi - lo
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        tol = _shrunk_tolerance(tolerance, hi - lo, width0)
        dec = diagonalize(RingSpec(n_sites, mid, variant), cluster_tolerance=tol)
        ja, ova = match_single_level(ref_dec, level_a, dec)
        jb, ovb = match_single_level(ref_dec, level_b, dec)
        if ja == jb or min(ova, ovb) < 0.5:
            # the pair is merged at this resolution; the crossing is here
            half = 0.25 * (hi - lo)
            lo, hi = mid - half, mid + half
            continue
        f_mid = dec.levels[ja].energy - dec.levels[jb].energy
        if f_mid == 0.0:
            return (mid, mid)
        if (f_mid > 0) == (f_lo > 0):
            lo = mid
        else:
            hi = mid
    return (lo, hi)


def _scan_swaps(sweep_result: SweepResult):
    """Yield (interval_index, [(level_a, level_b), ...]) for every consecutive
    backbone interval whose pairing swaps energy order."""
    backbone = [int(b) for b in sweep_result.backbone]
    for pos in range(len(backbone) - 1):
        i, j = backbone[pos], backbone[pos + 1]
        if j == i + 1:
            mapping = sweep_result.pairings[i].as_map()
        else:
            # collapse point inside; consult the threaded curves instead
            mapping = {}
            for curve in sweep_result.curves:
                la, lb = curve.level_indices[i], curve.level_indices[j]
                if la >= 0 and lb >= 0:
                    mapping[int(la)] = int(lb)
        perm = [mapping.get(k, -1) for k in range(sweep_result.points[i].count)]
        swapped = [(k, l) for k in range(len(perm)) for l in range(k + 1, len(perm))
                   if perm[k] >= 0 and perm[l] >= 0 and perm[k] > perm[l]]
        if swapped:
            yield i, j, swapped


def find_last_crossing(n_sites: int, alpha_max_search: float,
                       resolution: float = RESOLUTION_DEFAULT, *,
                       variant: Variant = Variant.STANDARD,
                       cluster_tolerance: float = CLUSTER_TOLERANCE_DEFAULT,
                       sweep_result: SweepResult | None = None) -> CrossingEvent | None:
    """Largest alpha below ``alpha_max_search`` where the distinct-level count
    changes.  Returns None when the spectrum never crosses in the window."""
    if sweep_result is None:
        lo = min(DEFAULT_GRID_MIN, alpha_max_search / 2)
        grid = default_alpha_grid(lo=lo, hi=alpha_max_search, extras=())
        sweep_result = sweep(n_sites, grid, variant,
                             cluster_tolerance=cluster_tolerance)
    events = []
    for i, j, swapped in _scan_swaps(sweep_result):
        if sweep_result.alpha_grid[i] > alpha_max_search:
            continue
        events.append((i, j, swapped))
    # exact crossings sitting on a non-backbone grid point
    on_grid = [int(i) for i in range(sweep_result.n_points)
               if sweep_result.points[i].count < sweep_result.generic_count
               and 0.0 < sweep_result.points[i].alpha < INFINITY
               and sweep_result.points[i].alpha <= alpha_max_search]
    if not events and not on_grid:
        return None
    best = None
    if events:
        i, j, swapped = events[-1]
        ref = diagonalize(RingSpec(n_sites, sweep_result.points[i].alpha, variant),
                          cluster_tolerance=sweep_result.cluster_tolerance)
        for (ka, kb) in swapped:
            lo, hi = _bisect_order_swap(
                n_sites, variant, sweep_result.cluster_tolerance, ref, ka, kb,
                sweep_result.points[i].alpha, sweep_result.points[j].alpha, resolution)
            event = CrossingEvent(alpha=0.5 * (lo + hi), bracket=(lo, hi),
                                  kind="crossing", curve_indices=_curves_of(sweep_result, i, (ka, kb)))
            if best is None or event.alpha > best.alpha:
                best = event
    for i in on_grid:
        a = sweep_result.points[i].alpha
        if best is None or a > best.alpha:
            best = CrossingEvent(alpha=a, bracket=(a, a), kind="crossing",
                                 curve_indices=())
    return best


def _curves_of(sweep_result: SweepResult, point_index: int, level_indices) -> tuple:
    out = []
    for li in level_indices:
        for curve in sweep_result.curves:
            if curve.level_indices[point_index] == li:
                out.append(curve.curve_index)
                break
    return tuple(out)


def all_crossings(sweep_result: SweepResult,
                  resolution: float = RESOLUTION_DEFAULT) -> tuple:
    """Bisect every order swap flagged by the scan, ascending in alpha."""
    events = []
    for i, j, swapped in _scan_swaps(sweep_result):
        ref = diagonalize(RingSpec(sweep_result.n_sites, sweep_result.points[i].alpha,
                                   sweep_result.variant),
                          cluster_tolerance=sweep_result.cluster_tolerance)
        for (ka, kb) in swapped:
            lo, hi = _bisect_order_swap(
                sweep_result.n_sites, sweep_result.variant,
                sweep_result.cluster_tolerance, ref, ka, kb,
                sweep_result.points[i].alpha, sweep_result.points[j].alpha, resolution)
            events.append(CrossingEvent(
                alpha=0.5 * (lo + hi), bracket=(lo, hi), kind="crossing",
                curve_indices=_curves_of(sweep_result, i, (ka, kb))))
    return tuple(sorted(events, key=lambda e: e.alpha))


def locate_crossing(curve_a: LevelCurve, curve_b: LevelCurve,
                    resolution: float = RESOLUTION_DEFAULT) -> CrossingEvent | None:
    """Bisect the energy-difference sign change of two tracked curves.
    Returns None when the curves never cross on their common grid."""
    both = curve_a.valid & curve_b.valid
    idx = np.nonzero(both)[0]
    diff = curve_a.energies[idx] - curve_b.energies[idx]
    signs = np.sign(diff)
    changes = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    if len(changes) == 0:
        return None
    pos = changes[0]
    i, j = int(idx[pos]), int(idx[pos + 1])
    alpha_i = float(curve_a.alpha_grid[i])
    ref = diagonalize(RingSpec(curve_a.n_sites, alpha_i, curve_a.variant),
                      cluster_tolerance=curve_a.cluster_tolerance)
    lo, hi = _bisect_order_swap(
        curve_a.n_sites, curve_a.variant, curve_a.cluster_tolerance, ref,
        int(curve_a.level_indices[i]), int(curve_b.level_indices[i]),
        alpha_i, float(curve_a.alpha_grid[j]), resolution)
    return CrossingEvent(alpha=0.5 * (lo + hi), bracket=(lo, hi), kind="crossing",
                         curve_indices=(curve_a.curve_index, curve_b.curve_index))


# ---------------------------------------------------------------------------
# Entanglement boundaries along curves.


def _curve_concurrence_at(curve: LevelCurve, alpha: float, tolerance: float,
                          ref_dec: SpectralDecomposition, ref_level: int,
                          separation: int) -> float:
    dec = diagonalize(RingSpec(curve.n_sites, alpha, curve.variant),
                      cluster_tolerance=tolerance)
    j, _ = match_single_level(ref_dec, ref_level, dec)
    state = uniform_state(dec.levels[j], dec)
    return concurrence_structured(pair_concurrence(state, 1, 1 + separation))


def entanglement_boundaries(curve: LevelCurve, separation: int,
                            resolution: float = RESOLUTION_DEFAULT, *,
                            threshold: float = CONCURRENCE_THRESHOLD_DEFAULT,
                            jump_scale: float = JUMP_SCALE_DEFAULT) -> tuple:
    """All onsets and offsets of positive concurrence along the curve,
    bisected to the requested resolution.

    An event whose concurrence is already of order ``jump_scale`` right at
    the boundary is a discontinuity at a level crossing, not a smooth zero;
    it is returned with ``crossing_coincident=True``.
    """
    idx = np.nonzero(curve.valid)[0]
    values = curve.concurrence_at(separation)[idx]
    positive = values > threshold
    events = []
    for pos in np.nonzero(positive[:-1] != positive[1:])[0]:
        i, j = int(idx[pos]), int(idx[pos + 1])
        lo, hi = float(curve.alpha_grid[i]), float(curve.alpha_grid[j])
        width0 = hi - lo
        kind = "onset" if positive[pos + 1] else "offset"
        ref = diagonalize(RingSpec(curve.n_sites, lo, curve.variant),
                          cluster_tolerance=curve.cluster_tolerance)
        ref_level = int(curve.level_indices[i])
        state_lo = bool(positive[pos])
        edge_value = values[pos] if state_lo else values[pos + 1]
        while hi - lo > resolution:
            mid = 0.5 * (lo + hi)
            tol = _shrunk_tolerance(curve.cluster_tolerance, hi - lo, width0)
            c_mid = _curve_concurrence_at(curve, mid, tol, ref, ref_level, separation)
            if (c_mid > threshold) == state_lo:
                lo = mid
            else:
                hi = mid
                if c_mid > threshold:
                    edge_value = c_mid
        events.append(CrossingEvent(
            alpha=0.5 * (lo + hi), bracket=(lo, hi), kind=kind,
            curve_indices=(curve.curve_index,), separation=separation,
            crossing_coincident=bool(edge_value > jump_scale)))
    return tuple(events)


def separation_existence_intervals(sweep_result: SweepResult, separation: int,
                                   threshold: float | None = None) -> tuple:
    """Grid-resolution alpha intervals where some curve is entangled at the
    given separation (union over curves, backbone points only)."""
    if threshold is None:
        threshold = sweep_result.concurrence_threshold
    idx = sweep_result.backbone
    union = np.zeros(len(idx), dtype=bool)
    for curve in sweep_result.curves:
        union |= np.nan_to_num(curve.concurrence_at(separation)[idx]) > threshold
    intervals = []
    start = None
    alphas = sweep_result.alpha_grid[idx]
    for k, flag in enumerate(union):
        if flag and start is None:
            start = alphas[k]
        elif not flag and start is not None:
            intervals.append((float(start), float(alphas[k - 1])))
            start = None
    if start is not None:
        intervals.append((float(start), float(alphas[-1])))
    return tuple(intervals)


def separation_gaps(sweep_result: SweepResult, separation: int,
                    resolution: float = RESOLUTION_DEFAULT, *,
                    threshold: float | None = None) -> tuple:
    """Internal no-entanglement windows for one separation, with both edges
    bisected along the curves that close and reopen the coverage."""
    if threshold is None:
        threshold = sweep_result.concurrence_threshold
    intervals = separation_existence_intervals(sweep_result, separation, threshold)
    if len(intervals) < 2:
        return ()
    events = []
    for curve in sweep_result.curves:
        if separation in curve.distances(threshold):
            events.extend(entanglement_boundaries(
                curve, separation, resolution, threshold=threshold))
    gaps = []
    for (_, last_pos), (first_pos, _) in zip(intervals[:-1], intervals[1:]):
        offsets = [e for e in events if e.kind == "offset" and last_pos <= e.bracket[1] <= first_pos]
        onsets = [e for e in events if e.kind == "onset" and last_pos <= e.bracket[0] <= first_pos]
        if offsets and onsets:
            gaps.append((max(offsets, key=lambda e: e.alpha),
                         min(onsets, key=lambda e: e.alpha)))
    return tuple(gaps)


# ---------------------------------------------------------------------------
# Censuses and the linear fit.


def entangled_level_census(n_sites: int, alpha: float, *,
                           threshold: float = CONCURRENCE_THRESHOLD_DEFAULT,
                           cluster_tolerance: float = CLUSTER_TOLERANCE_DEFAULT,
                           variant: Variant = Variant.STANDARD) -> dict:
    """Per-separation count of levels with positive concurrence."""
    dec = diagonalize(RingSpec(n_sites, alpha, variant),
                      cluster_tolerance=cluster_tolerance)
    n_seps = max(n_sites // 2, 1)
    counts = {sep: 0 for sep in range(1, n_seps + 1)}
    for level in dec.levels:
        state = uniform_state(level, dec)
        for sep in range(1, n_seps + 1):
            value = concurrence_structured(pair_concurrence(state, 1, 1 + sep))
            if value > threshold:
                counts[sep] += 1
    return counts


def projector_dimension_histogram(n_sites: int, alpha: float, *,
                                  cluster_tolerance: float = CLUSTER_TOLERANCE_DEFAULT,
                                  variant: Variant = Variant.STANDARD) -> dict:
    """Multiplicity histogram of the clustered levels, dimension -> count."""
    dec = diagonalize(RingSpec(n_sites, alpha, variant),
                      cluster_tolerance=cluster_tolerance)
    hist: dict = {}
    for level in dec.levels:
        hist[level.multiplicity] = hist.get(level.multiplicity, 0) + 1
    return dict(sorted(hist.items()))


@dataclass(frozen=True)
class CurveEntanglement:
    curve_index: int
    multiplicity: int
    distances: tuple
    spans: dict              # separation -> (first alpha, last alpha) positive


@dataclass(frozen=True)
class CurveCensus:
    n_curves: int
    entangled: tuple         # CurveEntanglement, ascending curve index
    one_dim_indices: tuple
    one_dim_entangled: tuple

    @property
    def n_entangled(self) -> int:
        return len(self.entangled)

    @property
    def single_distance(self) -> tuple:
        return tuple(e for e in self.entangled if len(e.distances) == 1)

    @property
    def multi_distance(self) -> tuple:
        return tuple(e for e in self.entangled if len(e.distances) > 1)


def entangled_projector_census(sweep_result: SweepResult,
                               threshold: float | None = None) -> CurveCensus:
    """Classify every threaded curve by the separations it carries anywhere
    on the grid."""
    if threshold is None:
        threshold = sweep_result.concurrence_threshold
    entangled = []
    for curve in sweep_result.curves:
        distances = curve.distances(threshold)
        if not distances:
            continue
        spans = {}
        idx = np.nonzero(curve.valid)[0]
        alphas = curve.alpha_grid[idx]
        for sep in distances:
            pos = np.nonzero(curve.concurrence_at(sep)[idx] > threshold)[0]
            spans[sep] = (float(alphas[pos[0]]), float(alphas[pos[-1]]))
        entangled.append(CurveEntanglement(
            curve_index=curve.curve_index, multiplicity=curve.multiplicity,
            distances=distances, spans=spans))
    one_dim = tuple(c.curve_index for c in sweep_result.curves if c.multiplicity == 1)
    one_dim_ent = tuple(e.curve_index for e in entangled if e.multiplicity == 1)
    return CurveCensus(n_curves=len(sweep_result.curves),
                       entangled=tuple(entangled),
                       one_dim_indices=one_dim,
                       one_dim_entangled=one_dim_ent)


@dataclass(frozen=True)
class LinearFit:
    """Least-squares line through the positive-concurrence (E, C) points,
    written as C = -A*E - B."""

    a: float
    b: float
    max_residual: float
    n_points: int
    max_concurrence: float


def nn_linear_fit(n_sites: int, alpha: float = INFINITY, *,
                  threshold: float = CONCURRENCE_THRESHOLD_DEFAULT,
                  cluster_tolerance: float = CLUSTER_TOLERANCE_DEFAULT,
                  variant: Variant = Variant.STANDARD) -> LinearFit:
    """Fit the nearest-neighbor concurrence against level energy."""
    dec = diagonalize(RingSpec(n_sites, alpha, variant),
                      cluster_tolerance=cluster_tolerance)
    energies = []
    values = []
    for level in dec.levels:
        state = uniform_state(level, dec)
        value = concurrence_structured(pair_concurrence(state, 1, 2))
        if value > threshold:
            energies.append(level.energy)
            values.append(value)
    if len(values) < 2:
        raise InsufficientDataError(
            f"{len(values)} positive nearest-neighbor points at alpha={alpha!r}; need 2")
    slope, intercept = np.polyfit(np.array(energies), np.array(values), 1)
    residual = np.max(np.abs(np.array(values) - (slope * np.array(energies) + intercept)))
    return LinearFit(a=float(-slope), b=float(-intercept),
                     max_residual=float(residual), n_points=len(values),
                     max_concurrence=float(max(values)))


def distance_selectivity_check(n_sites: int, alpha: float, *,
                               threshold: float = CONCURRENCE_THRESHOLD_DEFAULT,
                               cluster_tolerance: float = CLUSTER_TOLERANCE_DEFAULT,
                               variant: Variant = Variant.STANDARD) -> list:
    """Levels entangled at separation 1 or 2 that also carry entanglement at
    any other separation.  Returns (level_index, positive separations) pairs;
    coexistence limited to separations 3 and 4 alone is not reported."""
    dec = diagonalize(RingSpec(n_sites, alpha, variant),
                      cluster_tolerance=cluster_tolerance)
    n_seps = max(n_sites // 2, 1)
    violations = []
    for li, level in enumerate(dec.levels):
        state = uniform_state(level, dec)
        positive = tuple(sep for sep in range(1, n_seps + 1)
                         if concurrence_structured(pair_concurrence(state, 1, 1 + sep)) > threshold)
        if len(positive) > 1 and any(sep in (1, 2) for sep in positive):
            violations.append((li, positive))
    return violations
