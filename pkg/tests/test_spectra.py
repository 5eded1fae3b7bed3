import numpy as np
import pytest

import spinring.spectra as spectra_module
from spinring import (DecompositionCache, IllConditionedError, RingSpec,
                      Variant, build_hamiltonian, cluster_levels, coupling_table,
                      diagonalize, lagrange_projector, match_levels,
                      match_single_level, overlap_matrix, projector,
                      uniform_state)


def test_cluster_levels_groups_degeneracies():
    values = np.array([0.0, 0.0, 0.0, 1.0, 2.0, 2.0])
    levels, warns = cluster_levels(values, 1e-9)
    assert [(lv.energy, lv.multiplicity, lv.start) for lv in levels] == \
        [(0.0, 3, 0), (1.0, 1, 3), (2.0, 2, 4)]
    assert warns == ()


def test_cluster_levels_gap_rule_scales_with_range():
    # absolute threshold is tolerance * max(1, range): the same 5e-8 gap
    # splits when the range is 1 but merges when the range is 100
    levels, _ = cluster_levels(np.array([0.0, 5e-8, 1.0]), 1e-9)
    assert [lv.multiplicity for lv in levels] == [1, 1, 1]
    levels, _ = cluster_levels(np.array([0.0, 5e-8, 100.0]), 1e-9)
    assert [lv.multiplicity for lv in levels] == [2, 1]


def test_cluster_levels_marginal_cluster_warning():
    values = np.array([0.0, 0.6e-9, 1.0])
    levels, warns = cluster_levels(values, 1e-9)
    assert [lv.multiplicity for lv in levels] == [2, 1]
    assert len(warns) == 1 and "marginal" in warns[0]


def test_cluster_levels_validation():
    with pytest.raises(ValueError):
        cluster_levels(np.array([0.0, 1.0]), 0.0)
    with pytest.raises(ValueError):
        cluster_levels(np.array([1.0, 0.0]), 1e-9)
    assert cluster_levels(np.array([]), 1e-9) == ((), ())


def test_diagonalize_solves_eigenproblem(dec):
    d = dec(6, 1.7)
    matrix = build_hamiltonian(RingSpec(6, 1.7)).matrix
    residual = matrix @ d.eigenvectors - d.eigenvectors * d.eigenvalues
    assert np.max(np.abs(residual)) < 1e-11
    gram = d.eigenvectors.T @ d.eigenvectors
    assert np.max(np.abs(gram - np.eye(64))) < 1e-12
    assert np.all(np.diff(d.eigenvalues) >= 0)
    assert abs(d.eigenvalues.sum()) < 1e-10  # traceless pair coupling
    assert sum(lv.multiplicity for lv in d.levels) == 64


def test_diagonalize_is_deterministic():
    a = diagonalize(RingSpec(5, 0.9))
    b = diagonalize(RingSpec(5, 0.9))
    assert np.array_equal(a.eigenvalues, b.eigenvalues)
    assert np.array_equal(a.eigenvectors, b.eigenvectors)
    assert a.levels == b.levels


def test_ferromagnetic_is_reversed_standard(dec):
    standard = dec(5, 1.2)
    ferro = dec(5, 1.2, Variant.FERROMAGNETIC)
    assert np.array_equal(ferro.eigenvalues, -standard.eigenvalues[::-1])
    assert len(ferro.levels) == len(standard.levels)
    assert ferro.multiplicities.tolist() == standard.multiplicities[::-1].tolist()


def test_shifted_top_level_is_zero(dec):
    d = dec(6, 0.7, Variant.SHIFTED)
    top = d.levels[-1]
    assert abs(top.energy) < 1e-10
    assert top.multiplicity == 7
    assert np.all(d.eigenvalues[:top.start] < -1e-6)


def test_projector_algebra(dec):
    d = dec(4, 1.0)
    total = np.zeros((16, 16))
    for level in d.levels:
        p = projector(level, d)
        assert np.max(np.abs(p - p.T)) < 1e-13
        assert np.max(np.abs(p @ p - p)) < 1e-12
        assert np.trace(p) == pytest.approx(level.multiplicity, abs=1e-10)
        total += p
    assert np.max(np.abs(total - np.eye(16))) < 1e-12
    p0 = projector(d.levels[0], d)
    p1 = projector(d.levels[1], d)
    assert np.max(np.abs(p0 @ p1)) < 1e-12


def test_uniform_state_normalization(dec):
    d = dec(4, 1.0)
    for level in d.levels:
        state = uniform_state(level, d)
        assert np.trace(state.rho) == pytest.approx(1.0, abs=1e-12)
        assert state.n_sites == 4
        vecs = d.level_vectors(level)
        assert np.max(np.abs(state.rho - vecs @ vecs.T / level.multiplicity)) == 0.0


def test_lagrange_projector_matches_eigenprojector(dec):
    d = dec(4, 1.0)
    ham = build_hamiltonian(RingSpec(4, 1.0))
    energies = [lv.energy for lv in d.levels]
    for level in d.levels:
        poly = lagrange_projector(ham, energies, level.energy)
        assert np.max(np.abs(poly - projector(level, d))) < 1e-8


def test_lagrange_projector_rejects_close_energies():
    matrix = np.diag([0.0, 1e-8, 1.0])
    with pytest.raises(IllConditionedError):
        lagrange_projector(matrix, [0.0, 1e-8, 1.0], 0.0)


def test_lagrange_projector_rejects_unlisted_target():
    matrix = np.diag([0.0, 1.0])
    with pytest.raises(ValueError):
        lagrange_projector(matrix, [0.0, 1.0], 0.5)


def test_overlap_matrix_self_is_identity(dec):
    d = dec(4, 1.0)
    overlaps = overlap_matrix(d, d)
    assert np.max(np.abs(overlaps - np.eye(len(d.levels)))) < 1e-12


def test_match_levels_nearby_alpha(dec):
    a = dec(6, 1.00)
    b = dec(6, 1.02)
    pairing = match_levels(a, b)
    assert pairing.is_bijection
    assert pairing.ambiguous == ()
    assert all(ov > 0.999 for _, _, ov in pairing.pairs)
    # levels stay in energy order this close together
    assert all(ia == ib for ia, ib, _ in pairing.pairs)
    mapping = pairing.as_map()
    for ia in range(len(a.levels)):
        jb, ov = match_single_level(a, ia, b)
        assert jb == mapping[ia]
        assert ov > 0.999


def test_match_single_level_tracks_multiplicity(dec):
    a = dec(6, 1.00)
    b = dec(6, 1.02)
    for ia, level in enumerate(a.levels):
        jb, _ = match_single_level(a, ia, b)
        assert b.levels[jb].multiplicity == level.multiplicity


def test_cache_round_trip(tmp_path):
    cache = DecompositionCache(str(tmp_path))
    spec = RingSpec(4, 1.3)
    first = cache.get(spec)
    assert len(list(tmp_path.iterdir())) == 1
    loaded = cache.load(spec, first.cluster_tolerance)
    assert np.array_equal(loaded.eigenvalues, first.eigenvalues)
    assert np.array_equal(loaded.eigenvectors, first.eigenvectors)
    assert loaded.levels == first.levels


def test_cache_hit_skips_recomputation(tmp_path, monkeypatch):
    cache = DecompositionCache(str(tmp_path))
    spec = RingSpec(4, 0.9)
    first = cache.get(spec)

    def boom(*args, **kwargs):
        raise AssertionError("diagonalize called despite a cached entry")

    monkeypatch.setattr(spectra_module, "diagonalize", boom)
    second = cache.get(spec)
    assert np.array_equal(second.eigenvalues, first.eigenvalues)


def test_cache_ignores_foreign_files(tmp_path):
    cache = DecompositionCache(str(tmp_path))
    spec = RingSpec(4, 0.7)
    path = cache._path(spec, 1e-9)
    with open(path, "wb") as handle:
        handle.write(b'{"magic": "something-else"}\n')
    assert cache.load(spec, 1e-9) is None
    assert cache.get(spec).eigenvalues.size == 16


def test_shifted_total_trace(dec):
    d = dec(5, 2.2, Variant.SHIFTED)
    total = coupling_table(5, 2.2).total_weight
    assert d.eigenvalues.sum() == pytest.approx(-32 * total / 4, rel=1e-12)
