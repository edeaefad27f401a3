import numpy as np
import pytest

from wavescat.errors import DataError
from wavescat.model import Chamber, Channel, Group, Phase, Segment
from wavescat.scattering import (ScatteringParams, feature_matrix,
                                 features_to_csv, layer_energies, path_names,
                                 scatter)

FS = 1000.0
PARAMS = ScatteringParams(t=0.5, q1=8, q2=1, fs=FS)


def tone(freq, n=1000, amp=1.0):
    return amp * np.cos(2 * np.pi * freq * np.arange(n) / FS)


def bandlimited_noise(seed, n=1000, lo=5.0, hi=50.0):
    rng = np.random.default_rng(seed)
    spectrum = np.zeros(n // 2 + 1, dtype=complex)
    freqs = np.fft.rfftfreq(n, 1 / FS)
    band = (freqs >= lo) & (freqs <= hi)
    spectrum[band] = (rng.standard_normal(band.sum())
                      + 1j * rng.standard_normal(band.sum()))
    x = np.fft.irfft(spectrum, n=n)
    return x / x.std()


def order_of(path):
    return len(path)


def test_constant_input():
    feats = scatter(3.7 * np.ones(1000), PARAMS)
    assert feats.values[0] == pytest.approx(3.7, abs=1e-9)
    higher = feats.values[1:]
    assert np.all(higher < 1e-6 * 3.7 + 1e-9)


def test_path_ordering_contract():
    feats = scatter(np.zeros(1000), PARAMS)
    orders = [order_of(p) for p in feats.paths]
    assert orders == sorted(orders)
    assert feats.paths[0] == ()
    first = [p[0] for p in feats.paths if order_of(p) == 1]
    assert first == sorted(first, reverse=True)
    seconds = [p for p in feats.paths if order_of(p) == 2]
    assert all(p[1] < p[0] for p in seconds)
    for f1 in sorted({p[0] for p in seconds}, reverse=True):
        f2s = [p[1] for p in seconds if p[0] == f1]
        assert f2s == sorted(f2s, reverse=True)
    # stable across calls
    again = scatter(np.ones(1000), PARAMS)
    assert feats.paths == again.paths


def test_tone_first_order_ridge():
    feats = scatter(tone(32.0), PARAMS)
    first = [(i, p[0]) for i, p in enumerate(feats.paths) if order_of(p) == 1]
    best_i, best_f = max(first, key=lambda ip: feats.values[ip[0]])
    nearest = min(first, key=lambda ip: abs(ip[1] - 32.0))[1]
    assert best_f == nearest


def test_am_tone_second_order_ridge():
    x = tone(32.0) * (1.0 + 0.5 * tone(4.0))
    feats = scatter(x, PARAMS)
    first = [(i, p[0]) for i, p in enumerate(feats.paths) if order_of(p) == 1]
    carrier = max(first, key=lambda ip: feats.values[ip[0]])[1]
    seconds = [(i, p) for i, p in enumerate(feats.paths)
               if order_of(p) == 2 and p[0] == carrier]
    best = max(seconds, key=lambda ip: feats.values[ip[0]])[1]
    f2_grid = sorted({p[1] for _, p in seconds})
    nearest = min(f2_grid, key=lambda f: abs(f - 4.0))
    assert best[1] == nearest


def test_energy_dissipation():
    for seed in range(10):
        x = np.random.default_rng(seed).standard_normal(1000)
        e_in, e1, e2 = layer_energies(x, PARAMS)
        assert e_in >= e1 >= e2


def test_non_expansiveness():
    rng = np.random.default_rng(0)
    for _ in range(10):
        x = rng.standard_normal(1000)
        y = rng.standard_normal(1000)
        fx = scatter(x, PARAMS).values
        fy = scatter(y, PARAMS).values
        assert (np.linalg.norm(fx - fy)
                <= 1.05 * np.linalg.norm(x - y))


def test_shift_stability():
    tau = int(PARAMS.t * FS / 8)
    for seed in range(5):
        x = bandlimited_noise(seed)
        fx = scatter(x, PARAMS).values
        fs_ = scatter(np.roll(x, tau), PARAMS).values
        rel = np.linalg.norm(fs_ - fx) / np.linalg.norm(fx)
        assert rel < 0.1


def test_determinism_bitwise():
    x = bandlimited_noise(3)
    a = scatter(x, PARAMS).values
    b = scatter(x.copy(), PARAMS).values
    assert np.array_equal(a, b)


def seg(x, chamber=Chamber.REWARDED):
    return Segment(np.asarray(x, dtype=float), Group.FOOD, Phase.POST,
                   Channel.HIP, chamber, 0.0, "rat1")


def test_feature_matrix_matches_scatter_bitwise():
    xs = [bandlimited_noise(s) for s in range(4)]
    matrix, paths, _ = feature_matrix([seg(x) for x in xs], PARAMS)
    for row, x in zip(matrix, xs):
        assert np.array_equal(row, scatter(x, PARAMS).values)
    assert paths == scatter(xs[0], PARAMS).paths


def test_feature_matrix_row_independence_under_permutation():
    xs = [bandlimited_noise(s) for s in range(5)]
    matrix, _, _ = feature_matrix([seg(x) for x in xs], PARAMS)
    perm = [3, 1, 4, 0, 2]
    permuted, _, _ = feature_matrix([seg(xs[i]) for i in perm], PARAMS)
    assert np.array_equal(permuted, matrix[perm])


def test_feature_matrix_validation():
    with pytest.raises(DataError, match="no segments"):
        feature_matrix([], PARAMS)
    with pytest.raises(DataError, match="ragged"):
        feature_matrix([seg(np.zeros(1000)), seg(np.zeros(900))], PARAMS)


def test_segment_shorter_than_t_rejected():
    with pytest.raises(DataError, match="invariance scale"):
        scatter(np.zeros(400), PARAMS)


def test_params_validation():
    with pytest.raises(DataError):
        ScatteringParams(t=-1.0)
    with pytest.raises(DataError):
        ScatteringParams(q1=1, q2=4)
    with pytest.raises(DataError):
        ScatteringParams(max_order=3)


def test_band_defaults_follow_invariance_scale():
    assert PARAMS.band_min == pytest.approx(2.0)
    assert ScatteringParams(t=0.25).band_min == pytest.approx(4.0)


def test_features_csv(tmp_path):
    xs = [bandlimited_noise(0), bandlimited_noise(1)]
    segments = [seg(xs[0]), seg(xs[1], Chamber.NULL)]
    matrix, paths, segments = feature_matrix(segments, PARAMS)
    out = tmp_path / "features.csv"
    features_to_csv(matrix, paths, segments, out, "cmd=test")
    lines = out.read_text().splitlines()
    header = lines[1].split(",")
    assert header[0] == "S0"
    assert header[1].startswith("S1[")
    assert header[-4:] == ["group", "phase", "channel", "chamber"]
    assert len(lines) == 2 + 2
    row = lines[2].split(",")
    assert row[-4:] == ["food", "post", "HIP", "Rewarded"]
    assert float(row[0]) == matrix[0, 0]


def test_path_names_format():
    names = path_names([(), (8.123456,), (32.0, 4.0)])
    assert names == ["S0", "S1[8.123]", "S2[32,4]"]
