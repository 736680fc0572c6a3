"""Smoke tests for the python module over the native core."""

import numpy as np
import pytest

import bitmix


def make_pair(size=32, rate=0.1, seed=7):
    rng = np.random.default_rng(seed)
    cover = bitmix.GrayImage(rng.integers(0, 256, (size, size), dtype=np.uint8))
    return bitmix.embed_uniform(cover, bitmix.EmbedSpec(change_rate=rate, seed=seed))


def test_version_and_exports():
    assert bitmix.__version__
    for name in ("bitmix_pair", "assemble_batch", "p_e", "auc", "load_pgm"):
        assert hasattr(bitmix, name)


def test_gray_image_numpy_round_trip():
    arr = np.arange(12, dtype=np.uint8).reshape(3, 4)
    img = bitmix.GrayImage(arr)
    assert img.width == 4 and img.height == 3
    assert np.array_equal(img.to_numpy(), arr)


def test_pgm_bytes_round_trip():
    arr = np.random.default_rng(1).integers(0, 256, (5, 7), dtype=np.uint8)
    img = bitmix.GrayImage(arr)
    data = bitmix.save_pgm(img)
    assert data.startswith(b"P5\n7 5\n255\n")
    assert np.array_equal(bitmix.load_pgm(data).to_numpy(), arr)
    with pytest.raises(bitmix.BitmixError):
        bitmix.load_pgm(b"P6\n1 1\n255\nx")


def test_embedding_is_seeded_and_unit_steps():
    pair_a = make_pair(seed=3)
    pair_b = make_pair(seed=3)
    assert np.array_equal(pair_a.stego.to_numpy(), pair_b.stego.to_numpy())
    delta = pair_a.stego.to_numpy().astype(int) - pair_a.cover.to_numpy().astype(int)
    assert set(np.unique(delta)).issubset({-1, 0, 1})
    assert np.count_nonzero(delta) >= 1


def test_bitmix_labels_and_involution():
    pair = make_pair(size=24)
    box = bitmix.BBox(4, 6, 10, 8)
    mixed = bitmix.bitmix_pair(pair, box)
    assert 0.0 <= mixed.label_cs <= 1.0
    assert mixed.label_cs + mixed.label_sc == 1.0
    assert mixed.label_cs == bitmix.bitmix_lambda(pair, box)

    remixed = bitmix.bitmix_pair(
        bitmix.StegoPair(
            bitmix.GrayImage(mixed.image_cs), bitmix.GrayImage(mixed.image_sc)
        ),
        box,
    )
    assert np.array_equal(remixed.image_cs, pair.cover.to_numpy())
    assert np.array_equal(remixed.image_sc, pair.stego.to_numpy())


def test_cutmix_labels_quarter_box():
    cs, sc = bitmix.cutmix_labels(bitmix.BBox(0, 0, 128, 128), 256, 256)
    assert (cs, sc) == (0.25, 0.75)


def test_assemble_batch_and_container_round_trip(tmp_path):
    pairs = [make_pair(seed=s) for s in range(4)]
    config = bitmix.MixConfig(gamma=0.25, method=bitmix.MixMethod.BITMIX, seed=11)
    batch = bitmix.assemble_batch(pairs, config)
    images = batch.images()
    labels = batch.labels()
    assert images.shape == (8, 32, 32) and images.dtype == np.uint8
    assert labels.shape == (8,)
    assert np.allclose(labels[:4] + labels[4:], 1.0)
    methods = [p.method for p in batch.provenance]
    assert methods.count(bitmix.MixMethod.BITMIX) == 2  # half of 4

    blob = bitmix.write_batch(batch)
    back = bitmix.read_batch(blob)
    assert np.array_equal(back.images(), images)
    assert np.array_equal(back.labels(), labels)

    path = tmp_path / "batch.bmix"
    bitmix.write_batch_file(batch, path)
    assert np.array_equal(bitmix.read_batch_file(path).images(), images)


def test_mixup_is_float():
    pair = make_pair()
    config = bitmix.MixConfig(method=bitmix.MixMethod.MIXUP, apply_fraction=1.0, seed=2)
    batch = bitmix.assemble_batch([pair, pair], config)
    assert batch.images().dtype == np.float32


def test_metrics_hand_values():
    samples = [
        bitmix.ScoredSample(0.1, False),
        bitmix.ScoredSample(0.4, False),
        bitmix.ScoredSample(0.3, True),
        bitmix.ScoredSample(0.9, True),
    ]
    assert bitmix.p_e(samples) == 0.25
    assert bitmix.auc(samples) == 0.75
    with pytest.raises(bitmix.BitmixError):
        bitmix.p_e([bitmix.ScoredSample(0.5, True)])


def test_lambda_distribution_smoke():
    pool = [make_pair(size=64, seed=s) for s in range(4)]
    hist = bitmix.lambda_distribution(pool, gamma=0.25, n_samples=500, bins=20, seed=9)
    assert hist.total == 500
    assert sum(hist.counts) == 500
    freqs = hist.frequencies()
    assert abs(sum(freqs) - 1.0) < 1e-9
    # concentration: nothing far above the maximum area fraction
    assert sum(c for edge, c in zip(hist.bin_edges, hist.counts) if edge >= 0.4) == 0


def test_d4_transforms():
    arr = np.arange(6, dtype=np.uint8).reshape(2, 3)
    img = bitmix.GrayImage(arr)
    rotated = bitmix.apply_d4(img, bitmix.D4Transform.ROT90)
    assert (rotated.width, rotated.height) == (2, 3)
    back = bitmix.apply_d4(rotated, bitmix.d4_inverse(bitmix.D4Transform.ROT90))
    assert np.array_equal(back.to_numpy(), arr)
