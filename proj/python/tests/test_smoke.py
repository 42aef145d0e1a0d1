"""Smoke tests for the python bindings."""

import pytest

try:
    import matrixkpd as kpd
except ImportError:
    import _matrixkpd as kpd


@pytest.fixture(scope="module")
def deployment():
    params = kpd.SchemeParams.make("or-ddhv", 251, 8, 16, seed=42)
    return kpd.setup(params)


def test_params():
    p = kpd.SchemeParams.make("or-ddhv", 251, 8, 16, seed=42)
    assert p.scheme == "or-ddhv"
    assert p.m == 8
    assert p.payload_elements() == 2
    assert kpd.validate_params(p) == []
    with pytest.raises(ValueError):
        kpd.SchemeParams.make("or-ddhv", 251, 8, 17)


def test_key_agreement(deployment):
    oracle = deployment.oracle_key_matrix()
    for i in range(4):
        for j in range(i, 16):
            kij, mults_ij = kpd.derive_key(deployment, i, j)
            kji, mults_ji = kpd.derive_key(deployment, j, i)
            assert kij == kji == oracle[i][j]
            assert mults_ij == mults_ji == 2


def test_handshake_meter(deployment):
    msg = kpd.encode_message(deployment, 3)
    key, meter = kpd.handshake(deployment, 5, msg)
    assert meter["mults"] == 2
    assert meter["comm_bits"] == 2 * 8  # two elements of ceil(log2 251) bits
    key_back, _ = kpd.handshake(deployment, 3, kpd.encode_message(deployment, 5))
    assert key == key_back


def test_corrupted_message_rejected(deployment):
    msg = bytearray(kpd.encode_message(deployment, 3))
    msg[0] = 0x7F
    with pytest.raises(ValueError):
        kpd.handshake(deployment, 5, bytes(msg))


def test_run_all_pairs(deployment):
    report = kpd.run_all_pairs(deployment)
    assert report["all_keys_match"] is True
    assert report["pairs_tested"] == 16 * 15 // 2
    assert report["mults_per_key"] == 2


def test_recover(deployment):
    full = kpd.recover(deployment, list(range(16)))
    assert full["unknown_count"] == 36
    if full["recovered"]:
        assert full["d_candidate"] == deployment.master_d
    partial = kpd.recover(deployment, [0])
    assert partial["nullspace_dim"] >= 1
    assert not partial["recovered"]


def test_security_experiment():
    params = kpd.SchemeParams.make("or-ddhv", 251, 8, 16, seed=7)
    stats = kpd.security_experiment(params, 8, 25)
    assert stats["trials"] == 25
    assert sum(stats["rank_histogram"].values()) == 25
    assert 0.0 <= stats["full_recovery_fraction"] <= 1.0
