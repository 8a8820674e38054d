import numpy as np
import pytest

from csis.descipher import (
    DesKey,
    decrypt_payload,
    des_decrypt_block,
    des_decrypt_blocks,
    des_encrypt_block,
    des_encrypt_blocks,
    encrypt_payload,
    framed_length,
)
from csis.errors import ConfigurationError, FramingError

pytest.importorskip("cryptography.hazmat.decrepit.ciphers.algorithms")
from oracles import reference_des  # noqa: E402


def test_classic_worked_example():
    k = DesKey("133457799BBCDFF1")
    assert des_encrypt_block(0x0123456789ABCDEF, k) == 0x85E813540F0AB405
    assert des_decrypt_block(0x85E813540F0AB405, k) == 0x0123456789ABCDEF


@pytest.mark.parametrize(
    "key, plain, cipher",
    [
        # FIPS-era validation vectors (NBS SP 500-20 variable-plaintext / key tables)
        ("0101010101010101", "8000000000000000", "95F8A5E5DD31D900"),
        ("0101010101010101", "0000000000000001", "166B40B44ABA4BD6"),
        ("8001010101010101", "0000000000000000", "95A8D72813DAA94D"),
        ("0E329232EA6D0D73", "8787878787878787", "0000000000000000"),
    ],
)
def test_published_vectors(key, plain, cipher):
    k = DesKey(key)
    assert des_encrypt_block(int(plain, 16), k) == int(cipher, 16)


def test_matches_reference_implementation(rng):
    keys = rng.integers(0, 256, (120, 8), dtype=np.uint8)
    plains = rng.integers(0, 256, (120, 8), dtype=np.uint8)
    for kb, pb in zip(keys, plains):
        k = DesKey(kb.tobytes())
        got = des_encrypt_block(int.from_bytes(pb.tobytes(), "big"), k)
        assert got.to_bytes(8, "big") == reference_des(kb.tobytes(), pb.tobytes())


def test_parity_bits_ignored():
    a = DesKey("133457799BBCDFF1")
    b = DesKey(a.value ^ 0x0101010101010101)
    assert des_encrypt_block(42, a) == des_encrypt_block(42, b)


def test_vector_path_matches_scalar(rng, des_key):
    blocks = rng.integers(0, 2**63, 50, dtype=np.uint64) * np.uint64(2) + np.uint64(1)
    enc = des_encrypt_blocks(blocks, des_key)
    assert [int(e) for e in enc] == [des_encrypt_block(int(b), des_key) for b in blocks]
    assert np.array_equal(des_decrypt_blocks(enc, des_key), blocks)


def test_bijective_on_samples(rng, des_key):
    blocks = np.unique(rng.integers(0, 2**63, 10_000, dtype=np.uint64))
    enc = des_encrypt_blocks(blocks, des_key)
    assert np.unique(enc).size == blocks.size


@pytest.mark.parametrize("bad", ["1234", "zz3457799BBCDFF1", b"short"])
def test_bad_keys(bad):
    with pytest.raises(ConfigurationError):
        DesKey(bad)


def test_frame_lengths(des_key):
    assert encrypt_payload([], des_key).size == 64
    assert encrypt_payload([1], des_key).size == 128
    for n in (0, 1, 63, 64, 65, 1000):
        assert framed_length(n) == 64 * -(-(64 + n) // 64)
        assert encrypt_payload(np.ones(n, np.uint8), des_key).size == framed_length(n)


@pytest.mark.parametrize("n", [0, 1, 63, 64, 65, 10_000])
def test_payload_roundtrip(rng, des_key, n):
    bits = rng.integers(0, 2, n, dtype=np.uint8)
    ct = encrypt_payload(bits, des_key)
    assert np.array_equal(decrypt_payload(ct, des_key), bits)
    # trailing garbage from the extraction stream is ignored
    noisy = np.concatenate([ct, rng.integers(0, 2, 77, dtype=np.uint8)])
    assert np.array_equal(decrypt_payload(noisy, des_key), bits)


def test_payload_roundtrip_sweep(des_key):
    src = np.random.default_rng(5).integers(0, 2, 2048, dtype=np.uint8)
    for n in range(2049):
        assert np.array_equal(decrypt_payload(encrypt_payload(src[:n], des_key), des_key), src[:n])


def test_truncated_ciphertext(des_key):
    ct = encrypt_payload(np.ones(200, np.uint8), des_key)
    with pytest.raises(FramingError):
        decrypt_payload(ct[:-64], des_key)
    with pytest.raises(FramingError):
        decrypt_payload(ct[:40], des_key)


def test_wrong_key(rng, des_key):
    parsed = framing = 0
    for _ in range(100):
        bits = rng.integers(0, 2, 512, dtype=np.uint8)
        ct = encrypt_payload(bits, des_key)
        wrong = DesKey(rng.integers(0, 256, 8, dtype=np.uint8).tobytes())
        try:
            out = decrypt_payload(ct, wrong)
        except FramingError:
            framing += 1
            continue
        parsed += 1
        if out.size == bits.size:
            assert np.count_nonzero(out != bits) / bits.size >= 0.20
    assert framing + parsed == 100 and framing >= 95
