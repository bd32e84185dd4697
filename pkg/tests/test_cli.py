import os
import re
import subprocess
import sys

import pytest

from grcs import cli, cscrypt, wire


def run(*argv):
    try:
        return cli.main([str(a) for a in argv])
    except SystemExit as exc:
        return exc.code


@pytest.fixture(scope="module")
def keyfiles(tmp_path_factory):
    d = tmp_path_factory.mktemp("keys")
    pub, sec = d / "pub.grcs", d / "sec.grcs"
    assert run("keygen", "--out-pub", pub, "--out-sec", sec, "--insecure-seed", 5) == 0
    return pub, sec


def _key_sizes(sk):
    p = sk.params
    pub = 6 + 2 + (p.n.bit_length() + 7) // 8 + 2 + 1 + 1 + len(p.hash_id) + 5 * 1080
    sec = pub + sum(2 + (x.bit_length() + 7) // 8 for x in (sk.x1, sk.x2, sk.y1, sk.y2, sk.z)) + 1080
    return pub, sec


def test_keygen_default_sizes(keyfiles):
    pub, sec = keyfiles
    sk = wire.read_key(sec)
    assert isinstance(sk, cscrypt.SecretKey)
    assert wire.read_key(pub) == sk.pk
    expected_pub, expected_sec = _key_sizes(sk)
    assert expected_pub == 5461
    assert pub.stat().st_size == expected_pub
    assert sec.stat().st_size == expected_sec


def test_insecure_seed_warns_and_is_deterministic(tmp_path, capsys):
    blobs = []
    for i in range(2):
        pub, sec = tmp_path / f"p{i}", tmp_path / f"s{i}"
        assert run("keygen", "--out-pub", pub, "--out-sec", sec, "--k", 2, "--factors", 2, "--insecure-seed", 9) == 0
        blobs.append(sec.read_bytes())
    assert "WARNING" in capsys.readouterr().err
    assert blobs[0] == blobs[1]


def test_keygen_k1_commutes(tmp_path):
    pub, sec = tmp_path / "p", tmp_path / "s"
    assert run("keygen", "--out-pub", pub, "--out-sec", sec, "--k", 1, "--factors", 2, "--n", "1e20") == 0
    pk = wire.read_key(pub)
    assert pk.params.k == 1 and pk.params.n == 10 ** 20
    assert pk.M1 @ pk.M2 == pk.M2 @ pk.M1


@pytest.mark.parametrize("argv", [
    ["keygen", "--out-pub", "p", "--out-sec", "s", "--n", "1"],
    ["keygen", "--out-pub", "p", "--out-sec", "s", "--k", "0"],
    ["keygen", "--out-pub", "p"],
    ["keygen", "--out-pub", "p", "--out-sec", "s", "--bogus"],
    ["ddh", "--trials", "0"],
    ["mask", "--trials", "-3"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_1(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(*argv) == 1
    assert not (tmp_path / "p").exists()


def test_round_trip_multi_chunk(keyfiles, tmp_path):
    pub, sec = keyfiles
    src, ct, out = tmp_path / "m", tmp_path / "c", tmp_path / "o"
    data = os.urandom(3 * 376 + 17)
    src.write_bytes(data)
    assert run("encrypt", "--pub", pub, "--in", src, "--out", ct) == 0
    assert ct.stat().st_size == 4 * wire.CIPHERTEXT_LEN
    assert run("decrypt", "--sec", sec, "--in", ct, "--out", out) == 0
    assert out.read_bytes() == data


def test_round_trip_empty(keyfiles, tmp_path):
    pub, sec = keyfiles
    src, ct, out = tmp_path / "m", tmp_path / "c", tmp_path / "o"
    src.write_bytes(b"")
    assert run("encrypt", "--pub", pub, "--in", src, "--out", ct) == 0
    assert run("decrypt", "--sec", sec, "--in", ct, "--out", out) == 0
    assert out.read_bytes() == b""


@pytest.mark.parametrize("where, how", [
    (6 + 3 * 1080 + 5, "residue"),   # v of the first record
    (6 + 10, "residue"),             # u1
    (wire.CIPHERTEXT_LEN + 6 + 2 * 1080 + 99, "residue"),  # e of the second record
    (6 + 4 * 1080 - 1, "xor"),       # out-of-range coefficient
])
def test_tampered_file_rejected(keyfiles, tmp_path, capsys, where, how):
    pub, sec = keyfiles
    src, ct, out = tmp_path / "m", tmp_path / "c", tmp_path / "o"
    src.write_bytes(os.urandom(500))
    assert run("encrypt", "--pub", pub, "--in", src, "--out", ct) == 0
    blob = bytearray(ct.read_bytes())
    blob[where] = (blob[where] + 1) % 7 if how == "residue" else blob[where] ^ 0xFF
    ct.write_bytes(bytes(blob))
    capsys.readouterr()
    assert run("decrypt", "--sec", sec, "--in", ct, "--out", out) == 2
    assert capsys.readouterr().err.strip() == "reject"
    assert not out.exists()
    assert [p.name for p in tmp_path.iterdir() if p.name.startswith(".grcs-")] == []


def test_decrypt_with_public_key_is_format_error(keyfiles, tmp_path):
    pub, _ = keyfiles
    (tmp_path / "c").write_bytes(b"")
    assert run("decrypt", "--sec", pub, "--in", tmp_path / "c", "--out", tmp_path / "o") == 4


def test_missing_file_is_io_error(keyfiles, tmp_path):
    pub, _ = keyfiles
    assert run("encrypt", "--pub", pub, "--in", tmp_path / "nope", "--out", tmp_path / "o") == 3


def test_encode_decode_commands(tmp_path):
    src, mat, out = tmp_path / "m", tmp_path / "mat", tmp_path / "o"
    src.write_bytes(b"group ring payload")
    assert run("encode", "--in", src, "--out", mat) == 0
    assert mat.stat().st_size == 1080
    assert run("decode", "--in", mat, "--out", out) == 0
    assert out.read_bytes() == b"group ring payload"
    src.write_bytes(bytes(377))
    assert run("encode", "--in", src, "--out", mat) == 4


def test_experiment_commands_deterministic(tmp_path, capsys):
    for cmd in ("ddh", "mask"):
        paths = [tmp_path / f"{cmd}{i}.csv" for i in range(2)]
        for p in paths:
            assert run(cmd, "--trials", 3, "--seed", 42, "--out", p, "--control-runs", 5) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()
        lines = paths[0].read_text().splitlines()
        assert len(lines) == 1082 and lines[-1].startswith("# summary:")
        printed = capsys.readouterr().out
        assert "max_qq_deviation=" in printed
        assert "range_small=[1e22,1e27)" in printed
        if cmd == "ddh":
            assert "range_large=[1e44,1e54)" in printed


def test_experiment_svg(tmp_path):
    svg = tmp_path / "qq.svg"
    assert run("mask", "--trials", 2, "--seed", 1, "--svg", svg, "--control-runs", 2) == 0
    assert svg.read_text().startswith("<svg")


def test_inspect_public_and_secret(keyfiles, capsys):
    pub, sec = keyfiles
    capsys.readouterr()
    assert run("inspect", "--in", pub) == 0
    out = capsys.readouterr().out
    for key in ("kind=public_key", "version=1", f"n={10 ** 100}", "k=100", "factors=20", "hash_id=GRCS-a1"):
        assert key in out
    assert run("inspect", "--in", sec) == 0
    out = capsys.readouterr().out
    sk = wire.read_key(sec)
    assert "kind=secret_key" in out and str(sk.x1) not in out and "hidden" in out
    assert run("inspect", "--in", sec, "--reveal") == 0
    assert f"x1={sk.x1}" in capsys.readouterr().out


def test_inspect_ciphertext_density(keyfiles, tmp_path, capsys):
    pub, _ = keyfiles
    src, ct = tmp_path / "m", tmp_path / "c"
    src.write_bytes(os.urandom(100))
    assert run("encrypt", "--pub", pub, "--in", src, "--out", ct) == 0
    capsys.readouterr()
    assert run("inspect", "--in", ct) == 0
    out = capsys.readouterr().out
    assert "kind=ciphertext" in out and "records=1" in out
    means = [float(m) for m in re.findall(r"density mean=([0-9.]+)", out)]
    assert len(means) == 4 and all(abs(m - 6 / 7) < 0.05 for m in means)


def test_inspect_truncated(keyfiles, tmp_path, capsys):
    pub, _ = keyfiles
    bad = tmp_path / "bad"
    bad.write_bytes(pub.read_bytes()[:100])
    assert run("inspect", "--in", bad) != 0
    assert capsys.readouterr().err


def test_bench_output(capsys):
    assert run("bench", "--reps", 5) == 0
    out = capsys.readouterr().out.strip().splitlines()
    values = dict(line.split("=") for line in out)
    for kernel in ("gring_mul", "mat_mul", "mat_pow_333", "mat_pow_666"):
        assert float(values[f"{kernel}_ops_per_sec"]) > 0
        assert float(values[f"{kernel}_median_s"]) > 0
    ratio = float(values["mat_pow_666_median_s"]) / float(values["mat_pow_333_median_s"])
    assert ratio <= 2.5


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "grcs", "keygen", "--out-pub", "x"],
                          capture_output=True, text=True)
    assert proc.returncode == 1


@pytest.mark.slow
def test_one_megabyte_round_trip(keyfiles, tmp_path):
    pub, sec = keyfiles
    src, ct, out = tmp_path / "m", tmp_path / "c", tmp_path / "o"
    data = os.urandom(1 << 20)
    src.write_bytes(data)
    assert run("encrypt", "--pub", pub, "--in", src, "--out", ct) == 0
    assert run("decrypt", "--sec", sec, "--in", ct, "--out", out) == 0
    assert out.read_bytes() == data
