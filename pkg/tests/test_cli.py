import subprocess
import sys

import numpy as np
import pytest

from conftest import HIDDEN, M, RECURSIVE_SHARES, syms
from recvc import BinaryImage, ShareContainer, parse_share, read_pbm, serialize_share, write_pbm
from recvc.cli import main


@pytest.fixture
def reference_inputs(tmp_path):
    paths = {}
    for name, text in [("m", M), ("m3", HIDDEN[2]), ("m2", HIDDEN[1]), ("m1", HIDDEN[0])]:
        paths[name] = tmp_path / f"{name}.txt"
        paths[name].write_text(text + "\n")
    return paths


def split_reference(tmp_path, inputs, seed="7", out="shares"):
    argv = ["split", "--input", str(inputs["m"]), "--hidden", str(inputs["m3"]),
            "--hidden", str(inputs["m2"]), "--hidden", str(inputs["m1"]),
            "--out-dir", str(tmp_path / out)]
    if seed is not None:
        argv += ["--seed", seed]
    assert main(argv) == 0
    return [tmp_path / out / f"share_{j}.rvcs" for j in (1, 2, 3)]


def combine(a, b, out, *extra):
    return main(["combine", str(a), str(b), "--out", str(out), *extra])


def test_split_combine_every_pair_every_level(tmp_path, reference_inputs, capsys):
    shares = split_reference(tmp_path, reference_inputs)
    report = capsys.readouterr().out
    assert "ternary_efficiency: 40/81" in report
    expected = dict(enumerate(list(HIDDEN) + [M], start=1))
    for a, b in [(0, 1), (0, 2), (1, 2), (2, 0)]:
        for k, msg in expected.items():
            out = tmp_path / f"out_{a}{b}{k}.txt"
            assert combine(shares[a], shares[b], out, "--level", str(k)) == 0
            assert out.read_text().strip() == msg


def test_combine_examples(tmp_path, reference_inputs):
    s1, s2, s3 = split_reference(tmp_path, reference_inputs)
    out = tmp_path / "m3.out"
    assert combine(s1, s3, out, "--level", "3") == 0
    assert out.read_text().strip() == "110101101"
    assert combine(s2, s3, out) == 0
    assert out.read_text().strip() == M
    assert combine(s1, s1, out) == 2


def test_combine_prebuilt_share_files(tmp_path, capsys):
    files = []
    for j, s in enumerate(RECURSIVE_SHARES, start=1):
        path = tmp_path / f"t{j}.rvcs"
        path.write_bytes(serialize_share(ShareContainer(j, "text", (1, 3, 9, 27), syms(s))))
        files.append(path)
    assert main(["combine", str(files[0]), str(files[2]), "--level", "3"]) == 0
    assert capsys.readouterr().out.strip() == "110101101"
    assert main(["verify", *map(str, files)]) == 0
    out = capsys.readouterr().out
    assert "status: consistent" in out
    for k, n in enumerate((1, 3, 9, 27), start=1):
        assert f"level {k}: {n} bits" in out
    assert main(["stats", str(files[1])]) == 0
    out = capsys.readouterr().out
    assert "40/81" in out and "8/27" in out and "raw_subpixel_expansion: 9" in out


def test_seed_is_deterministic(tmp_path, reference_inputs, capsys):
    first = split_reference(tmp_path, reference_inputs, out="a")
    second = split_reference(tmp_path, reference_inputs, out="b")
    assert "testing only" in capsys.readouterr().err
    for x, y in zip(first, second):
        assert x.read_bytes() == y.read_bytes()


def test_unseeded_split(tmp_path, reference_inputs):
    shares = split_reference(tmp_path, reference_inputs, seed=None)
    out = tmp_path / "o.txt"
    assert combine(shares[0], shares[1], out, "--level", "1") == 0
    assert out.read_text().strip() == "1"


def test_single_input_plain_sharing(tmp_path):
    src = tmp_path / "m.txt"
    src.write_text("1 0 1 1\n0")
    assert main(["split", "--input", str(src), "--out-dir", str(tmp_path / "s"), "--seed", "1"]) == 0
    c = parse_share((tmp_path / "s" / "share_2.rvcs").read_bytes())
    assert c.lengths == (5,) and c.kind == "text"


def test_raw_format(tmp_path):
    cover, hidden = tmp_path / "cover.bin", tmp_path / "hidden.bin"
    cover.write_bytes(b"abc")
    hidden.write_bytes(b"Z")
    assert main(["split", "--input", str(cover), "--hidden", str(hidden), "--format", "raw",
                 "--out-dir", str(tmp_path / "s")]) == 0
    out = tmp_path / "h.bin"
    s = tmp_path / "s"
    assert main(["combine", str(s / "share_3.rvcs"), str(s / "share_1.rvcs"), "--level", "1",
                 "--format", "raw", "--out", str(out)]) == 0
    assert out.read_bytes() == b"Z"
    assert main(["combine", str(s / "share_3.rvcs"), str(s / "share_2.rvcs"),
                 "--format", "raw", "--out", str(out)]) == 0
    assert out.read_bytes() == b"abc"


def test_bad_chain_length_exit_2(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    a.write_text("01010")
    b.write_text("01")
    assert main(["split", "--input", str(a), "--hidden", str(b), "--out-dir", str(tmp_path / "s")]) == 2
    assert "(2, 5)" in capsys.readouterr().err
    assert not (tmp_path / "s").exists()


def test_missing_input_exit_1(tmp_path):
    assert main(["split", "--input", str(tmp_path / "nope"), "--out-dir", str(tmp_path)]) == 1


def test_level_out_of_range_and_layout_mismatch(tmp_path, reference_inputs):
    s1, s2, _ = split_reference(tmp_path, reference_inputs)
    assert combine(s1, s2, tmp_path / "x", "--level", "5") == 2
    other = tmp_path / "other.rvcs"
    other.write_bytes(serialize_share(ShareContainer(3, "text", (3,), (0, 1, 2))))
    assert combine(s1, other, tmp_path / "x") == 2
    assert not (tmp_path / "x").exists()


def test_checksum_mismatch_exit_3(tmp_path, reference_inputs):
    s1, s2, _ = split_reference(tmp_path, reference_inputs)
    data = bytearray(s2.read_bytes())
    data[-1] ^= 0xFF
    s2.write_bytes(bytes(data))
    assert combine(s1, s2, tmp_path / "x") == 3


def test_verify_tampered_exit_4(tmp_path, reference_inputs, capsys):
    shares = split_reference(tmp_path, reference_inputs)
    c = parse_share(shares[0].read_bytes())
    symbols = list(c.symbols)
    symbols[4] = (symbols[4] + 1) % 3
    shares[0].write_bytes(serialize_share(ShareContainer(1, "text", c.lengths, symbols)))
    capsys.readouterr()
    assert main(["verify", *map(str, shares)]) == 4
    out = capsys.readouterr().out
    assert "status: inconsistent" in out
    assert "position: 4" in out


def test_verify_needs_all_three(tmp_path, reference_inputs):
    s1, s2, _ = split_reference(tmp_path, reference_inputs)
    assert main(["verify", str(s1), str(s2), str(s2)]) == 2


def write_img(path, rows):
    path.write_bytes(write_pbm(BinaryImage.from_array(rows), "P1"))
    return path


@pytest.fixture
def small_images(tmp_path):
    return {
        "top": write_img(tmp_path / "top.pbm", [[1, 0, 1], [0, 1, 0], [1, 0, 1]]),
        "mid": write_img(tmp_path / "mid.pbm", [[0, 1, 0]]),
        "small": write_img(tmp_path / "small.pbm", [[1]]),
    }


def img_split(tmp_path, images, *extra):
    return main(["img-split", "--image", str(images["top"]), "--hidden", str(images["mid"]),
                 "--hidden", str(images["small"]), "--out-dir", str(tmp_path / "vc"), *extra])


def test_img_split_and_combine(tmp_path, small_images):
    assert img_split(tmp_path, small_images, "--seed", "3") == 0
    vc = tmp_path / "vc"
    for j in (1, 2, 3):
        share = read_pbm((vc / f"share_{j}.pbm").read_bytes())
        assert share.shape == (9, 3)
        assert parse_share((vc / f"share_{j}.rvcs").read_bytes()).shapes == ((1, 1), (3, 1), (3, 3))
    cases = [((1, 2), 1, "small"), ((2, 3), 2, "mid"), ((1, 3), 3, "top"), ((3, 1), 1, "small")]
    for (a, b), k, name in cases:
        out = tmp_path / f"rec_{a}{b}{k}.pbm"
        assert main(["img-combine", str(vc / f"share_{a}.pbm"), str(vc / f"share_{b}.pbm"),
                     "--level", str(k), "--out", str(out)]) == 0
        assert read_pbm(out.read_bytes()) == read_pbm(small_images[name].read_bytes())
    out = tmp_path / "via_sidecar.pbm"
    assert main(["img-combine", str(vc / "share_1.rvcs"), str(vc / "share_2.rvcs"), "--level", "2",
                 "--out", str(out)]) == 0
    assert read_pbm(out.read_bytes()) == read_pbm(small_images["mid"].read_bytes())
    assert main(["img-combine", str(vc / "share_1.pbm"), str(vc / "share_2.pbm"), "--level", "4",
                 "--out", str(out)]) == 2


def test_stack(tmp_path, small_images):
    assert img_split(tmp_path, small_images) == 0
    vc = tmp_path / "vc"
    out = tmp_path / "stacked.pbm"
    assert main(["stack", str(vc / "share_1.pbm"), str(vc / "share_3.pbm"), "--out", str(out)]) == 0
    stacked = read_pbm(out.read_bytes())
    top = read_pbm(small_images["top"].read_bytes())
    blocks = stacked.pixels.reshape(3, 3, 3)
    assert np.array_equal(blocks.all(axis=2), top.pixels.astype(bool))
    assert main(["stack", str(vc / "share_2.pbm"), str(vc / "share_2.pbm"), "--out", str(out)]) == 0
    assert out.read_bytes() == (vc / "share_2.pbm").read_bytes()
    assert main(["stack", str(vc / "share_2.pbm"), str(small_images["top"]), "--out", str(out)]) == 2


def test_stack_all_white(tmp_path):
    src = write_img(tmp_path / "white.pbm", np.zeros((4, 5), dtype=np.uint8))
    assert main(["img-split", "--image", str(src), "--out-dir", str(tmp_path / "w")]) == 0
    out = tmp_path / "st.pbm"
    assert main(["stack", str(tmp_path / "w" / "share_1.pbm"), str(tmp_path / "w" / "share_2.pbm"),
                 "--out", str(out)]) == 0
    white = 3 - read_pbm(out.read_bytes()).pixels.reshape(4, 5, 3).sum(axis=2)
    assert np.all(white == 1)


def test_img_split_bad_ratio(tmp_path, small_images):
    assert main(["img-split", "--image", str(small_images["top"]), "--hidden", str(small_images["small"]),
                 "--out-dir", str(tmp_path / "vc")]) == 2


def test_module_entry_point(tmp_path, reference_inputs):
    shares = split_reference(tmp_path, reference_inputs)
    result = subprocess.run([sys.executable, "-m", "recvc", "stats", str(shares[0])],
                            capture_output=True, text=True)
    assert result.returncode == 0
    assert "binary_efficiency: 8/27" in result.stdout
    result = subprocess.run([sys.executable, "-m", "recvc", "combine", str(shares[0])],
                            capture_output=True, text=True)
    assert result.returncode == 2
