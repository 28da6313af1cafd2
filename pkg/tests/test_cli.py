"""
Command line: subcommands, printed results and exit codes.
"""
import pytest

from main import EXIT_DATA, EXIT_OK, EXIT_USAGE, format_mse, main
from src.imaging import read_mvi


@pytest.fixture
def clean_file(tmp_path):
    path = tmp_path / "clean.mvi"
    assert main(["generate", "eucl1-shapes", "--dims", "16", "16", "--seed", "1", "-o", str(path)]) == EXIT_OK
    return path


def test_mse_of_an_image_with_itself(clean_file, capsys):
    capsys.readouterr()
    assert main(["mse", "-a", str(clean_file), "-b", str(clean_file)]) == EXIT_OK
    assert capsys.readouterr().out == "0.000000\n"


def test_format_mse():
    assert format_mse(0.0) == "0.000000"
    assert format_mse(0.0123456789) == "0.0123457"


def test_noise_then_denoise(clean_file, tmp_path, capsys):
    noisy = tmp_path / "noisy.mvi"
    final = tmp_path / "final.mvi"
    oracle = tmp_path / "oracle.mvi"
    assert main(["noise", "-i", str(clean_file), "--sigma", "0.2", "--seed", "4", "-o", str(noisy)]) == EXIT_OK
    code = main([
        "denoise", "-i", str(noisy), "--sigma", "0.2", "--s1", "3", "--s2", "3", "--w1", "7", "--w2", "7",
        "--k1", "16", "--k2", "16", "-o", str(final), "--oracle-out", str(oracle),
    ])
    assert code == EXIT_OK
    assert read_mvi(final).dims == (16, 16)
    assert oracle.is_file()

    capsys.readouterr()
    main(["mse", "-a", str(clean_file), "-b", str(final)])
    denoised = float(capsys.readouterr().out)
    main(["mse", "-a", str(clean_file), "-b", str(noisy)])
    assert denoised < float(capsys.readouterr().out)


def test_nlmeans_and_render(clean_file, tmp_path):
    out = tmp_path / "nlm.mvi"
    assert main(["nlmeans", "-i", str(clean_file), "--s", "3", "--w", "5", "--k", "6", "-o", str(out)]) == EXIT_OK
    assert read_mvi(out).dims == (16, 16)
    picture = tmp_path / "nlm.ppm"
    assert main(["render", "-i", str(out), "-o", str(picture)]) == EXIT_OK
    assert picture.read_bytes()[:2] == b"P6"


def test_experiment_prints_one_line_per_image(tmp_path, capsys):
    code = main([
        "experiment", "eucl1-shapes", "--dims", "16", "16", "--sigma", "0.2", "--no-render", "-o", str(tmp_path),
    ])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert [line.split("\t")[0] for line in lines] == ["noisy", "oracle", "final"]
    assert all(float(line.split("\t")[1]) >= 0.0 for line in lines)


def test_data_errors_exit_with_two(clean_file, tmp_path):
    tensors = tmp_path / "tensors.mvi"
    assert main(["generate", "spd2-blocks", "--dims", "8", "8", "-o", str(tensors)]) == EXIT_OK
    noisy = tmp_path / "noisy.mvi"
    assert main(["noise", "-i", str(tensors), "--model", "said", "--sigma", "1.5", "-o", str(noisy)]) == EXIT_DATA
    assert main(["mse", "-a", str(tmp_path / "missing.mvi"), "-b", str(clean_file)]) == EXIT_DATA
    assert main(["mse", "-a", str(tensors), "-b", str(clean_file)]) == EXIT_DATA


def test_usage_errors_exit_with_one(clean_file, tmp_path):
    out = str(tmp_path / "x.mvi")
    assert main([]) == EXIT_USAGE
    assert main(["denoise", "-i", str(clean_file), "--sigma", "0.1", "--frobnicate", "-o", out]) == EXIT_USAGE
    assert main(["denoise", "-i", str(clean_file), "--sigma", "0.1", "--s1", "4", "-o", out]) == EXIT_USAGE
    assert main(["noise", "-i", str(clean_file), "--sigma", "-1", "-o", out]) == EXIT_USAGE
    assert main(["generate", "torus-waves", "-o", out]) == EXIT_USAGE
