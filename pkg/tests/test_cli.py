import io
import json

import pytest

from cohomtools.cli import main


def run(*argv):
    buf = io.StringIO()
    code = main(list(argv), out=buf)
    return code, buf.getvalue()


def test_decompose_g2_j2():
    code, out = run("decompose", "--preset", "g2c-g2", "--j", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["gradation"] == {"1": 8, "2": 2}


def test_decompose_so_n1():
    code, out = run("decompose", "--preset", "so-2-np2", "--n", "1", "--j", "1", "--format", "json")
    assert code == 0 and json.loads(out)["dims"]["n"] == 3


def test_decompose_text():
    code, out = run("decompose", "--preset", "sl3c-su3", "--j", "1")
    assert code == 0 and "level 1: dim 4" in out


@pytest.mark.parametrize("argv", [
    ("decompose", "--preset", "g2c-g2", "--j", "3"),
    ("decompose", "--preset", "nope", "--j", "1"),
    ("decompose", "--preset", "so-2-np2", "--j", "1"),
    ("decompose", "--preset", "g2c-g2", "--j", "x"),
    ("nilcheck", "--preset", "g2c-g2", "--j", "1", "--v", "garbage"),
    ("nilcheck", "--preset", "g2c-g2", "--j", "1", "--v", "rows:" + json.dumps([[int(i == 2) for i in range(28)]])),
    ("nilcheck", "--preset", "g2c-g2", "--j", "2", "--v", "root:3a1+a2", "--frame", "2"),
    ("nilcheck", "--preset", "g2c-g2", "--j", "1", "--v", "full", "--samples", "0"),
    ("verify-paper", "--n", "3"),
    ("frobnicate",),
    (),
])
def test_bad_arguments_exit_1(argv):
    assert run(*argv)[0] == 1


def test_nilcheck_full():
    code, out = run("nilcheck", "--preset", "g2c-g2", "--j", "1", "--v", "full", "--format", "json")
    assert code == 0 and json.loads(out)["singularOrbitDim"] == 10


def test_nilcheck_kahler_fails():
    assert run("nilcheck", "--preset", "g2c-g2", "--j", "1", "--v", "kahler:1/2")[0] == 3


def test_nilcheck_hint():
    code, out = run("nilcheck", "--preset", "g2c-g2", "--j", "2", "--v", "root:3a1+a2", "--format", "json")
    assert code == 0
    assert json.loads(out)["hint"] == "orbit-equivalent to H^Lambda_{1,1}"


def test_nilcheck_is_byte_identical():
    argv = ("nilcheck", "--preset", "so-2-np2", "--n", "2", "--j", "2", "--v", "tensor:e1f1,e2f1",
            "--format", "json", "--seed", "9")
    assert run(*argv) == run(*argv)


def test_dump_model():
    code, out = run("dump-model", "--preset", "sl3c-su3")
    assert code == 0 and json.loads(out)["schemaVersion"] == 1


def test_verify_restricted_preset():
    code, out = run("verify-paper", "--preset", "sl3c-su3")
    assert code == 0
    assert out.count("criterion") == 11 and "FAIL" not in out
