import json
import os
import subprocess
import sys

import numpy as np
import pytest

from ghostgrover import _accel
from ghostgrover.walsh import fwht

needs_numba = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not importable")


@needs_numba
@pytest.mark.parametrize("n", [1, 2, 64, 4096])
def test_backends_bit_identical(n):
    x = np.random.default_rng(n).normal(size=(3, n))
    a = _accel.fwht_rows_numpy(x.copy())
    b = _accel.fwht_rows_numba(x.copy())
    assert a.tobytes() == b.tobytes()


def test_unknown_backend():
    with pytest.raises(ValueError):
        _accel.fwht_rows(np.zeros((1, 2)), "cuda")


def test_set_num_threads_validates():
    with pytest.raises(ValueError):
        _accel.set_num_threads(0)
    assert _accel.set_num_threads(1) == 1


def _probe(env_value):
    env = dict(os.environ)
    if env_value is None:
        env.pop("GHOSTGROVER_DISABLE_NUMBA", None)
    else:
        env["GHOSTGROVER_DISABLE_NUMBA"] = env_value
    code = ("import json, numpy as np; from ghostgrover import _accel; "
            "from ghostgrover.walsh import fwht; "
            "print(json.dumps([_accel.active_backend(), fwht(np.arange(8.0)).tolist()]))")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout
    return json.loads(out)


def test_env_flag_selects_numpy():
    backend, vals = _probe("1")
    assert backend == "numpy"
    assert vals == fwht(np.arange(8.0)).tolist()


@needs_numba
@pytest.mark.parametrize("value", [None, "", "0"])
def test_env_flag_unset_uses_numba(value):
    assert _probe(value)[0] == "numba"


def test_benchmark_script_runs(tmp_path):
    import pathlib
    script = pathlib.Path(__file__).resolve().parents[1] / "benchmarks" / "bench_fwht.py"
    out = tmp_path / "bench.json"
    proc = subprocess.run([sys.executable, str(script), "--sizes", "4", "--rows", "1",
                           "--repeat", "2", "--json", str(out)],
                          capture_output=True, text=True, check=True)
    assert "speedup" in proc.stdout
    assert json.loads(out.read_text())[0]["length"] == 16
