import json

import numpy as np
import pytest

from advwave.cli import (ConfigError, RunConfig, default_cfl, flux_params,
                         load_config, main, validate_config)


def write_config(tmp_path, name="cfg.json", **overrides):
    cfg = {"problem": "periodic1d", "q": 2, "flux": "sommerfeld",
           "w": 0.5, "c": 1.0, "n": 8, "T": 0.1}
    cfg.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


# --- config ---------------------------------------------------------------------

def test_load_valid_config(tmp_path):
    cfg = load_config(write_config(tmp_path))
    assert cfg.problem == "periodic1d"
    assert cfg.dim == 1
    assert flux_params(cfg).dissipative


def test_unknown_field_rejected(tmp_path):
    with pytest.raises(ConfigError, match="bogus"):
        load_config(write_config(tmp_path, bogus=1))


@pytest.mark.parametrize("overrides,field", [
    ({"problem": "nope"}, "problem"),
    ({"q": 0}, "q"),
    ({"s": 5}, "s"),
    ({"flux": "roe"}, "flux"),
    ({"c": -1.0}, "c"),
    ({"w": [0.5, 0.5]}, "w"),
    ({"n": 1}, "n"),
    ({"T": -0.1}, "T"),
    ({"cfl": 0.0}, "cfl"),
    ({"n_list": [4]}, "n_list"),
    ({"xi": -1.0}, "xi"),
    ({"dim": 2}, "dim"),
])
def test_invalid_configs(tmp_path, overrides, field):
    with pytest.raises(ConfigError, match=field):
        load_config(write_config(tmp_path, **overrides))


def test_nested_flux_object(tmp_path):
    cfg = load_config(write_config(
        tmp_path, flux={"preset": "custom", "sigma": 0.6, "eta": 0.1}))
    p = flux_params(cfg)
    assert p.sigma == 0.6
    assert p.eta == 0.1
    assert p.xi == 1.0  # defaults to c


def test_not_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("not json {")
    with pytest.raises(ConfigError):
        load_config(str(path))


def test_default_cfl_table():
    two_pi = 2 * np.pi
    cases = [
        (dict(problem="periodic1d", q=3, flux="central"), 0.075 / two_pi),
        (dict(problem="periodic1d", q=3, flux="sommerfeld"), 0.1125 / two_pi),
        (dict(problem="periodic1d", q=3, flux="sommerfeld", w=2.0), 0.075 / two_pi),
        (dict(problem="periodic1d", q=6, flux="central"), 0.00375 / two_pi),
        (dict(problem="periodic1d", q=6, flux="sommerfeld"), 0.01125 / two_pi),
        (dict(problem="periodic2d", q=2, flux="central", w=[0.5, 0.5]), 0.075 / two_pi),
        (dict(problem="periodic2d", q=2, flux="sommerfeld", w=[0.5, 0.5]), 0.0375 / two_pi),
        (dict(problem="mixed2d", q=2, flux="sommerfeld", w=[0.5, 0.5]), 0.075 / two_pi),
    ]
    for overrides, expect in cases:
        cfg = RunConfig(**overrides)
        validate_config(cfg)
        assert default_cfl(cfg, flux_params(cfg)) == pytest.approx(expect)


# --- subcommands ----------------------------------------------------------------

def test_run_smoke(tmp_path):
    path = write_config(tmp_path, n=10, T=0.05)
    out = tmp_path / "out"
    assert main(["run", "--config", path, "--output", str(out)]) == 0
    assert (out / "run.csv").exists()
    summary = json.loads((out / "summary.json").read_text())
    assert np.isfinite(summary["err_u"])
    assert summary["n_steps"] * summary["dt"] == pytest.approx(0.05, abs=1e-12)
    header = (out / "run.csv").read_text().splitlines()[0]
    assert header == "step,t,energy,err_u,err_v"


def test_run_t_zero_projection_error(tmp_path):
    path = write_config(tmp_path, T=0.0, n=16, lift=False)
    out = tmp_path / "t0"
    assert main(["run", "--config", path, "--output", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert 0 < summary["err_u"] < 1e-2  # pure projection error


def test_run_determinism(tmp_path):
    path = write_config(tmp_path, n=10, T=0.05)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    main(["run", "--config", path, "--output", str(out1), "--seed", "3"])
    main(["run", "--config", path, "--output", str(out2), "--seed", "3"])
    assert (out1 / "run.csv").read_bytes() == (out2 / "run.csv").read_bytes()


def test_config_error_exit_code(tmp_path):
    path = write_config(tmp_path, q=0)
    assert main(["run", "--config", path, "--output", str(tmp_path)]) == 2
    assert main(["run", "--config", str(tmp_path / "missing.json"),
                 "--output", str(tmp_path)]) == 2


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_instability_exit_code(tmp_path):
    # dt far beyond the RK4 stability limit
    path = write_config(tmp_path, q=4, n=40, T=30.0, dt=0.5)
    with pytest.warns(UserWarning):
        code = main(["run", "--config", path, "--output", str(tmp_path / "u")])
    assert code == 3


def test_converge_smoke_and_worker_determinism(tmp_path):
    path = write_config(tmp_path, T=0.05, n_list=[4, 6, 8])
    out1, out2 = tmp_path / "w1", tmp_path / "w2"
    assert main(["converge", "--config", path, "--output", str(out1)]) == 0
    assert main(["converge", "--config", path, "--output", str(out2),
                 "--workers", "2"]) == 0
    assert (out1 / "errors.csv").read_bytes() == (out2 / "errors.csv").read_bytes()
    assert (out1 / "rates.csv").read_bytes() == (out2 / "rates.csv").read_bytes()
    header = (out1 / "rates.csv").read_text().splitlines()[0]
    assert header == "q,s,flux,w,c,rate_u,rate_v"


def test_energy_audit_pass_and_fail(tmp_path):
    path = write_config(tmp_path, n=6)
    assert main(["energy", "--config", path,
                 "--output", str(tmp_path / "e")]) == 0
    # an unreachable tolerance forces the audit-failure exit code
    path = write_config(tmp_path, name="tight.json", n=6, energy_tol=1e-22)
    assert main(["energy", "--config", path,
                 "--output", str(tmp_path / "e2")]) == 4


def test_energy_csv_shape(tmp_path):
    path = write_config(tmp_path, n=6, n_states=5)
    out = tmp_path / "ecsv"
    main(["energy", "--config", path, "--output", str(out)])
    lines = (out / "energy.csv").read_text().splitlines()
    assert lines[0] == "state,operator_rate,face_rate,residual"
    assert len(lines) == 6


def test_spectrum_smoke(tmp_path):
    path = write_config(tmp_path, n_list=[4, 8])
    out = tmp_path / "s"
    assert main(["spectrum", "--config", path, "--output", str(out)]) == 0
    lines = (out / "spectrum.csv").read_text().splitlines()
    assert lines[0] == "q,n,h,radius"
    r4 = float(lines[1].split(",")[3])
    r8 = float(lines[2].split(",")[3])
    assert r8 / r4 == pytest.approx(2.0, rel=0.2)


def test_seed_and_output_from_config(tmp_path):
    outdir = tmp_path / "from_config"
    path = write_config(tmp_path, n=6, output_dir=str(outdir), seed=7)
    assert main(["energy", "--config", path]) == 0
    assert (outdir / "energy.csv").exists()
