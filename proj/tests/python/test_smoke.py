import math

import pytest

import complab


def test_riccati_bessel_l0():
    w = complab.riccati_bessel(0, 1.3)
    assert w["f"] == pytest.approx(math.sin(1.3), rel=1e-13)
    assert w["g"] == pytest.approx(math.cos(1.3), rel=1e-13)


def test_coulomb_wronskian():
    w = complab.coulomb_wave(2, -1.5, 7.0)
    assert w["fp"] * w["g"] - w["f"] * w["gp"] == pytest.approx(1.0, abs=1e-10)


def test_free_box_momenta_are_integers():
    ks = complab.find_box_momenta(complab.free_particle(0), math.pi, 10.5)
    assert ks == pytest.approx([float(i) for i in range(1, 11)], abs=1e-10)


def test_square_well_has_one_bound_state():
    assert len(complab.find_box_kappas(complab.square_well(-3, 2), 40)) == 1


def test_sawtooth():
    _, acc = complab.abel_sum(1.0, 1.0, 0.0, 10000)
    assert acc == pytest.approx((math.pi - 1) / 2, abs=1e-6)


def test_free_delta_closed_form():
    r, rp, K = 1.0, 1.7, 30.0
    expected = (math.sin(K * (r - rp)) / (r - rp) - math.sin(K * (r + rp)) / (r + rp)) / math.pi
    assert complab.coulomb_delta_kernel_free(r, rp, K) == pytest.approx(expected, rel=1e-12)


def test_kernel_box_free_vanishes():
    grid = [1.0, 2.5, 4.0]
    rows = complab.kernel_box(complab.free_particle(0), 5.0, grid, 50)
    assert max(abs(v) for row in rows for v in row) <= 1e-12


def test_benchmark_catalog_and_run(tmp_path):
    names = complab.benchmark_names()
    assert len(names) >= 8 and "bench-sw1" in names
    report = complab.run_benchmark("bench-free", tmp_path)
    assert report["passed"]
    assert (tmp_path / "report.csv").read_text().startswith("schema_version,1\n")


def test_unknown_key_is_a_config_error():
    with pytest.raises(complab.ConfigError, match="potental"):
        complab.run_config("[potental]\ndepth_energy = -3\n")
