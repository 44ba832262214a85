"""Smoke test for the isingtsp Python module.

Run after `maturin develop -m crates/py/Cargo.toml`, or point ISINGTSP_SO at
a built libisingtsp_py.so.
"""

import importlib.machinery
import importlib.util
import os
import pathlib
import random
import sys

DATA = pathlib.Path(__file__).resolve().parent.parent / "data" / "tsplib"


def load_module():
    so = os.environ.get("ISINGTSP_SO")
    if not so:
        import isingtsp

        return isingtsp
    loader = importlib.machinery.ExtensionFileLoader("isingtsp", so)
    spec = importlib.util.spec_from_file_location("isingtsp", so, loader=loader)
    module = importlib.util.module_from_spec(spec)
    loader.exec_module(module)
    sys.modules["isingtsp"] = module
    return module


def main():
    it = load_module()

    rng = random.Random(3)
    small = it.Instance([(rng.uniform(0, 100), rng.uniform(0, 100)) for _ in range(9)], name="r9")
    length, tour = it.held_karp(small)
    assert sorted(tour) == list(range(9))
    assert small.tour_length(tour) == length

    berlin = it.Instance.load(str(DATA / "berlin52.tsp"))
    assert (berlin.name, berlin.dimension, berlin.edge_weight_type) == ("berlin52", 52, "EUC_2D")
    opt = it.parse_tour((DATA / "berlin52.opt.tour").read_text(), 52)
    assert berlin.tour_length(opt) == 7542

    sol = it.solve(berlin, max_cluster_size=12, bits=4, seed=1)
    assert sorted(sol.tour) == list(range(52))
    assert sol.tour_length == berlin.tour_length(sol.tour) >= 7542
    assert sol.macro_energy_pj > 0 and sol.order_updates > 0
    again = it.solve(berlin, max_cluster_size=12, bits=4, seed=1, threads=1)
    assert again.tour == sol.tour

    w = it.quantize([[0, 10, 40], [10, 0, 20], [40, 20, 0]], bits=4)
    assert w == [[0, 15, 4], [15, 0, 8], [4, 8, 0]]

    model = it.StochasticModel()
    probs = model.schedule()
    assert it.sweep_count() == 1340 and len(probs) == 1341
    assert abs(probs[0] - 0.20) < 1e-9 and abs(probs[-1] - 0.01) < 1e-9

    for bad in (lambda: it.solve(berlin, bits=5), lambda: it.Instance.parse("NAME : x\nEOF\n")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print(f"ok: berlin52 solved to {sol.tour_length} ({sol.tour_length / 7542:.3f}x optimum)")


if __name__ == "__main__":
    main()
