"""Smoke test for the Python extension module.

Build and install first, e.g. ``maturin build --release -m crates/python/Cargo.toml``
followed by ``pip install`` of the produced wheel, then run ``python python/smoke_test.py``.
"""

import itertools
import json

import memcompute_py as mc


def brute(elements, s):
    return sum(
        1
        for r in range(1, len(elements) + 1)
        for combo in itertools.combinations(elements, r)
        if sum(combo) == s
    )


def main():
    g = mc.IntegerSet([1, 2, 3])
    assert len(g) == 3 and g.f_max == 6 and g.samples == 13

    spectrum = mc.full_spectrum(g)
    assert spectrum.get(3) == 2
    assert spectrum.total() == 7
    assert spectrum.support() == {1: 1, 2: 1, 3: 2, 4: 1, 5: 1, 6: 1}
    assert spectrum.to_csv().startswith("f,count\n-6,0\n")

    g = mc.IntegerSet.parse("# sample\n4\n-1\n7\n2\n-5\n9\n")
    for s in range(-8, 23):
        want = brute(g.elements, s)
        assert mc.goertzel_count(g, s) == want, s
        assert mc.count_subsets(g, s, "fft") == want
        assert mc.solve_decision(g, s, "dp") == (want > 0)
        found = mc.recover_subset(g, s)
        if want:
            subset, evaluations = found
            assert sum(subset) == s and evaluations <= len(g)
        else:
            assert found is None

    window = mc.spectrum_window(g, -3, 3)
    assert window.counts() == mc.analyzer_spectrum(g, -3, 3).counts()
    assert abs(mc.chain_output(g, 0.0) - (2 ** len(g) - 1)) < 1e-9
    assert abs(mc.eval_g(g, 5, g.samples) - mc.chain_output(g, 5 / g.samples)) < 1e-9

    outcome = mc.dcram_ssp(mc.IntegerSet([1, 2, 3]), 3)
    assert outcome["found"] and outcome["iteration"] is not None
    assert mc.memprocessor_count(5, 2) == 20

    census = mc.overhead_census(mc.IntegerSet([1, -1]))
    assert census["mass"] == 4.0 and census["support_size"] == 3
    assert census["amplitudes"][0] == 2.0
    assert mc.self_information(1024) == 10.0

    tm = mc.TuringMachine.from_json(
        json.dumps(
            {
                "states": ["inc", "done"],
                "alphabet": ["_", "1"],
                "blank": "_",
                "input_alphabet": ["1"],
                "transitions": [["inc", "1", "inc", "1", "R"], ["inc", "_", "done", "1", "N"]],
                "initial": "inc",
                "finals": ["done"],
            }
        )
    )
    direct = tm.run_direct("11")
    assert direct == tm.run_embedded("11")
    assert direct[-1] == ("done", 2, "111")

    for bad in ([], [0], [3, 3]):
        try:
            mc.IntegerSet(bad)
        except ValueError:
            pass
        else:
            raise AssertionError(f"{bad} accepted")
    assert len(mc.IntegerSet([3, 3], allow_duplicates=True)) == 2

    print("python smoke test passed")


if __name__ == "__main__":
    main()
