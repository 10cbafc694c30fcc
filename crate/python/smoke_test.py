"""Smoke test for the Python bindings.

Build first:  cd crates/py && maturin develop --release
Then run:     python python/smoke_test.py
"""

from fractions import Fraction

import weilform


def main():
    a1 = weilform.Lattice.builtin("A1")
    assert a1.rank == 1 and a1.discriminant_order == 2
    assert a1.class_norms() == ["0", "1/4"]
    gauss, expected, holds = weilform.milgram(a1)
    assert holds and gauss == "1+i", (gauss, expected)

    # ρ(T) on A1 is diag(1, e(1/4))
    t = weilform.weil_matrix(a1, "T")
    assert t[0][0] == "(1: 1; 1; 0)" and t[1][1] == "(4: 0,1; 1; 0)", t

    e8 = weilform.Lattice.builtin("E8")
    assert e8.discriminant_order == 1
    assert weilform.rep_number(e8, [["1"]], [0]) == 240
    doc = weilform.theta(e8, "3")
    assert "\n2 ; 0 ; 2160\n" in doc, doc

    # round trip through the JSON document
    g = weilform.Lattice.from_gram([[2, -1], [-1, 2]])
    assert weilform.Lattice.from_json(g.to_json()).hash == g.hash
    assert weilform.rep_number(g, [["1/3"]], [1]) == 3

    assert [Fraction(weilform.hurwitz(n)) for n in (3, 4, 12)] == [Fraction(1, 3), Fraction(1, 2), Fraction(4, 3)]
    assert "mock true" in weilform.zagier(8)

    index, basis, certified = weilform.witt([["2", "0", "0"], ["0", "-2", "0"], ["0", "0", "-2"]])
    assert index == 1 and certified and basis == [["1", "1", "0"]], basis

    try:
        weilform.witt([["1", "1"], ["1", "1"]])
    except weilform.WeilformError as e:
        assert "DegenerateForm" in str(e)
    else:
        raise AssertionError("degenerate form accepted")

    ok, report = weilform.run_verify(["milgram"])
    assert ok, report
    print("python smoke test: PASS")


if __name__ == "__main__":
    main()
